#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "descentlab/errors.hpp"

namespace descentlab {

/// Exact rational number, always in lowest terms with positive denominator.
class Rational
{
public:
    Rational() = default;
    Rational(long n) : v_(n) {} // NOLINT: implicit from integers is intended
    Rational(int n) : v_(static_cast<long>(n)) {}
    Rational(long n, long d)
    {
        if (d == 0)
            throw DivisionByZero("rational with zero denominator");
        v_ = mpq_class(n, d);
        v_.canonicalize();
    }
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    /// Parses "p", "-p", "p/q". Whitespace around the value is ignored.
    static Rational parse(std::string_view text)
    {
        std::string s;
        for (char c : text)
            if (c != ' ' && c != '\t' && c != '\n')
                s.push_back(c);
        if (s.empty())
            throw ParseError("empty rational");
        if (s.front() == '+')
            s.erase(s.begin());
        auto slash = s.find('/');
        auto valid_int = [](const std::string& t) {
            if (t.empty())
                return false;
            size_t i = (t[0] == '-') ? 1 : 0;
            if (i == t.size())
                return false;
            for (; i < t.size(); ++i)
                if (t[i] < '0' || t[i] > '9')
                    return false;
            return true;
        };
        if (slash == std::string::npos) {
            if (!valid_int(s))
                throw ParseError("bad rational '" + std::string(text) + "'");
            return Rational(mpq_class(mpz_class(s, 10)));
        }
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!valid_int(num) || !valid_int(den))
            throw ParseError("bad rational '" + std::string(text) + "'");
        mpz_class d(den, 10);
        if (d == 0)
            throw DivisionByZero("rational with zero denominator");
        return Rational(mpq_class(mpz_class(num, 10), d));
    }

    const mpq_class& raw() const noexcept { return v_; }

    bool is_zero() const noexcept { return sgn(v_) == 0; }
    bool is_one() const noexcept { return v_ == 1; }
    int sign() const noexcept { return sgn(v_); }
    bool is_integer() const noexcept { return v_.get_den() == 1; }

    std::string numerator_str() const { return v_.get_num().get_str(); }
    std::string denominator_str() const { return v_.get_den().get_str(); }
    long numerator_long() const { return v_.get_num().get_si(); }
    long denominator_long() const { return v_.get_den().get_si(); }
    double to_double() const { return v_.get_d(); }

    /// "p/q" or "p" when the denominator is 1.
    std::string to_string() const
    {
        if (v_.get_den() == 1)
            return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    Rational& operator+=(const Rational& o)
    {
        v_ += o.v_;
        return *this;
    }
    Rational& operator-=(const Rational& o)
    {
        v_ -= o.v_;
        return *this;
    }
    Rational& operator*=(const Rational& o)
    {
        v_ *= o.v_;
        return *this;
    }
    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero())
            throw DivisionByZero("division of " + to_string() + " by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const { return Rational(mpq_class(-v_)); }

    Rational inverse() const
    {
        if (is_zero())
            throw DivisionByZero("inverse of zero");
        return Rational(mpq_class(1 / v_));
    }

    /// Largest integer <= value.
    long floor() const
    {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return q.get_si();
    }
    long ceil() const
    {
        mpz_class q;
        mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return q.get_si();
    }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

    static Rational factorial(int n)
    {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
        return Rational(mpq_class(f));
    }

    static Rational pow(const Rational& base, int e)
    {
        Rational r(1);
        Rational b = e < 0 ? base.inverse() : base;
        for (int i = 0; i < (e < 0 ? -e : e); ++i)
            r *= b;
        return r;
    }

private:
    mpq_class v_;
};

} // namespace descentlab

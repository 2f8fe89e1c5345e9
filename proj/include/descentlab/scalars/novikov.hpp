#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "descentlab/errors.hpp"
#include "descentlab/scalars/rational.hpp"

namespace descentlab {

/// Parameters of the truncated Novikov ring: exponents live in (1/den) Z_{>=0}
/// and everything of exponent >= cutoff is dropped.
struct NovikovRing
{
    int den = 1;
    Rational cutoff{1};

    NovikovRing() = default;
    NovikovRing(int d, Rational e) : den(d), cutoff(std::move(e))
    {
        if (den <= 0)
            throw InputError("novikov den must be positive");
        if (cutoff.sign() <= 0)
            throw InputError("novikov cutoff must be positive");
    }

    /// Number of retained powers of u = T^{1/den}: exponents k/den with k < steps().
    int steps() const { return static_cast<int>((cutoff * Rational(den)).ceil()); }

    Rational exponent(int k) const { return Rational(k, den); }

    friend bool operator==(const NovikovRing&, const NovikovRing&) = default;

    std::string to_string() const { return "Novikov(den=" + std::to_string(den) + ", cutoff=" + cutoff.to_string() + ")"; }
};

/// Element of Lambda_{>=0} / (T^E) with exponents in (1/den) Z.
/// Internally a polynomial in u = T^{1/den} truncated at u^steps.
class NovikovElem
{
public:
    NovikovElem() = default;
    explicit NovikovElem(NovikovRing ring) : ring_(std::move(ring)) {}
    NovikovElem(NovikovRing ring, const Rational& c) : ring_(std::move(ring))
    {
        if (!c.is_zero())
            terms_[0] = c;
    }

    /// c * T^{exponent}; exponent must be a multiple of 1/den.
    static NovikovElem monomial(const NovikovRing& ring, const Rational& c, const Rational& exponent)
    {
        Rational k = exponent * Rational(ring.den);
        if (!k.is_integer() || k.sign() < 0)
            throw InputError("exponent " + exponent.to_string() + " not in (1/" + std::to_string(ring.den) + ")Z_{>=0}");
        NovikovElem r(ring);
        r.add_term(static_cast<int>(k.floor()), c);
        return r;
    }

    /// c * u^k with u = T^{1/den}.
    static NovikovElem u_power(const NovikovRing& ring, int k, const Rational& c = Rational(1))
    {
        NovikovElem r(ring);
        r.add_term(k, c);
        return r;
    }

    const NovikovRing& ring() const noexcept { return ring_; }
    const std::map<int, Rational>& terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }

    /// Least exponent with non-zero coefficient; nullopt encodes +infinity.
    std::optional<Rational> valuation() const
    {
        if (terms_.empty())
            return std::nullopt;
        return ring_.exponent(terms_.begin()->first);
    }

    /// Valuation measured in u-steps; steps() for zero.
    int valuation_steps() const { return terms_.empty() ? ring_.steps() : terms_.begin()->first; }

    Rational coefficient_steps(int k) const
    {
        auto it = terms_.find(k);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    NovikovElem& operator+=(const NovikovElem& o)
    {
        check_ring(o);
        for (const auto& [k, c] : o.terms_)
            add_term(k, c);
        return *this;
    }
    NovikovElem& operator-=(const NovikovElem& o)
    {
        check_ring(o);
        for (const auto& [k, c] : o.terms_)
            add_term(k, -c);
        return *this;
    }
    NovikovElem& operator*=(const NovikovElem& o)
    {
        *this = *this * o;
        return *this;
    }

    friend NovikovElem operator+(NovikovElem a, const NovikovElem& b) { return a += b; }
    friend NovikovElem operator-(NovikovElem a, const NovikovElem& b) { return a -= b; }
    friend NovikovElem operator*(const NovikovElem& a, const NovikovElem& b)
    {
        a.check_ring(b);
        NovikovElem r(a.ring_);
        const int n = a.ring_.steps();
        for (const auto& [i, ci] : a.terms_)
            for (const auto& [j, cj] : b.terms_) {
                if (i + j >= n)
                    break;
                r.add_term(i + j, ci * cj);
            }
        return r;
    }
    NovikovElem operator-() const
    {
        NovikovElem r(ring_);
        for (const auto& [k, c] : terms_)
            r.terms_[k] = -c;
        return r;
    }

    NovikovElem scaled(const Rational& s) const
    {
        NovikovElem r(ring_);
        if (s.is_zero())
            return r;
        for (const auto& [k, c] : terms_)
            r.terms_[k] = c * s;
        return r;
    }

    /// Multiplicative inverse modulo T^E; requires valuation 0.
    NovikovElem unitize() const
    {
        if (terms_.empty() || terms_.begin()->first != 0)
            throw NotInvertible(to_string() + " has positive valuation");
        const int n = ring_.steps();
        std::vector<Rational> a(n), b(n);
        for (const auto& [k, c] : terms_)
            a[k] = c;
        Rational inv0 = a[0].inverse();
        b[0] = inv0;
        for (int k = 1; k < n; ++k) {
            Rational s;
            for (int j = 1; j <= k; ++j)
                if (!a[j].is_zero() && !b[k - j].is_zero())
                    s += a[j] * b[k - j];
            b[k] = -(s * inv0);
        }
        NovikovElem r(ring_);
        for (int k = 0; k < n; ++k)
            r.add_term(k, b[k]);
        return r;
    }

    /// Exact division by u^k; requires every exponent to be >= k.
    NovikovElem shifted_down(int k) const
    {
        NovikovElem r(ring_);
        for (const auto& [e, c] : terms_) {
            if (e < k)
                throw Error("shifted_down: term below requested valuation");
            r.terms_[e - k] = c;
        }
        return r;
    }

    /// Multiplication by u^k (truncating).
    NovikovElem shifted_up(int k) const
    {
        NovikovElem r(ring_);
        for (const auto& [e, c] : terms_)
            r.add_term(e + k, c);
        return r;
    }

    friend bool operator==(const NovikovElem& a, const NovikovElem& b)
    {
        return a.ring_ == b.ring_ && a.terms_ == b.terms_;
    }

    /// "c1*T^(a1) + c2*T^(a2) ..." with exponents as reduced fractions; "0" for zero.
    std::string to_string() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            Rational coef = c;
            if (!first) {
                if (coef.sign() < 0) {
                    out += " - ";
                    coef = -coef;
                } else {
                    out += " + ";
                }
            }
            out += coef.to_string();
            if (k != 0)
                out += "*T^(" + ring_.exponent(k).to_string() + ")";
            first = false;
        }
        return out;
    }

    /// Inverse of to_string; also accepts "T^(a)" without a coefficient and "T" for T^(1).
    static NovikovElem parse(const NovikovRing& ring, std::string_view text)
    {
        std::string s;
        for (char c : text)
            if (c != ' ' && c != '\t' && c != '\n')
                s.push_back(c);
        if (s.empty())
            throw ParseError("empty Novikov element");
        NovikovElem r(ring);
        // split into signed terms at top-level +/- (not inside parentheses, not leading)
        std::vector<std::string> terms;
        std::string cur;
        int depth = 0;
        for (size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if (c == '(')
                ++depth;
            if (c == ')')
                --depth;
            if ((c == '+' || c == '-') && depth == 0 && i > 0 && s[i - 1] != '*' && s[i - 1] != '^' && s[i - 1] != '/') {
                terms.push_back(cur);
                cur.clear();
            }
            cur.push_back(c);
        }
        terms.push_back(cur);
        for (auto t : terms) {
            if (t.empty())
                throw ParseError("bad Novikov element '" + std::string(text) + "'");
            Rational sign(1);
            while (!t.empty() && (t[0] == '+' || t[0] == '-')) {
                if (t[0] == '-')
                    sign = -sign;
                t.erase(t.begin());
            }
            auto tpos = t.find('T');
            Rational coef(1), expo(0);
            if (tpos == std::string::npos) {
                coef = Rational::parse(t);
            } else {
                std::string cpart = t.substr(0, tpos);
                std::string epart = t.substr(tpos + 1);
                if (!cpart.empty()) {
                    if (cpart.back() != '*')
                        throw ParseError("bad Novikov term '" + t + "'");
                    cpart.pop_back();
                    coef = Rational::parse(cpart);
                }
                if (epart.empty()) {
                    expo = Rational(1);
                } else {
                    if (epart[0] != '^')
                        throw ParseError("bad Novikov term '" + t + "'");
                    epart.erase(epart.begin());
                    if (!epart.empty() && epart.front() == '(' && epart.back() == ')')
                        epart = epart.substr(1, epart.size() - 2);
                    expo = Rational::parse(epart);
                }
            }
            r += monomial(ring, coef * sign, expo);
        }
        return r;
    }

private:
    void check_ring(const NovikovElem& o) const
    {
        if (!(ring_ == o.ring_))
            throw RingMismatch(ring_.to_string() + " vs " + o.ring_.to_string());
    }

    void add_term(int k, const Rational& c)
    {
        if (k >= ring_.steps() || c.is_zero())
            return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    NovikovRing ring_;
    std::map<int, Rational> terms_;
};

} // namespace descentlab

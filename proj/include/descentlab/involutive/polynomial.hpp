#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "descentlab/errors.hpp"
#include "descentlab/scalars/rational.hpp"

namespace descentlab {

/// Variable naming of a polynomial ring: q1..qn p1..pn (phase space) or x1..xN (plain).
struct VarScheme
{
    enum class Kind { phase, plain };
    Kind kind = Kind::plain;
    int n = 1; // degrees of freedom for phase, variable count for plain

    int nvars() const { return kind == Kind::phase ? 2 * n : n; }

    std::string name(int v) const
    {
        if (kind == Kind::plain)
            return "x" + std::to_string(v + 1);
        return (v < n ? "q" : "p") + std::to_string(v % n + 1);
    }

    static VarScheme phase(int n) { return {Kind::phase, n}; }
    static VarScheme plain(int n) { return {Kind::plain, n}; }

    friend bool operator==(const VarScheme&, const VarScheme&) = default;
};

/// Polynomial over Q with terms keyed by exponent vectors.
class Polynomial
{
public:
    using Exps = std::vector<int>;

    Polynomial() = default;
    explicit Polynomial(VarScheme vars) : vars_(vars)
    {
        if (vars.n < 1 || vars.n > 32)
            throw InputError("polynomial ring needs 1..32 variables");
    }

    static Polynomial constant(VarScheme vars, const Rational& c)
    {
        Polynomial f(vars);
        f.add(Exps(vars.nvars(), 0), c);
        return f;
    }
    static Polynomial variable(VarScheme vars, int v)
    {
        Polynomial f(vars);
        Exps e(vars.nvars(), 0);
        e.at(v) = 1;
        f.add(e, Rational(1));
        return f;
    }
    static Polynomial q(int n, int i) { return variable(VarScheme::phase(n), i - 1); }
    static Polynomial p(int n, int i) { return variable(VarScheme::phase(n), n + i - 1); }

    const VarScheme& vars() const noexcept { return vars_; }
    const std::map<Exps, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    int total_degree() const
    {
        int d = -1;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int a : e)
                s += a;
            d = std::max(d, s);
        }
        return d;
    }

    void add(const Exps& e, const Rational& c)
    {
        if (static_cast<int>(e.size()) != vars_.nvars())
            throw ShapeMismatch("exponent vector of the wrong length");
        if (c.is_zero())
            return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        check(o);
        for (const auto& [e, c] : o.terms_)
            add(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o)
    {
        check(o);
        for (const auto& [e, c] : o.terms_)
            add(e, -c);
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        a.check(b);
        Polynomial out(a.vars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exps e = ea;
                for (size_t i = 0; i < e.size(); ++i)
                    e[i] += eb[i];
                out.add(e, ca * cb);
            }
        return out;
    }
    friend Polynomial operator*(const Rational& s, const Polynomial& a)
    {
        Polynomial out(a.vars_);
        for (const auto& [e, c] : a.terms_)
            out.add(e, s * c);
        return out;
    }
    Polynomial operator-() const { return Rational(-1) * *this; }
    friend bool operator==(const Polynomial& a, const Polynomial& b)
    {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }

    Polynomial derivative(int v) const
    {
        Polynomial out(vars_);
        for (const auto& [e, c] : terms_) {
            if (e.at(v) == 0)
                continue;
            Exps r = e;
            --r[v];
            out.add(r, c * Rational(e[v]));
        }
        return out;
    }

    Rational evaluate(const std::vector<Rational>& x) const
    {
        if (static_cast<int>(x.size()) != vars_.nvars())
            throw ShapeMismatch("evaluation point of the wrong dimension");
        Rational s;
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i])
                    t *= Rational::pow(x[i], e[i]);
            s += t;
        }
        return s;
    }

    /// g(fs[0], .., fs[N-1]) for g in N plain variables; the result lives in the ring of fs.
    Polynomial compose(const std::vector<Polynomial>& fs) const
    {
        if (static_cast<int>(fs.size()) != vars_.nvars())
            throw ShapeMismatch("composition needs one function per variable");
        if (fs.empty())
            throw InputError("empty composition");
        const VarScheme target = fs[0].vars();
        Polynomial out(target);
        for (const auto& [e, c] : terms_) {
            Polynomial t = constant(target, c);
            for (size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k)
                    t = t * fs[i];
            out += t;
        }
        return out;
    }

    std::string to_string() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            std::string body;
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0)
                    continue;
                if (!body.empty())
                    body += "*";
                body += vars_.name(static_cast<int>(i));
                if (e[i] != 1)
                    body += "^" + std::to_string(e[i]);
            }
            const Rational a = c.sign() < 0 ? -c : c;
            std::string term = body.empty() ? a.to_string() : (a.is_one() ? body : a.to_string() + "*" + body);
            if (out.empty())
                out = (c.sign() < 0 ? "-" : "") + term;
            else
                out += (c.sign() < 0 ? " - " : " + ") + term;
        }
        return out;
    }

    /// Parses sums of products such as "q1*p1 - 2*q2^2 + 1/3".
    static Polynomial parse(VarScheme vars, std::string_view text)
    {
        std::string s;
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch)))
                s += ch;
        if (s.empty())
            throw ParseError("empty polynomial");
        Polynomial out(vars);
        size_t pos = 0;
        auto digits = [&](size_t& at) {
            const size_t start = at;
            while (at < s.size() && std::isdigit(static_cast<unsigned char>(s[at])))
                ++at;
            if (at == start)
                throw ParseError("expected digits in '" + s + "'");
            return std::stoi(s.substr(start, at - start));
        };
        while (pos < s.size()) {
            Rational coeff(1);
            if (s[pos] == '+' || s[pos] == '-') {
                if (s[pos] == '-')
                    coeff = Rational(-1);
                ++pos;
            } else if (pos != 0) {
                throw ParseError("expected '+' or '-' in '" + s + "'");
            }
            Exps e(vars.nvars(), 0);
            for (;;) {
                if (pos >= s.size())
                    throw ParseError("dangling operator in '" + s + "'");
                const char ch = s[pos];
                if (std::isdigit(static_cast<unsigned char>(ch))) {
                    size_t end = pos;
                    while (end < s.size() && (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '/'))
                        ++end;
                    coeff *= Rational::parse(s.substr(pos, end - pos));
                    pos = end;
                } else if (ch == 'q' || ch == 'p' || ch == 'x') {
                    ++pos;
                    const int i = digits(pos);
                    int v = -1;
                    if (vars.kind == VarScheme::Kind::plain && ch == 'x' && i >= 1 && i <= vars.n)
                        v = i - 1;
                    if (vars.kind == VarScheme::Kind::phase && ch != 'x' && i >= 1 && i <= vars.n)
                        v = (ch == 'q' ? 0 : vars.n) + i - 1;
                    if (v < 0)
                        throw ParseError("unknown variable in '" + s + "'");
                    int k = 1;
                    if (pos < s.size() && s[pos] == '^') {
                        ++pos;
                        k = digits(pos);
                    }
                    e[v] += k;
                } else {
                    throw ParseError("unexpected character in '" + s + "'");
                }
                if (pos < s.size() && s[pos] == '*') {
                    ++pos;
                    continue;
                }
                break;
            }
            out.add(e, coeff);
        }
        return out;
    }

private:
    void check(const Polynomial& o) const
    {
        if (!(o.vars_ == vars_))
            throw RingMismatch("polynomials in different variables");
    }

    VarScheme vars_{};
    std::map<Exps, Rational> terms_;
};

using PolyFunction = Polynomial;

} // namespace descentlab

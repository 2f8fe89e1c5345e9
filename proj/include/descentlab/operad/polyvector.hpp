#pragma once

#include <bit>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "descentlab/errors.hpp"
#include "descentlab/scalars/rational.hpp"
#include "descentlab/simplex/polyform.hpp"

namespace descentlab {

/// Q[x_1..x_n], or Q[x_1^{+-1}..x_n^{+-1}] when laurent is set.
struct PolyvectorRing
{
    int n = 1;
    bool laurent = false;

    friend bool operator==(const PolyvectorRing&, const PolyvectorRing&) = default;
};

/// x^a xi_I; bit i-1 of `xi` stands for xi_i.
struct PvMonomial
{
    std::vector<int> exps;
    std::uint32_t xi = 0;

    int degree() const { return std::popcount(xi); }
    int total_exponent() const
    {
        int s = 0;
        for (int a : exps)
            s += a;
        return s;
    }

    friend auto operator<=>(const PvMonomial&, const PvMonomial&) = default;
    friend bool operator==(const PvMonomial&, const PvMonomial&) = default;
};

class Polyvector
{
public:
    Polyvector() = default;
    explicit Polyvector(PolyvectorRing ring) : ring_(ring)
    {
        if (ring.n < 1 || ring.n > 16)
            throw InputError("polyvector ring needs 1..16 variables");
    }

    static Polyvector constant(PolyvectorRing ring, const Rational& c)
    {
        Polyvector v(ring);
        v.add({std::vector<int>(ring.n, 0), 0}, c);
        return v;
    }
    static Polyvector x(PolyvectorRing ring, int i, int e = 1)
    {
        Polyvector v(ring);
        PvMonomial m{std::vector<int>(ring.n, 0), 0};
        m.exps.at(i - 1) = e;
        v.add(m, Rational(1));
        return v;
    }
    static Polyvector xi(PolyvectorRing ring, int i)
    {
        Polyvector v(ring);
        v.add({std::vector<int>(ring.n, 0), std::uint32_t(1) << (i - 1)}, Rational(1));
        return v;
    }
    static Polyvector monomial(PolyvectorRing ring, const PvMonomial& m, const Rational& c = Rational(1))
    {
        Polyvector v(ring);
        v.add(m, c);
        return v;
    }

    const PolyvectorRing& ring() const noexcept { return ring_; }
    const std::map<PvMonomial, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    void add(const PvMonomial& m, const Rational& c)
    {
        if (static_cast<int>(m.exps.size()) != ring_.n || (m.xi >> ring_.n) != 0)
            throw ShapeMismatch("monomial does not belong to the polyvector ring");
        if (!ring_.laurent)
            for (int a : m.exps)
                if (a < 0)
                    throw RingMismatch("negative exponent in a polynomial ring");
        if (c.is_zero())
            return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    /// Degree if homogeneous, -1 for zero, throws otherwise.
    int degree() const
    {
        int d = -1;
        for (const auto& [m, c] : terms_) {
            if (d >= 0 && m.degree() != d)
                throw InputError("polyvector is not homogeneous");
            d = m.degree();
        }
        return d;
    }

    /// Homogeneous components keyed by degree.
    std::map<int, Polyvector> components() const
    {
        std::map<int, Polyvector> out;
        for (const auto& [m, c] : terms_) {
            auto it = out.try_emplace(m.degree(), ring_).first;
            it->second.add(m, c);
        }
        return out;
    }

    Polyvector& operator+=(const Polyvector& o)
    {
        check_ring(o);
        for (const auto& [m, c] : o.terms_)
            add(m, c);
        return *this;
    }
    Polyvector& operator-=(const Polyvector& o)
    {
        check_ring(o);
        for (const auto& [m, c] : o.terms_)
            add(m, -c);
        return *this;
    }
    friend Polyvector operator+(Polyvector a, const Polyvector& b) { return a += b; }
    friend Polyvector operator-(Polyvector a, const Polyvector& b) { return a -= b; }
    friend Polyvector operator*(const Rational& s, const Polyvector& a)
    {
        Polyvector out(a.ring_);
        for (const auto& [m, c] : a.terms_)
            out.add(m, s * c);
        return out;
    }
    Polyvector operator-() const { return Rational(-1) * *this; }

    friend bool operator==(const Polyvector& a, const Polyvector& b)
    {
        return a.ring_ == b.ring_ && a.terms_ == b.terms_;
    }

    /// d/dx_i.
    Polyvector dx(int i) const
    {
        Polyvector out(ring_);
        for (const auto& [m, c] : terms_) {
            const int a = m.exps.at(i - 1);
            if (a == 0)
                continue;
            PvMonomial r = m;
            --r.exps[i - 1];
            out.add(r, c * Rational(a));
        }
        return out;
    }
    /// Odd derivative d/dxi_i acting from the left.
    Polyvector dxi(int i) const
    {
        const std::uint32_t bit = std::uint32_t(1) << (i - 1);
        Polyvector out(ring_);
        for (const auto& [m, c] : terms_) {
            if (!(m.xi & bit))
                continue;
            PvMonomial r = m;
            r.xi &= ~bit;
            out.add(r, std::popcount(m.xi & (bit - 1)) % 2 ? -c : c);
        }
        return out;
    }

    std::string to_string() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            std::string body;
            for (int i = 0; i < ring_.n; ++i) {
                if (m.exps[i] == 0)
                    continue;
                if (!body.empty())
                    body += "*";
                body += "x" + std::to_string(i + 1);
                if (m.exps[i] != 1)
                    body += "^" + std::to_string(m.exps[i]);
            }
            std::string wedge;
            for (int i = 0; i < ring_.n; ++i)
                if (m.xi & (std::uint32_t(1) << i))
                    wedge += (wedge.empty() ? "xi" : "^xi") + std::to_string(i + 1);
            if (!wedge.empty())
                body += (body.empty() ? "" : "*") + wedge;
            Rational a = c.sign() < 0 ? -c : c;
            std::string term;
            if (body.empty())
                term = a.to_string();
            else if (a.is_one())
                term = body;
            else
                term = a.to_string() + "*" + body;
            if (out.empty())
                out = (c.sign() < 0 ? "-" : "") + term;
            else
                out += (c.sign() < 0 ? "-" : "+") + term;
        }
        return out;
    }

    /// Parses sums of terms like 2*x1^3*x2^-1*xi1^xi2.
    static Polyvector parse(PolyvectorRing ring, std::string_view text)
    {
        std::string s;
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch)))
                s += ch;
        if (s.empty())
            throw ParseError("empty polyvector");
        Polyvector out(ring);
        size_t pos = 0;
        auto read_int = [&](size_t& at) {
            size_t start = at;
            if (at < s.size() && (s[at] == '-' || s[at] == '+'))
                ++at;
            while (at < s.size() && std::isdigit(static_cast<unsigned char>(s[at])))
                ++at;
            if (at == start || !std::isdigit(static_cast<unsigned char>(s[at - 1])))
                throw ParseError("expected an integer in '" + s + "'");
            return std::stoi(s.substr(start, at - start));
        };
        auto var_index = [&](size_t& at) {
            int i = read_int(at);
            if (i < 1 || i > ring.n)
                throw ParseError("variable index out of range in '" + s + "'");
            return i;
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
            PvMonomial m{std::vector<int>(ring.n, 0), 0};
            int sign = 1;
            bool first = true;
            for (;;) {
                if (pos >= s.size())
                    throw ParseError("dangling operator in '" + s + "'");
                if (s.compare(pos, 2, "xi") == 0) {
                    for (;;) {
                        pos += 2;
                        const std::uint32_t bit = std::uint32_t(1) << (var_index(pos) - 1);
                        sign *= wedge_sign(m.xi, bit);
                        m.xi |= bit;
                        if (s.compare(pos, 3, "^xi") != 0)
                            break;
                        ++pos;
                    }
                } else if (s[pos] == 'x') {
                    ++pos;
                    const int i = var_index(pos);
                    int e = 1;
                    if (pos < s.size() && s[pos] == '^') {
                        ++pos;
                        e = read_int(pos);
                    }
                    m.exps[i - 1] += e;
                } else if (first && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                    size_t end = pos;
                    while (end < s.size() && (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '/'))
                        ++end;
                    coeff *= Rational::parse(s.substr(pos, end - pos));
                    pos = end;
                } else {
                    throw ParseError("unexpected character in '" + s + "'");
                }
                first = false;
                if (pos < s.size() && s[pos] == '*') {
                    ++pos;
                    continue;
                }
                break;
            }
            try {
                out.add(m, sign == 0 ? Rational(0) : Rational(sign) * coeff);
            } catch (const RingMismatch& e) {
                throw ParseError(e.what());
            }
        }
        return out;
    }

private:
    void check_ring(const Polyvector& o) const
    {
        if (!(o.ring_ == ring_))
            throw RingMismatch("polyvectors over different rings");
    }

    PolyvectorRing ring_{};
    std::map<PvMonomial, Rational> terms_;
};

inline Polyvector pv_wedge(const Polyvector& a, const Polyvector& b)
{
    if (!(a.ring() == b.ring()))
        throw RingMismatch("polyvectors over different rings");
    Polyvector out(a.ring());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            const int s = wedge_sign(ma.xi, mb.xi);
            if (s == 0)
                continue;
            PvMonomial m{ma.exps, ma.xi | mb.xi};
            for (size_t i = 0; i < m.exps.size(); ++i)
                m.exps[i] += mb.exps[i];
            out.add(m, Rational(s) * ca * cb);
        }
    return out;
}

/// Divergence operator sum_i d^2/dx_i dxi_i for the volume dx_1...dx_n.
inline Polyvector pv_bv_delta(const Polyvector& a)
{
    Polyvector out(a.ring());
    for (int i = 1; i <= a.ring().n; ++i)
        out += a.dxi(i).dx(i);
    return out;
}

/// Graded algebra of polyvectors with a degree -1 operator and its derived bracket.
struct BVStructure
{
    PolyvectorRing ring;
    std::function<Polyvector(const Polyvector&)> delta = pv_bv_delta;
    std::string name = "divergence";

    /// (-1)^{|a|+1} (D(ab) - D(a) b - (-1)^{|a|} a D(b)), extended bilinearly.
    Polyvector bracket(const Polyvector& a, const Polyvector& b) const
    {
        Polyvector out(ring);
        for (const auto& [da, pa] : a.components())
            for (const auto& [db, pb] : b.components()) {
                (void)db;
                Polyvector t = delta(pv_wedge(pa, pb)) - pv_wedge(delta(pa), pb);
                if (da % 2)
                    t += pv_wedge(pa, delta(pb));
                else
                    t -= pv_wedge(pa, delta(pb));
                out += da % 2 ? t : -t;
            }
        return out;
    }
};

inline Polyvector bv_bracket(const Polyvector& a, const Polyvector& b)
{
    return BVStructure{a.ring()}.bracket(a, b);
}

/// Divergence operator that loses the first monomial of every output with two or more monomials.
inline BVStructure corrupted_bv(PolyvectorRing ring)
{
    BVStructure S{ring};
    S.delta = [](const Polyvector& a) {
        Polyvector d = pv_bv_delta(a);
        if (d.terms().size() >= 2) {
            const auto& [m, c] = *d.terms().begin();
            d.add(PvMonomial(m), -Rational(c));
        }
        return d;
    };
    S.name = "divergence-with-dropped-term";
    return S;
}

/// Monomials x^a xi_I with every exponent in [lo, hi]; over polynomial rings also total exponent at most hi.
/// For polynomial rings lo is clamped to 0.
inline std::vector<Polyvector> pv_monomial_basis(PolyvectorRing ring, int lo, int hi)
{
    if (!ring.laurent)
        lo = std::max(lo, 0);
    std::vector<Polyvector> out;
    std::vector<int> e(ring.n, lo);
    if (lo > hi)
        return out;
    for (;;) {
        int total = 0;
        for (int a : e)
            total += a;
        if (ring.laurent || total <= hi)
            for (std::uint32_t I = 0; I < (std::uint32_t(1) << ring.n); ++I)
                out.push_back(Polyvector::monomial(ring, {e, I}));
        int k = 0;
        while (k < ring.n && e[k] == hi)
            e[k++] = lo;
        if (k == ring.n)
            break;
        ++e[k];
    }
    return out;
}

} // namespace descentlab

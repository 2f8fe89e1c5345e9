#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "descentlab/errors.hpp"
#include "descentlab/scalars/rational.hpp"
#include "descentlab/simplex/inj_map.hpp"
#include "descentlab/simplex/ncochain.hpp"

namespace descentlab {

/// t_1^{a_1} ... t_p^{a_p} dt_I in reduced coordinates; bit i-1 of `dt` stands for dt_i.
struct FormMonomial
{
    std::vector<int> exps;
    std::uint32_t dt = 0;

    int form_degree() const { return std::popcount(dt); }
    int weight() const
    {
        int w = form_degree();
        for (int a : exps)
            w += a;
        return w;
    }

    friend auto operator<=>(const FormMonomial&, const FormMonomial&) = default;
    friend bool operator==(const FormMonomial&, const FormMonomial&) = default;
};

/// Sign of dt_I ^ dt_J after sorting, or 0 if they share a factor.
inline int wedge_sign(std::uint32_t I, std::uint32_t J)
{
    if (I & J)
        return 0;
    int swaps = 0;
    for (std::uint32_t j = J; j; j &= j - 1) {
        const std::uint32_t bit = j & -j;
        // elements of I above this element of J must pass it
        swaps += std::popcount(I & ~((bit << 1) - 1));
    }
    return (swaps % 2 == 0) ? 1 : -1;
}

/// Polynomial differential form on the p-simplex in reduced coordinates t_1..t_p.
class PolyForm
{
public:
    PolyForm() = default;
    explicit PolyForm(int p) : p_(p) {}

    static PolyForm constant(int p, const Rational& c)
    {
        PolyForm f(p);
        f.add({std::vector<int>(p, 0), 0}, c);
        return f;
    }

    /// Reduced coordinate t_i (1 <= i <= p).
    static PolyForm t(int p, int i)
    {
        PolyForm f(p);
        FormMonomial m{std::vector<int>(p, 0), 0};
        m.exps.at(i - 1) = 1;
        f.add(m, Rational(1));
        return f;
    }

    static PolyForm dt(int p, int i)
    {
        PolyForm f(p);
        f.add({std::vector<int>(p, 0), std::uint32_t(1) << (i - 1)}, Rational(1));
        return f;
    }

    /// Homogeneous coordinate t_j (0 <= j <= p), with t_0 = 1 - sum t_i.
    static PolyForm hom_t(int p, int j)
    {
        if (j > 0)
            return t(p, j);
        PolyForm f = constant(p, Rational(1));
        for (int i = 1; i <= p; ++i)
            f -= t(p, i);
        return f;
    }

    /// Homogeneous dt_j, with dt_0 = -sum dt_i.
    static PolyForm hom_dt(int p, int j)
    {
        if (j > 0)
            return dt(p, j);
        PolyForm f(p);
        for (int i = 1; i <= p; ++i)
            f -= dt(p, i);
        return f;
    }

    static PolyForm monomial(int p, const FormMonomial& m, const Rational& c = Rational(1))
    {
        PolyForm f(p);
        f.add(m, c);
        return f;
    }

    int p() const noexcept { return p_; }
    const std::map<FormMonomial, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    void add(const FormMonomial& m, const Rational& c)
    {
        if (static_cast<int>(m.exps.size()) != p_ || (p_ < 32 && (m.dt >> p_) != 0))
            throw ShapeMismatch("monomial does not live on the " + std::to_string(p_) + "-simplex");
        if (c.is_zero())
            return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    PolyForm& operator+=(const PolyForm& o)
    {
        check(o);
        for (const auto& [m, c] : o.terms_)
            add(m, c);
        return *this;
    }
    PolyForm& operator-=(const PolyForm& o)
    {
        check(o);
        for (const auto& [m, c] : o.terms_)
            add(m, -c);
        return *this;
    }
    friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
    friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }

    PolyForm scaled(const Rational& s) const
    {
        PolyForm out(p_);
        if (s.is_zero())
            return out;
        for (const auto& [m, c] : terms_)
            out.terms_.emplace(m, c * s);
        return out;
    }

    /// Homogeneous part of form degree k.
    PolyForm part(int k) const
    {
        PolyForm out(p_);
        for (const auto& [m, c] : terms_)
            if (m.form_degree() == k)
                out.terms_.emplace(m, c);
        return out;
    }

    int max_weight() const
    {
        int w = -1;
        for (const auto& [m, c] : terms_)
            w = std::max(w, m.weight());
        return w;
    }

    friend bool operator==(const PolyForm& a, const PolyForm& b) { return a.p_ == b.p_ && a.terms_ == b.terms_; }

    /// "3/2*t1^2*t2*dt1^dt3 + ..."; "0" for the zero form.
    std::string to_string() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [m, c0] = *it;
            Rational c = c0;
            if (!first) {
                out += c.sign() < 0 ? " - " : " + ";
                if (c.sign() < 0)
                    c = -c;
            }
            first = false;
            std::vector<std::string> factors;
            for (int i = 0; i < p_; ++i)
                if (m.exps[i] == 1)
                    factors.push_back("t" + std::to_string(i + 1));
                else if (m.exps[i] > 1)
                    factors.push_back("t" + std::to_string(i + 1) + "^" + std::to_string(m.exps[i]));
            std::string dts;
            for (int i = 0; i < p_; ++i)
                if (m.dt & (std::uint32_t(1) << i))
                    dts += (dts.empty() ? "" : "^") + std::string("dt") + std::to_string(i + 1);
            if (!dts.empty())
                factors.push_back(dts);
            std::string body;
            for (size_t k = 0; k < factors.size(); ++k)
                body += (k ? "*" : "") + factors[k];
            if (body.empty())
                out += c.to_string();
            else if (c == Rational(1))
                out += body;
            else if (c == Rational(-1))
                out += "-" + body;
            else
                out += c.to_string() + "*" + body;
        }
        return out;
    }

    /// Inverse of to_string. dt factors may appear in any order; the sign is tracked.
    static PolyForm parse(int p, std::string_view text)
    {
        std::string s;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c)))
                s.push_back(c);
        if (s.empty())
            throw ParseError("empty form");
        PolyForm out(p);
        if (s == "0")
            return out;
        std::vector<std::string> terms;
        std::string cur;
        for (size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if ((c == '+' || c == '-') && i > 0 && s[i - 1] != '*' && s[i - 1] != '^') {
                terms.push_back(cur);
                cur.clear();
            }
            cur.push_back(c);
        }
        terms.push_back(cur);
        for (auto term : terms) {
            Rational coef(1);
            while (!term.empty() && (term[0] == '+' || term[0] == '-')) {
                if (term[0] == '-')
                    coef = -coef;
                term.erase(term.begin());
            }
            if (term.empty())
                throw ParseError("bad form '" + std::string(text) + "'");
            PolyForm mono = constant(p, coef);
            size_t pos = 0;
            while (pos <= term.size()) {
                size_t star = term.find('*', pos);
                std::string f = term.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
                if (f.empty())
                    throw ParseError("bad form factor in '" + term + "'");
                if (f.rfind("dt", 0) == 0) {
                    size_t q = 0;
                    while (q < f.size()) {
                        size_t caret = f.find('^', q);
                        std::string g = f.substr(q, caret == std::string::npos ? std::string::npos : caret - q);
                        if (g.size() < 3 || g.rfind("dt", 0) != 0)
                            throw ParseError("bad dt factor '" + g + "'");
                        int idx = std::stoi(g.substr(2));
                        if (idx < 1 || idx > p)
                            throw ParseError("dt index out of range in '" + g + "'");
                        mono = wedge(mono, dt(p, idx));
                        if (caret == std::string::npos)
                            break;
                        q = caret + 1;
                    }
                } else if (f[0] == 't') {
                    size_t caret = f.find('^');
                    int idx = std::stoi(f.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
                    int e = caret == std::string::npos ? 1 : std::stoi(f.substr(caret + 1));
                    if (idx < 1 || idx > p || e < 0)
                        throw ParseError("bad t factor '" + f + "'");
                    for (int k = 0; k < e; ++k)
                        mono = wedge(mono, t(p, idx));
                } else {
                    mono = mono.scaled(Rational::parse(f));
                }
                if (star == std::string::npos)
                    break;
                pos = star + 1;
            }
            out += mono;
        }
        return out;
    }

    void check(const PolyForm& o) const
    {
        if (o.p_ != p_)
            throw ShapeMismatch("forms on different simplices");
    }

    friend PolyForm wedge(const PolyForm& a, const PolyForm& b)
    {
        a.check(b);
        PolyForm out(a.p_);
        for (const auto& [m, c] : a.terms_)
            for (const auto& [n, e] : b.terms_) {
                int s = wedge_sign(m.dt, n.dt);
                if (s == 0)
                    continue;
                FormMonomial r{m.exps, m.dt | n.dt};
                for (int i = 0; i < a.p_; ++i)
                    r.exps[i] += n.exps[i];
                out.add(r, s > 0 ? c * e : -(c * e));
            }
        return out;
    }

private:
    int p_ = 0;
    std::map<FormMonomial, Rational> terms_;
};

/// Exterior derivative in reduced coordinates.
inline PolyForm form_differential(const PolyForm& w)
{
    PolyForm out(w.p());
    for (const auto& [m, c] : w.terms()) {
        for (int i = 0; i < w.p(); ++i) {
            if (m.exps[i] == 0)
                continue;
            const std::uint32_t bit = std::uint32_t(1) << i;
            if (m.dt & bit)
                continue;
            // d(t^a) dt_I = a_i t^{a-e_i} dt_i ^ dt_I
            int s = wedge_sign(bit, m.dt);
            FormMonomial r{m.exps, m.dt | bit};
            r.exps[i] -= 1;
            Rational coef = c * Rational(m.exps[i]);
            out.add(r, s > 0 ? coef : -coef);
        }
    }
    return out;
}

inline PolyForm form_wedge(const PolyForm& a, const PolyForm& b) { return wedge(a, b); }

/// Pullback along f : [r] -> [q]: homogeneous t_j |-> s_{f^{-1}(j)} or 0, then reduced.
inline PolyForm form_pullback(const InjMap& f, const PolyForm& w)
{
    if (w.p() != f.q())
        throw ShapeMismatch("pullback source does not match form simplex");
    const int r = f.p();
    std::vector<PolyForm> tj, dtj;
    for (int j = 0; j <= f.q(); ++j) {
        int i = f.preimage(j);
        tj.push_back(i < 0 ? PolyForm(r) : PolyForm::hom_t(r, i));
        dtj.push_back(i < 0 ? PolyForm(r) : PolyForm::hom_dt(r, i));
    }
    PolyForm out(r);
    for (const auto& [m, c] : w.terms()) {
        PolyForm acc = PolyForm::constant(r, c);
        for (int j = 1; j <= f.q() && !acc.is_zero(); ++j)
            for (int e = 0; e < m.exps[j - 1] && !acc.is_zero(); ++e)
                acc = wedge(acc, tj[j]);
        for (int j = 1; j <= f.q() && !acc.is_zero(); ++j)
            if (m.dt & (std::uint32_t(1) << (j - 1)))
                acc = wedge(acc, dtj[j]);
        out += acc;
    }
    return out;
}

/// Exact integral over the p-simplex: only top-degree terms contribute,
/// t^a dt_1...dt_p integrating to prod(a_i!) / (p + sum a_i)!.
inline Rational integrate(const PolyForm& w)
{
    const int p = w.p();
    const std::uint32_t top = p == 0 ? 0 : ((std::uint32_t(1) << p) - 1);
    Rational total;
    for (const auto& [m, c] : w.terms()) {
        if (m.dt != top)
            continue;
        Rational num(1);
        int sum = 0;
        for (int a : m.exps) {
            num *= Rational::factorial(a);
            sum += a;
        }
        total += c * num / Rational::factorial(p + sum);
    }
    return total;
}

/// I(w)(F) = integral over F of the restriction of w.
inline NCochain integration_cochain(const PolyForm& w)
{
    NCochain out(w.p());
    for (int k = 0; k <= w.p(); ++k) {
        PolyForm wk = w.part(k);
        if (wk.is_zero())
            continue;
        for (FaceMask f : simplex_faces(w.p(), k))
            out.add(f, integrate(form_pullback(InjMap::face_inclusion(w.p(), f), wk)));
    }
    return out;
}

/// Whitney elementary form of a face, E(delta_F) = k! sum_j (-1)^j t_{i_j} dt_{i_0}...(omit j)...dt_{i_k}.
inline PolyForm whitney_form(int p, FaceMask f)
{
    auto v = face_vertices(f);
    const int k = static_cast<int>(v.size()) - 1;
    PolyForm out(p);
    for (int j = 0; j <= k; ++j) {
        PolyForm term = PolyForm::hom_t(p, v[j]);
        for (int l = 0; l <= k; ++l)
            if (l != j)
                term = wedge(term, PolyForm::hom_dt(p, v[l]));
        out += (j % 2 == 0) ? term : term.scaled(Rational(-1));
    }
    return out.scaled(Rational::factorial(k));
}

inline PolyForm whitney(const NCochain& x)
{
    PolyForm out(x.p());
    for (const auto& [f, c] : x.values())
        out += whitney_form(x.p(), f).scaled(c);
    return out;
}

/// Drops monomials whose total degree in t's and dt's exceeds P.
inline PolyForm weight_truncate(const PolyForm& w, int P)
{
    if (P < 0)
        throw InputError("weight cutoff must be non-negative");
    PolyForm out(w.p());
    for (const auto& [m, c] : w.terms())
        if (m.weight() <= P)
            out.add(m, c);
    return out;
}

/// Monomial basis of the weight-truncated forms of form degree k on the p-simplex.
inline std::vector<FormMonomial> form_basis(int p, int k, int P)
{
    std::vector<FormMonomial> out;
    if (k < 0 || k > p || k > P)
        return out;
    const int budget = P - k;
    for (FaceMask I = 0; I < (FaceMask(1) << p); ++I) {
        if (std::popcount(I) != k)
            continue;
        std::vector<int> e(p, 0);
        // enumerate exponent vectors with sum <= budget
        auto rec = [&](auto&& self, int i, int left) -> void {
            if (i == p) {
                out.push_back({e, I});
                return;
            }
            for (int a = 0; a <= left; ++a) {
                e[i] = a;
                self(self, i + 1, left - a);
            }
            e[i] = 0;
        };
        rec(rec, 0, budget);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace descentlab

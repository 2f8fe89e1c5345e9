#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "descentlab/involutive/poisson.hpp"
#include "descentlab/involutive/smoothing.hpp"

namespace descentlab {

/// Uniform grid with `steps` points per coordinate, endpoints included.
struct Grid
{
    Rational lo = Rational(-2), hi = Rational(2);
    int steps = 100;

    Rational coordinate(int k) const
    {
        if (steps < 2)
            return lo;
        return lo + (hi - lo) * Rational(k, steps - 1);
    }

    template <class Fn>
    void for_each(int nvars, Fn&& fn) const
    {
        if (steps < 1 || nvars < 1)
            throw InputError("grid needs at least one point and one coordinate");
        std::vector<int> idx(nvars, 0);
        std::vector<Rational> x(nvars, coordinate(0));
        for (;;) {
            if (!fn(x))
                return;
            int v = 0;
            while (v < nvars && ++idx[v] == steps) {
                idx[v] = 0;
                x[v] = coordinate(0);
                ++v;
            }
            if (v == nvars)
                return;
            x[v] = coordinate(idx[v]);
        }
    }
};

struct CoverCondition
{
    std::string name;
    long checks = 0;
    std::optional<std::string> witness;

    bool holds() const { return !witness.has_value(); }
};

struct WeakCoverReport
{
    std::string set;
    int length = 0;
    std::vector<CoverCondition> conditions;

    bool holds() const
    {
        for (const auto& c : conditions)
            if (!c.holds())
                return false;
        return true;
    }

    const CoverCondition& condition(const std::string& name) const
    {
        for (const auto& c : conditions)
            if (c.name == name)
                return c;
        throw InputError("no condition named " + name);
    }

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["set"] = set;
        j["length"] = length;
        j["holds"] = holds();
        auto& arr = j["conditions"] = nlohmann::ordered_json::array();
        for (const auto& c : conditions) {
            nlohmann::ordered_json e;
            e["name"] = c.name;
            e["checks"] = c.checks;
            e["holds"] = c.holds();
            e["witness"] = c.witness ? nlohmann::ordered_json(*c.witness) : nlohmann::ordered_json(nullptr);
            arr.push_back(e);
        }
        return j;
    }
};

namespace detail {

inline std::string point_string(const VarScheme& vars, const std::vector<Rational>& x)
{
    std::string out = "(";
    for (size_t v = 0; v < x.size(); ++v)
        out += (v ? ", " : "") + vars.name(static_cast<int>(v)) + "=" + x[v].to_string();
    return out + ")";
}

inline int value_sign(const Rational& v) { return v.sign(); }
inline int value_sign(const Surd& v) { return v.sign(); }
inline int value_compare(const Rational& a, const Rational& b) { return (a - b).sign(); }
inline int value_compare(const Surd& a, const Surd& b) { return a.compare(b); }
inline std::string value_string(const Rational& v) { return v.to_string(); }
inline std::string value_string(const Surd& v) { return v.to_string(); }

/// Grid conditions for a sequence whose i-th member is value(i, x).
template <class Value>
void grid_conditions(WeakCoverReport& r, const VarScheme& vars, int length,
                     const std::function<Value(int, const std::vector<Rational>&)>& value,
                     const std::function<bool(const std::vector<Rational>&)>& in_set, const Grid& grid)
{
    CoverCondition neg{"negative_on_set", 0, {}}, inc{"strictly_increasing", 0, {}},
        exh{"negative_everywhere_only_on_set", 0, {}};
    grid.for_each(vars.nvars(), [&](const std::vector<Rational>& x) {
        std::vector<Value> vals;
        for (int i = 0; i < length; ++i)
            vals.push_back(value(i, x));
        const bool inside = in_set(x);
        bool all_negative = true;
        for (int i = 0; i < length; ++i) {
            if (value_sign(vals[i]) >= 0) {
                all_negative = false;
                if (inside && !neg.witness)
                    neg.witness = "f" + std::to_string(i + 1) + point_string(vars, x) + " = " + value_string(vals[i]) +
                                  " on the set";
            }
            if (inside)
                ++neg.checks;
            if (i + 1 < length) {
                ++inc.checks;
                if (value_compare(vals[i], vals[i + 1]) >= 0 && !inc.witness)
                    inc.witness = "f" + std::to_string(i + 1) + " >= f" + std::to_string(i + 2) + " at " +
                                  point_string(vars, x) + ": " + value_string(vals[i]) + " vs " +
                                  value_string(vals[i + 1]);
            }
        }
        ++exh.checks;
        if (all_negative && !inside && !exh.witness)
            exh.witness = "all f_i < 0 at " + point_string(vars, x) + " outside the set";
        return true;
    });
    r.conditions.push_back(std::move(neg));
    r.conditions.push_back(std::move(inc));
    r.conditions.push_back(std::move(exh));
}

inline CoverCondition pairwise_involutive(const std::vector<PolyFunction>& fs, const std::string& label)
{
    CoverCondition c{"pairwise_involutive", 0, {}};
    for (size_t i = 0; i < fs.size(); ++i)
        for (size_t j = i + 1; j < fs.size(); ++j) {
            ++c.checks;
            const auto b = poisson_bracket(fs[i], fs[j]);
            if (!b.is_zero() && !c.witness)
                c.witness = "{" + label + std::to_string(i + 1) + ", " + label + std::to_string(j + 1) +
                            "} = " + b.to_string();
        }
    return c;
}

} // namespace detail

/// Checks a finite sequence f_1..f_m against the set K = {k <= 0} on a grid:
/// f_i < 0 on K, f_i < f_{i+1}, all f_i < 0 only on K, and {f_i, f_j} = 0.
inline WeakCoverReport check_weak_cover_conditions(const std::vector<PolyFunction>& fs, const Polynomial& k,
                                                   const Grid& grid)
{
    if (fs.empty())
        throw BadSequence("empty function sequence");
    const VarScheme vars = fs[0].vars();
    for (const auto& f : fs)
        if (!(f.vars() == vars))
            throw RingMismatch("sequence members in different variables");
    if (!(k.vars() == vars))
        throw RingMismatch("set and sequence in different variables");
    WeakCoverReport r;
    r.set = "{" + k.to_string() + " <= 0}";
    r.length = static_cast<int>(fs.size());
    detail::grid_conditions<Rational>(
        r, vars, r.length, [&](int i, const std::vector<Rational>& x) { return fs[i].evaluate(x); },
        [&](const std::vector<Rational>& x) { return k.evaluate(x).sign() <= 0; }, grid);
    r.conditions.push_back(detail::pairwise_involutive(fs, "f"));
    return r;
}

/// Same conditions for smoothed sequences g_i = h(f1_i, f2_i) against a set given by membership.
/// The bracket condition checks that all inner functions commute, which makes every {g_i, g_j} vanish.
inline WeakCoverReport check_cover_functions(const std::vector<CoverFunction>& gs, const std::string& set_name,
                                             const std::function<bool(const std::vector<Rational>&)>& in_set,
                                             const Grid& grid)
{
    if (gs.empty())
        throw BadSequence("empty function sequence");
    const VarScheme vars = gs[0].f1.vars();
    WeakCoverReport r;
    r.set = set_name;
    r.length = static_cast<int>(gs.size());
    detail::grid_conditions<Surd>(
        r, vars, r.length, [&](int i, const std::vector<Rational>& x) { return gs[i](x); }, in_set, grid);
    std::vector<PolyFunction> inner;
    for (const auto& g : gs) {
        inner.push_back(g.f1);
        inner.push_back(g.f2);
    }
    auto c = detail::pairwise_involutive(inner, "u");
    r.conditions.push_back(std::move(c));
    return r;
}

} // namespace descentlab

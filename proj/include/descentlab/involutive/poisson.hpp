#pragma once

#include <string>
#include <vector>

#include "descentlab/involutive/polynomial.hpp"

namespace descentlab {

/// {f, g} = sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i).
inline PolyFunction poisson_bracket(const PolyFunction& f, const PolyFunction& g)
{
    if (!(f.vars() == g.vars()))
        throw RingMismatch("Poisson bracket of functions on different phase spaces");
    if (f.vars().kind != VarScheme::Kind::phase)
        throw InputError("Poisson bracket needs phase-space variables");
    const int n = f.vars().n;
    PolyFunction out(f.vars());
    for (int i = 0; i < n; ++i) {
        out += f.derivative(i) * g.derivative(n + i);
        out -= f.derivative(n + i) * g.derivative(i);
    }
    return out;
}

struct CompositionResult
{
    PolyFunction G1, G2, bracket;
};

/// Checks that the f_i pairwise Poisson commute, forms G_l = g_l(f_1..f_N) and verifies
/// {G_1, G_2} = 0. Throws HypothesisFailure naming a non-commuting pair and LemmaViolation
/// if the composites fail to commute.
inline CompositionResult check_composition_lemma(const std::vector<PolyFunction>& fs, const Polynomial& g1,
                                                 const Polynomial& g2)
{
    if (fs.empty())
        throw InputError("composition needs at least one function");
    for (size_t i = 0; i < fs.size(); ++i)
        for (size_t j = i + 1; j < fs.size(); ++j) {
            auto b = poisson_bracket(fs[i], fs[j]);
            if (!b.is_zero())
                throw HypothesisFailure("{f" + std::to_string(i + 1) + ", f" + std::to_string(j + 1) +
                                        "} = " + b.to_string());
        }
    CompositionResult r{g1.compose(fs), g2.compose(fs), {}};
    r.bracket = poisson_bracket(r.G1, r.G2);
    if (!r.bracket.is_zero())
        throw LemmaViolation("{G1, G2} = " + r.bracket.to_string());
    return r;
}

} // namespace descentlab

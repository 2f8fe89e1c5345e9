#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "descentlab/operad/polyvector.hpp"
#include "descentlab/parallel.hpp"

namespace descentlab {

struct AxiomResult
{
    std::string axiom;
    long checks = 0;
    std::optional<std::string> witness;

    bool passed() const { return !witness.has_value(); }
};

struct BVAxiomReport
{
    std::string structure;
    int basis_size = 0;
    std::vector<AxiomResult> axioms;

    bool passed() const
    {
        for (const auto& a : axioms)
            if (!a.passed())
                return false;
        return true;
    }

    /// Throws AxiomFailure for the first failing axiom.
    void enforce() const
    {
        for (const auto& a : axioms)
            if (!a.passed())
                throw AxiomFailure(a.axiom, *a.witness);
    }

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["structure"] = structure;
        j["basis_size"] = basis_size;
        j["passed"] = passed();
        auto arr = nlohmann::ordered_json::array();
        for (const auto& a : axioms) {
            nlohmann::ordered_json e;
            e["axiom"] = a.axiom;
            e["passed"] = a.passed();
            e["checks"] = a.checks;
            e["witness"] = a.witness ? nlohmann::ordered_json(*a.witness) : nlohmann::ordered_json(nullptr);
            arr.push_back(e);
        }
        j["axioms"] = arr;
        return j;
    }
};

namespace detail {

inline int sgn_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

inline std::string triple(const std::vector<const Polyvector*>& xs)
{
    static const char* names[] = {"a", "b", "c"};
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i)
        out += std::string(i ? ", " : "") + names[i] + " = " + xs[i]->to_string();
    return out;
}

} // namespace detail

/// Checks D^2 = 0, the unit, graded antisymmetry, Leibniz in both slots and Jacobi for the
/// derived bracket on every pair and triple from `basis` (homogeneous elements).
inline BVAxiomReport bv_axiom_check(const BVStructure& S, const std::vector<Polyvector>& basis)
{
    using detail::sgn_pow;
    const int B = static_cast<int>(basis.size());
    std::vector<int> deg(B);
    for (int i = 0; i < B; ++i) {
        if (!(basis[i].ring() == S.ring))
            throw RingMismatch("basis element over a different ring");
        deg[i] = std::max(basis[i].degree(), 0);
    }
    BVAxiomReport report;
    report.structure = S.name;
    report.basis_size = B;

    AxiomResult sq, unit, anti;
    sq.axiom = "delta_squared";
    unit.axiom = "unit";
    anti.axiom = "antisymmetry";
    const Polyvector one = Polyvector::constant(S.ring, Rational(1));
    ++unit.checks;
    if (!S.delta(one).is_zero())
        unit.witness = "D(1) = " + S.delta(one).to_string();
    for (int i = 0; i < B && !sq.witness; ++i) {
        ++sq.checks;
        auto dd = S.delta(S.delta(basis[i]));
        if (!dd.is_zero())
            sq.witness = detail::triple({&basis[i]}) + "; D(D(a)) = " + dd.to_string();
    }
    for (int i = 0; i < B && !unit.witness; ++i) {
        ++unit.checks;
        if (!S.bracket(one, basis[i]).is_zero())
            unit.witness = detail::triple({&basis[i]}) + "; [1, a] != 0";
    }

    // pairwise brackets, reused by the triple checks
    std::vector<std::vector<Polyvector>> br(B, std::vector<Polyvector>(B));
    parallel_for(B, [&](int i) {
        for (int j = 0; j < B; ++j)
            br[i][j] = S.bracket(basis[i], basis[j]);
    });
    for (int i = 0; i < B && !anti.witness; ++i)
        for (int j = 0; j < B && !anti.witness; ++j) {
            ++anti.checks;
            auto lhs = br[i][j] + Rational(sgn_pow((deg[i] - 1) * (deg[j] - 1))) * br[j][i];
            if (!lhs.is_zero())
                anti.witness = detail::triple({&basis[i], &basis[j]}) + "; [a,b] + (-1)^{(|a|-1)(|b|-1)}[b,a] = " +
                               lhs.to_string();
        }

    struct Failure
    {
        int axiom = -1;
        int j = 0, k = 0;
        std::string detail;
    };
    // per first index, the first failure of each triple axiom
    std::vector<std::vector<std::optional<Failure>>> fails(B, std::vector<std::optional<Failure>>(3));
    parallel_for(B, [&](int i) {
        const auto& a = basis[i];
        const int da = deg[i];
        for (int j = 0; j < B; ++j)
            for (int k = 0; k < B; ++k) {
                const auto& b = basis[j];
                const auto& c = basis[k];
                const int db = deg[j], dc = deg[k];
                if (!fails[i][0]) {
                    auto lhs = S.bracket(a, pv_wedge(b, c));
                    auto rhs = pv_wedge(br[i][j], c) + Rational(sgn_pow((da - 1) * db)) * pv_wedge(b, br[i][k]);
                    if (!(lhs == rhs))
                        fails[i][0] = Failure{0, j, k, "[a,bc] = " + lhs.to_string() + " but [a,b]c +- b[a,c] = " +
                                                           rhs.to_string()};
                }
                if (!fails[i][1]) {
                    // [ab, c] = a[b,c] + (-1)^{|b|(|c|-1)} [a,c] b
                    auto lhs = S.bracket(pv_wedge(a, b), c);
                    auto rhs = pv_wedge(a, br[j][k]) + Rational(sgn_pow(db * (dc - 1))) * pv_wedge(br[i][k], b);
                    if (!(lhs == rhs))
                        fails[i][1] = Failure{1, j, k, "[ab,c] = " + lhs.to_string() + " but a[b,c] +- [a,c]b = " +
                                                           rhs.to_string()};
                }
                if (!fails[i][2]) {
                    auto lhs = S.bracket(a, br[j][k]);
                    auto rhs = S.bracket(br[i][j], c) +
                               Rational(sgn_pow((da - 1) * (db - 1))) * S.bracket(b, br[i][k]);
                    if (!(lhs == rhs))
                        fails[i][2] = Failure{2, j, k, "[a,[b,c]] = " + lhs.to_string() +
                                                           " but [[a,b],c] +- [b,[a,c]] = " + rhs.to_string()};
                }
            }
    });
    const char* names[] = {"leibniz_right", "leibniz_left", "jacobi"};
    std::vector<AxiomResult> triples;
    for (int t = 0; t < 3; ++t) {
        AxiomResult r;
        r.axiom = names[t];
        r.checks = static_cast<long>(B) * B * B;
        for (int i = 0; i < B && !r.witness; ++i)
            if (const auto& f = fails[i][t])
                r.witness = detail::triple({&basis[i], &basis[f->j], &basis[f->k]}) + "; " + f->detail;
        triples.push_back(std::move(r));
    }
    report.axioms = {sq, unit, anti};
    for (auto& r : triples)
        report.axioms.push_back(std::move(r));
    return report;
}

} // namespace descentlab

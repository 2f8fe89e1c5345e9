#pragma once

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "descentlab/complexes/constructions.hpp"
#include "descentlab/linalg/echelon.hpp"
#include "descentlab/linalg/smith.hpp"
#include "descentlab/parallel.hpp"

namespace descentlab {

struct DegreeHomology
{
    int degree = 0;
    int betti = 0;                // Q: dimension; Novikov: number of free summands
    std::vector<Rational> torsion; // Novikov: T-orders of the non-free cyclic summands
    std::vector<int> lengths;     // Novikov: raw u-lengths, free summands included
};

struct HomologyReport
{
    std::string coeff = "Q";
    bool novikov = false;
    int steps = 0; // u-steps K over the Novikov ring
    std::vector<DegreeHomology> degrees;

    int betti(int n) const
    {
        for (const auto& d : degrees)
            if (d.degree == n)
                return d.betti;
        return 0;
    }

    const DegreeHomology* at(int n) const
    {
        for (const auto& d : degrees)
            if (d.degree == n)
                return &d;
        return nullptr;
    }

    std::vector<int> betti_table(int lo, int hi) const
    {
        std::vector<int> out;
        for (int n = lo; n <= hi; ++n)
            out.push_back(betti(n));
        return out;
    }

    bool acyclic() const
    {
        for (const auto& d : degrees)
            if (d.betti != 0 || !d.torsion.empty())
                return false;
        return true;
    }

    int euler() const
    {
        int e = 0;
        for (const auto& d : degrees)
            e += (d.degree % 2 == 0 ? 1 : -1) * d.betti;
        return e;
    }

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["coeff"] = coeff;
        nlohmann::ordered_json degs = nlohmann::ordered_json::array();
        for (const auto& d : degrees) {
            nlohmann::ordered_json e;
            e["degree"] = d.degree;
            if (novikov) {
                e["free"] = d.betti;
                std::vector<std::string> t;
                for (const auto& r : d.torsion)
                    t.push_back("T^(" + r.to_string() + ")");
                e["torsion"] = t;
            } else {
                e["betti"] = d.betti;
            }
            degs.push_back(e);
        }
        j["degrees"] = degs;
        if (!novikov)
            j["euler"] = euler();
        return j;
    }

    std::string table() const
    {
        std::ostringstream os;
        os << "coefficients: " << coeff << "\n";
        if (novikov) {
            os << std::setw(8) << "degree" << std::setw(8) << "free" << "  torsion\n";
            for (const auto& d : degrees) {
                os << std::setw(8) << d.degree << std::setw(8) << d.betti << "  ";
                if (d.torsion.empty())
                    os << "-";
                for (size_t k = 0; k < d.torsion.size(); ++k)
                    os << (k ? " " : "") << "T^(" << d.torsion[k].to_string() << ")";
                os << "\n";
            }
        } else {
            os << std::setw(8) << "degree" << std::setw(8) << "betti" << "\n";
            for (const auto& d : degrees)
                os << std::setw(8) << d.degree << std::setw(8) << d.betti << "\n";
            os << "euler characteristic: " << euler() << "\n";
        }
        return os.str();
    }
};

/// Cycle and boundary data of one degree over Q, with class coordinates
/// relative to a fixed set of representative cycles.
struct RationalHomologyDegree
{
    int degree = 0;
    Kernel cycles;
    Echelon boundaries{0}; // in cycle coordinates, reduced
    std::vector<int> reps; // cycle-coordinate indices of representatives

    int betti() const { return static_cast<int>(reps.size()); }

    QVec representative(int k) const { return cycles.basis[reps[k]]; }

    /// Coordinates of the class of a cycle z in the representative basis.
    QVec class_coords(const QVec& z) const
    {
        QVec c = cycles.coordinates(z);
        for (const auto& row : boundaries.rows()) {
            Rational coef = vec_get(c, row.front().first, Rational(0));
            if (!coef.is_zero())
                c = vec_add(c, row, -coef);
        }
        QVec out;
        for (const auto& [i, x] : c) {
            auto it = std::lower_bound(reps.begin(), reps.end(), i);
            if (it == reps.end() || *it != i)
                throw Error("class_coords: residue off the representative set");
            out.emplace_back(static_cast<int>(it - reps.begin()), x);
        }
        return out;
    }

    bool is_boundary(const QVec& z) const { return class_coords(z).empty(); }
};

inline RationalHomologyDegree rational_homology_degree(const Complex<Rational>& c, int n)
{
    RationalHomologyDegree h;
    h.degree = n;
    h.cycles = kernel(c.d(n));
    h.boundaries = Echelon(h.cycles.dim());
    auto prev = c.d(n - 1);
    for (const auto& col : prev.columns())
        if (!col.empty())
            h.boundaries.insert(h.cycles.coordinates(col));
    h.boundaries.make_reduced();
    std::vector<char> piv(h.cycles.dim(), 0);
    for (int p : h.boundaries.pivot_columns())
        piv[p] = 1;
    for (int i = 0; i < h.cycles.dim(); ++i)
        if (!piv[i])
            h.reps.push_back(i);
    return h;
}

/// Module data of one degree over Q[u]/(u^K): kernel generators in Smith coordinates
/// and the presentation of H^n as a cokernel.
struct NovikovHomologyDegree
{
    int degree = 0;
    int steps = 0;
    NovikovRing ring;
    LocalSmith smith;          // of d^n
    std::vector<int> gen_rows; // Smith coordinates carrying generators
    std::vector<int> gen_order; // annihilator length of each generator
    NMatrix relations;         // rows = generators
    std::vector<int> lengths;

    /// Generator coordinates of a cycle v in C^n.
    NVec generator_coords(const NVec& v) const
    {
        NVec out;
        for (size_t g = 0; g < gen_rows.size(); ++g) {
            const int i = gen_rows[g];
            NovikovElem y(ring);
            for (const auto& [j, x] : v)
                y += smith.Qinv(i, j) * x;
            if (i < smith.rank())
                y = y.shifted_down(steps - smith.valuations[i]);
            if (!y.is_zero())
                out.emplace_back(static_cast<int>(g), y);
        }
        return out;
    }

    /// The cycle module as columns in C^n.
    std::vector<NVec> cycle_generators() const
    {
        std::vector<NVec> out;
        for (size_t g = 0; g < gen_rows.size(); ++g) {
            const int i = gen_rows[g];
            const int lift = i < smith.rank() ? steps - smith.valuations[i] : 0;
            NVec col;
            for (int r = 0; r < smith.Q.rows; ++r) {
                NovikovElem x = smith.Q(r, i).shifted_up(lift);
                if (!x.is_zero())
                    col.emplace_back(r, x);
            }
            out.push_back(col);
        }
        return out;
    }
};

inline NovikovHomologyDegree novikov_homology_degree(const Complex<NovikovElem>& c, int n)
{
    const NovikovRing& ring = c.ring();
    const int K = ring.steps();
    NovikovHomologyDegree h;
    h.degree = n;
    h.steps = K;
    h.ring = ring;
    h.smith = local_smith(c.d(n), true);
    const int dn = c.dim(n);
    for (int i = 0; i < dn; ++i) {
        if (i < h.smith.rank()) {
            if (h.smith.valuations[i] > 0) {
                h.gen_rows.push_back(i);
                h.gen_order.push_back(h.smith.valuations[i]);
            }
        } else {
            h.gen_rows.push_back(i);
            h.gen_order.push_back(K);
        }
    }
    const int g = static_cast<int>(h.gen_rows.size());
    std::vector<Triplet<NovikovElem>> t;
    int col = 0;
    for (int k = 0; k < g; ++k)
        if (h.gen_order[k] < K)
            t.push_back({k, col++, NovikovElem::u_power(ring, h.gen_order[k])});
    auto prev = c.d(n - 1);
    for (const auto& bcol : prev.columns()) {
        auto z = h.generator_coords(bcol);
        for (const auto& [k, x] : z)
            t.push_back({k, col, x});
        ++col;
    }
    h.relations = NMatrix::from_triplets(ring, g, col, std::move(t));
    h.lengths = cokernel_lengths(h.relations);
    return h;
}

template <class S>
HomologyReport homology(const Complex<S>& c)
{
    HomologyReport rep;
    rep.coeff = c.ring().to_string();
    const int lo = c.lo(), hi = c.hi();
    const int count = hi - lo + 1;
    rep.degrees.resize(std::max(count, 0));
    if constexpr (scalar_traits<S>::is_field) {
        std::vector<int> ranks(std::max(count, 0));
        parallel_for(count, [&](int k) { ranks[k] = rank(c.d(lo + k)); });
        for (int k = 0; k < count; ++k) {
            rep.degrees[k].degree = lo + k;
            rep.degrees[k].betti = c.dim(lo + k) - ranks[k] - (k > 0 ? ranks[k - 1] : 0);
        }
    } else {
        rep.novikov = true;
        rep.steps = c.ring().steps();
        parallel_for(count, [&](int k) {
            auto h = novikov_homology_degree(c, lo + k);
            auto& d = rep.degrees[k];
            d.degree = lo + k;
            d.lengths = h.lengths;
            for (int l : h.lengths) {
                if (l == rep.steps)
                    ++d.betti;
                else
                    d.torsion.push_back(c.ring().exponent(l));
            }
        });
    }
    return rep;
}

/// Rank of H^n(f) for a degree-0 chain map over Q.
inline int induced_rank(const ChainMap<Rational>& f, int n)
{
    auto Zc = kernel(f.source().d(n));
    auto fn = f.at(n);
    Echelon e(f.target().dim(n));
    for (const auto& col : f.target().d(n - 1).columns())
        if (!col.empty())
            e.insert(col);
    const int base = e.rank();
    for (const auto& z : Zc.basis)
        e.insert(fn.apply(z));
    return e.rank() - base;
}

struct QuasiIsoCertificate
{
    bool holds = true;
    std::optional<int> witness;   // least degree where H^n(f) is not bijective
    std::vector<int> degrees;
    std::vector<int> source_betti;
    std::vector<int> target_betti;
    std::vector<int> map_rank;
    std::vector<int> cone_betti;  // H^n(cone f)

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["quasi_isomorphism"] = holds;
        j["witness_degree"] = witness ? nlohmann::ordered_json(*witness) : nlohmann::ordered_json(nullptr);
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (size_t k = 0; k < degrees.size(); ++k)
            rows.push_back({{"degree", degrees[k]},
                            {"source", source_betti[k]},
                            {"target", target_betti[k]},
                            {"map_rank", map_rank[k]},
                            {"cone", cone_betti[k]}});
        j["degrees"] = rows;
        return j;
    }
};

/// Certifies f as a quasi-isomorphism by acyclicity of its cone, with
/// per-degree Betti numbers and induced ranks as the certificate.
template <class S>
QuasiIsoCertificate is_quasi_iso(const ChainMap<S>& f)
{
    if constexpr (!scalar_traits<S>::is_field) {
        throw UnsupportedRing("quasi-isomorphism certification needs field coefficients");
    } else {
        QuasiIsoCertificate cert;
        const auto& C = f.source();
        const auto& D = f.target();
        auto K = cone(f);
        auto hC = homology(C), hD = homology(D), hK = homology(K);
        int lo = std::min({C.lo(), D.lo(), K.lo() + 1}), hi = std::max({C.hi(), D.hi(), K.hi() + 1});
        for (int n = lo; n <= hi; ++n) {
            int r = induced_rank(f, n);
            cert.degrees.push_back(n);
            cert.source_betti.push_back(hC.betti(n));
            cert.target_betti.push_back(hD.betti(n));
            cert.map_rank.push_back(r);
            cert.cone_betti.push_back(hK.betti(n));
            bool iso = r == hC.betti(n) && r == hD.betti(n);
            if (!iso && !cert.witness)
                cert.witness = n;
        }
        cert.holds = hK.acyclic();
        if (cert.holds != !cert.witness.has_value())
            throw Error("quasi-isomorphism certificate is inconsistent");
        return cert;
    }
}

/// Submodule of H^n(D) generated by the image of H^n(C) under f (Novikov coefficients).
struct ImageReport
{
    int degree = 0;
    std::vector<int> lengths;    // cyclic u-lengths of the image
    bool inside_u_multiple = true; // image contained in u * H^n(D): no valuation-0 class
    int steps = 0;

    bool pure_torsion() const
    {
        for (int l : lengths)
            if (l >= steps)
                return false;
        return true;
    }
};

inline ImageReport image_in_homology(const ChainMap<NovikovElem>& f, int n)
{
    const NovikovRing& ring = f.source().ring();
    const int K = ring.steps();
    auto hs = novikov_homology_degree(f.source(), n);
    auto ht = novikov_homology_degree(f.target(), n);
    const int g = static_cast<int>(ht.gen_rows.size());
    auto fn = f.at(n);
    std::vector<NVec> W;
    for (const auto& z : hs.cycle_generators())
        W.push_back(ht.generator_coords(fn.apply(z)));

    auto stacked = [&](const std::vector<NVec>& extra) {
        auto cols = ht.relations.columns();
        cols.insert(cols.end(), extra.begin(), extra.end());
        return NMatrix::from_columns(ring, g, cols);
    };
    auto scaled = [&](const std::vector<NVec>& cols, int j) {
        std::vector<NVec> out;
        for (const auto& c : cols) {
            NVec v;
            for (const auto& [i, x] : c) {
                auto y = x.shifted_up(j);
                if (!y.is_zero())
                    v.emplace_back(i, y);
            }
            out.push_back(v);
        }
        return out;
    };
    const int base = total_length(cokernel_lengths(stacked({})));
    std::vector<int> dims;
    for (int j = 0; j <= K; ++j)
        dims.push_back(base - total_length(cokernel_lengths(stacked(scaled(W, j)))));
    ImageReport rep;
    rep.degree = n;
    rep.steps = K;
    rep.lengths = lengths_from_power_dims(dims);
    std::vector<NVec> uI;
    for (int k = 0; k < g; ++k)
        uI.push_back({{k, NovikovElem::u_power(ring, 1)}});
    auto with_u = uI;
    const int len_u = total_length(cokernel_lengths(stacked(with_u)));
    with_u.insert(with_u.end(), W.begin(), W.end());
    rep.inside_u_multiple = total_length(cokernel_lengths(stacked(with_u))) == len_u;
    return rep;
}

} // namespace descentlab

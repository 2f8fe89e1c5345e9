#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "descentlab/complexes/complex.hpp"
#include "descentlab/simplex/inj_map.hpp"

namespace descentlab {

/// Index subsets J of {1..N} as bitmasks; member m is bit m-1 and the empty mask is the total set.
using NodeMask = FaceMask;

inline std::string node_string(NodeMask J)
{
    if (J == 0)
        return "top";
    std::string s = "[";
    bool first = true;
    for (int v : face_vertices(J)) {
        s += (first ? "" : ",") + std::to_string(v + 1);
        first = false;
    }
    return s + "]";
}

/// Nonempty subsets of {1..N} with |J| = p+1, lexicographic in their member lists.
inline std::vector<NodeMask> nodes_of_size(int N, int p)
{
    return simplex_faces(N - 1, p);
}

/// A complex for every nonempty J and for the total set, with restriction maps
/// along containments J -> K (J a subset of K, so K_K is inside K_J).
template <class S>
class CoverPresheaf
{
public:
    using ring_type = ring_of<S>;

    CoverPresheaf() = default;
    CoverPresheaf(ring_type ring, int N) : ring_(std::move(ring)), N_(N)
    {
        if (N < 1 || N > 16)
            throw InputError("cover size must be in 1..16");
    }

    const ring_type& ring() const noexcept { return ring_; }
    int N() const noexcept { return N_; }
    NodeMask full() const noexcept { return (NodeMask(1) << N_) - 1; }

    void set_value(NodeMask J, Complex<S> c)
    {
        check_node(J);
        if (!(c.ring() == ring_))
            throw RingMismatch("presheaf value at " + node_string(J));
        values_[J] = std::move(c);
    }

    void set_restriction(NodeMask from, NodeMask to, ChainMap<S> f)
    {
        check_node(from);
        check_node(to);
        if ((from & ~to) != 0 || from == to)
            throw InputError("restriction " + node_string(from) + "->" + node_string(to) + " is not a proper containment");
        if (f.shift() != 0)
            throw ShapeMismatch("restriction maps must have degree 0");
        restrictions_[{from, to}] = std::move(f);
    }

    bool has_value(NodeMask J) const { return values_.count(J) > 0; }

    const Complex<S>& value(NodeMask J) const
    {
        auto it = values_.find(J);
        if (it == values_.end())
            throw InputError("presheaf has no value at " + node_string(J));
        return it->second;
    }
    const Complex<S>& top() const { return value(0); }

    bool has_restriction(NodeMask from, NodeMask to) const { return restrictions_.count({from, to}) > 0; }

    /// Restriction along J -> K; composes generating steps (adding members in increasing order) when not stored.
    ChainMap<S> restriction(NodeMask from, NodeMask to) const
    {
        if ((from & ~to) != 0)
            throw InputError(node_string(from) + " is not contained in " + node_string(to));
        if (from == to)
            return identity_map(value(from));
        auto it = restrictions_.find({from, to});
        if (it != restrictions_.end())
            return it->second;
        NodeMask cur = from;
        std::optional<ChainMap<S>> acc;
        for (int m = 0; m < N_; ++m) {
            NodeMask bit = NodeMask(1) << m;
            if (!(to & bit) || (cur & bit))
                continue;
            auto step = restrictions_.find({cur, cur | bit});
            if (step == restrictions_.end())
                throw InputError("missing restriction " + node_string(cur) + "->" + node_string(cur | bit));
            acc = acc ? compose(step->second, *acc) : step->second;
            cur |= bit;
        }
        return *acc;
    }

    const std::map<NodeMask, Complex<S>>& values() const noexcept { return values_; }
    const std::map<std::pair<NodeMask, NodeMask>, ChainMap<S>>& restrictions() const noexcept
    {
        return restrictions_;
    }

private:
    void check_node(NodeMask J) const
    {
        if ((J & ~full()) != 0)
            throw InputError("node " + node_string(J) + " outside a cover of size " + std::to_string(N_));
    }

    ring_type ring_{};
    int N_ = 0;
    std::map<NodeMask, Complex<S>> values_;
    std::map<std::pair<NodeMask, NodeMask>, ChainMap<S>> restrictions_;
};

namespace detail {

template <class S>
bool same_shape(const Complex<S>& a, const Complex<S>& b)
{
    int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    for (int n = lo; n <= hi; ++n)
        if (a.dim(n) != b.dim(n))
            return false;
    return true;
}

} // namespace detail

/// Checks values, shapes, chain-map property and commutation of every restriction square.
/// Throws FunctorialityFailure naming the first failing square, InputError for missing data.
template <class S>
void check_presheaf(const CoverPresheaf<S>& F)
{
    const int N = F.N();
    for (NodeMask J = 0; J <= F.full(); ++J) {
        if (!F.has_value(J))
            throw InputError("presheaf has no value at " + node_string(J));
        validate(F.value(J));
    }
    for (NodeMask J = 0; J <= F.full(); ++J)
        for (int m = 0; m < N; ++m) {
            NodeMask K = J | (NodeMask(1) << m);
            if (K == J)
                continue;
            if (!F.has_restriction(J, K))
                throw InputError("missing restriction " + node_string(J) + "->" + node_string(K));
            const auto& f = F.restrictions().at({J, K});
            if (!detail::same_shape(f.source(), F.value(J)) || !detail::same_shape(f.target(), F.value(K)))
                throw ShapeMismatch("restriction " + node_string(J) + "->" + node_string(K) + " has wrong shape");
            if (auto n = chain_map_defect(f))
                throw FunctorialityFailure("restriction " + node_string(J) + "->" + node_string(K) +
                                           " is not a chain map in degree " + std::to_string(*n));
        }
    for (NodeMask J = 0; J <= F.full(); ++J)
        for (int a = 0; a < N; ++a)
            for (int b = a + 1; b < N; ++b) {
                NodeMask A = NodeMask(1) << a, B = NodeMask(1) << b;
                if ((J & A) || (J & B))
                    continue;
                auto via_a = compose(F.restrictions().at({J | A, J | A | B}), F.restrictions().at({J, J | A}));
                auto via_b = compose(F.restrictions().at({J | B, J | A | B}), F.restrictions().at({J, J | B}));
                if (!maps_equal(via_a, via_b))
                    throw FunctorialityFailure(node_string(J) + "->" + node_string(J | A) + "->" +
                                               node_string(J | A | B) + " differs from " + node_string(J) + "->" +
                                               node_string(J | B) + "->" + node_string(J | A | B));
            }
    for (const auto& [key, f] : F.restrictions()) {
        auto [from, to] = key;
        if (std::popcount(to & ~from) <= 1)
            continue;
        NodeMask low = to & ~from;
        NodeMask bit = low & (~low + 1);
        auto composite = compose(F.restriction(from | bit, to), F.restrictions().at({from, from | bit}));
        if (!maps_equal(composite, f))
            throw FunctorialityFailure("stored restriction " + node_string(from) + "->" + node_string(to) +
                                       " differs from the composite of generating restrictions");
    }
}

/// Presheaf with the same complex everywhere and identity restrictions.
template <class S>
CoverPresheaf<S> constant_presheaf(int N, const Complex<S>& c)
{
    CoverPresheaf<S> F(c.ring(), N);
    for (NodeMask J = 0; J <= F.full(); ++J)
        F.set_value(J, c);
    for (NodeMask J = 0; J <= F.full(); ++J)
        for (int m = 0; m < N; ++m)
            if (!(J & (NodeMask(1) << m)))
                F.set_restriction(J, J | (NodeMask(1) << m), identity_map(c));
    return F;
}

/// Relabels cover members: member m of the result is member perm[m] of F (0-based).
template <class S>
CoverPresheaf<S> permute_members(const CoverPresheaf<S>& F, const std::vector<int>& perm)
{
    const int N = F.N();
    if (static_cast<int>(perm.size()) != N)
        throw InputError("permutation has wrong length");
    auto map_node = [&](NodeMask J) {
        NodeMask out = 0;
        for (int m = 0; m < N; ++m)
            if (J & (NodeMask(1) << perm[m]))
                out |= NodeMask(1) << m;
        return out;
    };
    std::vector<NodeMask> inv(F.full() + 1);
    for (NodeMask J = 0; J <= F.full(); ++J)
        inv[map_node(J)] = J;
    CoverPresheaf<S> G(F.ring(), N);
    for (NodeMask J = 0; J <= F.full(); ++J)
        G.set_value(J, F.value(inv[J]));
    for (NodeMask J = 0; J <= F.full(); ++J)
        for (int m = 0; m < N; ++m)
            if (!(J & (NodeMask(1) << m))) {
                NodeMask K = J | (NodeMask(1) << m);
                G.set_restriction(J, K, F.restriction(inv[J], inv[K]));
            }
    return G;
}

/// The presheaf on the members listed in `members` (0-based, increasing) with the value at
/// `base` intersected in: J maps to F(base | J). The total set maps to F(base).
template <class S>
CoverPresheaf<S> sub_presheaf(const CoverPresheaf<S>& F, const std::vector<int>& members, NodeMask base = 0)
{
    const int M = static_cast<int>(members.size());
    CoverPresheaf<S> G(F.ring(), M);
    auto lift = [&](NodeMask J) {
        NodeMask out = base;
        for (int k = 0; k < M; ++k)
            if (J & (NodeMask(1) << k))
                out |= NodeMask(1) << members[k];
        return out;
    };
    for (NodeMask J = 0; J <= G.full(); ++J)
        G.set_value(J, F.value(lift(J)));
    for (NodeMask J = 0; J <= G.full(); ++J)
        for (int k = 0; k < M; ++k)
            if (!(J & (NodeMask(1) << k))) {
                NodeMask K = J | (NodeMask(1) << k);
                if (lift(J) == lift(K))
                    G.set_restriction(J, K, identity_map(F.value(lift(J))));
                else
                    G.set_restriction(J, K, F.restriction(lift(J), lift(K)));
            }
    return G;
}

} // namespace descentlab

#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "descentlab/scalars/rational.hpp"
#include "descentlab/simplex/inj_map.hpp"

namespace descentlab {

/// Normalized cochain on the p-simplex: a scalar per nonempty face.
/// Mixed degrees are allowed; the degree-k part lives on faces with k+1 vertices.
class NCochain
{
public:
    NCochain() = default;
    explicit NCochain(int p) : p_(p) {}

    static NCochain delta(int p, FaceMask f, const Rational& c = Rational(1))
    {
        NCochain x(p);
        x.add(f, c);
        return x;
    }

    /// Value 1 on every vertex.
    static NCochain unit(int p)
    {
        NCochain x(p);
        for (int v = 0; v <= p; ++v)
            x.add(FaceMask(1) << v, Rational(1));
        return x;
    }

    int p() const noexcept { return p_; }
    const std::map<FaceMask, Rational>& values() const noexcept { return vals_; }
    bool is_zero() const noexcept { return vals_.empty(); }

    Rational operator()(FaceMask f) const
    {
        auto it = vals_.find(f);
        return it == vals_.end() ? Rational(0) : it->second;
    }

    void add(FaceMask f, const Rational& c)
    {
        if (f == 0 || (f >> (p_ + 1)) != 0)
            throw ShapeMismatch("face " + face_string(f) + " not in the " + std::to_string(p_) + "-simplex");
        if (c.is_zero())
            return;
        auto [it, inserted] = vals_.try_emplace(f, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                vals_.erase(it);
        }
    }

    NCochain part(int k) const
    {
        NCochain out(p_);
        for (const auto& [f, c] : vals_)
            if (face_dim(f) == k)
                out.vals_.emplace(f, c);
        return out;
    }

    NCochain& operator+=(const NCochain& o)
    {
        check(o);
        for (const auto& [f, c] : o.vals_)
            add(f, c);
        return *this;
    }
    friend NCochain operator+(NCochain a, const NCochain& b) { return a += b; }
    friend NCochain operator-(NCochain a, const NCochain& b) { return a += b.scaled(Rational(-1)); }

    NCochain scaled(const Rational& s) const
    {
        NCochain out(p_);
        if (s.is_zero())
            return out;
        for (const auto& [f, c] : vals_)
            out.vals_.emplace(f, c * s);
        return out;
    }

    friend bool operator==(const NCochain& a, const NCochain& b) { return a.p_ == b.p_ && a.vals_ == b.vals_; }

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (const auto& [f, c] : vals_) {
            std::string key = "[";
            bool first = true;
            for (int v : face_vertices(f)) {
                key += (first ? "" : ",") + std::to_string(v);
                first = false;
            }
            j[key + "]"] = c.to_string();
        }
        return j;
    }

    void check(const NCochain& o) const
    {
        if (o.p_ != p_)
            throw ShapeMismatch("cochains on different simplices");
    }

private:
    int p_ = 0;
    std::map<FaceMask, Rational> vals_;
};

/// (dx)(F') = sum_i (-1)^i x(F' minus its i-th vertex).
inline NCochain nc_differential(const NCochain& x)
{
    NCochain out(x.p());
    const FaceMask all = (FaceMask(1) << (x.p() + 1)) - 1;
    for (const auto& [f, c] : x.values()) {
        for (int v = 0; v <= x.p(); ++v) {
            const FaceMask bit = FaceMask(1) << v;
            if (f & bit)
                continue;
            FaceMask g = f | bit;
            // v sits at position i in the sorted vertex list of g
            int i = std::popcount(g & (bit - 1));
            out.add(g & all, (i % 2 == 0) ? c : -c);
        }
    }
    return out;
}

/// Pullback along f : [r] -> [q]; faces outside the image pull back to zero.
inline NCochain nc_coface(const InjMap& f, const NCochain& x)
{
    if (x.p() != f.q())
        throw ShapeMismatch("coface source does not match cochain simplex");
    NCochain out(f.p());
    for (const auto& [face, c] : x.values()) {
        if ((face & ~f.image_mask()) != 0)
            continue;
        FaceMask pre = 0;
        for (int v : face_vertices(face))
            pre |= FaceMask(1) << f.preimage(v);
        out.add(pre, c);
    }
    return out;
}

/// (x cup y)([i0..i_{k+l}]) = x([i0..ik]) * y([ik..i_{k+l}]).
inline NCochain nc_cup(const NCochain& x, const NCochain& y)
{
    x.check(y);
    NCochain out(x.p());
    for (const auto& [f, a] : x.values()) {
        const int last = 31 - std::countl_zero(f);
        for (const auto& [g, b] : y.values()) {
            const int first = std::countr_zero(g);
            if (first != last)
                continue;
            out.add(f | g, a * b);
        }
    }
    return out;
}

/// Basis of NC^k(Delta^p): the k-faces in lexicographic order.
struct NCBasis
{
    int p = 0;
    std::vector<std::vector<FaceMask>> faces; // by degree k
    std::vector<std::unordered_map<FaceMask, int>> index;

    explicit NCBasis(int p_) : p(p_)
    {
        for (int k = 0; k <= p; ++k) {
            faces.push_back(simplex_faces(p, k));
            std::unordered_map<FaceMask, int> m;
            for (size_t i = 0; i < faces.back().size(); ++i)
                m.emplace(faces.back()[i], static_cast<int>(i));
            index.push_back(std::move(m));
        }
    }

    int dim(int k) const { return (k < 0 || k > p) ? 0 : static_cast<int>(faces[k].size()); }
};

} // namespace descentlab

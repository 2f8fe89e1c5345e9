#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "descentlab/errors.hpp"

namespace descentlab {

/// Face of a simplex as a bitmask of its vertices.
using FaceMask = std::uint32_t;

inline int face_size(FaceMask f) { return std::popcount(f); }
inline int face_dim(FaceMask f) { return std::popcount(f) - 1; }

inline std::vector<int> face_vertices(FaceMask f)
{
    std::vector<int> v;
    for (int i = 0; f; ++i, f >>= 1)
        if (f & 1u)
            v.push_back(i);
    return v;
}

inline FaceMask face_from(const std::vector<int>& vertices)
{
    FaceMask m = 0;
    for (int v : vertices)
        m |= FaceMask(1) << v;
    return m;
}

inline std::string face_string(FaceMask f)
{
    std::string s = "[";
    for (int v : face_vertices(f))
        s += std::to_string(v);
    return s + "]";
}

/// All k-dimensional faces of the p-simplex, in lexicographic order of vertex lists.
inline std::vector<FaceMask> simplex_faces(int p, int k)
{
    std::vector<FaceMask> out;
    if (k < 0 || k > p)
        return out;
    std::vector<int> idx(k + 1);
    for (int i = 0; i <= k; ++i)
        idx[i] = i;
    for (;;) {
        out.push_back(face_from(idx));
        int i = k;
        while (i >= 0 && idx[i] == p - k + i)
            --i;
        if (i < 0)
            break;
        ++idx[i];
        for (int j = i + 1; j <= k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    return out;
}

/// Strictly increasing map {0..p} -> {0..q}, a morphism of the injective simplex category.
class InjMap
{
public:
    InjMap() = default;
    InjMap(int p, int q, std::vector<int> image) : p_(p), q_(q), image_(std::move(image))
    {
        if (p < -1 || q < -1 || static_cast<int>(image_.size()) != p + 1)
            throw ShapeMismatch("injection image must list p+1 vertices");
        for (size_t i = 0; i < image_.size(); ++i) {
            if (image_[i] < 0 || image_[i] > q)
                throw ShapeMismatch("injection image outside target simplex");
            if (i > 0 && image_[i] <= image_[i - 1])
                throw ShapeMismatch("injection image must be strictly increasing");
        }
    }

    static InjMap identity(int p)
    {
        std::vector<int> im(p + 1);
        for (int i = 0; i <= p; ++i)
            im[i] = i;
        return InjMap(p, p, im);
    }

    /// delta_i : [p] -> [p+1], skipping vertex i.
    static InjMap coface(int p, int i)
    {
        if (i < 0 || i > p + 1)
            throw ShapeMismatch("coface index out of range");
        std::vector<int> im;
        for (int v = 0; v <= p; ++v)
            im.push_back(v < i ? v : v + 1);
        return InjMap(p, p + 1, im);
    }

    /// Inclusion of a face of the q-simplex.
    static InjMap face_inclusion(int q, FaceMask f)
    {
        auto v = face_vertices(f);
        return InjMap(static_cast<int>(v.size()) - 1, q, v);
    }

    int p() const noexcept { return p_; }
    int q() const noexcept { return q_; }
    const std::vector<int>& image() const noexcept { return image_; }
    int operator()(int v) const { return image_[v]; }

    /// Preimage of vertex j, or -1.
    int preimage(int j) const
    {
        for (int i = 0; i <= p_; ++i)
            if (image_[i] == j)
                return i;
        return -1;
    }

    FaceMask image_mask() const { return face_from(image_); }

    FaceMask apply(FaceMask f) const
    {
        FaceMask out = 0;
        for (int v : face_vertices(f))
            out |= FaceMask(1) << image_[v];
        return out;
    }

    friend bool operator==(const InjMap&, const InjMap&) = default;

private:
    int p_ = -1;
    int q_ = -1;
    std::vector<int> image_;
};

/// g o f
inline InjMap compose(const InjMap& g, const InjMap& f)
{
    if (f.q() != g.p())
        throw ShapeMismatch("injections do not compose");
    std::vector<int> im;
    for (int v : f.image())
        im.push_back(g(v));
    return InjMap(f.p(), g.q(), im);
}

/// All injections [r] -> [q].
inline std::vector<InjMap> all_injections(int r, int q)
{
    std::vector<InjMap> out;
    for (FaceMask f : simplex_faces(q, r))
        out.push_back(InjMap::face_inclusion(q, f));
    return out;
}

} // namespace descentlab

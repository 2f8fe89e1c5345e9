#pragma once

#include <optional>
#include <string>
#include <vector>

#include "descentlab/errors.hpp"
#include "descentlab/linalg/sparse.hpp"

namespace descentlab {

/// Bounded cochain complex: C^n nonzero only for lo <= n <= hi, d^n : C^n -> C^{n+1}.
/// d^n is stored as a dim(n+1) x dim(n) matrix acting on column vectors.
template <class S>
class Complex
{
public:
    using scalar_type = S;
    using ring_type = ring_of<S>;
    using Matrix = SparseMatrix<S>;

    Complex() = default;

    /// Zero differentials; dims[k] is the dimension in degree lo + k.
    Complex(ring_type ring, int lo, std::vector<int> dims) : ring_(std::move(ring)), lo_(lo), dims_(std::move(dims))
    {
        for (int d : dims_)
            if (d < 0)
                throw ShapeMismatch("negative dimension");
        for (int n = lo_; n <= hi(); ++n)
            diffs_.emplace_back(ring_, dim(n + 1), dim(n));
    }

    const ring_type& ring() const noexcept { return ring_; }
    int lo() const noexcept { return lo_; }
    int hi() const noexcept { return lo_ + static_cast<int>(dims_.size()) - 1; }
    bool empty_support() const noexcept { return dims_.empty(); }

    int dim(int n) const
    {
        if (n < lo_ || n > hi())
            return 0;
        return dims_[n - lo_];
    }

    int total_dim() const
    {
        int s = 0;
        for (int d : dims_)
            s += d;
        return s;
    }

    /// d^n as a dim(n+1) x dim(n) matrix; zero outside the support.
    Matrix d(int n) const
    {
        if (n < lo_ || n > hi())
            return Matrix(ring_, dim(n + 1), dim(n));
        return diffs_[n - lo_];
    }

    const Matrix& d_ref(int n) const
    {
        if (n < lo_ || n > hi())
            throw ShapeMismatch("d^" + std::to_string(n) + " outside support");
        return diffs_[n - lo_];
    }

    void set_d(int n, Matrix m)
    {
        if (n < lo_ || n > hi()) {
            if (m.is_zero())
                return;
            throw ShapeMismatch("d^" + std::to_string(n) + " outside support [" + std::to_string(lo_) + "," +
                                std::to_string(hi()) + "]");
        }
        if (m.rows() != dim(n + 1) || m.cols() != dim(n))
            throw ShapeMismatch("d^" + std::to_string(n) + " has shape " + m.shape() + ", expected " +
                                std::to_string(dim(n + 1)) + "x" + std::to_string(dim(n)));
        diffs_[n - lo_] = std::move(m);
    }

    /// Truncation level of a completed complex over the Novikov ring.
    std::optional<Rational> completed_at;

    friend bool operator==(const Complex& a, const Complex& b)
    {
        if (!(a.ring_ == b.ring_))
            return false;
        int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
        for (int n = lo; n <= hi; ++n) {
            if (a.dim(n) != b.dim(n))
                return false;
            if (!(a.d(n) == b.d(n)))
                return false;
        }
        return true;
    }

private:
    ring_type ring_{};
    int lo_ = 0;
    std::vector<int> dims_;
    std::vector<Matrix> diffs_;
};

/// Raises NotAComplex at the first degree n with d^{n+1} d^n != 0.
template <class S>
void validate(const Complex<S>& c)
{
    for (int n = c.lo(); n < c.hi(); ++n)
        if (!(c.d(n + 1) * c.d(n)).is_zero())
            throw NotAComplex(n);
}

template <class S>
bool is_complex(const Complex<S>& c)
{
    try {
        validate(c);
        return true;
    } catch (const NotAComplex&) {
        return false;
    }
}

/// Degree-`shift` map f^n : C^n -> D^{n+shift}, stored for n in the source support.
template <class S>
class ChainMap
{
public:
    using Matrix = SparseMatrix<S>;

    ChainMap() = default;
    ChainMap(Complex<S> source, Complex<S> target, int shift = 0)
        : source_(std::move(source)), target_(std::move(target)), shift_(shift)
    {
        if (!(source_.ring() == target_.ring()))
            throw RingMismatch("chain map between complexes over different rings");
        for (int n = source_.lo(); n <= source_.hi(); ++n)
            mats_.emplace_back(source_.ring(), target_.dim(n + shift_), source_.dim(n));
    }

    const Complex<S>& source() const noexcept { return source_; }
    const Complex<S>& target() const noexcept { return target_; }
    int shift() const noexcept { return shift_; }

    Matrix at(int n) const
    {
        if (n < source_.lo() || n > source_.hi())
            return Matrix(source_.ring(), target_.dim(n + shift_), source_.dim(n));
        return mats_[n - source_.lo()];
    }

    void set(int n, Matrix m)
    {
        if (m.rows() != target_.dim(n + shift_) || m.cols() != source_.dim(n))
            throw ShapeMismatch("f^" + std::to_string(n) + " has shape " + m.shape() + ", expected " +
                                std::to_string(target_.dim(n + shift_)) + "x" + std::to_string(source_.dim(n)));
        if (n < source_.lo() || n > source_.hi()) {
            if (m.is_zero())
                return;
            throw ShapeMismatch("f^" + std::to_string(n) + " outside source support");
        }
        mats_[n - source_.lo()] = std::move(m);
    }

private:
    Complex<S> source_;
    Complex<S> target_;
    int shift_ = 0;
    std::vector<Matrix> mats_;
};

/// Checks f d_C = (-1)^shift d_D f in every degree; returns the first failing degree.
template <class S>
std::optional<int> chain_map_defect(const ChainMap<S>& f)
{
    const auto& C = f.source();
    const auto& D = f.target();
    const S sign = (f.shift() % 2 == 0) ? scalar_traits<S>::one(C.ring()) : -scalar_traits<S>::one(C.ring());
    for (int n = C.lo() - 1; n <= C.hi(); ++n) {
        auto lhs = f.at(n + 1) * C.d(n);
        auto rhs = (D.d(n + f.shift()) * f.at(n)).scaled(sign);
        if (!(lhs == rhs))
            return n;
    }
    return std::nullopt;
}

template <class S>
bool is_chain_map(const ChainMap<S>& f)
{
    return !chain_map_defect(f).has_value();
}

/// g o f
template <class S>
ChainMap<S> compose(const ChainMap<S>& g, const ChainMap<S>& f)
{
    const auto& C = f.source();
    ChainMap<S> h(C, g.target(), f.shift() + g.shift());
    for (int n = C.lo(); n <= C.hi(); ++n)
        h.set(n, g.at(n + f.shift()) * f.at(n));
    return h;
}

template <class S>
ChainMap<S> identity_map(const Complex<S>& c)
{
    ChainMap<S> f(c, c);
    for (int n = c.lo(); n <= c.hi(); ++n)
        f.set(n, SparseMatrix<S>::identity(c.ring(), c.dim(n)));
    return f;
}

template <class S>
ChainMap<S> zero_map(const Complex<S>& c, const Complex<S>& d)
{
    return ChainMap<S>(c, d);
}

/// f - g, both of the same shape.
template <class S>
ChainMap<S> difference(const ChainMap<S>& f, const ChainMap<S>& g)
{
    ChainMap<S> h(f.source(), f.target(), f.shift());
    for (int n = f.source().lo(); n <= f.source().hi(); ++n)
        h.set(n, f.at(n) - g.at(n));
    return h;
}

template <class S>
bool maps_equal(const ChainMap<S>& f, const ChainMap<S>& g)
{
    if (f.shift() != g.shift())
        return false;
    int lo = std::min(f.source().lo(), g.source().lo());
    int hi = std::max(f.source().hi(), g.source().hi());
    for (int n = lo; n <= hi; ++n)
        if (!(f.at(n) == g.at(n)))
            return false;
    return true;
}

} // namespace descentlab

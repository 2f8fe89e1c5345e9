#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gmpxx.h>

#include "descentlab/involutive/polynomial.hpp"

namespace descentlab {

using Real = boost::multiprecision::cpp_bin_float_100;

namespace detail {

/// Sign of a + b sqrt(r), r >= 0.
inline int sign_surd(const Rational& a, const Rational& b, const Rational& r)
{
    const int sb = (r.is_zero() ? 0 : b.sign());
    const int sa = a.sign();
    if (sb == 0)
        return sa;
    if (sa == 0 || sa == sb)
        return sb;
    const int cmp = (a * a <=> b * b * r) == std::strong_ordering::greater ? 1
                    : (a * a == b * b * r)                                  ? 0
                                                                            : -1;
    return cmp > 0 ? sa : (cmp < 0 ? sb : 0);
}

/// Sign of A + B sqrt(r1) + C sqrt(r2).
inline int sign_surd2(const Rational& A, const Rational& B, const Rational& r1, const Rational& C, const Rational& r2)
{
    if (C.is_zero() || r2.is_zero())
        return sign_surd(A, B, r1);
    if (r1 == r2)
        return sign_surd(A, B + C, r1);
    const int su = sign_surd(A, B, r1);
    const int sv = C.sign();
    if (su == 0)
        return sv;
    if (su == sv)
        return su;
    // compare (A + B sqrt r1)^2 with C^2 r2
    const int s = sign_surd(A * A + B * B * r1 - C * C * r2, Rational(2) * A * B, r1);
    return s > 0 ? su : (s < 0 ? sv : 0);
}

inline bool rational_sqrt(const Rational& r, Rational& out)
{
    mpz_class num = r.raw().get_num(), den = r.raw().get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0)
        return false;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    out = Rational(mpq_class(sn, sd));
    return true;
}

} // namespace detail

/// Exact real number (a + b sqrt(r)) / sqrt(2) with r >= 0 and sqrt(r) irrational unless b = 0.
class Surd
{
public:
    Surd() = default;
    Surd(Rational a, Rational b, Rational r) : a_(std::move(a)), b_(std::move(b)), r_(std::move(r))
    {
        if (r_.sign() < 0)
            throw InputError("negative radicand");
        Rational root;
        if (b_.is_zero() || r_.is_zero()) {
            b_ = Rational(0);
            r_ = Rational(0);
        } else if (detail::rational_sqrt(r_, root)) {
            a_ += b_ * root;
            b_ = Rational(0);
            r_ = Rational(0);
        }
    }

    const Rational& a() const noexcept { return a_; }
    const Rational& b() const noexcept { return b_; }
    const Rational& r() const noexcept { return r_; }

    int sign() const { return detail::sign_surd(a_, b_, r_); }

    /// this + s sqrt(2).
    Surd plus_sqrt2(const Rational& s) const { return Surd(a_ + Rational(2) * s, b_, r_); }

    /// Sign of this - o.
    int compare(const Surd& o) const { return detail::sign_surd2(a_ - o.a_, b_, r_, -o.b_, o.r_); }

    friend bool operator==(const Surd& x, const Surd& y) { return x.compare(y) == 0; }
    friend bool operator<(const Surd& x, const Surd& y) { return x.compare(y) < 0; }

    Real value() const
    {
        Real a = Real(a_.numerator_str()) / Real(a_.denominator_str());
        Real b = Real(b_.numerator_str()) / Real(b_.denominator_str());
        Real r = Real(r_.numerator_str()) / Real(r_.denominator_str());
        return (a + b * boost::multiprecision::sqrt(r)) / boost::multiprecision::sqrt(Real(2));
    }
    double to_double() const { return static_cast<double>(value()); }

    std::string to_string() const
    {
        if (b_.is_zero())
            return "(" + a_.to_string() + ")/sqrt(2)";
        return "(" + a_.to_string() + (b_.sign() < 0 ? " - " : " + ") + (b_.sign() < 0 ? -b_ : b_).to_string() +
               "*sqrt(" + r_.to_string() + "))/sqrt(2)";
    }

private:
    Rational a_, b_, r_;
};

/// Hyperbola branch xy = delta in the negative quadrant (intersection) or the positive one (union).
struct SmoothingCurve
{
    enum class Mode { intersection, unite };

    Rational delta;
    Mode mode = Mode::intersection;

    SmoothingCurve(Rational d, Mode m) : delta(std::move(d)), mode(m)
    {
        if (delta.sign() <= 0)
            throw InputError("delta must be positive");
    }
};

inline std::string mode_name(SmoothingCurve::Mode m)
{
    return m == SmoothingCurve::Mode::intersection ? "intersection" : "union";
}

/// Signed length along the slope-1 line from the curve to (x, y):
/// ((x + y) +- sqrt((x - y)^2 + 4 delta)) / sqrt(2), + for intersection, - for union.
inline Surd smoothing_h(const SmoothingCurve& c, const Rational& x, const Rational& y)
{
    const Rational disc = (x - y) * (x - y) + Rational(4) * c.delta;
    return Surd(x + y, Rational(c.mode == SmoothingCurve::Mode::intersection ? 1 : -1), disc);
}

/// Expected sign of h: -1 on the region, 0 on the curve, +1 elsewhere.
inline int smoothing_region_sign(const SmoothingCurve& c, const Rational& x, const Rational& y)
{
    const int s = (x * y <=> c.delta) == std::strong_ordering::greater ? 1 : (x * y == c.delta ? 0 : -1);
    if (c.mode == SmoothingCurve::Mode::intersection) {
        if (x.sign() < 0 && y.sign() < 0)
            return -s;
        return 1;
    }
    if (x.sign() > 0 && y.sign() > 0)
        return s;
    return -1;
}

inline Real smoothing_h_real(const SmoothingCurve& c, const Real& x, const Real& y)
{
    const Real delta = Real(c.delta.numerator_str()) / Real(c.delta.denominator_str());
    const Real root = boost::multiprecision::sqrt((x - y) * (x - y) + 4 * delta);
    const Real s = c.mode == SmoothingCurve::Mode::intersection ? (x + y) + root : (x + y) - root;
    return s / boost::multiprecision::sqrt(Real(2));
}

/// g(x) = h_delta(f1(x), f2(x)).
struct CoverFunction
{
    PolyFunction f1, f2;
    SmoothingCurve curve;

    Surd operator()(const std::vector<Rational>& x) const
    {
        return smoothing_h(curve, f1.evaluate(x), f2.evaluate(x));
    }
};

inline void check_delta_sequence(const std::vector<Rational>& deltas)
{
    if (deltas.empty())
        throw BadSequence("empty delta sequence");
    for (size_t i = 0; i < deltas.size(); ++i) {
        if (deltas[i].sign() <= 0)
            throw BadSequence("delta_" + std::to_string(i + 1) + " = " + deltas[i].to_string() + " is not positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw BadSequence("delta_" + std::to_string(i + 1) + " = " + deltas[i].to_string() +
                              " does not decrease from " + deltas[i - 1].to_string());
    }
}

inline std::vector<CoverFunction> build_cover_functions(const std::vector<PolyFunction>& f1,
                                                        const std::vector<PolyFunction>& f2,
                                                        SmoothingCurve::Mode mode, const std::vector<Rational>& deltas)
{
    if (f1.size() != f2.size() || f1.size() != deltas.size())
        throw BadSequence("function and delta sequences differ in length");
    check_delta_sequence(deltas);
    std::vector<CoverFunction> out;
    for (size_t i = 0; i < f1.size(); ++i)
        out.push_back({f1[i], f2[i], SmoothingCurve(deltas[i], mode)});
    return out;
}

/// Union/intersection expression over indexed leaf sequences.
struct CoverExpression
{
    enum class Kind { leaf, unite, intersection };
    Kind kind = Kind::leaf;
    int leaf = 0;
    std::vector<CoverExpression> children;

    static CoverExpression of(int i) { return {Kind::leaf, i, {}}; }
    static CoverExpression all_of(std::vector<CoverExpression> c) { return {Kind::intersection, 0, std::move(c)}; }
    static CoverExpression any_of(std::vector<CoverExpression> c) { return {Kind::unite, 0, std::move(c)}; }

    std::string to_string() const
    {
        if (kind == Kind::leaf)
            return "K" + std::to_string(leaf + 1);
        std::string out = kind == Kind::unite ? "union(" : "intersection(";
        for (size_t i = 0; i < children.size(); ++i)
            out += (i ? ", " : "") + children[i].to_string();
        return out + ")";
    }
};

/// Pairwise fold of the smoothing along an expression tree; the i-th function combines the
/// i-th members of the leaf sequences with delta_i. Inner values are irrational, so the fold is
/// evaluated in 100-digit binary floating point.
class FoldedCoverFunctions
{
public:
    FoldedCoverFunctions(CoverExpression expr, std::vector<std::vector<PolyFunction>> leaves,
                         std::vector<Rational> deltas)
        : expr_(std::move(expr)), leaves_(std::move(leaves)), deltas_(std::move(deltas))
    {
        check_delta_sequence(deltas_);
        for (const auto& seq : leaves_)
            if (seq.size() != deltas_.size())
                throw BadSequence("leaf sequence length differs from the delta sequence");
        validate(expr_);
    }

    int size() const { return static_cast<int>(deltas_.size()); }

    Real evaluate(int i, const std::vector<Rational>& x) const { return eval(expr_, i, x); }

private:
    void validate(const CoverExpression& e) const
    {
        if (e.kind == CoverExpression::Kind::leaf) {
            if (e.leaf < 0 || e.leaf >= static_cast<int>(leaves_.size()))
                throw InputError("expression refers to a missing leaf");
            return;
        }
        if (e.children.empty())
            throw InputError("empty union or intersection");
        for (const auto& c : e.children)
            validate(c);
    }

    Real eval(const CoverExpression& e, int i, const std::vector<Rational>& x) const
    {
        if (e.kind == CoverExpression::Kind::leaf) {
            const Rational v = leaves_[e.leaf][i].evaluate(x);
            return Real(v.numerator_str()) / Real(v.denominator_str());
        }
        const SmoothingCurve c(deltas_[i], e.kind == CoverExpression::Kind::unite ? SmoothingCurve::Mode::unite
                                                                                  : SmoothingCurve::Mode::intersection);
        Real acc = eval(e.children[0], i, x);
        for (size_t k = 1; k < e.children.size(); ++k)
            acc = smoothing_h_real(c, acc, eval(e.children[k], i, x));
        return acc;
    }

    CoverExpression expr_;
    std::vector<std::vector<PolyFunction>> leaves_;
    std::vector<Rational> deltas_;
};

} // namespace descentlab

#pragma once

#include <string>

#include "descentlab/scalars/novikov.hpp"
#include "descentlab/scalars/rational.hpp"

namespace descentlab {

/// Coefficient descriptor for Q.
struct RationalField
{
    friend bool operator==(const RationalField&, const RationalField&) = default;
    std::string to_string() const { return "Q"; }
};

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational>
{
    using ring_type = RationalField;
    static constexpr bool is_field = true;

    static Rational zero(const ring_type&) { return Rational(0); }
    static Rational one(const ring_type&) { return Rational(1); }
    static Rational from_rational(const ring_type&, const Rational& r) { return r; }
    static std::string to_string(const Rational& r) { return r.to_string(); }
    static Rational parse(const ring_type&, const std::string& s) { return Rational::parse(s); }
};

template <>
struct scalar_traits<NovikovElem>
{
    using ring_type = NovikovRing;
    static constexpr bool is_field = false;

    static NovikovElem zero(const ring_type& r) { return NovikovElem(r); }
    static NovikovElem one(const ring_type& r) { return NovikovElem(r, Rational(1)); }
    static NovikovElem from_rational(const ring_type& r, const Rational& c) { return NovikovElem(r, c); }
    static std::string to_string(const NovikovElem& x) { return x.to_string(); }
    static NovikovElem parse(const ring_type& r, const std::string& s) { return NovikovElem::parse(r, s); }
};

template <class S>
using ring_of = typename scalar_traits<S>::ring_type;

} // namespace descentlab

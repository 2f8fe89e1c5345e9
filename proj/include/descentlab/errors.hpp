#pragma once

#include <stdexcept>
#include <string>

namespace descentlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define DESCENTLAB_DEFINE_ERROR(Name)                                   \
    class Name : public Error                                           \
    {                                                                   \
    public:                                                             \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    };

DESCENTLAB_DEFINE_ERROR(DivisionByZero)
DESCENTLAB_DEFINE_ERROR(RingMismatch)
DESCENTLAB_DEFINE_ERROR(NotInvertible)
DESCENTLAB_DEFINE_ERROR(ShapeMismatch)
DESCENTLAB_DEFINE_ERROR(UnsupportedRing)
DESCENTLAB_DEFINE_ERROR(CutoffTooSmall)
DESCENTLAB_DEFINE_ERROR(HypothesisFailure)
DESCENTLAB_DEFINE_ERROR(LemmaViolation)
DESCENTLAB_DEFINE_ERROR(BadSequence)
DESCENTLAB_DEFINE_ERROR(InputError)
DESCENTLAB_DEFINE_ERROR(UnknownFixture)
DESCENTLAB_DEFINE_ERROR(ParseError)

#undef DESCENTLAB_DEFINE_ERROR

/// d^{n+1} d^n != 0; carries the first failing degree n.
class NotAComplex : public Error
{
public:
    explicit NotAComplex(int degree)
        : Error("NotAComplex: d^" + std::to_string(degree + 1) + " o d^" + std::to_string(degree) + " != 0"),
          degree_(degree)
    {
    }
    int degree() const noexcept { return degree_; }

private:
    int degree_;
};

/// A restriction square of a presheaf fails to commute.
class FunctorialityFailure : public Error
{
public:
    explicit FunctorialityFailure(const std::string& witness)
        : Error("FunctorialityFailure: " + witness), witness_(witness)
    {
    }
    const std::string& witness() const noexcept { return witness_; }

private:
    std::string witness_;
};

/// A BV axiom failed on a concrete basis triple.
class AxiomFailure : public Error
{
public:
    AxiomFailure(const std::string& axiom, const std::string& witness)
        : Error("AxiomFailure(" + axiom + "): " + witness), axiom_(axiom), witness_(witness)
    {
    }
    const std::string& axiom() const noexcept { return axiom_; }
    const std::string& witness() const noexcept { return witness_; }

private:
    std::string axiom_;
    std::string witness_;
};

} // namespace descentlab

#ifndef STARCYCLE_ERRORS_HPP
#define STARCYCLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace starcycle {

// Base for every error the library throws on purpose.  The name() tag is
// what ends up in the machine-readable error JSON emitted by the CLI.
class Error : public std::runtime_error {
public:
  Error(std::string tag, const std::string& msg)
      : std::runtime_error(msg), tag_(std::move(tag)) {}
  const std::string& tag() const { return tag_; }

private:
  std::string tag_;
};

#define STARCYCLE_DEFINE_ERROR(Name)                          \
  class Name : public Error {                                 \
  public:                                                     \
    explicit Name(const std::string& msg) : Error(#Name, msg) {} \
  }

STARCYCLE_DEFINE_ERROR(DivisorZero);
STARCYCLE_DEFINE_ERROR(ZeroPolynomial);
STARCYCLE_DEFINE_ERROR(DegreeZero);
STARCYCLE_DEFINE_ERROR(SyntaxError);
STARCYCLE_DEFINE_ERROR(UnknownSymbol);
STARCYCLE_DEFINE_ERROR(NonPolynomial);
STARCYCLE_DEFINE_ERROR(MissingField);
STARCYCLE_DEFINE_ERROR(UnsupportedFormat);
STARCYCLE_DEFINE_ERROR(OriginNotFixed);
STARCYCLE_DEFINE_ERROR(ZeroSurface);
STARCYCLE_DEFINE_ERROR(ZeroInput);
STARCYCLE_DEFINE_ERROR(BlowUp);
STARCYCLE_DEFINE_ERROR(Stalled);
STARCYCLE_DEFINE_ERROR(NotReversibleForm);
STARCYCLE_DEFINE_ERROR(ReversibilityCheckFailed);
STARCYCLE_DEFINE_ERROR(PerturbationNotVanishingAtOrigin);
STARCYCLE_DEFINE_ERROR(NonStarlike);
STARCYCLE_DEFINE_ERROR(SingularInterior);
STARCYCLE_DEFINE_ERROR(NonIntegrableEndpoint);
STARCYCLE_DEFINE_ERROR(StepUnderflow);
STARCYCLE_DEFINE_ERROR(NoSignChange);
STARCYCLE_DEFINE_ERROR(InsufficientSamples);
STARCYCLE_DEFINE_ERROR(OpenLevelSet);
STARCYCLE_DEFINE_ERROR(DegenerateDenominator);
STARCYCLE_DEFINE_ERROR(DegenerateElimination);

#undef STARCYCLE_DEFINE_ERROR

}  // namespace starcycle

#endif

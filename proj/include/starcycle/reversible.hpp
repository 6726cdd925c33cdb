#ifndef STARCYCLE_REVERSIBLE_HPP
#define STARCYCLE_REVERSIBLE_HPP

#include <optional>
#include <string>

#include "starcycle/multipoly.hpp"
#include "starcycle/system.hpp"

namespace starcycle {

struct AlgebraicCurveResult {
  MultiPoly h_fu;     // primitive part, variables f and u
  MultiPoly stripped;  // content divided out of the raw combination
  bool continuum = false;  // raw combination vanished identically

  std::optional<MultiPoly> curve_xy;  // Cartesian algebraic curve
  std::optional<MultiPoly> cofactor;  // when curve_xy is invariant for sys
  std::string sign_note;  // set when the cofactor is const * even monomial
};

// The curve candidate n0 d0 - (1-u^2) n1 d1 at g = 0, content-stripped.
AlgebraicCurveResult reversible_H(const PlanarSystem& sys);

// f -> r, u -> y/r, clear r, split even/odd powers of r as F = r G + H~,
// eliminate r via r^2 G^2 - H~^2 and r^2 = x^2 + y^2.
MultiPoly curve_to_cartesian(const MultiPoly& h_fu);

AlgebraicCurveResult reversible_pipeline(const PlanarSystem& sys);

}  // namespace starcycle

#endif

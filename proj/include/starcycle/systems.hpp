#ifndef STARCYCLE_SYSTEMS_HPP
#define STARCYCLE_SYSTEMS_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "starcycle/decompose.hpp"
#include "starcycle/multipoly.hpp"
#include "starcycle/system.hpp"

namespace starcycle {

// Implicit pair for (f(u), g(u)) with fp, gp standing for the derivatives:
//   eq0 = (1-u^2) d1 fp + (1-u^2) d0 gp - u d0 g - n0
//   eq1 =         d0 fp + (1-u^2) d1 gp - u d1 g - n1
// plus the solved rational forms.
struct FGSystem {
  MultiPoly eq0, eq1;
  RationalFunction fprime, gprime;
};

FGSystem build_fg(const PlanarSystem& sys);

// Autonomous polynomial system in (f, g, u) after clearing denominators and
// dividing out common factors.
struct Sys3D {
  MultiPoly df, dg, du;
  std::vector<MultiPoly> cancelled_factors;
};

Sys3D build_3d(const PlanarSystem& sys);

// Cofactor K with Z(H) = K H for the derivation Z given by the field, or
// nullopt when H is not invariant.  The generic form takes (variable,
// component) pairs.
std::optional<MultiPoly> invariant_cofactor(
    const std::vector<std::pair<std::string, MultiPoly>>& field,
    const MultiPoly& H);
std::optional<MultiPoly> invariant_cofactor(const Sys3D& sys,
                                            const MultiPoly& H);
std::optional<MultiPoly> invariant_cofactor(const PlanarSystem& sys,
                                            const MultiPoly& H);

struct Trajectory {
  std::vector<std::array<double, 4>> samples;  // (s, f, g, u)
  bool reached_plus = false;   // ended with u near 1
  bool reached_minus = false;  // ended with u near -1
};

// Integrate forward in s from (f0, g0) at u = -1+delta until u >= 1-delta.
Trajectory integrate_heteroclinic(const Sys3D& sys, double f0, double g0,
                                  double delta = 1e-3, double tol = 1e-10);

}  // namespace starcycle

#endif

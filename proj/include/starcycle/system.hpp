#ifndef STARCYCLE_SYSTEM_HPP
#define STARCYCLE_SYSTEM_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "starcycle/multipoly.hpp"

namespace starcycle {

// A planar polynomial system dx/dt = X, dy/dt = Y with an optional
// perturbation pair (C, D) and declared parameters.
struct PlanarSystem {
  MultiPoly X, Y;
  std::optional<MultiPoly> C, D;
  std::vector<std::pair<std::string, std::optional<Rational>>> params;

  // Present when X is even in x and Y = x * (even in x); then
  // X = A(x^2, y), Y = x B(x^2, y) with A, B polynomials in the variable
  // pair (s, y), s standing for x^2.
  bool reversible = false;
  MultiPoly A_sy, B_sy;

  bool has_perturbation() const { return C.has_value() && D.has_value(); }

  // Parameter values that were bound in the system file.
  std::map<std::string, Rational> bound_params() const;

  // Substitute numeric parameter values into every stored polynomial.
  PlanarSystem bind(const std::map<std::string, Rational>& values) const;
};

// One side of the common-trajectory problem: df/dt = P, du/dt = Q in (f, u).
struct FUSystem {
  MultiPoly P, Q;
  std::vector<std::pair<std::string, std::optional<Rational>>> params;
};

// --- expression and file parsing ---

MultiPoly parse_poly(const std::string& text,
                     const std::set<std::string>& allowed_vars);

PlanarSystem parse_system_text(const std::string& text);
PlanarSystem parse_system_file(const std::string& path);

FUSystem parse_fu_system_text(const std::string& text);
FUSystem parse_fu_system_file(const std::string& path);

// Parse a rational literal like "3", "-2/5".
Rational parse_rational(const std::string& text);

}  // namespace starcycle

#endif

#ifndef STARCYCLE_COMMON_HPP
#define STARCYCLE_COMMON_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "starcycle/multipoly.hpp"
#include "starcycle/system.hpp"

namespace starcycle {

// Shared-trajectory detection for a pair of planar polynomial systems written
// as df/dt = P_i(f,u), du/dt = Q_i(f,u).
struct CommonProblem {
  MultiPoly p1, q1, p2, q2;
  MultiPoly h;                 // p1 q2 - p2 q1
  std::array<MultiPoly, 2> j;  // dh/df * p_i + dh/du * q_i
  bool stripped_before_derive = false;
};

// When strip_before_derive is set, h is replaced by its primitive part before
// the derivative step (content like u^2 f divided out first).
CommonProblem build_problem(const FUSystem& a, const FUSystem& b,
                            bool strip_before_derive = false);

struct ConditionPair {
  MultiPoly g_f;  // resultant eliminating u, a condition on f and parameters
  MultiPoly g_u;  // resultant eliminating f
  bool degenerate_u = false;  // h or j was constant in u
  bool degenerate_f = false;
};

ConditionPair condition_polys(const CommonProblem& cp, int i);  // i in {1,2}

// Nonzero coefficients of g viewed as univariate in `main`: the algebraic
// condition system on the parameters.
std::vector<MultiPoly> parameter_conditions(const MultiPoly& g,
                                            const std::string& main);

struct ParamReport {
  bool degenerate = false;  // h vanished identically after substitution
  // Vanishing flags ordered (i=1,u), (i=1,f), (i=2,u), (i=2,f).
  std::array<bool, 4> vanish = {false, false, false, false};
  bool necessary_condition_met = false;
};

ParamReport verify_params(const CommonProblem& cp,
                          const std::map<std::string, Rational>& assignment);

struct CurveReport {
  bool invariant_a = false, invariant_b = false;
  bool common = false;
  std::optional<MultiPoly> cofactor_a, cofactor_b;
};

CurveReport verify_common_curve(const FUSystem& a, const FUSystem& b,
                                const MultiPoly& curve,
                                const std::map<std::string, Rational>& assignment);

// Successive elimination for condition systems in at most two parameters;
// returns rational candidate assignments (may be empty).
std::vector<std::map<std::string, Rational>> solve_conditions(
    const std::vector<MultiPoly>& conditions,
    const std::vector<std::string>& params);

}  // namespace starcycle

#endif

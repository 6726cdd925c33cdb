#ifndef STARCYCLE_DECOMPOSE_HPP
#define STARCYCLE_DECOMPOSE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "starcycle/multipoly.hpp"
#include "starcycle/system.hpp"

namespace starcycle {

// H(x,y) rewritten through x = (f+vg)v, y = (f+vg)u and v^2 = 1-u^2 as
// h0 + v*h1.  When H depends on x only through x^2 the refinement
// h0 = k00 + (1-u^2) g^2 k01,  h1 = g k10,  k00 = K((1-u^2)f^2, uf)
// is attached.
struct VParts {
  MultiPoly h0, h1;
  struct EvenRefinement {
    MultiPoly k00, k01, k10;
  };
  std::optional<EvenRefinement> even_refinement;
};

VParts decompose_xy(const MultiPoly& H);

// v-split of the polynomial polar pair: N = (f+vg)(vX+uY), D = vY-uX, both
// under the circle substitution.  dr/dtheta = N/D along solutions.
struct PolarData {
  MultiPoly n0, n1;  // split of N
  MultiPoly d0, d1;  // split of D
};

PolarData polar_parts(const PlanarSystem& sys);  // unperturbed (X, Y)
PolarData polar_parts_of(const MultiPoly& X, const MultiPoly& Y);

// Numeric f/g decomposition of a sampled 2*pi-periodic function.
struct PeriodicFit {
  std::vector<double> nodes;   // Chebyshev points cos(k*pi/(n-1)), k=0..n-1
  std::vector<double> f_vals;
  std::vector<double> g_vals;
  double residual = 0.0;  // max |F - (f + g*cos)| over the input samples
};

// Samples must form a uniform grid covering [0, 2*pi) with at least
// 2*n_nodes points.
PeriodicFit periodic_fit(const std::vector<std::pair<double, double>>& samples,
                         int n_nodes);

}  // namespace starcycle

#endif

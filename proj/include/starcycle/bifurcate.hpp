#ifndef STARCYCLE_BIFURCATE_HPP
#define STARCYCLE_BIFURCATE_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "starcycle/multipoly.hpp"
#include "starcycle/numerics.hpp"
#include "starcycle/system.hpp"

namespace starcycle {

// Polynomial parts of a reversible system with perturbation, written on the
// circle variables.  a00 = A((1-u^2) f^2, u f) and so on; the pairs (c0, c1)
// and (d0, d1) are the v-splits of the perturbation.
struct ReversibleParts {
  MultiPoly a00, a10;
  MultiPoly b00, b10;
  MultiPoly c0, c1, d0, d1;
};

ReversibleParts reversible_parts(const PlanarSystem& sys);

// f_rho: solution of the reduced radial ODE with f(0) = rho, held as dense
// integrator output on (-1+delta_end, 1-delta_end) and extended to the closed
// interval with the ODE slope at the boundary.
class FRho {
public:
  double operator()(double u) const;
  double rho() const { return rho_; }
  double delta_end() const { return delta_end_; }
  double u_max() const { return 1.0 - delta_end_; }

private:
  friend FRho f_rho_solve(const ReversibleParts&, double, double, double);
  DenseSolution plus_, minus_;
  double rho_ = 0.0, delta_end_ = 1e-6;
  double slope_plus_ = 0.0, slope_minus_ = 0.0;
};

FRho f_rho_solve(const ReversibleParts& parts, double rho,
                 double ode_tol = 1e-10, double delta_end = 1e-6);

// Pointwise evaluators for S_rho, L_rho, M_rho on (-1, 1).
struct SLM {
  std::function<double(double)> S, L, M;
  // Same quantities with 1-u^2 supplied by the caller.  Near u = +/-1 the
  // difference 1-u^2 computed from a rounded u loses most of its digits, so
  // integration routines that substitute u = sin(phi) pass cos(phi)^2 here.
  std::function<double(double, double)> L_uw, M_uw;
};

SLM S_L_M(const ReversibleParts& parts, const FRho& f_rho);

// The bifurcation integral over (-1, 1) with the sin-substitution applied at
// the endpoints.
double N_eval(const ReversibleParts& parts, double rho,
              double quad_tol = 1e-10, double ode_tol = 1e-10,
              double delta_end = 1e-6);

struct ScanResult {
  std::vector<double> rhos;
  std::vector<double> values;        // NaN at skipped entries
  std::vector<std::size_t> skipped;  // grid indices that were not star-like
  bool identically_zero = false;
  struct Zero {
    double lo, hi, root;
  };
  std::vector<Zero> zeros;
};

ScanResult N_scan(const ReversibleParts& parts, double rho_min, double rho_max,
                  int grid_n, double quad_tol = 1e-10, double ode_tol = 1e-10,
                  int jobs = 1, double delta_end = 1e-6);

// Ratio of the line integrals of x*y dy and x dy along the closed level oval
// H = h_level around the origin.
double abelian_ratio(const MultiPoly& H, double h_level, double tol = 1e-10);

}  // namespace starcycle

#endif

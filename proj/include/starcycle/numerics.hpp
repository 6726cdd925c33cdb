#ifndef STARCYCLE_NUMERICS_HPP
#define STARCYCLE_NUMERICS_HPP

#include <functional>
#include <optional>
#include <vector>

namespace starcycle {

using OdeRhs =
    std::function<void(double t, const std::vector<double>& y, std::vector<double>& dy)>;
// Guards are sign functions of the state; a sign change halts integration
// with the crossing localized in t.
using OdeGuard = std::function<double(double t, const std::vector<double>& y)>;

struct OdeProblem {
  std::size_t dimension = 0;
  OdeRhs rhs;
  std::vector<double> y0;
  double t0 = 0.0;
  double t1 = 1.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  std::vector<OdeGuard> guards;
  std::size_t max_steps = 100000;
  double norm_bound = 0.0;  // 0 disables the blow-up check
};

struct GuardHit {
  std::size_t index;
  double t;
};

// Dense solution of an embedded Dormand-Prince 4(5) integration.  Piecewise
// quartic interpolant, one record per accepted step.
class DenseSolution {
public:
  std::vector<double> eval(double t) const;
  double eval1(double t) const { return eval(t)[0]; }

  double t_begin() const { return t0_; }
  double t_end() const { return t_end_; }
  const std::vector<double>& y_end() const { return y_end_; }

  std::optional<GuardHit> guard_hit;     // set when a guard stopped us
  bool step_budget_exhausted = false;

private:
  friend DenseSolution ode_solve(const OdeProblem&);
  struct Segment {
    double t0, h;
    std::vector<double> r1, r2, r3, r4, r5;
  };
  std::vector<Segment> segments_;
  double t0_ = 0.0, t_end_ = 0.0;
  std::vector<double> y_end_;
  bool forward_ = true;
};

// Throws StepUnderflow / BlowUp; guard crossings and exhausted step budgets
// are reported on the returned solution, not thrown.
DenseSolution ode_solve(const OdeProblem& problem);

enum class EndpointMode { none, sqrt_sub };

// Adaptive Gauss-Kronrod quadrature; sqrt_sub substitutes u = sin(phi) first
// (after mapping [a,b] to [-1,1]) to absorb inverse-square-root endpoint
// singularities.  Throws NonIntegrableEndpoint when refinement stalls.
double quad(const std::function<double(double)>& f, double a, double b,
            double tol, EndpointMode mode = EndpointMode::none);

// Bracketed bisection; throws NoSignChange.
double bisect(const std::function<double(double)>& fn, double a, double b,
              double tol);

}  // namespace starcycle

#endif

#include "starcycle/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "starcycle/errors.hpp"

namespace starcycle {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output coefficients.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

double state_norm(const std::vector<double>& y) {
  double m = 0;
  for (double v : y) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> dense_eval(const std::vector<double>& r1,
                               const std::vector<double>& r2,
                               const std::vector<double>& r3,
                               const std::vector<double>& r4,
                               const std::vector<double>& r5, double theta) {
  const double th1 = 1.0 - theta;
  std::vector<double> y(r1.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = r1[i] +
           theta * (r2[i] + th1 * (r3[i] + theta * (r4[i] + th1 * r5[i])));
  return y;
}

}  // namespace

std::vector<double> DenseSolution::eval(double t) const {
  if (segments_.empty()) return y_end_;
  // Clamp to the covered interval, then binary-search the segment.
  const double lo = forward_ ? t0_ : t_end_;
  const double hi = forward_ ? t_end_ : t0_;
  t = std::clamp(t, lo, hi);
  std::size_t a = 0, b = segments_.size() - 1;
  while (a < b) {
    std::size_t mid = (a + b + 1) / 2;
    const auto& s = segments_[mid];
    bool before = forward_ ? (t < s.t0) : (t > s.t0);
    if (before)
      b = mid - 1;
    else
      a = mid;
  }
  const auto& s = segments_[a];
  double theta = (t - s.t0) / s.h;
  theta = std::clamp(theta, 0.0, 1.0);
  return dense_eval(s.r1, s.r2, s.r3, s.r4, s.r5, theta);
}

DenseSolution ode_solve(const OdeProblem& problem) {
  const std::size_t n = problem.dimension;
  const double dir = problem.t1 >= problem.t0 ? 1.0 : -1.0;
  const double span = std::abs(problem.t1 - problem.t0);

  DenseSolution sol;
  sol.t0_ = problem.t0;
  sol.forward_ = dir > 0;

  std::vector<double> y = problem.y0;
  double t = problem.t0;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> ytmp(n), ynew(n), yerr(n);

  problem.rhs(t, y, k1);
  // First step from the local scale of the solution, not from the span: the
  // span may be a large sentinel when a guard is expected to stop the run.
  double h_scale =
      1e-2 * (state_norm(y) + 1e-6) / (state_norm(k1) + 1e-12);
  double h = dir * std::min({span, h_scale, 1.0});
  std::vector<double> g_prev(problem.guards.size());
  for (std::size_t i = 0; i < problem.guards.size(); ++i)
    g_prev[i] = problem.guards[i](t, y);

  std::size_t accepted = 0;
  while (dir * (problem.t1 - t) > 0) {
    if (accepted >= problem.max_steps) {
      sol.step_budget_exhausted = true;
      break;
    }
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
      throw StepUnderflow("ode_solve: step size underflow at t=" +
                          std::to_string(t));
    if (dir * (t + h - problem.t1) > 0) h = problem.t1 - t;

    auto stage = [&](double frac, std::vector<double>& k,
                     std::initializer_list<std::pair<const std::vector<double>*, double>> terms) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = y[i];
        for (const auto& [kv, a] : terms) acc += h * a * (*kv)[i];
        ytmp[i] = acc;
      }
      problem.rhs(t + frac * h, ytmp, k);
    };
    stage(c2, k2, {{&k1, a21}});
    stage(c3, k3, {{&k1, a31}, {&k2, a32}});
    stage(c4, k4, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
    stage(c5, k5, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
    stage(1.0, k6, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                            b5 * k5[i] + b6 * k6[i]);
    problem.rhs(t + h, ynew, k7);

    double err = 0;
    for (std::size_t i = 0; i < n; ++i) {
      yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                     e6 * k6[i] + e7 * k7[i]);
      double sc = problem.atol +
                  problem.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (yerr[i] / sc) * (yerr[i] / sc);
    }
    err = std::sqrt(err / double(n));

    if (err <= 1.0) {
      // Accept; record the dense-output segment.
      DenseSolution::Segment seg;
      seg.t0 = t;
      seg.h = h;
      seg.r1 = y;
      seg.r2.resize(n);
      seg.r3.resize(n);
      seg.r4.resize(n);
      seg.r5.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        double dy = ynew[i] - y[i];
        seg.r2[i] = dy;
        seg.r3[i] = h * k1[i] - dy;
        seg.r4[i] = dy - h * k7[i] - seg.r3[i];
        seg.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                         d6 * k6[i] + d7 * k7[i]);
      }
      sol.segments_.push_back(seg);
      ++accepted;

      double t_new = t + h;
      // Guard crossings, localized on the dense output.
      bool stopped = false;
      for (std::size_t gi = 0; gi < problem.guards.size(); ++gi) {
        double g_now = problem.guards[gi](t_new, ynew);
        if (g_prev[gi] == 0.0) g_prev[gi] = g_now;  // ignore touching start
        if (g_prev[gi] * g_now < 0) {
          double lo = t, hi = t_new;
          while (std::abs(hi - lo) > 1e-12 * std::max(1.0, std::abs(hi))) {
            double mid = 0.5 * (lo + hi);
            auto ym = dense_eval(seg.r1, seg.r2, seg.r3, seg.r4, seg.r5,
                                 (mid - t) / h);
            if (g_prev[gi] * problem.guards[gi](mid, ym) < 0)
              hi = mid;
            else
              lo = mid;
          }
          double t_hit = 0.5 * (lo + hi);
          sol.guard_hit = GuardHit{gi, t_hit};
          auto y_hit = dense_eval(seg.r1, seg.r2, seg.r3, seg.r4, seg.r5,
                                  (t_hit - t) / h);
          t_new = t_hit;
          ynew = y_hit;
          stopped = true;
          break;
        }
        g_prev[gi] = g_now;
      }

      t = t_new;
      y = ynew;
      if (problem.norm_bound > 0 && state_norm(y) > problem.norm_bound)
        throw BlowUp("ode_solve: state norm exceeded bound at t=" +
                     std::to_string(t));
      if (stopped) break;
      problem.rhs(t, y, k1);
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h *= std::clamp(fac, 0.2, 5.0);
    } else {
      double fac =
          std::isfinite(err) ? 0.9 * std::pow(err, -0.2) : 0.1;
      h *= std::clamp(fac, 0.1, 1.0);
    }
  }

  sol.t_end_ = t;
  sol.y_end_ = y;
  return sol;
}

namespace {

// 15-point Kronrod / 7-point Gauss pair on [-1, 1].
constexpr double xgk[8] = {0.991455371120812639206854697526329,
                           0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926,
                           0.741531185599394439863864773280788,
                           0.586087235467691130294144838258730,
                           0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245,
                           0.0};
constexpr double wgk[8] = {0.022935322010529224963732008058970,
                           0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518,
                           0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550,
                           0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649,
                           0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082,
                          0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975,
                          0.417959183673469387755102040816327};

struct GkResult {
  double value;
  double error;
  double resabs;  // integral of |f|, the roundoff scale of the panel
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double m = 0.5 * (a + b), r = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(m - r * xgk[i]);
    fv[14 - i] = f(m + r * xgk[i]);
  }
  fv[7] = f(m);
  double k = wgk[7] * fv[7];
  double g = wg[3] * fv[7];
  double ab = wgk[7] * std::abs(fv[7]);
  for (int i = 0; i < 7; ++i) {
    k += wgk[i] * (fv[i] + fv[14 - i]);
    ab += wgk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
    if (i % 2 == 1) g += wg[i / 2] * (fv[i] + fv[14 - i]);
  }
  return {r * k, std::abs(r * (k - g)), r * ab};
}

// tol_density is error budget per unit length, so the budgets of the two
// halves sum to the parent's.  The relative floor stops subdivision once the
// estimate sits at roundoff.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double tol_density, int depth) {
  GkResult whole = gk15(f, a, b);
  if (whole.error <= tol_density * (b - a) ||
      whole.error <= 1e-12 * whole.resabs || !std::isfinite(whole.value)) {
    if (!std::isfinite(whole.value))
      throw NonIntegrableEndpoint("quad: non-finite integrand value");
    return whole.value;
  }
  if (depth > 55)
    throw NonIntegrableEndpoint(
        "quad: refinement did not converge (likely non-integrable endpoint)");
  double m = 0.5 * (a + b);
  return adaptive(f, a, m, tol_density, depth + 1) +
         adaptive(f, m, b, tol_density, depth + 1);
}

}  // namespace

double quad(const std::function<double(double)>& f, double a, double b,
            double tol, EndpointMode mode) {
  if (a == b) return 0.0;
  if (mode == EndpointMode::sqrt_sub) {
    const double m = 0.5 * (a + b), r = 0.5 * (b - a);
    auto g = [&](double phi) {
      return f(m + r * std::sin(phi)) * r * std::cos(phi);
    };
    const double half_pi = std::acos(-1.0) / 2;
    return adaptive(g, -half_pi, half_pi, tol / (2 * half_pi), 0);
  }
  return adaptive(f, a, b, tol / (b - a), 0);
}

double bisect(const std::function<double(double)>& fn, double a, double b,
              double tol) {
  double fa = fn(a), fb = fn(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if (fa * fb > 0)
    throw NoSignChange("bisect: no sign change on the bracket");
  while (std::abs(b - a) > tol) {
    double m = 0.5 * (a + b);
    double fm = fn(m);
    if (fm == 0) return m;
    if (fa * fm < 0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace starcycle

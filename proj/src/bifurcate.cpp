#include "starcycle/bifurcate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <thread>

#include "starcycle/decompose.hpp"
#include "starcycle/errors.hpp"

namespace starcycle {

ReversibleParts reversible_parts(const PlanarSystem& sys) {
  if (!sys.reversible)
    throw NotReversibleForm(
        "system is not in the form dx = A(x^2,y), dy = x B(x^2,y)");

  MultiPoly x = MultiPoly::var("x");
  MultiPoly A_xy = sys.A_sy.subst({{"s", x * x}});
  MultiPoly B_xy = sys.B_sy.subst({{"s", x * x}});

  ReversibleParts out;
  VParts pa = decompose_xy(A_xy);
  VParts pb = decompose_xy(B_xy);
  if (!pa.even_refinement || !pb.even_refinement)
    throw NotReversibleForm("even decomposition unavailable");
  out.a00 = pa.even_refinement->k00;
  out.a10 = pa.even_refinement->k10;
  out.b00 = pb.even_refinement->k00;
  out.b10 = pb.even_refinement->k10;

  if (sys.has_perturbation()) {
    MultiPoly zero;
    std::map<std::string, MultiPoly> origin = {{"x", zero}, {"y", zero}};
    if (!sys.C->subst(origin).is_zero() || !sys.D->subst(origin).is_zero())
      throw PerturbationNotVanishingAtOrigin(
          "perturbation does not vanish at the origin");
    VParts pc = decompose_xy(*sys.C);
    VParts pd = decompose_xy(*sys.D);
    out.c0 = pc.h0;
    out.c1 = pc.h1;
    out.d0 = pd.h0;
    out.d1 = pd.h1;
  }
  return out;
}

namespace {

const std::vector<std::string> kFUW = {"f", "u", "_w"};
const std::vector<std::string> kFGUW = {"f", "g", "u", "_w"};

// Rewrite u^e as u^(e mod 2) (1-w)^(e/2) with w a fresh symbol standing for
// 1-u^2.  Evaluating with w = (1-u)(1+u) avoids the catastrophic cancellation
// the expanded monomial form suffers near u = +/-1, where the quadratures
// cluster their nodes.
MultiPoly pull_w(const MultiPoly& p) {
  MultiPoly u = MultiPoly::var("u");
  MultiPoly one_minus_w = MultiPoly::integer(1) - MultiPoly::var("_w");
  std::vector<MultiPoly> cs = p.coeffs_wrt("u");
  MultiPoly out, even_pow = MultiPoly::integer(1);
  for (std::size_t e = 0; e < cs.size(); ++e) {
    if (e >= 2 && e % 2 == 0) even_pow = even_pow * one_minus_w;
    if (!cs[e].is_zero()) {
      MultiPoly t = cs[e] * even_pow;
      if (e % 2 == 1) t = t * u;
      out = out + t;
    }
  }
  return out;
}

struct RadialOde {
  CompiledPoly num, den;  // f' = num/den in (f, u, 1-u^2)

  explicit RadialOde(const ReversibleParts& parts) {
    MultiPoly f = MultiPoly::var("f"), u = MultiPoly::var("u");
    MultiPoly w = MultiPoly::integer(1) - u * u;
    MultiPoly n = (parts.a00 + u * parts.b00 * f) * f;
    MultiPoly d = w * parts.b00 * f - u * parts.a00;
    num = CompiledPoly(pull_w(n), kFUW);
    den = CompiledPoly(pull_w(d), kFUW);
  }

  std::array<double, 3> args(double fv, double uv) const {
    return {fv, uv, (1.0 - uv) * (1.0 + uv)};
  }
};

DenseSolution half_solve(const RadialOde& ode, double rho, double u_end,
                         double ode_tol) {
  OdeProblem prob;
  prob.dimension = 1;
  prob.rhs = [&ode](double u, const std::vector<double>& y,
                    std::vector<double>& dy) {
    auto args = ode.args(y[0], u);
    dy[0] = ode.num(args.data()) / ode.den(args.data());
  };
  prob.y0 = {rho};
  prob.t0 = 0.0;
  prob.t1 = u_end;
  prob.rtol = ode_tol;
  prob.atol = ode_tol * 1e-2;
  prob.norm_bound = 1e8;
  prob.guards.push_back([&ode](double u, const std::vector<double>& y) {
    auto args = ode.args(y[0], u);
    return ode.den(args.data());
  });
  DenseSolution sol;
  try {
    sol = ode_solve(prob);
  } catch (const StepUnderflow&) {
    throw NonStarlike("angular speed degenerates before u = " +
                      std::to_string(u_end));
  } catch (const BlowUp&) {
    throw NonStarlike("radial component blows up before u = " +
                      std::to_string(u_end));
  }
  if (sol.guard_hit)
    throw NonStarlike("angular speed changes sign at u = " +
                      std::to_string(sol.guard_hit->t));
  return sol;
}

}  // namespace

FRho f_rho_solve(const ReversibleParts& parts, double rho, double ode_tol,
                 double delta_end) {
  RadialOde ode(parts);
  auto start = ode.args(rho, 0.0);
  if (std::abs(ode.den(start.data())) < 1e-13 * (1.0 + std::abs(rho)))
    throw NonStarlike("angular speed vanishes at theta = 0");

  FRho out;
  out.rho_ = rho;
  out.delta_end_ = delta_end;
  out.plus_ = half_solve(ode, rho, 1.0 - delta_end, ode_tol);
  out.minus_ = half_solve(ode, rho, -(1.0 - delta_end), ode_tol);
  auto slope = [&ode](double fv, double uv) {
    auto args = ode.args(fv, uv);
    return ode.num(args.data()) / ode.den(args.data());
  };
  double lim = 1.0 - delta_end;
  out.slope_plus_ = slope(out.plus_.y_end()[0], lim);
  out.slope_minus_ = slope(out.minus_.y_end()[0], -lim);
  return out;
}

double FRho::operator()(double u) const {
  double lim = 1.0 - delta_end_;
  if (u >= 0.0) {
    if (u <= lim) return plus_.eval(u)[0];
    return plus_.y_end()[0] + (u - lim) * slope_plus_;
  }
  if (u >= -lim) return minus_.eval(u)[0];
  return minus_.y_end()[0] + (u + lim) * slope_minus_;
}

SLM S_L_M(const ReversibleParts& parts, const FRho& f_rho) {
  MultiPoly f = MultiPoly::var("f"), u = MultiPoly::var("u");
  MultiPoly w = MultiPoly::integer(1) - u * u;
  MultiPoly two_u2 = MultiPoly::integer(1) - MultiPoly::integer(2) * u * u;

  MultiPoly S_sym =
      w * (parts.a10 * parts.b00 - parts.a00 * parts.b10 +
           MultiPoly::integer(2) * u * w * parts.b00 * parts.b00) *
          f * f -
      MultiPoly::integer(4) * u * u * w * parts.a00 * parts.b00 * f -
      u * two_u2 * parts.a00 * parts.a00;
  MultiPoly core = u * parts.a00 - w * parts.b00 * f;
  MultiPoly den_sym = w * core * core;
  MultiPoly M_num_sym = f * (parts.a00 * parts.d0 -
                             w * parts.b00 * parts.c1 * f);

  auto S_c = std::make_shared<CompiledPoly>(pull_w(S_sym), kFGUW);
  auto den_c = std::make_shared<CompiledPoly>(pull_w(den_sym), kFGUW);
  auto M_c = std::make_shared<CompiledPoly>(pull_w(M_num_sym), kFGUW);

  auto point = [f_rho](double uu, double ww) {
    return std::array<double, 4>{f_rho(uu), 0.0, uu, ww};
  };
  auto denom = [den_c, point](double uu, double ww) {
    auto p = point(uu, ww);
    double d = (*den_c)(p.data());
    if (d == 0.0 || !std::isfinite(d))
      throw SingularInterior("denominator vanishes at u = " +
                             std::to_string(uu));
    return d;
  };
  auto w_of = [](double uu) { return (1.0 - uu) * (1.0 + uu); };

  SLM out;
  out.S = [S_c, point, w_of](double uu) {
    auto p = point(uu, w_of(uu));
    return (*S_c)(p.data());
  };
  out.L_uw = [S_c, denom, point](double uu, double ww) {
    auto p = point(uu, ww);
    return (*S_c)(p.data()) / denom(uu, ww);
  };
  out.M_uw = [M_c, denom, point](double uu, double ww) {
    auto p = point(uu, ww);
    return (*M_c)(p.data()) / denom(uu, ww);
  };
  out.L = [L_uw = out.L_uw, w_of](double uu) { return L_uw(uu, w_of(uu)); };
  out.M = [M_uw = out.M_uw, w_of](double uu) { return M_uw(uu, w_of(uu)); };
  return out;
}

double N_eval(const ReversibleParts& parts, double rho, double quad_tol,
              double ode_tol, double delta_end) {
  FRho f_rho = f_rho_solve(parts, rho, ode_tol, delta_end);
  SLM slm = S_L_M(parts, f_rho);

  // Everything below runs in the angle phi with u = sin(phi), w = cos(phi)^2.
  // Parametrizing by u directly does not work: near u = +/-1 the rounded u
  // moves in steps of one ulp, which the integrand magnifies into relative
  // jumps of ulp/(1-u) that no refinement can smooth out.  Both cos(phi) and
  // sin(phi) keep full relative precision all the way to the ends.
  auto L_phi = [&](double phi) {
    double c = std::cos(phi);
    if (c == 0.0) return 0.0;
    return slm.L_uw(std::sin(phi), c * c) * c;
  };

  double inner_tol = std::max(quad_tol * 1e-3, 1e-14);
  // Accumulate the exponent integral incrementally: each new node integrates
  // from the nearest already-known point, so endpoint clustering stays cheap.
  std::map<double, double> exponent{{0.0, 0.0}};
  auto inner = [&](double phi) {
    auto hit = exponent.find(phi);
    if (hit != exponent.end()) return hit->second;
    auto above = exponent.lower_bound(phi);
    double base_p, base_v;
    if (above == exponent.end()) {
      base_p = std::prev(above)->first;
      base_v = std::prev(above)->second;
    } else if (above == exponent.begin()) {
      base_p = above->first;
      base_v = above->second;
    } else {
      auto below = std::prev(above);
      bool use_below = phi - below->first <= above->first - phi;
      base_p = use_below ? below->first : above->first;
      base_v = use_below ? below->second : above->second;
    }
    double v;
    if (phi > base_p)
      v = base_v + quad(L_phi, base_p, phi, inner_tol);
    else
      v = base_v - quad(L_phi, phi, base_p, inner_tol);
    exponent.emplace(phi, v);
    return v;
  };
  auto integrand = [&](double phi) {
    double c = std::cos(phi);
    if (c == 0.0) return 0.0;
    return slm.M_uw(std::sin(phi), c * c) * std::exp(-inner(phi)) * c;
  };
  const double half_pi = std::acos(-1.0) / 2;
  return quad(integrand, -half_pi, half_pi, quad_tol);
}

ScanResult N_scan(const ReversibleParts& parts, double rho_min, double rho_max,
                  int grid_n, double quad_tol, double ode_tol, int jobs,
                  double delta_end) {
  ScanResult out;
  if (grid_n < 2) grid_n = 2;
  out.rhos.resize(grid_n);
  out.values.assign(grid_n, std::numeric_limits<double>::quiet_NaN());
  std::vector<char> failed(grid_n, 0);
  for (int i = 0; i < grid_n; ++i)
    out.rhos[i] = rho_min + (rho_max - rho_min) * i / (grid_n - 1);

  auto work = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      try {
        out.values[i] = N_eval(parts, out.rhos[i], quad_tol, ode_tol, delta_end);
      } catch (const NonStarlike&) {
        failed[i] = 1;
      }
    }
  };
  if (jobs <= 1) {
    work(0, grid_n);
  } else {
    std::vector<std::thread> pool;
    int chunk = (grid_n + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
      int lo = j * chunk, hi = std::min(grid_n, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  bool all_small = true;
  for (int i = 0; i < grid_n; ++i) {
    if (failed[i]) {
      out.skipped.push_back(i);
      continue;
    }
    if (std::abs(out.values[i]) >= quad_tol) all_small = false;
  }
  out.identically_zero = all_small && out.skipped.size() < out.rhos.size();
  if (out.identically_zero) return out;

  for (int i = 0; i + 1 < grid_n; ++i) {
    if (failed[i] || failed[i + 1]) continue;
    double a = out.values[i], b = out.values[i + 1];
    if (a == 0.0 || a * b >= 0.0) continue;
    double root = bisect(
        [&](double r) {
          return N_eval(parts, r, quad_tol, ode_tol, delta_end);
        },
        out.rhos[i], out.rhos[i + 1], quad_tol * 10);
    out.zeros.push_back({out.rhos[i], out.rhos[i + 1], root});
  }
  return out;
}

double abelian_ratio(const MultiPoly& H, double h_level, double tol) {
  CompiledPoly Hc(H, {"x", "y"});
  CompiledPoly Hx(H.diff("x"), {"x", "y"});
  CompiledPoly Hy(H.diff("y"), {"x", "y"});

  // Starting point on the positive x-axis.
  auto on_axis = [&](double xx) {
    double args[2] = {xx, 0.0};
    return Hc(args) - h_level;
  };
  double hi = 1e-3;
  while (on_axis(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw OpenLevelSet("level not reached on the x-axis");
  }
  double x0 = bisect(on_axis, 0.0, hi, 1e-14);

  // Hamiltonian flow; y crossings of the x-axis mark half turns.
  OdeProblem prob;
  prob.dimension = 2;
  prob.rhs = [&](double, const std::vector<double>& y, std::vector<double>& d) {
    double args[2] = {y[0], y[1]};
    d[0] = -Hy(args);
    d[1] = Hx(args);
  };
  prob.rtol = tol;
  prob.atol = tol * 1e-2;
  prob.norm_bound = 1e6;
  prob.guards.push_back(
      [](double, const std::vector<double>& y) { return y[1]; });

  double period = 0.0;
  std::vector<double> state = {x0, 0.0};
  std::vector<DenseSolution> arcs;
  for (int half = 0; half < 2; ++half) {
    prob.y0 = state;
    prob.t0 = 0.0;
    prob.t1 = 1e4;
    DenseSolution sol;
    try {
      sol = ode_solve(prob);
    } catch (const BlowUp&) {
      throw OpenLevelSet("trajectory escapes the level set");
    }
    if (!sol.guard_hit)
      throw OpenLevelSet("trajectory does not return to the x-axis");
    period += sol.t_end();
    state = sol.y_end();
    // The guard bisection leaves a tiny off-axis residue whose arbitrary sign
    // would trip the next arc's guard right at its start.
    state[1] = 0.0;
    arcs.push_back(std::move(sol));
  }
  if (std::abs(state[0] - x0) > 1e-6 * (1.0 + std::abs(x0)))
    throw OpenLevelSet("trajectory does not close up");

  // Periodic trapezoid over the full turn; dy = y'(t) dt.
  const int n = 8192;
  double num = 0.0, den = 0.0;
  for (int k = 0; k < n; ++k) {
    double t = period * k / n;
    std::vector<double> y;
    if (t <= arcs[0].t_end())
      y = arcs[0].eval(t);
    else
      y = arcs[1].eval(t - arcs[0].t_end());
    double args[2] = {y[0], y[1]};
    double dy = Hx(args);
    num += y[0] * y[1] * dy;
    den += y[0] * dy;
  }
  num *= period / n;
  den *= period / n;
  if (std::abs(den) < 1e-9)
    throw DegenerateDenominator("vanishing denominator integral");
  return num / den;
}

}  // namespace starcycle

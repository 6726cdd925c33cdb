#include "starcycle/systems.hpp"

#include <cmath>

#include "starcycle/errors.hpp"
#include "starcycle/numerics.hpp"

namespace starcycle {

FGSystem build_fg(const PlanarSystem& sys) {
  PolarData pd = polar_parts(sys);
  MultiPoly f = MultiPoly::var("f"), g = MultiPoly::var("g");
  MultiPoly u = MultiPoly::var("u");
  MultiPoly fp = MultiPoly::var("fp"), gp = MultiPoly::var("gp");
  MultiPoly w = MultiPoly::integer(1) - u * u;

  FGSystem out;
  out.eq0 = w * pd.d1 * fp + w * pd.d0 * gp - u * pd.d0 * g - pd.n0;
  out.eq1 = pd.d0 * fp + w * pd.d1 * gp - u * pd.d1 * g - pd.n1;

  MultiPoly disc = pd.d0 * pd.d0 - w * pd.d1 * pd.d1;
  out.fprime = RationalFunction(pd.n1 * pd.d0 - pd.n0 * pd.d1, disc);
  out.gprime = RationalFunction(
      pd.d0 * (pd.n0 + u * g * pd.d0) - w * pd.d1 * (pd.n1 + u * g * pd.d1),
      w * disc);
  return out;
}

namespace {

// Largest monomial dividing every term of all three components.
MultiPoly common_monomial(MultiPoly& a, MultiPoly& b, MultiPoly& c) {
  MultiPoly::align(a, b);
  MultiPoly::align(a, c);
  MultiPoly::align(a, b);
  const std::size_t nv = a.vars().size();
  Expvec shared(nv, INT32_MAX);
  for (const MultiPoly* p : {&a, &b, &c})
    for (const auto& [e, coeff] : p->terms())
      for (std::size_t i = 0; i < nv; ++i)
        shared[i] = std::min(shared[i], e[i]);
  MultiPoly::TermMap mono;
  mono.emplace(shared, Rational(1));
  return MultiPoly(a.vars(), std::move(mono));
}

}  // namespace

Sys3D build_3d(const PlanarSystem& sys) {
  PolarData pd = polar_parts(sys);
  MultiPoly f = MultiPoly::var("f"), g = MultiPoly::var("g");
  MultiPoly u = MultiPoly::var("u");
  MultiPoly w = MultiPoly::integer(1) - u * u;

  Sys3D out;
  out.df = w * (pd.n1 * pd.d0 - pd.n0 * pd.d1);
  out.dg =
      pd.d0 * (pd.n0 + u * g * pd.d0) - w * pd.d1 * (pd.n1 + u * g * pd.d1);
  out.du = w * (pd.d0 * pd.d0 - w * pd.d1 * pd.d1);

  MultiPoly mono = common_monomial(out.df, out.dg, out.du);
  if (!mono.is_constant()) {
    out.df = *exact_div(out.df, mono);
    out.dg = *exact_div(out.dg, mono);
    out.du = *exact_div(out.du, mono);
    out.cancelled_factors.push_back(mono);
  }

  std::vector<MultiPoly> candidates = {f, g, u, w, f * f - w * g * g};
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
      const MultiPoly& c = candidates[ci];
      auto qf = exact_div(out.df, c);
      auto qg = exact_div(out.dg, c);
      auto qu = exact_div(out.du, c);
      if (!qf || !qg || !qu) continue;
      if (ci == 3 && !exact_div(*qu, w)) continue;  // keep u = +-1 invariant
      out.df = *qf;
      out.dg = *qg;
      out.du = *qu;
      out.cancelled_factors.push_back(c);
      progressed = true;
    }
  }

  // Orientation: du/ds positive on the open slab when decidable.
  auto quotient = exact_div(out.du, w);
  if (quotient) {
    const Rational fgus[][3] = {{1, 0, 0},
                                {1, Rational(1, 2), 0},
                                {2, Rational(1, 3), Rational(1, 5)},
                                {1, Rational(-1, 2), Rational(1, 7)}};
    for (const auto& pt : fgus) {
      std::map<std::string, Rational> point;
      for (const auto& name : quotient->vars()) point[name] = 1;
      point["f"] = pt[0];
      point["g"] = pt[1];
      point["u"] = pt[2];
      Rational val = quotient->eval(point);
      if (val == 0) continue;
      if (val < 0) {
        out.df = -out.df;
        out.dg = -out.dg;
        out.du = -out.du;
        out.cancelled_factors.push_back(MultiPoly::integer(-1));
      }
      break;
    }
  }
  return out;
}

std::optional<MultiPoly> invariant_cofactor(
    const std::vector<std::pair<std::string, MultiPoly>>& field,
    const MultiPoly& H) {
  if (H.is_zero()) throw ZeroSurface("invariant check on the zero surface");
  MultiPoly Z;
  for (const auto& [name, comp] : field) Z = Z + comp * H.diff(name);
  auto K = exact_div(Z, H);
  if (!K) return std::nullopt;
  if (*K * H != Z) return std::nullopt;
  return K;
}

std::optional<MultiPoly> invariant_cofactor(const Sys3D& sys,
                                            const MultiPoly& H) {
  return invariant_cofactor({{"f", sys.df}, {"g", sys.dg}, {"u", sys.du}}, H);
}

std::optional<MultiPoly> invariant_cofactor(const PlanarSystem& sys,
                                            const MultiPoly& H) {
  return invariant_cofactor({{"x", sys.X}, {"y", sys.Y}}, H);
}

Trajectory integrate_heteroclinic(const Sys3D& sys, double f0, double g0,
                                  double delta, double tol) {
  const std::vector<std::string> order = {"f", "g", "u"};
  CompiledPoly df(sys.df, order), dg(sys.dg, order), du(sys.du, order);

  OdeProblem prob;
  prob.dimension = 3;
  prob.rhs = [&](double, const std::vector<double>& y, std::vector<double>& d) {
    d[0] = df(y);
    d[1] = dg(y);
    d[2] = du(y);
  };
  prob.y0 = {f0, g0, -1.0 + delta};
  prob.t0 = 0.0;
  prob.t1 = 1e9;
  prob.rtol = tol;
  prob.atol = tol * 1e-2;
  prob.max_steps = 10000;
  prob.norm_bound = 1e8;
  prob.guards.push_back([delta](double, const std::vector<double>& y) {
    return y[2] - (1.0 - delta);
  });

  DenseSolution sol = ode_solve(prob);

  Trajectory out;
  double s_end = sol.t_end();
  const int n_out = 800;
  for (int k = 0; k <= n_out; ++k) {
    double s = s_end * k / n_out;
    auto y = sol.eval(s);
    out.samples.push_back({s, y[0], y[1], y[2]});
  }
  double u_end = sol.y_end()[2];
  out.reached_plus = std::abs(u_end - 1.0) <= delta * (1.0 + 1e-6) + 1e-12;
  out.reached_minus = std::abs(u_end + 1.0) <= delta * (1.0 + 1e-6) + 1e-12;
  if (sol.step_budget_exhausted && !out.reached_plus)
    throw Stalled("step budget exhausted before reaching u = 1-delta");
  return out;
}

}  // namespace starcycle

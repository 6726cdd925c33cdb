#include "starcycle/common.hpp"

#include <algorithm>

#include "starcycle/errors.hpp"
#include "starcycle/systems.hpp"

namespace starcycle {

CommonProblem build_problem(const FUSystem& a, const FUSystem& b,
                            bool strip_before_derive) {
  CommonProblem cp;
  cp.p1 = a.P;
  cp.q1 = a.Q;
  cp.p2 = b.P;
  cp.q2 = b.Q;
  cp.h = cp.p1 * cp.q2 - cp.p2 * cp.q1;
  cp.stripped_before_derive = strip_before_derive;
  MultiPoly base = cp.h;
  if (strip_before_derive) base = strip_content(cp.h).first;
  MultiPoly hf = base.diff("f"), hu = base.diff("u");
  cp.j[0] = hf * cp.p1 + hu * cp.q1;
  cp.j[1] = hf * cp.p2 + hu * cp.q2;
  return cp;
}

namespace {

// Resultant with the degenerate constant cases absorbed: both arguments
// constant in the variable gives 1 (empty Sylvester matrix).
MultiPoly resultant_or_unit(const MultiPoly& p, const MultiPoly& q,
                            const std::string& var, bool* degenerate) {
  if (p.degree(var) <= 0 || q.degree(var) <= 0) {
    if (degenerate) *degenerate = true;
    if (p.degree(var) <= 0 && q.degree(var) <= 0)
      return MultiPoly::integer(1);
  }
  return sylvester_resultant(p, q, var);
}

}  // namespace

ConditionPair condition_polys(const CommonProblem& cp, int i) {
  const MultiPoly& ji = cp.j.at(static_cast<std::size_t>(i - 1));
  ConditionPair out;
  out.g_f = resultant_or_unit(cp.h, ji, "u", &out.degenerate_u);
  out.g_u = resultant_or_unit(cp.h, ji, "f", &out.degenerate_f);
  return out;
}

std::vector<MultiPoly> parameter_conditions(const MultiPoly& g,
                                            const std::string& main) {
  std::vector<MultiPoly> out;
  for (const MultiPoly& c : g.coeffs_wrt(main))
    if (!c.is_zero()) out.push_back(c);
  return out;
}

ParamReport verify_params(const CommonProblem& cp,
                          const std::map<std::string, Rational>& assignment) {
  std::map<std::string, MultiPoly> binding;
  for (const auto& [name, value] : assignment)
    binding.emplace(name, MultiPoly::constant(value));

  FUSystem a{cp.p1.subst(binding), cp.q1.subst(binding), {}};
  FUSystem b{cp.p2.subst(binding), cp.q2.subst(binding), {}};
  CommonProblem bound = build_problem(a, b, cp.stripped_before_derive);

  ParamReport report;
  if (bound.h.is_zero()) {
    report.degenerate = true;
    report.vanish = {true, true, true, true};
    report.necessary_condition_met = true;
    return report;
  }
  for (int i = 1; i <= 2; ++i) {
    ConditionPair pair = condition_polys(bound, i);
    report.vanish[2 * (i - 1)] = pair.g_f.is_zero();
    report.vanish[2 * (i - 1) + 1] = pair.g_u.is_zero();
  }
  report.necessary_condition_met = report.vanish[0] && report.vanish[1] &&
                                   report.vanish[2] && report.vanish[3];
  return report;
}

CurveReport verify_common_curve(
    const FUSystem& a, const FUSystem& b, const MultiPoly& curve,
    const std::map<std::string, Rational>& assignment) {
  if (curve.is_zero() || curve.is_constant())
    throw ZeroSurface("candidate curve is constant");
  std::map<std::string, MultiPoly> binding;
  for (const auto& [name, value] : assignment)
    binding.emplace(name, MultiPoly::constant(value));
  MultiPoly cv = curve.subst(binding);
  if (cv.is_zero() || cv.is_constant())
    throw ZeroSurface("candidate curve is constant after substitution");

  CurveReport report;
  auto ka = invariant_cofactor(
      {{"f", a.P.subst(binding)}, {"u", a.Q.subst(binding)}}, cv);
  auto kb = invariant_cofactor(
      {{"f", b.P.subst(binding)}, {"u", b.Q.subst(binding)}}, cv);
  report.invariant_a = ka.has_value();
  report.invariant_b = kb.has_value();
  report.cofactor_a = std::move(ka);
  report.cofactor_b = std::move(kb);
  report.common = report.invariant_a && report.invariant_b;
  return report;
}

namespace {

std::vector<mpz_class> divisors(const mpz_class& n) {
  std::vector<mpz_class> out;
  mpz_class a = abs(n);
  if (a == 0) return out;
  for (mpz_class d = 1; d * d <= a && d <= 100000; ++d) {
    if (a % d == 0) {
      out.push_back(d);
      if (d * d != a) out.push_back(a / d);
    }
    if (out.size() > 4000) break;  // give up enumerating huge divisor sets
  }
  return out;
}

// Rational roots of a univariate polynomial in `var`.
std::vector<Rational> rational_roots(const MultiPoly& p,
                                     const std::string& var) {
  std::vector<Rational> roots;
  auto coeffs = p.coeffs_wrt(var);
  if (coeffs.empty()) return roots;
  std::vector<Rational> c(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (!coeffs[k].is_constant()) return roots;  // other symbols present
    c[k] = coeffs[k].constant_value();
  }
  std::size_t low = 0;
  while (low < c.size() && c[low] == 0) ++low;
  if (low == c.size()) return roots;
  if (low > 0) roots.push_back(0);
  std::size_t high = c.size() - 1;
  while (c[high] == 0) --high;
  if (high == low) return roots;

  mpz_class scale = 1;
  for (std::size_t k = low; k <= high; ++k)
    scale = lcm(scale, c[k].get_den());
  mpz_class a0 = mpz_class(c[low] * scale), an = mpz_class(c[high] * scale);
  for (const auto& pnum : divisors(a0)) {
    for (const auto& qden : divisors(an)) {
      for (int sign : {1, -1}) {
        Rational cand(sign * pnum, qden);
        cand.canonicalize();
        Rational val = 0;
        for (std::size_t k = high + 1; k-- > low;) val = val * cand + c[k];
        if (val == 0 &&
            std::find(roots.begin(), roots.end(), cand) == roots.end())
          roots.push_back(cand);
      }
    }
  }
  return roots;
}

std::vector<Rational> common_roots(const std::vector<MultiPoly>& conds,
                                   const std::string& var) {
  std::vector<Rational> out;
  const MultiPoly* first = nullptr;
  for (const auto& c : conds)
    if (!c.is_zero()) {
      first = &c;
      break;
    }
  if (!first) return out;  // everything vanished: unconstrained
  for (const Rational& r : rational_roots(*first, var)) {
    bool ok = true;
    for (const auto& c : conds) {
      if (c.is_zero()) continue;
      bool univariate = true;
      for (const auto& name : c.vars())
        if (name != var && c.depends_on(name)) univariate = false;
      if (univariate && c.eval({{var, r}}) != 0) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<std::map<std::string, Rational>> solve_conditions(
    const std::vector<MultiPoly>& conditions,
    const std::vector<std::string>& params) {
  std::vector<std::map<std::string, Rational>> out;
  if (params.empty() || params.size() > 2) return out;

  if (params.size() == 1) {
    for (const Rational& r : common_roots(conditions, params[0]))
      out.push_back({{params[0], r}});
    return out;
  }

  const std::string& s = params[0];
  const std::string& t = params[1];
  // Eliminate t by pairwise resultants, solve for s, back-substitute.
  std::vector<MultiPoly> in_s;
  for (std::size_t i = 0; i < conditions.size(); ++i)
    for (std::size_t k = i + 1; k < conditions.size(); ++k) {
      const MultiPoly &a = conditions[i], &b = conditions[k];
      if (a.degree(t) > 0 && b.degree(t) > 0)
        in_s.push_back(sylvester_resultant(a, b, t));
      else if (a.degree(t) <= 0 && !a.is_zero())
        in_s.push_back(a);
      else if (b.degree(t) <= 0 && !b.is_zero())
        in_s.push_back(b);
    }
  for (const auto& c : conditions)
    if (!c.depends_on(t)) in_s.push_back(c);

  for (const Rational& sv : common_roots(in_s, s)) {
    std::vector<MultiPoly> rest;
    for (const auto& c : conditions)
      rest.push_back(c.subst({{s, MultiPoly::constant(sv)}}));
    for (const Rational& tv : common_roots(rest, t)) {
      bool ok = true;
      for (const auto& c : conditions)
        if (c.eval({{s, sv}, {t, tv}}) != 0) {
          ok = false;
          break;
        }
      if (ok) out.push_back({{s, sv}, {t, tv}});
    }
  }
  return out;
}

}  // namespace starcycle

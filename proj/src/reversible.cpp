#include "starcycle/reversible.hpp"

#include "starcycle/decompose.hpp"
#include "starcycle/errors.hpp"
#include "starcycle/systems.hpp"

namespace starcycle {

AlgebraicCurveResult reversible_H(const PlanarSystem& sys) {
  PolarData pd = polar_parts(sys);
  MultiPoly zero;
  std::map<std::string, MultiPoly> g0 = {{"g", zero}};
  MultiPoly n0 = pd.n0.subst(g0), n1 = pd.n1.subst(g0);
  MultiPoly d0 = pd.d0.subst(g0), d1 = pd.d1.subst(g0);
  MultiPoly u = MultiPoly::var("u");
  MultiPoly w = MultiPoly::integer(1) - u * u;

  AlgebraicCurveResult out;
  MultiPoly raw = n0 * d0 - w * n1 * d1;
  if (raw.is_zero()) {
    out.continuum = true;
    return out;
  }
  std::tie(out.h_fu, out.stripped) = strip_content(raw);
  return out;
}

MultiPoly curve_to_cartesian(const MultiPoly& h_fu) {
  if (h_fu.is_zero()) throw ZeroInput("curve conversion on zero polynomial");

  int du = std::max(h_fu.degree("u"), 0);
  MultiPoly r = MultiPoly::var("r"), y = MultiPoly::var("y");
  // f^a u^b -> y^b r^(a-b),  then clear denominators with r^du.
  MultiPoly F;
  auto in_f = h_fu.coeffs_wrt("f");
  for (std::size_t a = 0; a < in_f.size(); ++a) {
    auto in_u = in_f[a].coeffs_wrt("u");
    for (std::size_t b = 0; b < in_u.size(); ++b) {
      if (in_u[b].is_zero()) continue;
      int re = static_cast<int>(a) - static_cast<int>(b) + du;
      F = F + in_u[b] * y.pow(static_cast<unsigned>(b)) *
                  r.pow(static_cast<unsigned>(re));
    }
  }

  auto in_r = F.coeffs_wrt("r");
  MultiPoly even, odd_over_r;  // F = even + r * odd_over_r
  for (std::size_t k = 0; k < in_r.size(); ++k) {
    MultiPoly part = in_r[k] * r.pow(static_cast<unsigned>(k % 2 ? k - 1 : k));
    if (k % 2 == 0)
      even = even + part;
    else
      odd_over_r = odd_over_r + part;
  }

  MultiPoly result;
  if (odd_over_r.is_zero())
    result = even;
  else if (even.is_zero())
    result = odd_over_r;
  else
    result = r * r * odd_over_r * odd_over_r - even * even;

  result = strip_content(result).first;  // drops leftover powers of r

  // r^2 -> x^2 + y^2 (only even powers remain at this point).
  MultiPoly x = MultiPoly::var("x");
  MultiPoly rr = x * x + y * y;
  MultiPoly out;
  auto parts = result.coeffs_wrt("r");
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].is_zero()) continue;
    if (k % 2 != 0)
      throw ZeroInput("odd power of r survived curve conversion");
    out = out + parts[k] * rr.pow(static_cast<unsigned>(k / 2));
  }
  return strip_content(out).first;
}

AlgebraicCurveResult reversible_pipeline(const PlanarSystem& sys) {
  AlgebraicCurveResult out = reversible_H(sys);
  if (out.continuum) return out;
  out.curve_xy = curve_to_cartesian(out.h_fu);
  auto K = invariant_cofactor(sys, *out.curve_xy);
  if (K) {
    out.cofactor = K;
    if (K->term_count() == 1) {
      const auto& [e, c] = *K->terms().begin();
      bool all_even = true;
      for (int32_t ex : e)
        if (ex % 2 != 0) all_even = false;
      if (all_even) out.sign_note = c < 0 ? "<=0" : ">=0";
    }
  }
  return out;
}

}  // namespace starcycle

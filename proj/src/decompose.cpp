#include "starcycle/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "starcycle/errors.hpp"

namespace starcycle {

namespace {

std::map<std::string, MultiPoly> circle_substitution() {
  MultiPoly f = MultiPoly::var("f"), g = MultiPoly::var("g");
  MultiPoly u = MultiPoly::var("u"), v = MultiPoly::var("v");
  MultiPoly rad = f + v * g;
  return {{"x", rad * v}, {"y", rad * u}};
}

}  // namespace

VParts decompose_xy(const MultiPoly& H) {
  VParts out;
  MultiPoly substituted = H.subst(circle_substitution());
  auto [h0, h1] = v_split(substituted);
  out.h0 = h0;
  out.h1 = h1;

  if (!H.is_even_in("x")) return out;

  // H = K(x^2, y); rebuild K on a scratch variable s, then
  // k00 = K((1-u^2) f^2, u f).
  MultiPoly K;
  MultiPoly s = MultiPoly::var("_s");
  auto cx = H.coeffs_wrt("x");
  for (std::size_t j = 0; j < cx.size(); j += 2)
    K = K + cx[j] * s.pow(static_cast<unsigned>(j / 2));

  MultiPoly f = MultiPoly::var("f"), g = MultiPoly::var("g");
  MultiPoly u = MultiPoly::var("u");
  MultiPoly w = MultiPoly::integer(1) - u * u;

  VParts::EvenRefinement ref;
  ref.k00 = K.subst({{"_s", w * f * f}, {"y", u * f}});

  auto k10 = exact_div(out.h1, g);
  auto k01 = exact_div(out.h0 - ref.k00, w * g * g);
  if (!k10 || !k01)
    throw ZeroPolynomial("even refinement structure broken");  // unreachable
  ref.k10 = *k10;
  ref.k01 = *k01;
  out.even_refinement = std::move(ref);
  return out;
}

PolarData polar_parts_of(const MultiPoly& X, const MultiPoly& Y) {
  MultiPoly zero;
  MultiPoly x0 = X.subst({{"x", zero}, {"y", zero}});
  MultiPoly y0 = Y.subst({{"x", zero}, {"y", zero}});
  if (!x0.is_zero() || !y0.is_zero())
    throw OriginNotFixed("vector field does not vanish at the origin");

  auto sub = circle_substitution();
  MultiPoly f = MultiPoly::var("f"), g = MultiPoly::var("g");
  MultiPoly u = MultiPoly::var("u"), v = MultiPoly::var("v");
  MultiPoly Xs = X.subst(sub), Ys = Y.subst(sub);
  MultiPoly N = (f + v * g) * (v * Xs + u * Ys);
  MultiPoly D = v * Ys - u * Xs;

  PolarData out;
  std::tie(out.n0, out.n1) = v_split(N);
  std::tie(out.d0, out.d1) = v_split(D);
  return out;
}

PolarData polar_parts(const PlanarSystem& sys) {
  return polar_parts_of(sys.X, sys.Y);
}

namespace {

// Real trigonometric interpolant of F from a uniform grid theta_k =
// theta_0 + 2*pi*k/N.  Coefficients come out of a direct DFT; harmonics up
// to floor((N-1)/2) are kept.
class TrigInterp {
public:
  explicit TrigInterp(const std::vector<std::pair<double, double>>& samples) {
    const std::size_t n = samples.size();
    const std::size_t m = (n - 1) / 2;
    coeff_.resize(2 * m + 1);
    for (std::size_t j = 0; j < coeff_.size(); ++j) {
      int harmonic = static_cast<int>(j) - static_cast<int>(m);
      std::complex<double> acc = 0.0;
      for (const auto& [theta, F] : samples)
        acc += F * std::exp(std::complex<double>(0.0, -harmonic * theta));
      coeff_[j] = acc / static_cast<double>(n);
    }
    m_ = m;
  }

  double operator()(double theta) const {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < coeff_.size(); ++j) {
      int harmonic = static_cast<int>(j) - static_cast<int>(m_);
      acc += coeff_[j] * std::exp(std::complex<double>(0.0, harmonic * theta));
    }
    return acc.real();
  }

private:
  std::vector<std::complex<double>> coeff_;
  std::size_t m_ = 0;
};

// Barycentric Lagrange evaluation from arbitrary distinct nodes.
double barycentric(const std::vector<double>& xs, const std::vector<double>& ys,
                   double x) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    double w = 1.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (i != j) w /= (xs[j] - xs[i]);
    double d = x - xs[j];
    if (d == 0.0) return ys[j];
    num += w / d * ys[j];
    den += w / d;
  }
  return num / den;
}

}  // namespace

PeriodicFit periodic_fit(const std::vector<std::pair<double, double>>& samples,
                         int n_nodes) {
  if (n_nodes < 4) throw InsufficientSamples("need at least 4 nodes");
  if (samples.size() < 2 * static_cast<std::size_t>(n_nodes))
    throw InsufficientSamples("need at least 2*n_nodes samples");

  std::vector<std::pair<double, double>> grid = samples;
  std::sort(grid.begin(), grid.end());
  const double two_pi = 2.0 * M_PI;
  const double h = two_pi / static_cast<double>(grid.size());
  if (grid.back().first - grid.front().first > two_pi - 0.5 * h)
    throw InsufficientSamples("samples exceed one period");
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    double gap = grid[k + 1].first - grid[k].first;
    if (std::abs(gap - h) > 1e-8 * two_pi)
      throw InsufficientSamples("samples are not a uniform grid");
  }

  TrigInterp F(grid);

  PeriodicFit out;
  out.nodes.resize(n_nodes);
  out.f_vals.resize(n_nodes);
  out.g_vals.assign(n_nodes, 0.0);
  std::vector<double> interior_u, interior_g;
  for (int k = 0; k < n_nodes; ++k) {
    double uk = std::cos(M_PI * k / (n_nodes - 1));
    if (k == n_nodes - 1) uk = -1.0;
    out.nodes[k] = uk;
    double theta = std::asin(uk);
    double Fp = F(theta), Fm = F(M_PI - theta);
    out.f_vals[k] = 0.5 * (Fp + Fm);
    double c = std::cos(theta);
    if (c > 1e-7) {
      out.g_vals[k] = 0.5 * (Fp - Fm) / c;
      interior_u.push_back(uk);
      interior_g.push_back(out.g_vals[k]);
    }
  }
  // Endpoint g by polynomial extrapolation of the interior values; the direct
  // formula degenerates to 0/0 there.
  for (int k = 0; k < n_nodes; ++k) {
    if (std::abs(out.nodes[k]) > 1.0 - 1e-12)
      out.g_vals[k] = barycentric(interior_u, interior_g, out.nodes[k]);
  }

  // Reconstruction error of the fitted pair against the raw samples, with
  // f, g read off the node values by barycentric interpolation.
  double worst = 0.0;
  for (const auto& [theta, value] : grid) {
    double uu = std::sin(theta);
    double fv = barycentric(out.nodes, out.f_vals, uu);
    double gv = barycentric(out.nodes, out.g_vals, uu);
    worst = std::max(worst, std::abs(value - (fv + gv * std::cos(theta))));
  }
  out.residual = worst;
  return out;
}

}  // namespace starcycle

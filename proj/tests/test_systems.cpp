#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "starcycle/decompose.hpp"
#include "starcycle/errors.hpp"
#include "starcycle/multipoly.hpp"
#include "starcycle/system.hpp"
#include "starcycle/systems.hpp"

using namespace starcycle;

namespace {

MultiPoly V(const std::string& n) { return MultiPoly::var(n); }

MultiPoly W() { return MultiPoly::integer(1) - V("u") * V("u"); }

MultiPoly random_vanishing(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> nterms(1, 4);
  std::uniform_int_distribution<int> deg(0, 2);
  MultiPoly p;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    int c = coef(rng);
    if (c == 0) c = 1;
    MultiPoly term = MultiPoly::integer(c) * (deg(rng) % 2 ? V("x") : V("y"));
    int extra = deg(rng);
    for (int k = 0; k < extra; ++k) term = term * (coef(rng) % 2 ? V("x") : V("y"));
    p = p + term;
  }
  return p;
}

// Raw right-hand sides before factor cancellation, in the (N, D) convention.
struct Raw3D {
  MultiPoly df, dg, du;
};

Raw3D raw_3d(const PlanarSystem& sys) {
  PolarData pd = polar_parts(sys);
  MultiPoly w = W(), u = V("u"), g = V("g");
  Raw3D raw;
  raw.df = w * (pd.n1 * pd.d0 - pd.n0 * pd.d1);
  raw.dg = -w * pd.d1 * (pd.n1 + u * g * pd.d1) +
           pd.d0 * (pd.n0 + u * g * pd.d0);
  raw.du = w * (pd.d0 * pd.d0 - w * pd.d1 * pd.d1);
  return raw;
}

}  // namespace

TEST_CASE("implicit pair for the linear center") {
  PlanarSystem sys = parse_system_file(FIXTURES_DIR "/linear.txt");
  FGSystem fg = build_fg(sys);
  MultiPoly f = V("f"), g = V("g"), u = V("u"), fp = V("fp"), gp = V("gp");
  MultiPoly w = W();
  CHECK(fg.eq0 == w * g * fp + w * f * gp - u * f * g);
  CHECK(fg.eq1 == f * fp + w * g * gp - u * g * g);
}

TEST_CASE("implicit pair and solved forms agree with the polar data") {
  std::mt19937 rng(41);
  for (int i = 0; i < 10; ++i) {
    PlanarSystem sys;
    sys.X = random_vanishing(rng);
    sys.Y = random_vanishing(rng);
    PolarData pd = polar_parts(sys);
    FGSystem fg = build_fg(sys);
    MultiPoly g = V("g"), u = V("u"), fp = V("fp"), gp = V("gp");
    MultiPoly w = W();
    CHECK(fg.eq0 == w * pd.d1 * fp + w * pd.d0 * gp - u * pd.d0 * g - pd.n0);
    CHECK(fg.eq1 == pd.d0 * fp + w * pd.d1 * gp - u * pd.d1 * g - pd.n1);
    // solved form up to common-content stripping: cross multiply
    MultiPoly num = pd.n1 * pd.d0 - pd.n0 * pd.d1;
    MultiPoly den = pd.d0 * pd.d0 - w * pd.d1 * pd.d1;
    CHECK(fg.fprime.num * den == num * fg.fprime.den);
    MultiPoly gnum = -w * pd.d1 * (pd.n1 + u * g * pd.d1) +
                     pd.d0 * (pd.n0 + u * g * pd.d0);
    CHECK(fg.gprime.num * (w * den) == gnum * fg.gprime.den);
  }
}

TEST_CASE("cancelled factors multiply back to the raw field") {
  for (const char* name :
       {"/ex1.txt", "/ex2.txt", "/linear.txt", "/revcenter.txt", "/cla.txt"}) {
    CAPTURE(name);
    PlanarSystem sys = parse_system_file(std::string(FIXTURES_DIR) + name);
    Sys3D s3 = build_3d(sys);
    Raw3D raw = raw_3d(sys);
    MultiPoly fac = MultiPoly::integer(1);
    for (const auto& c : s3.cancelled_factors) fac = fac * c;
    bool plus = s3.df * fac == raw.df && s3.dg * fac == raw.dg &&
                s3.du * fac == raw.du;
    bool minus = s3.df * fac == -raw.df && s3.dg * fac == -raw.dg &&
                 s3.du * fac == -raw.du;
    CHECK((plus || minus));
    // planes u = +-1 stay invariant
    CHECK(exact_div(s3.du, W()).has_value());
  }
}

TEST_CASE("rigid cubic reduces to the known three-dimensional field") {
  PlanarSystem sys = parse_system_file(FIXTURES_DIR "/ex1.txt");
  Sys3D s3 = build_3d(sys);
  MultiPoly f = V("f"), g = V("g"), u = V("u");
  MultiPoly w = W();
  MultiPoly two_u2_3 = MultiPoly::integer(2) * u * u - MultiPoly::integer(3);
  CHECK(s3.du == w);
  MultiPoly df_expect =
      w * (MultiPoly::integer(2) * u * f.pow(3) - g - w * two_u2_3 * g.pow(3) +
           MultiPoly::integer(6) * u * w * f * g * g -
           MultiPoly::integer(3) * two_u2_3 * f * f * g);
  CHECK(s3.df == df_expect);
  MultiPoly dg_expect =
      -f - two_u2_3 * f.pow(3) + u * g +
      w * (MultiPoly::integer(2) * u * w * g * g -
           MultiPoly::integer(3) * two_u2_3 * f * g +
           MultiPoly::integer(6) * u * f * f) * g;
  CHECK(s3.dg == dg_expect);
}

TEST_CASE("second rigid example reduces to the known field") {
  PlanarSystem sys = parse_system_file(FIXTURES_DIR "/ex2.txt");
  Sys3D s3 = build_3d(sys);
  MultiPoly f = V("f"), g = V("g"), u = V("u");
  MultiPoly w = W();
  MultiPoly one_two_u2 = MultiPoly::integer(1) - MultiPoly::integer(2) * u * u;
  CHECK(s3.du == w);
  CHECK(s3.df ==
        w * one_two_u2 * (MultiPoly::integer(3) * f * f + w * g * g) * g);
  CHECK(s3.dg ==
        u * g + one_two_u2 * (f * f + MultiPoly::integer(3) * w * g * g) * f);
}

TEST_CASE("linear center collapses to a driven rotation") {
  PlanarSystem sys = parse_system_file(FIXTURES_DIR "/linear.txt");
  Sys3D s3 = build_3d(sys);
  CHECK(s3.du == W());
  CHECK(s3.df.is_zero());
  CHECK(s3.dg == V("u") * V("g"));
}

TEST_CASE("rigid systems keep du proportional to 1 - u^2") {
  for (const char* name : {"/ex1.txt", "/ex2.txt", "/linear.txt"}) {
    CAPTURE(name);
    PlanarSystem sys = parse_system_file(std::string(FIXTURES_DIR) + name);
    // rigid means x*dy - y*dx = x^2 + y^2
    CHECK(V("x") * sys.Y - V("y") * sys.X == V("x") * V("x") + V("y") * V("y"));
    Sys3D s3 = build_3d(sys);
    auto q = exact_div(s3.du, W());
    REQUIRE(q.has_value());
    CHECK(q->is_constant());
  }
}

TEST_CASE("cofactors of the known invariant sets") {
  MultiPoly f = V("f"), g = V("g"), u = V("u"), x = V("x"), y = V("y");
  MultiPoly w = W();

  PlanarSystem ex2 = parse_system_file(FIXTURES_DIR "/ex2.txt");
  Sys3D s3 = build_3d(ex2);
  MultiPoly H = MultiPoly::integer(2) * f * g -
                MultiPoly::integer(2) * u * (f * f - w * g * g).pow(2);
  auto K = invariant_cofactor(s3, H);
  REQUIRE(K.has_value());
  CHECK(*K == u + MultiPoly::integer(8) * w *
                      (MultiPoly::integer(1) - MultiPoly::integer(2) * u * u) *
                      f * g);
  // re-verify by arithmetic, not by trusting the division
  MultiPoly ZH = s3.df * H.diff("f") + s3.dg * H.diff("g") + s3.du * H.diff("u");
  CHECK(ZH == *K * H);

  PlanarSystem cla = parse_system_file(FIXTURES_DIR "/cla.txt");
  MultiPoly curve = x.pow(4) + MultiPoly::integer(2) * y * y -
                    MultiPoly::integer(1);
  auto Kc = invariant_cofactor(cla, curve);
  REQUIRE(Kc.has_value());
  CHECK(*Kc == MultiPoly::integer(-4) * y * y);

  PlanarSystem cla2 = parse_system_file(FIXTURES_DIR "/cla2.txt");
  MultiPoly curve2 = MultiPoly::integer(2) * x.pow(4) +
                     MultiPoly::integer(4) * y * y -
                     MultiPoly::integer(4) * x * x + V("b2");
  auto Kc2 = invariant_cofactor(cla2, curve2);
  REQUIRE(Kc2.has_value());
  CHECK(*Kc2 == MultiPoly::integer(8) * y * y);

  CHECK_FALSE(invariant_cofactor(cla, x + y - MultiPoly::integer(1)).has_value());
  CHECK_THROWS_AS((void)invariant_cofactor(cla, MultiPoly()), ZeroSurface);
}

TEST_CASE("heteroclinic integration follows the rigid cubic profile") {
  PlanarSystem sys = parse_system_file(FIXTURES_DIR "/ex1.txt");
  Sys3D s3 = build_3d(sys);
  double delta = 1e-3;
  double u0 = -1.0 + delta;
  double f0 = 1.0 / std::sqrt(3.0 - 2.0 * u0 * u0);
  Trajectory tr = integrate_heteroclinic(s3, f0, 0.0, delta, 1e-10);
  CHECK(tr.reached_plus);
  REQUIRE(!tr.samples.empty());
  double worst_f = 0.0, worst_g = 0.0;
  for (const auto& s : tr.samples) {
    double fe = 1.0 / std::sqrt(3.0 - 2.0 * s[3] * s[3]);
    worst_f = std::max(worst_f, std::abs(s[1] - fe));
    worst_g = std::max(worst_g, std::abs(s[2]));
  }
  CHECK(worst_f < 1e-6);
  CHECK(worst_g < 1e-6);
  CHECK(std::abs(tr.samples.back()[3] - (1.0 - delta)) < 1e-9);
}

TEST_CASE("trajectories preserve a verified invariant surface") {
  PlanarSystem sys = parse_system_file(FIXTURES_DIR "/ex2.txt");
  Sys3D s3 = build_3d(sys);
  MultiPoly f = V("f"), g = V("g"), u = V("u");
  MultiPoly H = MultiPoly::integer(2) * f * g -
                MultiPoly::integer(2) * u * (f * f - W() * g * g).pow(2);
  REQUIRE(invariant_cofactor(s3, H).has_value());
  CompiledPoly Hc(H, {"f", "g", "u"});
  CompiledPoly Hf(H.diff("f"), {"f", "g", "u"});
  CompiledPoly Hg(H.diff("g"), {"f", "g", "u"});
  CompiledPoly Hu(H.diff("u"), {"f", "g", "u"});

  double delta = 1e-3;
  double u0 = -1.0 + delta;
  double f0 = 0.5;
  // solve H(f0, g, u0) = 0 for g by bisection
  auto Hval = [&](double gv) { return Hc(std::vector<double>{f0, gv, u0}); };
  double lo = -1.0, hi = 0.0;
  REQUIRE(Hval(lo) * Hval(hi) < 0);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (Hval(lo) * Hval(mid) <= 0 ? hi : lo) = mid;
  }
  double g0 = 0.5 * (lo + hi);

  double tol = 1e-10;
  Trajectory tr = integrate_heteroclinic(s3, f0, g0, delta, tol);
  CHECK(tr.reached_plus);
  std::vector<double> p0 = {f0, g0, u0};
  double grad = std::sqrt(Hf(p0) * Hf(p0) + Hg(p0) * Hg(p0) + Hu(p0) * Hu(p0));
  double bound = 10.0 * tol * (1.0 + grad);
  double worst = 0.0;
  for (const auto& s : tr.samples)
    worst = std::max(worst, std::abs(Hc(std::vector<double>{s[1], s[2], s[3]})));
  CHECK(worst <= bound);
}

TEST_CASE("off-cycle starts still cross but leave the cycle profile") {
  PlanarSystem sys = parse_system_file(FIXTURES_DIR "/ex1.txt");
  Sys3D s3 = build_3d(sys);
  double delta = 1e-3;
  Trajectory tr = integrate_heteroclinic(s3, 0.2, 0.0, delta, 1e-10);
  CHECK(tr.reached_plus);
  const auto& last = tr.samples.back();
  double fe = 1.0 / std::sqrt(3.0 - 2.0 * last[3] * last[3]);
  CHECK(std::abs(last[1] - fe) > 1e-3);
}

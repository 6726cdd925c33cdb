#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "starcycle/bifurcate.hpp"
#include "starcycle/common.hpp"
#include "starcycle/decompose.hpp"
#include "starcycle/emit.hpp"
#include "starcycle/errors.hpp"
#include "starcycle/reversible.hpp"
#include "starcycle/system.hpp"
#include "starcycle/systems.hpp"

using nlohmann::json;
using namespace starcycle;

namespace {

std::map<std::string, Rational> parse_assignments(const std::string& text) {
  std::map<std::string, Rational> out;
  if (text.empty()) return out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw SyntaxError("expected name=value in: " + item);
    std::string name = item.substr(0, eq);
    while (!name.empty() && std::isspace(unsigned(name.back()))) name.pop_back();
    std::size_t a = 0;
    while (a < name.size() && std::isspace(unsigned(name[a]))) ++a;
    out[name.substr(a)] = parse_rational(item.substr(eq + 1));
  }
  return out;
}

PlanarSystem load_system(const std::string& path, const std::string& params) {
  PlanarSystem sys = parse_system_file(path);
  std::map<std::string, Rational> values = sys.bound_params();
  for (const auto& [k, v] : parse_assignments(params)) values[k] = v;
  return values.empty() ? sys : sys.bind(values);
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

json rf_to_json(const RationalFunction& rf) {
  return {{"num", poly_to_json(rf.num)}, {"den", poly_to_json(rf.den)}};
}

int run(int argc, char** argv) {
  CLI::App app{"star-like limit cycle toolkit"};
  app.require_subcommand(1);

  // decompose
  std::string de_expr, de_params;
  auto* de = app.add_subcommand("decompose", "v-split a polynomial in x, y");
  de->add_option("--expr", de_expr, "polynomial in x, y")->required();
  de->add_option("--param", de_params, "comma-separated parameter names");

  // fg
  std::string fg_system, fg_params;
  auto* fg = app.add_subcommand("fg", "implicit system for f(u), g(u)");
  fg->add_option("--system", fg_system, "system file")->required();
  fg->add_option("--params", fg_params, "name=value,... bindings");

  // threed
  std::string td_system, td_params;
  bool td_integrate = false;
  double td_f0 = 0, td_g0 = 0, td_delta = 1e-3, td_tol = 1e-10;
  auto* td = app.add_subcommand("threed", "3D polynomial system in (f, g, u)");
  td->add_option("--system", td_system, "system file")->required();
  td->add_option("--params", td_params, "name=value,... bindings");
  td->add_flag("--integrate", td_integrate, "integrate a heteroclinic candidate");
  td->add_option("--f0", td_f0, "initial f at u = -1+delta");
  td->add_option("--g0", td_g0, "initial g at u = -1+delta");
  td->add_option("--delta", td_delta, "offset from the u = -1 plane");
  td->add_option("--tol", td_tol, "integration tolerance");

  // invariant
  std::string inv_system, inv_params, inv_surface;
  bool inv_threed = false;
  auto* inv = app.add_subcommand("invariant", "cofactor of a candidate curve");
  inv->add_option("--system", inv_system, "system file")->required();
  inv->add_option("--params", inv_params, "name=value,... bindings");
  inv->add_option("--surface", inv_surface, "candidate polynomial")->required();
  inv->add_flag("--threed", inv_threed,
                "test against the 3D system in (f, g, u) instead of the plane");

  // common
  std::string cm_a, cm_b, cm_params, cm_candidate;
  bool cm_strip = false, cm_conditions = false;
  auto* cm = app.add_subcommand("common", "shared-trajectory conditions");
  cm->add_option("--a", cm_a, "first system file (df/du form)")->required();
  cm->add_option("--b", cm_b, "second system file (df/du form)")->required();
  cm->add_option("--params", cm_params, "name=value,... bindings");
  cm->add_option("--candidate", cm_candidate, "candidate common curve in f, u");
  cm->add_flag("--strip-before-derive", cm_strip,
               "strip content of h before the derivative step");
  cm->add_flag("--conditions", cm_conditions,
               "emit the elimination resultants even with free parameters");

  // reversible
  std::string rv_system, rv_params;
  auto* rv = app.add_subcommand("reversible", "algebraic limit cycle pipeline");
  rv->add_option("--system", rv_system, "system file")->required();
  rv->add_option("--params", rv_params, "name=value,... bindings");

  // bifurcate eval | scan
  auto* bf = app.add_subcommand("bifurcate", "bifurcation function N(rho)");
  bf->require_subcommand(1);
  std::string be_system, be_params;
  double be_rho = 0, be_quad_tol = 1e-10, be_ode_tol = 1e-10,
         be_delta_end = 1e-6;
  auto* be = bf->add_subcommand("eval", "evaluate N at one rho");
  be->add_option("--system", be_system, "system file")->required();
  be->add_option("--params", be_params, "name=value,... bindings");
  be->add_option("--rho", be_rho, "initial radius")->required();
  be->add_option("--quad-tol", be_quad_tol, "quadrature tolerance");
  be->add_option("--ode-tol", be_ode_tol, "ODE tolerance");
  be->add_option("--delta-end", be_delta_end, "clamp distance from u = +/-1");

  std::string bs_system, bs_params, bs_format = "json";
  double bs_min = 0, bs_max = 0, bs_quad_tol = 1e-10, bs_ode_tol = 1e-10,
         bs_delta_end = 1e-6;
  int bs_grid = 20, bs_jobs = 1;
  auto* bs = bf->add_subcommand("scan", "scan N over a rho grid");
  bs->add_option("--system", bs_system, "system file")->required();
  bs->add_option("--params", bs_params, "name=value,... bindings");
  bs->add_option("--rho-min", bs_min, "grid start")->required();
  bs->add_option("--rho-max", bs_max, "grid end")->required();
  bs->add_option("--grid", bs_grid, "grid size");
  bs->add_option("--quad-tol", bs_quad_tol, "quadrature tolerance");
  bs->add_option("--ode-tol", bs_ode_tol, "ODE tolerance");
  bs->add_option("--delta-end", bs_delta_end, "clamp distance from u = +/-1");
  bs->add_option("--jobs", bs_jobs, "worker threads");
  bs->add_option("--format", bs_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // periodic-fit
  std::string pf_csv;
  int pf_nodes = 64;
  auto* pf = app.add_subcommand("periodic-fit",
                                "fit f, g from samples of a periodic F");
  pf->add_option("--csv", pf_csv, "CSV file with theta,F rows")->required();
  pf->add_option("--nodes", pf_nodes, "number of Chebyshev nodes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e, std::cerr, std::cerr);
    return 2;
  }

  if (*de) {
    std::set<std::string> allowed = {"x", "y"};
    if (!de_params.empty()) {
      std::istringstream in(de_params);
      std::string name;
      while (std::getline(in, name, ',')) allowed.insert(name);
    }
    VParts parts = decompose_xy(parse_poly(de_expr, allowed));
    json j = {{"h0", poly_to_json(parts.h0)}, {"h1", poly_to_json(parts.h1)}};
    if (parts.even_refinement) {
      j["even_refinement"] = {
          {"k00", poly_to_json(parts.even_refinement->k00)},
          {"k01", poly_to_json(parts.even_refinement->k01)},
          {"k10", poly_to_json(parts.even_refinement->k10)}};
    }
    print_json(with_schema(j));
  } else if (*fg) {
    FGSystem sys = build_fg(load_system(fg_system, fg_params));
    print_json(with_schema({{"eq0", poly_to_json(sys.eq0)},
                            {"eq1", poly_to_json(sys.eq1)},
                            {"fprime", rf_to_json(sys.fprime)},
                            {"gprime", rf_to_json(sys.gprime)}}));
  } else if (*td) {
    Sys3D sys = build_3d(load_system(td_system, td_params));
    if (td_integrate) {
      Trajectory tr = integrate_heteroclinic(sys, td_f0, td_g0, td_delta, td_tol);
      std::vector<std::vector<double>> rows;
      for (const auto& s : tr.samples)
        rows.push_back({s[0], s[1], s[2], s[3]});
      std::cout << csv_table({"s", "f", "g", "u"}, rows);
    } else {
      json cancelled = json::array();
      for (const auto& c : sys.cancelled_factors)
        cancelled.push_back(poly_to_json(c));
      print_json(with_schema({{"df", poly_to_json(sys.df)},
                              {"dg", poly_to_json(sys.dg)},
                              {"du", poly_to_json(sys.du)},
                              {"cancelled_factors", cancelled}}));
    }
  } else if (*inv) {
    PlanarSystem sys = load_system(inv_system, inv_params);
    std::set<std::string> allowed = {"x", "y", "f", "g", "u"};
    for (const auto& [name, v] : sys.params) allowed.insert(name);
    MultiPoly H = parse_poly(inv_surface, allowed);
    std::optional<MultiPoly> K;
    if (inv_threed)
      K = invariant_cofactor(build_3d(sys), H);
    else
      K = invariant_cofactor(sys, H);
    json j = {{"invariant", K.has_value()}};
    if (K) j["cofactor"] = poly_to_json(*K);
    print_json(with_schema(j));
  } else if (*cm) {
    FUSystem a = parse_fu_system_file(cm_a);
    FUSystem b = parse_fu_system_file(cm_b);
    auto assignment = parse_assignments(cm_params);
    std::map<std::string, MultiPoly> binding;
    for (const auto& [k, v] : assignment)
      binding.emplace(k, MultiPoly::constant(v));
    for (const auto& [k, v] : a.params)
      if (v && !assignment.count(k)) {
        assignment[k] = *v;
        binding.emplace(k, MultiPoly::constant(*v));
      }
    for (const auto& [k, v] : b.params)
      if (v && !assignment.count(k)) {
        assignment[k] = *v;
        binding.emplace(k, MultiPoly::constant(*v));
      }
    FUSystem ab{a.P.subst(binding), a.Q.subst(binding), {}};
    FUSystem bb{b.P.subst(binding), b.Q.subst(binding), {}};
    CommonProblem cp = build_problem(ab, bb, cm_strip);

    json j = {{"h", poly_to_json(cp.h)},
              {"j1", poly_to_json(cp.j[0])},
              {"j2", poly_to_json(cp.j[1])},
              {"degenerate", cp.h.is_zero()}};

    bool bound = assignment.size() > 0 || (a.params.empty() && b.params.empty());
    if ((bound || cm_conditions) && !cp.h.is_zero()) {
      json conds = json::array();
      bool all_zero = true;
      for (int i = 1; i <= 2; ++i) {
        ConditionPair pair = condition_polys(cp, i);
        conds.push_back({{"i", i},
                         {"g_f", poly_to_json(pair.g_f)},
                         {"g_u", poly_to_json(pair.g_u)},
                         {"degenerate_u", pair.degenerate_u},
                         {"degenerate_f", pair.degenerate_f}});
        all_zero = all_zero && pair.g_f.is_zero() && pair.g_u.is_zero();
      }
      j["conditions"] = std::move(conds);
      j["necessary_condition_met"] = all_zero;
    } else if (cp.h.is_zero()) {
      j["necessary_condition_met"] = true;
    }

    if (!cm_candidate.empty()) {
      std::set<std::string> allowed = {"f", "u"};
      for (const auto& [name, v] : a.params) allowed.insert(name);
      for (const auto& [name, v] : b.params) allowed.insert(name);
      MultiPoly curve = parse_poly(cm_candidate, allowed);
      CurveReport rep = verify_common_curve(a, b, curve, assignment);
      json c = {{"common", rep.common},
                {"invariant_a", rep.invariant_a},
                {"invariant_b", rep.invariant_b}};
      if (rep.cofactor_a) c["cofactor_a"] = poly_to_json(*rep.cofactor_a);
      if (rep.cofactor_b) c["cofactor_b"] = poly_to_json(*rep.cofactor_b);
      j["candidate"] = std::move(c);
    }
    print_json(with_schema(j));
  } else if (*rv) {
    AlgebraicCurveResult res = reversible_pipeline(load_system(rv_system, rv_params));
    json j = {{"continuum", res.continuum}};
    if (!res.continuum) {
      j["h_fu"] = poly_to_json(res.h_fu);
      j["stripped"] = poly_to_json(res.stripped);
      j["curve_xy"] = poly_to_json(*res.curve_xy);
      if (res.cofactor) j["cofactor"] = poly_to_json(*res.cofactor);
      if (!res.sign_note.empty()) j["cofactor_sign"] = res.sign_note;
    }
    print_json(with_schema(j));
  } else if (*be) {
    ReversibleParts parts = reversible_parts(load_system(be_system, be_params));
    double N = N_eval(parts, be_rho, be_quad_tol, be_ode_tol, be_delta_end);
    print_json(with_schema({{"rho", be_rho}, {"N", N}}));
  } else if (*bs) {
    ReversibleParts parts = reversible_parts(load_system(bs_system, bs_params));
    ScanResult res = N_scan(parts, bs_min, bs_max, bs_grid, bs_quad_tol,
                            bs_ode_tol, bs_jobs, bs_delta_end);
    if (bs_format == "csv") {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < res.rhos.size(); ++i)
        rows.push_back({res.rhos[i], res.values[i]});
      std::cout << csv_table({"rho", "N"}, rows);
    } else {
      json zeros = json::array();
      for (const auto& z : res.zeros)
        zeros.push_back({{"lo", z.lo}, {"hi", z.hi}, {"root", z.root}});
      json rows = json::array();
      for (std::size_t i = 0; i < res.rhos.size(); ++i)
        rows.push_back({{"rho", res.rhos[i]}, {"N", res.values[i]}});
      json skipped = json::array();
      for (auto i : res.skipped) skipped.push_back(i);
      print_json(with_schema({{"values", rows},
                              {"zeros", zeros},
                              {"skipped", skipped},
                              {"identically_zero", res.identically_zero}}));
    }
  } else if (*pf) {
    std::ifstream in(pf_csv);
    if (!in) throw MissingField("cannot open file: " + pf_csv);
    std::vector<std::pair<double, double>> samples;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::size_t comma = line.find(',');
      if (comma == std::string::npos) continue;
      try {
        samples.emplace_back(std::stod(line.substr(0, comma)),
                             std::stod(line.substr(comma + 1)));
      } catch (const std::invalid_argument&) {
        continue;  // header row
      }
    }
    PeriodicFit fit = periodic_fit(samples, pf_nodes);
    print_json(with_schema({{"nodes", fit.nodes},
                            {"f", fit.f_vals},
                            {"g", fit.g_vals},
                            {"residual", fit.residual}}));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    json j = {{"schema", 1},
              {"error", {{"tag", e.tag()}, {"message", e.what()}}}};
    std::cout << j.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

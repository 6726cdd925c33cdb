#include "starcycle/emit.hpp"

#include <cstdio>

#include "starcycle/errors.hpp"

namespace starcycle {

nlohmann::json poly_to_json(const MultiPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  // Canonical order, highest term first.
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    nlohmann::json term;
    term["exps"] = it->first;
    term["num"] = it->second.get_num().get_str();
    term["den"] = it->second.get_den().get_str();
    terms.push_back(std::move(term));
  }
  return {{"vars", p.vars()}, {"terms", std::move(terms)}};
}

MultiPoly poly_from_json(const nlohmann::json& j) {
  std::vector<std::string> vars = j.at("vars").get<std::vector<std::string>>();
  MultiPoly::TermMap terms;
  for (const auto& t : j.at("terms")) {
    Expvec e = t.at("exps").get<Expvec>();
    if (e.size() != vars.size())
      throw UnsupportedFormat("polynomial JSON: exps/vars length mismatch");
    Rational c(mpz_class(t.at("num").get<std::string>()),
               mpz_class(t.at("den").get<std::string>()));
    c.canonicalize();
    terms.emplace(std::move(e), std::move(c));
  }
  return MultiPoly(std::move(vars), std::move(terms));
}

nlohmann::json with_schema(nlohmann::json j) {
  j["schema"] = 1;
  return j;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ",";
    out += header[i];
  }
  out += "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw UnsupportedFormat("csv row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += format_double(row[i]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace starcycle

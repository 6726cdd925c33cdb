#ifndef STARCYCLE_EMIT_HPP
#define STARCYCLE_EMIT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "starcycle/multipoly.hpp"

namespace starcycle {

// JSON schema (version 1): a polynomial is
//   {"vars": [names...], "terms": [{"exps": [ints...], "num": "p", "den": "q"}]}
// with terms in canonical (graded lexicographic) order, highest first, and
// num/den as decimal strings so arbitrary precision survives the round trip.
nlohmann::json poly_to_json(const MultiPoly& p);
MultiPoly poly_from_json(const nlohmann::json& j);

// Wrap a payload with the schema version tag.
nlohmann::json with_schema(nlohmann::json j);

// CSV with a header row; numbers are decimal with 17 significant digits.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

std::string format_double(double v);  // %.17g

}  // namespace starcycle

#endif

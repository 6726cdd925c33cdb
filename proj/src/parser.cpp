#include <cctype>
#include <fstream>
#include <sstream>

#include "starcycle/errors.hpp"
#include "starcycle/system.hpp"

namespace starcycle {

namespace {

// Recursive-descent expression parser.  Grammar: integer literals,
// identifiers, + - * / ^ and parentheses; ^ takes a non-negative integer
// exponent and binds tighter than unary minus; / is legal only with a
// nonzero constant divisor (rational literals are written p/q).
class ExprParser {
public:
  ExprParser(const std::string& text, const std::set<std::string>& allowed)
      : text_(text), allowed_(allowed) {}

  MultiPoly parse() {
    MultiPoly p = parse_sum();
    skip_ws();
    if (pos_ != text_.size())
      throw SyntaxError(err("unexpected character"));
    return p;
  }

private:
  const std::string& text_;
  const std::set<std::string>& allowed_;
  std::size_t pos_ = 0;

  std::string err(const std::string& what) const {
    std::ostringstream os;
    os << what << " at position " << pos_;
    return os.str();
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(unsigned(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  MultiPoly parse_sum() {
    MultiPoly acc = parse_product();
    for (;;) {
      if (eat('+'))
        acc = acc + parse_product();
      else if (eat('-'))
        acc = acc - parse_product();
      else
        return acc;
    }
  }

  MultiPoly parse_product() {
    MultiPoly acc = parse_factor();
    for (;;) {
      if (eat('*')) {
        acc = acc * parse_factor();
      } else if (eat('/')) {
        std::size_t at = pos_;
        MultiPoly d = parse_factor();
        if (!d.is_constant()) {
          pos_ = at;
          throw NonPolynomial(err("division by a non-constant"));
        }
        if (d.constant_value() == 0) {
          pos_ = at;
          throw DivisorZero(err("division by zero"));
        }
        acc = acc * (1 / d.constant_value());
      } else {
        return acc;
      }
    }
  }

  MultiPoly parse_factor() {
    if (eat('-')) return -parse_factor();
    if (eat('+')) return parse_factor();
    return parse_power();
  }

  MultiPoly parse_power() {
    MultiPoly base = parse_atom();
    while (eat('^')) {
      skip_ws();
      if (pos_ >= text_.size() || !std::isdigit(unsigned(text_[pos_])))
        throw SyntaxError(err("exponent must be a non-negative integer"));
      unsigned long e = parse_uint();
      base = base.pow(unsigned(e));
    }
    return base;
  }

  unsigned long parse_uint() {
    unsigned long v = 0;
    while (pos_ < text_.size() && std::isdigit(unsigned(text_[pos_]))) {
      v = v * 10 + unsigned(text_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  MultiPoly parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError(err("unexpected end of input"));
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly p = parse_sum();
      if (!eat(')')) throw SyntaxError(err("expected ')'"));
      return p;
    }
    if (std::isdigit(unsigned(c))) {
      mpz_class v(0);
      while (pos_ < text_.size() && std::isdigit(unsigned(text_[pos_]))) {
        v = v * 10 + (text_[pos_] - '0');
        ++pos_;
      }
      return MultiPoly::constant(Rational(v));
    }
    if (std::isalpha(unsigned(c)) || c == '_') {
      std::size_t at = pos_;
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(unsigned(text_[pos_])) || text_[pos_] == '_')) {
        name += text_[pos_];
        ++pos_;
      }
      if (!allowed_.count(name)) {
        pos_ = at;
        throw UnknownSymbol(err("unknown symbol '" + name + "'"));
      }
      return MultiPoly::var(name);
    }
    throw SyntaxError(err("unexpected character"));
  }
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingField("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// x^(2k) -> s^k; requires the polynomial to be even in x.
MultiPoly halve_x(const MultiPoly& p) {
  MultiPoly s = MultiPoly::var("s");
  MultiPoly result;
  auto coeffs = p.coeffs_wrt("x");
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    result = result + coeffs[k] * s.pow(unsigned(k / 2));
  }
  return result;
}

struct ParsedLines {
  std::map<std::string, std::string> fields;
  std::vector<std::pair<std::string, std::optional<Rational>>> params;
};

ParsedLines split_system_lines(const std::string& text,
                               const std::vector<std::string>& field_names) {
  ParsedLines out;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("param", 0) == 0 &&
        (line.size() == 5 || std::isspace(unsigned(line[5])))) {
      std::string rest = trim(line.substr(5));
      std::size_t eq = rest.find('=');
      if (eq == std::string::npos) {
        if (rest.empty()) throw SyntaxError("param line without a name");
        out.params.emplace_back(rest, std::nullopt);
      } else {
        std::string name = trim(rest.substr(0, eq));
        std::string value = trim(rest.substr(eq + 1));
        out.params.emplace_back(name, parse_rational(value));
      }
      continue;
    }
    bool matched = false;
    for (const auto& field : field_names) {
      if (line.rfind(field, 0) == 0) {
        std::string rest = trim(line.substr(field.size()));
        if (!rest.empty() && rest[0] == '=') {
          out.fields[field] = trim(rest.substr(1));
          matched = true;
          break;
        }
      }
    }
    if (!matched) throw SyntaxError("unrecognized line: " + line);
  }
  return out;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string t = trim(text);
  bool neg = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    neg = t[0] == '-';
    t = trim(t.substr(1));
  }
  std::size_t slash = t.find('/');
  auto digits = [](const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(unsigned(c))) return false;
    return true;
  };
  Rational v;
  std::size_t dot = t.find('.');
  if (slash == std::string::npos && dot != std::string::npos) {
    std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!digits(ip) || !digits(fp))
      throw SyntaxError("bad rational literal: " + text);
    mpz_class den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    v = Rational(mpz_class(ip) * den + mpz_class(fp.empty() ? "0" : fp), den);
    v.canonicalize();
  } else if (slash == std::string::npos) {
    if (!digits(t)) throw SyntaxError("bad rational literal: " + text);
    v = Rational(mpz_class(t));
  } else {
    std::string num = trim(t.substr(0, slash));
    std::string den = trim(t.substr(slash + 1));
    if (!digits(num) || !digits(den) || mpz_class(den) == 0)
      throw SyntaxError("bad rational literal: " + text);
    v = Rational(mpz_class(num), mpz_class(den));
    v.canonicalize();
  }
  return neg ? Rational(-v) : v;
}

MultiPoly parse_poly(const std::string& text,
                     const std::set<std::string>& allowed_vars) {
  return ExprParser(text, allowed_vars).parse();
}

std::map<std::string, Rational> PlanarSystem::bound_params() const {
  std::map<std::string, Rational> out;
  for (const auto& [name, value] : params)
    if (value) out[name] = *value;
  return out;
}

PlanarSystem PlanarSystem::bind(const std::map<std::string, Rational>& values) const {
  std::map<std::string, MultiPoly> binding;
  for (const auto& [name, v] : values) binding[name] = MultiPoly::constant(v);
  PlanarSystem out = *this;
  out.X = X.subst(binding);
  out.Y = Y.subst(binding);
  if (C) out.C = C->subst(binding);
  if (D) out.D = D->subst(binding);
  if (reversible) {
    out.A_sy = A_sy.subst(binding);
    out.B_sy = B_sy.subst(binding);
  }
  out.params.clear();
  for (const auto& [name, v] : params)
    if (!values.count(name)) out.params.emplace_back(name, v);
  return out;
}

PlanarSystem parse_system_text(const std::string& text) {
  ParsedLines lines =
      split_system_lines(text, {"eps dx", "eps dy", "dx", "dy"});
  if (!lines.fields.count("dx")) throw MissingField("missing field: dx");
  if (!lines.fields.count("dy")) throw MissingField("missing field: dy");
  std::set<std::string> allowed = {"x", "y"};
  for (const auto& [name, v] : lines.params) allowed.insert(name);

  PlanarSystem sys;
  sys.params = lines.params;
  sys.X = parse_poly(lines.fields.at("dx"), allowed);
  sys.Y = parse_poly(lines.fields.at("dy"), allowed);
  const bool has_eps_dx = lines.fields.count("eps dx") > 0;
  const bool has_eps_dy = lines.fields.count("eps dy") > 0;
  if (has_eps_dx != has_eps_dy)
    throw MissingField("perturbation needs both eps dx and eps dy");
  if (has_eps_dx) {
    sys.C = parse_poly(lines.fields.at("eps dx"), allowed);
    sys.D = parse_poly(lines.fields.at("eps dy"), allowed);
    // C(0,0) = D(0,0) = 0 after substituting bound parameter values.
    std::map<std::string, MultiPoly> origin = {{"x", MultiPoly()},
                                               {"y", MultiPoly()}};
    for (const auto& [name, value] : sys.params)
      if (value) origin[name] = MultiPoly::constant(*value);
    if (!sys.C->subst(origin).is_zero() || !sys.D->subst(origin).is_zero())
      throw PerturbationNotVanishingAtOrigin(
          "perturbation does not vanish at the origin");
  }

  // Reversible split: dx even in x, dy = x * (even in x).
  if (sys.X.is_even_in("x")) {
    auto q = exact_div(sys.Y, MultiPoly::var("x"));
    if (q && q->is_even_in("x")) {
      sys.reversible = true;
      sys.A_sy = halve_x(sys.X);
      sys.B_sy = halve_x(*q);
    }
  }
  return sys;
}

PlanarSystem parse_system_file(const std::string& path) {
  return parse_system_text(read_file(path));
}

FUSystem parse_fu_system_text(const std::string& text) {
  ParsedLines lines = split_system_lines(text, {"df", "du"});
  if (!lines.fields.count("df")) throw MissingField("missing field: df");
  if (!lines.fields.count("du")) throw MissingField("missing field: du");
  std::set<std::string> allowed = {"f", "u"};
  for (const auto& [name, v] : lines.params) allowed.insert(name);
  FUSystem sys;
  sys.params = lines.params;
  sys.P = parse_poly(lines.fields.at("df"), allowed);
  sys.Q = parse_poly(lines.fields.at("du"), allowed);
  return sys;
}

FUSystem parse_fu_system_file(const std::string& path) {
  return parse_fu_system_text(read_file(path));
}

}  // namespace starcycle

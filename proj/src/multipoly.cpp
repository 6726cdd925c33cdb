#include "starcycle/multipoly.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

#include "starcycle/errors.hpp"

namespace starcycle {

namespace {

int canonical_rank(const std::string& name) {
  static const char* fixed[] = {"f", "g", "u", "v", "x", "y", "r"};
  for (int i = 0; i < 7; ++i)
    if (name == fixed[i]) return i;
  return 7;
}

// Union of two tables: fixed names in canonical order, then parameters in
// order of first appearance (left table first).
std::vector<std::string> merge_tables(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
  std::vector<std::string> fixed_present;
  std::vector<std::string> params;
  auto absorb = [&](const std::vector<std::string>& t) {
    for (const auto& n : t) {
      if (canonical_rank(n) < 7) {
        if (std::find(fixed_present.begin(), fixed_present.end(), n) ==
            fixed_present.end())
          fixed_present.push_back(n);
      } else if (std::find(params.begin(), params.end(), n) == params.end()) {
        params.push_back(n);
      }
    }
  };
  absorb(a);
  absorb(b);
  std::sort(fixed_present.begin(), fixed_present.end(),
            [](const std::string& l, const std::string& r) {
              return canonical_rank(l) < canonical_rank(r);
            });
  fixed_present.insert(fixed_present.end(), params.begin(), params.end());
  return fixed_present;
}

}  // namespace

bool GrlexLess::operator()(const Expvec& a, const Expvec& b) const {
  long da = std::accumulate(a.begin(), a.end(), 0L);
  long db = std::accumulate(b.begin(), b.end(), 0L);
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

MultiPoly::MultiPoly(std::vector<std::string> vars, TermMap terms)
    : vars_(std::move(vars)), terms_(std::move(terms)) {
  prune_zeros();
}

void MultiPoly::prune_zeros() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0)
      it = terms_.erase(it);
    else
      ++it;
  }
}

MultiPoly MultiPoly::constant(const Rational& c) {
  MultiPoly p;
  Rational v = c;
  v.canonicalize();
  if (v != 0) p.terms_.emplace(Expvec{}, v);
  return p;
}

MultiPoly MultiPoly::var(const std::string& name) {
  MultiPoly p;
  p.vars_ = {name};
  p.terms_.emplace(Expvec{1}, Rational(1));
  return p;
}

bool MultiPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const Expvec& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int32_t k) { return k == 0; });
}

Rational MultiPoly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  return terms_.begin()->second;
}

int MultiPoly::var_index(const std::string& name) const {
  auto it = std::find(vars_.begin(), vars_.end(), name);
  return it == vars_.end() ? -1 : int(it - vars_.begin());
}

MultiPoly MultiPoly::remapped(const std::vector<std::string>& new_vars) const {
  std::vector<int> pos(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::find(new_vars.begin(), new_vars.end(), vars_[i]);
    assert(it != new_vars.end());
    pos[i] = int(it - new_vars.begin());
  }
  TermMap out;
  for (const auto& [e, c] : terms_) {
    Expvec ne(new_vars.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) ne[pos[i]] = e[i];
    out.emplace(std::move(ne), c);
  }
  MultiPoly p;
  p.vars_ = new_vars;
  p.terms_ = std::move(out);
  return p;
}

void MultiPoly::align(MultiPoly& a, MultiPoly& b) {
  if (a.vars_ == b.vars_) return;
  auto merged = merge_tables(a.vars_, b.vars_);
  a = a.remapped(merged);
  b = b.remapped(merged);
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  MultiPoly a = *this, b = o;
  align(a, b);
  for (const auto& [e, c] : b.terms_) {
    auto [it, fresh] = a.terms_.emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) a.terms_.erase(it);
    }
  }
  return a;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly p = *this;
  for (auto& [e, c] : p.terms_) c = -c;
  return p;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + (-o); }

MultiPoly MultiPoly::operator*(const Rational& k) const {
  if (k == 0) return MultiPoly();
  MultiPoly p = *this;
  for (auto& [e, c] : p.terms_) c *= k;
  return p;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  MultiPoly a = *this, b = o;
  align(a, b);
  MultiPoly out;
  out.vars_ = a.vars_;
  const std::size_t nv = a.vars_.size();
  Expvec e(nv);
  Rational c;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < nv; ++i) e[i] = ea[i] + eb[i];
      c = ca * cb;
      auto [it, fresh] = out.terms_.emplace(e, c);
      if (!fresh) {
        it->second += c;
        if (it->second == 0) out.terms_.erase(it);
      }
    }
  }
  return out;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly r = MultiPoly::integer(1);
  MultiPoly base = *this;
  while (e) {
    if (e & 1u) r = r * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return r;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
  MultiPoly a = *this, b = o;
  align(a, b);
  return a.terms_ == b.terms_;
}

MultiPoly MultiPoly::diff(const std::string& name) const {
  int idx = var_index(name);
  if (idx < 0) return MultiPoly();
  MultiPoly out;
  out.vars_ = vars_;
  for (const auto& [e, c] : terms_) {
    if (e[idx] == 0) continue;
    Expvec ne = e;
    ne[idx] -= 1;
    out.terms_.emplace(std::move(ne), c * e[idx]);
  }
  return out;
}

MultiPoly MultiPoly::subst(const std::map<std::string, MultiPoly>& bindings) const {
  // Per-variable replacement polynomials; unbound variables map to themselves.
  std::vector<const MultiPoly*> repl(vars_.size(), nullptr);
  std::vector<MultiPoly> self;
  self.reserve(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = bindings.find(vars_[i]);
    if (it != bindings.end()) {
      repl[i] = &it->second;
    } else {
      self.push_back(MultiPoly::var(vars_[i]));
      repl[i] = &self.back();
    }
  }
  // Power caches.
  std::vector<std::vector<MultiPoly>> powers(vars_.size());
  auto power_of = [&](std::size_t i, int32_t e) -> const MultiPoly& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(MultiPoly::integer(1));
    while (int32_t(cache.size()) <= e) cache.push_back(cache.back() * (*repl[i]));
    return cache[e];
  };
  MultiPoly out;
  for (const auto& [e, c] : terms_) {
    MultiPoly term = MultiPoly::constant(c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) term = term * power_of(i, e[i]);
    out = out + term;
  }
  return out;
}

Rational MultiPoly::eval(const std::map<std::string, Rational>& point) const {
  std::vector<bool> used(vars_.size(), false);
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) used[i] = true;
  std::vector<Rational> vals(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = point.find(vars_[i]);
    if (it == point.end()) {
      if (used[i])
        throw UnknownSymbol("eval: variable not bound: " + vars_[i]);
      continue;
    }
    vals[i] = it->second;
  }
  std::vector<std::vector<Rational>> powers(vars_.size());
  auto power_of = [&](std::size_t i, int32_t e) -> const Rational& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Rational(1));
    while (int32_t(cache.size()) <= e) cache.push_back(cache.back() * vals[i]);
    return cache[e];
  };
  Rational acc(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) t *= power_of(i, e[i]);
    acc += t;
  }
  return acc;
}

int MultiPoly::degree(const std::string& name) const {
  if (terms_.empty()) return -1;
  int idx = var_index(name);
  if (idx < 0) return 0;
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, int(e[idx]));
  return d;
}

int MultiPoly::total_degree() const {
  if (terms_.empty()) return -1;
  long d = 0;
  for (const auto& [e, c] : terms_)
    d = std::max(d, std::accumulate(e.begin(), e.end(), 0L));
  return int(d);
}

bool MultiPoly::depends_on(const std::string& name) const {
  return degree(name) > 0;
}

std::vector<MultiPoly> MultiPoly::coeffs_wrt(const std::string& name) const {
  if (terms_.empty()) return {};
  int d = degree(name);
  int idx = var_index(name);
  std::vector<MultiPoly> out(std::size_t(d) + 1);
  for (auto& q : out) q.vars_ = vars_;
  for (const auto& [e, c] : terms_) {
    int k = idx < 0 ? 0 : e[idx];
    Expvec ne = e;
    if (idx >= 0) ne[idx] = 0;
    out[k].terms_.emplace(std::move(ne), c);
  }
  return out;
}

bool MultiPoly::is_even_in(const std::string& name) const {
  int idx = var_index(name);
  if (idx < 0) return true;
  for (const auto& [e, c] : terms_)
    if (e[idx] % 2 != 0) return false;
  return true;
}

MultiPoly MultiPoly::negate_var(const std::string& name) const {
  int idx = var_index(name);
  if (idx < 0) return *this;
  MultiPoly out;
  out.vars_ = vars_;
  for (const auto& [e, c] : terms_)
    out.terms_.emplace(e, (e[idx] % 2 != 0) ? -c : c);
  return out;
}

std::string MultiPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest term first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    bool has_var = std::any_of(e.begin(), e.end(), [](int32_t k) { return k > 0; });
    bool factor_written = false;
    if (a != 1 || !has_var) {
      os << a.get_str();
      factor_written = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (factor_written) os << "*";
      os << vars_[i];
      if (e[i] > 1) os << "^" << e[i];
      factor_written = true;
    }
    first = false;
  }
  return os.str();
}

std::optional<MultiPoly> exact_div(const MultiPoly& p, const MultiPoly& d) {
  if (d.is_zero()) throw DivisorZero("exact_div: divisor is zero");
  if (p.is_zero()) return MultiPoly();
  MultiPoly a = p, b = d;
  MultiPoly::align(a, b);
  if (b.is_constant()) {
    Rational inv = 1 / b.constant_value();
    return a * inv;
  }
  const Expvec& lb = b.terms_.rbegin()->first;
  const Rational& cb = b.terms_.rbegin()->second;
  MultiPoly quotient;
  quotient.vars_ = a.vars_;
  MultiPoly::TermMap rem = a.terms_;
  const std::size_t nv = a.vars_.size();
  Expvec q(nv), e(nv);
  while (!rem.empty()) {
    const Expvec& lr = rem.rbegin()->first;
    for (std::size_t i = 0; i < nv; ++i) {
      q[i] = lr[i] - lb[i];
      if (q[i] < 0) return std::nullopt;
    }
    Rational qc = rem.rbegin()->second / cb;
    // leading exponents strictly decrease, so no duplicate keys here
    quotient.terms_.emplace(q, qc);
    for (const auto& [eb, cv] : b.terms_) {
      for (std::size_t i = 0; i < nv; ++i) e[i] = q[i] + eb[i];
      auto it = rem.find(e);
      if (it == rem.end()) {
        rem.emplace(e, -(qc * cv));
      } else {
        it->second -= qc * cv;
        if (it->second == 0) rem.erase(it);
      }
    }
  }
  return quotient;
}

std::pair<MultiPoly, MultiPoly> strip_content(const MultiPoly& p) {
  if (p.is_zero()) throw ZeroPolynomial("strip_content: zero polynomial");
  // Rational content: gcd of numerators over lcm of denominators.
  mpz_class gnum(0), lden(1);
  for (const auto& [e, c] : p.terms_) {
    mpz_class num = abs(c.get_num());
    mpz_class den = c.get_den();
    mpz_gcd(gnum.get_mpz_t(), gnum.get_mpz_t(), num.get_mpz_t());
    mpz_lcm(lden.get_mpz_t(), lden.get_mpz_t(), den.get_mpz_t());
  }
  Rational content(gnum, lden);
  content.canonicalize();
  // Monomial content: minimum exponent per variable.
  const std::size_t nv = p.vars().size();
  Expvec mono(nv, INT32_MAX);
  for (const auto& [e, c] : p.terms_)
    for (std::size_t i = 0; i < nv; ++i) mono[i] = std::min(mono[i], e[i]);
  // Sign so the primitive part's leading coefficient is positive.
  if (p.terms_.rbegin()->second < 0) content = -content;
  MultiPoly::TermMap prim_terms;
  for (const auto& [e, c] : p.terms_) {
    Expvec ne(nv);
    for (std::size_t i = 0; i < nv; ++i) ne[i] = e[i] - mono[i];
    prim_terms.emplace(std::move(ne), c / content);
  }
  MultiPoly primitive(p.vars(), std::move(prim_terms));
  MultiPoly::TermMap cont_terms;
  cont_terms.emplace(mono, content);
  MultiPoly content_poly(p.vars(), std::move(cont_terms));
  return {primitive, content_poly};
}

std::pair<MultiPoly, MultiPoly> v_split(const MultiPoly& p) {
  MultiPoly a = p;
  // Make sure u and v exist in the table so the replacement is expressible.
  MultiPoly uv = MultiPoly::var("u") * MultiPoly::var("v");
  MultiPoly::align(a, uv);
  int vidx = -1;
  for (std::size_t i = 0; i < a.vars_.size(); ++i)
    if (a.vars_[i] == "v") vidx = int(i);
  MultiPoly one_minus_u2 =
      MultiPoly::integer(1) - MultiPoly::var("u") * MultiPoly::var("u");
  std::vector<MultiPoly> pow_cache = {MultiPoly::integer(1)};
  auto omu_pow = [&](int k) -> const MultiPoly& {
    while (int(pow_cache.size()) <= k)
      pow_cache.push_back(pow_cache.back() * one_minus_u2);
    return pow_cache[k];
  };
  MultiPoly p0, p1;
  for (const auto& [e, c] : a.terms_) {
    int32_t ve = e[vidx];
    Expvec ne = e;
    ne[vidx] = 0;
    MultiPoly::TermMap one;
    one.emplace(std::move(ne), c);
    MultiPoly base(a.vars_, std::move(one));
    if (ve % 2 == 0)
      p0 = p0 + base * omu_pow(ve / 2);
    else
      p1 = p1 + base * omu_pow((ve - 1) / 2);
  }
  return {p0, p1};
}

RationalFunction::RationalFunction(MultiPoly n, MultiPoly d) {
  if (d.is_zero()) throw DivisorZero("RationalFunction: zero denominator");
  if (n.is_zero()) {
    num = MultiPoly();
    den = std::move(d);
    return;
  }
  MultiPoly a = std::move(n), b = std::move(d);
  MultiPoly::align(a, b);
  const std::size_t nv = a.vars().size();
  Expvec shared(nv, INT32_MAX);
  auto scan = [&](const MultiPoly& p) {
    for (const auto& [e, c] : p.terms())
      for (std::size_t i = 0; i < nv; ++i)
        shared[i] = std::min(shared[i], e[i]);
  };
  scan(a);
  scan(b);
  MultiPoly::TermMap mono;
  mono.emplace(shared, Rational(1));
  MultiPoly shared_mono(a.vars(), std::move(mono));
  num = *exact_div(a, shared_mono);
  den = *exact_div(b, shared_mono);
}

double to_double(const Rational& q) { return q.get_d(); }

CompiledPoly::CompiledPoly(const MultiPoly& p,
                           const std::vector<std::string>& arg_order) {
  const auto& vars = p.vars();
  std::vector<std::size_t> slot(vars.size(), SIZE_MAX);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (std::size_t j = 0; j < arg_order.size(); ++j)
      if (arg_order[j] == vars[i]) slot[i] = j;
  }
  for (const auto& [e, c] : p.terms()) {
    Term t;
    t.coeff = to_double(c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (slot[i] == SIZE_MAX)
        throw UnknownSymbol("unbound symbol in numeric evaluation: " + vars[i]);
      t.powers.emplace_back(slot[i], e[i]);
    }
    terms_.push_back(std::move(t));
  }
}

double CompiledPoly::operator()(const double* args) const {
  double acc = 0.0;
  for (const auto& t : terms_) {
    double term = t.coeff;
    for (const auto& [idx, exp] : t.powers) {
      double base = args[idx], pw = 1.0;
      for (int32_t k = 0; k < exp; ++k) pw *= base;
      term *= pw;
    }
    acc += term;
  }
  return acc;
}

}  // namespace starcycle

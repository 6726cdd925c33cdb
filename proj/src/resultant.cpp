#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "starcycle/errors.hpp"
#include "starcycle/multipoly.hpp"

// Sylvester resultants.  The base algorithm is fraction-free Bareiss
// elimination over the polynomial ring.  For big matrices whose entries keep
// two or more variables alive that route blows up, so we switch to dense
// evaluation at integer points (fraction-free Bareiss on the evaluated
// integer matrices) followed by Newton interpolation, with randomized
// post-verification against direct determinant evaluations and a fallback to
// worst-case degree bounds if the probed degrees turn out short.

namespace starcycle {

namespace {

// Fraction-free Bareiss determinant over the polynomial ring.
MultiPoly bareiss_ring(std::vector<std::vector<MultiPoly>> m) {
  const std::size_t n = m.size();
  MultiPoly prev = MultiPoly::integer(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return MultiPoly();
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        MultiPoly num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        auto q = exact_div(num, prev);
        m[i][j] = std::move(*q);  // exact by Sylvester's identity
      }
      m[i][k] = MultiPoly();
    }
    prev = m[k][k];
  }
  MultiPoly det = m[n - 1][n - 1];
  return sign < 0 ? -det : det;
}

// Determinant of a rational matrix: scale rows to integers, integer Bareiss,
// divide the row scales back out.
Rational det_rational(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n));
  mpz_class scale(1);
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class l(1);
    for (std::size_t j = 0; j < n; ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a[i][j].get_den().get_mpz_t());
    for (std::size_t j = 0; j < n; ++j) {
      Rational s = a[i][j] * Rational(l);
      m[i][j] = s.get_num();  // s is integral
    }
    scale *= l;
  }
  mpz_class prev(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return Rational(0);
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  Rational det(m[n - 1][n - 1], scale);
  det.canonicalize();
  if (sign < 0) det = -det;
  return det;
}

struct Sylvester {
  std::vector<MultiPoly> pc, qc;  // coefficients in `var`, ascending
  int m = 0, n = 0;               // degrees of p and q in `var`
  std::vector<std::string> survivors;

  std::size_t size() const { return std::size_t(m + n); }

  std::vector<std::vector<MultiPoly>> ring_matrix() const {
    const std::size_t N = size();
    std::vector<std::vector<MultiPoly>> a(N, std::vector<MultiPoly>(N));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= m; ++j) a[i][i + j] = pc[m - j];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= n; ++j) a[n + i][i + j] = qc[n - j];
    return a;
  }

  Rational det_at(const std::map<std::string, Rational>& point) const {
    const std::size_t N = size();
    std::vector<Rational> pv(pc.size()), qv(qc.size());
    for (std::size_t i = 0; i < pc.size(); ++i) pv[i] = pc[i].eval(point);
    for (std::size_t i = 0; i < qc.size(); ++i) qv[i] = qc[i].eval(point);
    std::vector<std::vector<Rational>> a(N, std::vector<Rational>(N, Rational(0)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= m; ++j) a[i][i + j] = pv[m - j];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= n; ++j) a[n + i][i + j] = qv[n - j];
    return det_rational(std::move(a));
  }
};

// Evaluation points 0, 1, -1, 2, -2, ...
Rational grid_point(int k) {
  int t = (k + 1) / 2;
  return Rational(k % 2 == 1 ? t : -t);
}

// Newton interpolation with polynomial-valued samples at rational nodes.
MultiPoly newton_interpolate(const std::string& var,
                             const std::vector<Rational>& nodes,
                             std::vector<MultiPoly> values) {
  const std::size_t d = nodes.size();
  for (std::size_t j = 1; j < d; ++j)
    for (std::size_t i = d - 1; i >= j; --i) {
      Rational inv = 1 / (nodes[i] - nodes[i - j]);
      values[i] = (values[i] - values[i - 1]) * inv;
      if (i == j) break;
    }
  MultiPoly x = MultiPoly::var(var);
  MultiPoly acc = values[d - 1];
  for (std::size_t i = d - 1; i > 0; --i)
    acc = acc * (x - MultiPoly::constant(nodes[i - 1])) + values[i - 1];
  return acc;
}

MultiPoly interpolate_recursive(const Sylvester& syl,
                                const std::vector<std::string>& order,
                                const std::vector<int>& degs, std::size_t level,
                                std::map<std::string, Rational>& point) {
  const std::string& w = order[level];
  const int d = degs[level];
  std::vector<Rational> nodes(std::size_t(d) + 1);
  std::vector<MultiPoly> values(std::size_t(d) + 1);
  for (int k = 0; k <= d; ++k) {
    nodes[k] = grid_point(k);
    point[w] = nodes[k];
    if (level + 1 == order.size())
      values[k] = MultiPoly::constant(syl.det_at(point));
    else
      values[k] =
          interpolate_recursive(syl, order, degs, level + 1, point);
  }
  point.erase(w);
  return newton_interpolate(w, nodes, values);
}

// --- modular grid evaluation ---
//
// The dense grid is evaluated modulo word-size primes: determinants over
// Z/p are cheap, Newton interpolation runs on machine words, and the exact
// coefficients come back through CRT with symmetric lifting.  The candidate
// is accepted only after the exact randomized post-verification below, so a
// shortage of primes (or a short probed degree) only costs another round.

using u64 = std::uint64_t;

u64 addmod(u64 a, u64 b, u64 p) {
  a += b;
  return a >= p ? a - p : a;
}
u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

// Multiplication modulo a fixed prime with Barrett reduction; valid for the
// primes used here, which sit just above 2^62 (so mu fits a word and the
// correction loop stays within u64).
struct Mod {
  u64 p = 0;
  u64 mu = 0;  // floor(2^126 / p)
  Mod() = default;
  explicit Mod(u64 prime)
      : p(prime), mu(u64(((unsigned __int128)1 << 126) / prime)) {}
  u64 mul(u64 a, u64 b) const {
    unsigned __int128 t = (unsigned __int128)a * b;
    u64 q = u64(((unsigned __int128)u64(t >> 62) * mu) >> 64);
    unsigned __int128 r = t - (unsigned __int128)q * p;
    while (r >= p) r -= p;
    return u64(r);
  }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  u64 inv(u64 a) const { return pow(a, p - 2); }
};

u64 rat_mod(const Rational& q, const Mod& M, bool& ok) {
  u64 den = mpz_fdiv_ui(q.get_den().get_mpz_t(), M.p);
  if (den == 0) {
    ok = false;
    return 0;
  }
  u64 num = mpz_fdiv_ui(q.get_num().get_mpz_t(), M.p);
  return M.mul(num, M.inv(den));
}

u64 nth_mod_prime(std::size_t i) {
  static std::vector<u64> cache;
  static mpz_class cur = mpz_class(1) << 62;
  while (cache.size() <= i) {
    mpz_nextprime(cur.get_mpz_t(), cur.get_mpz_t());
    cache.push_back(mpz_get_ui(cur.get_mpz_t()));
  }
  return cache[i];
}

// Coefficient polynomials of the Sylvester inputs with residues for the
// rational coefficients and exponents re-indexed by interpolation level.
struct ModOracle {
  Mod M;
  int m = 0, n = 0;
  struct Term {
    u64 c;
    std::vector<int32_t> e;  // indexed by level in `order`
  };
  std::vector<std::vector<Term>> pc, qc;
  std::vector<int> maxexp;  // per level
  bool ok = true;
};

ModOracle make_mod_oracle(const Sylvester& syl,
                          const std::vector<std::string>& order, const Mod& M) {
  ModOracle o;
  o.M = M;
  o.m = syl.m;
  o.n = syl.n;
  o.maxexp.assign(order.size(), 0);
  auto convert = [&](const std::vector<MultiPoly>& src,
                     std::vector<std::vector<ModOracle::Term>>& dst) {
    dst.resize(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
      const auto& vars = src[i].vars();
      std::vector<int> lvl(vars.size(), -1);
      for (std::size_t v = 0; v < vars.size(); ++v)
        for (std::size_t l = 0; l < order.size(); ++l)
          if (vars[v] == order[l]) lvl[v] = int(l);
      for (const auto& [e, c] : src[i].terms()) {
        ModOracle::Term t;
        t.c = rat_mod(c, M, o.ok);
        t.e.assign(order.size(), 0);
        for (std::size_t v = 0; v < e.size(); ++v) {
          if (e[v] == 0) continue;
          t.e[lvl[v]] = e[v];
          o.maxexp[lvl[v]] = std::max(o.maxexp[lvl[v]], int(e[v]));
        }
        dst[i].push_back(std::move(t));
      }
    }
  };
  convert(syl.pc, o.pc);
  convert(syl.qc, o.qc);
  return o;
}

// `scratch` avoids reallocating the matrix for every grid point.
u64 sylv_det_mod(const std::vector<u64>& pv, const std::vector<u64>& qv, int m,
                 int n, const Mod& M, std::vector<u64>& scratch) {
  const u64 p = M.p;
  const std::size_t N = std::size_t(m + n);
  scratch.assign(N * N, 0);
  u64* a = scratch.data();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) a[i * N + i + j] = pv[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) a[(n + i) * N + i + j] = qv[n - j];
  u64 det = 1;
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t r = k;
    while (r < N && a[r * N + k] == 0) ++r;
    if (r == N) return 0;
    if (r != k) {
      std::swap_ranges(a + r * N, a + (r + 1) * N, a + k * N);
      det = submod(0, det, p);
    }
    det = M.mul(det, a[k * N + k]);
    u64 inv = M.inv(a[k * N + k]);
    for (std::size_t i = k + 1; i < N; ++i) {
      if (a[i * N + k] == 0) continue;
      u64 fac = M.mul(a[i * N + k], inv);
      for (std::size_t j = k; j < N; ++j)
        a[i * N + j] = submod(a[i * N + j], M.mul(fac, a[k * N + j]), p);
    }
  }
  return det;
}

// Univariate coefficient arrays in order[level] with outer levels fixed by
// the power tables in `pows`.
void specialize_uni(const ModOracle& o,
                    const std::vector<std::vector<u64>>& pows,
                    std::size_t level, std::vector<std::vector<u64>>& upc,
                    std::vector<std::vector<u64>>& uqc) {
  const Mod& M = o.M;
  auto specialize = [&](const std::vector<std::vector<ModOracle::Term>>& src,
                        std::vector<std::vector<u64>>& dst) {
    dst.assign(src.size(), {});
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i].assign(std::size_t(o.maxexp[level]) + 1, 0);
      for (const auto& t : src[i]) {
        u64 val = t.c;
        for (std::size_t l = 0; l < level; ++l)
          if (t.e[l]) val = M.mul(val, pows[l][t.e[l]]);
        dst[i][t.e[level]] = addmod(dst[i][t.e[level]], val, M.p);
      }
    }
  };
  specialize(o.pc, upc);
  specialize(o.qc, uqc);
}

u64 horner_mod(const std::vector<u64>& c, u64 x, const Mod& M) {
  u64 acc = 0;
  for (std::size_t i = c.size(); i > 0; --i)
    acc = addmod(M.mul(acc, x), c[i - 1], M.p);
  return acc;
}

u64 node_residue(int k, u64 p) {
  long node = grid_point(k).get_num().get_si();
  return node >= 0 ? u64(node) % p : p - u64(-node) % p;
}

// Dense monomial coefficients over order[level..], innermost index fastest.
std::vector<u64> grid_interp_mod(const ModOracle& o,
                                 const std::vector<int>& degs,
                                 std::size_t level,
                                 std::vector<std::vector<u64>>& pows,
                                 std::vector<u64>& det_scratch) {
  const Mod& M = o.M;
  const u64 p = M.p;
  const int d = degs[level];
  std::vector<u64> noderes(std::size_t(d) + 1);
  std::vector<std::vector<u64>> samples(std::size_t(d) + 1);
  const bool base = level + 1 == degs.size();

  std::vector<std::vector<u64>> upc, uqc;
  if (base) specialize_uni(o, pows, level, upc, uqc);

  std::vector<u64> pv, qv;
  for (int k = 0; k <= d; ++k) {
    noderes[k] = node_residue(k, p);
    if (base) {
      pv.resize(upc.size());
      qv.resize(uqc.size());
      for (std::size_t i = 0; i < upc.size(); ++i)
        pv[i] = horner_mod(upc[i], noderes[k], M);
      for (std::size_t i = 0; i < uqc.size(); ++i)
        qv[i] = horner_mod(uqc[i], noderes[k], M);
      samples[k] = {sylv_det_mod(pv, qv, o.m, o.n, M, det_scratch)};
    } else {
      auto& tab = pows[level];
      tab.assign(std::size_t(o.maxexp[level]) + 1, 1);
      for (int e = 1; e <= o.maxexp[level]; ++e)
        tab[e] = M.mul(tab[std::size_t(e) - 1], noderes[k]);
      samples[k] = grid_interp_mod(o, degs, level + 1, pows, det_scratch);
    }
  }

  const std::size_t B = samples[0].size();
  for (int j = 1; j <= d; ++j)
    for (int i = d; i >= j; --i) {
      u64 inv = M.inv(submod(noderes[i], noderes[i - j], p));
      for (std::size_t t = 0; t < B; ++t)
        samples[i][t] = M.mul(submod(samples[i][t], samples[i - 1][t], p), inv);
    }

  // Newton form to monomial coefficients
  std::vector<u64> acc(std::size_t(d + 1) * B, 0);
  std::copy(samples[d].begin(), samples[d].end(), acc.begin());
  int cd = 0;
  for (int i = d - 1; i >= 0; --i) {
    u64 c = noderes[i];
    for (int j = cd + 1; j >= 0; --j) {
      u64* cur = &acc[std::size_t(j) * B];
      const u64* prev = j > 0 ? &acc[std::size_t(j - 1) * B] : nullptr;
      for (std::size_t t = 0; t < B; ++t)
        cur[t] = submod(prev ? prev[t] : 0, M.mul(c, cur[t]), p);
    }
    for (std::size_t t = 0; t < B; ++t)
      acc[t] = addmod(acc[t], samples[i][t], p);
    ++cd;
  }
  return acc;
}

bool verify_candidate(const Sylvester& syl, const MultiPoly& res, int trials);

// Candidate check against direct determinant evaluations at pseudo-random
// points modulo primes that did not participate in the CRT reconstruction.
bool verify_candidate_mod(const Sylvester& syl,
                          const std::vector<std::string>& order,
                          const MultiPoly& res, std::size_t first_fresh_prime,
                          int trials) {
  std::uint64_t state = 0xd1b54a32d192ed03ull + first_fresh_prime;
  auto next = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  for (std::size_t pi = 0; pi < 2; ++pi) {
    u64 p = nth_mod_prime(first_fresh_prime + pi);
    ModOracle o = make_mod_oracle(syl, order, p);
    if (!o.ok) return false;
    // residues of the candidate's coefficients, exponents by level
    bool cok = true;
    std::vector<ModOracle::Term> rterms;
    {
      const auto& vars = res.vars();
      std::vector<int> lvl(vars.size(), -1);
      for (std::size_t v = 0; v < vars.size(); ++v)
        for (std::size_t l = 0; l < order.size(); ++l)
          if (vars[v] == order[l]) lvl[v] = int(l);
      for (const auto& [e, c] : res.terms()) {
        ModOracle::Term t;
        t.c = rat_mod(c, p, cok);
        t.e.assign(order.size(), 0);
        for (std::size_t v = 0; v < e.size(); ++v) {
          if (e[v] == 0) continue;
          if (lvl[v] < 0) return false;  // stray variable
          t.e[lvl[v]] = e[v];
        }
        rterms.push_back(std::move(t));
      }
      if (!cok) return false;
    }
    for (int t = 0; t < trials; ++t) {
      std::vector<u64> point(order.size());
      for (auto& v : point) v = next() % p;
      std::vector<u64> pv(o.pc.size()), qv(o.qc.size());
      auto eval_terms = [&](const std::vector<ModOracle::Term>& terms) {
        u64 acc = 0;
        for (const auto& tm : terms) {
          u64 val = tm.c;
          for (std::size_t l = 0; l < order.size(); ++l)
            if (tm.e[l]) val = mulmod(val, powmod(point[l], u64(tm.e[l]), p), p);
          acc = addmod(acc, val, p);
        }
        return acc;
      };
      for (std::size_t i = 0; i < o.pc.size(); ++i) pv[i] = eval_terms(o.pc[i]);
      for (std::size_t i = 0; i < o.qc.size(); ++i) qv[i] = eval_terms(o.qc[i]);
      if (eval_terms(rterms) != sylv_det_mod(pv, qv, o.m, o.n, p)) return false;
    }
  }
  return true;
}

std::optional<MultiPoly> modular_resultant(
    const Sylvester& syl, const std::vector<std::string>& order,
    const std::vector<int>& degs, const std::vector<std::string>& table) {
  std::size_t total = 1;
  for (int d : degs) total *= std::size_t(d) + 1;
  std::vector<std::size_t> suffix(degs.size(), 1);
  for (std::size_t l = degs.size() - 1; l > 0; --l)
    suffix[l - 1] = suffix[l] * (std::size_t(degs[l]) + 1);
  std::vector<std::size_t> table_idx(order.size());
  for (std::size_t l = 0; l < order.size(); ++l)
    for (std::size_t v = 0; v < table.size(); ++v)
      if (table[v] == order[l]) table_idx[l] = v;

  std::vector<mpz_class> crt(total, mpz_class(0));
  mpz_class modulus = 1;
  std::size_t prime_idx = 0, used = 0;
  const std::size_t kMaxPrimes = 24;
  while (used < kMaxPrimes) {
    std::size_t batch = used == 0 ? 3 : 2;
    for (std::size_t b = 0; b < batch && used < kMaxPrimes; ++b) {
      u64 p = nth_mod_prime(prime_idx++);
      ModOracle o = make_mod_oracle(syl, order, p);
      if (!o.ok) continue;  // a coefficient denominator hit the prime
      std::vector<std::vector<u64>> pows(order.size());
      std::vector<u64> flat = grid_interp_mod(o, degs, 0, pows);
      u64 minv = invmod(mpz_fdiv_ui(modulus.get_mpz_t(), p), p);
      for (std::size_t i = 0; i < total; ++i) {
        u64 r = mpz_fdiv_ui(crt[i].get_mpz_t(), p);
        u64 t = mulmod(submod(flat[i], r, p), minv, p);
        if (t) crt[i] += modulus * mpz_class(t);
      }
      modulus *= mpz_class(p);
      ++used;
    }
    mpz_class half = modulus >> 1;
    MultiPoly::TermMap terms;
    for (std::size_t i = 0; i < total; ++i) {
      if (crt[i] == 0) continue;
      mpz_class v = crt[i];
      if (v > half) v -= modulus;
      Expvec e(table.size(), 0);
      for (std::size_t l = 0; l < order.size(); ++l)
        e[table_idx[l]] = int32_t(i / suffix[l] % (std::size_t(degs[l]) + 1));
      terms.emplace(std::move(e), Rational(v));
    }
    MultiPoly cand(table, std::move(terms));
    if (verify_candidate_mod(syl, order, cand, prime_idx, 8)) return cand;
  }
  return std::nullopt;
}

// Actual degree of the resultant in `w`, found by univariate interpolation
// modulo two primes with every other surviving variable pinned at fixed
// offbeat integers.  Can only undershoot (unlucky pins or primes); the
// post-verification in the caller catches that and retries with bounds.
int probe_degree(const Sylvester& syl, const std::string& w, int bound) {
  std::vector<std::string> order;
  for (const auto& s : syl.survivors)
    if (s != w) order.push_back(s);
  order.push_back(w);
  const std::size_t last = order.size() - 1;

  int best = 0;
  for (std::size_t pi = 0; pi < 2; ++pi) {
    u64 p = nth_mod_prime(pi);
    ModOracle o = make_mod_oracle(syl, order, p);
    if (!o.ok) continue;
    std::vector<std::vector<u64>> pows(order.size());
    for (std::size_t l = 0; l < last; ++l) {
      u64 pin = (1009 + 37 * u64(l) + 53 * u64(pi)) % p;
      pows[l].assign(std::size_t(o.maxexp[l]) + 1, 1);
      for (int e = 1; e <= o.maxexp[l]; ++e)
        pows[l][e] = mulmod(pows[l][std::size_t(e) - 1], pin, p);
    }
    std::vector<std::vector<u64>> upc, uqc;
    specialize_uni(o, pows, last, upc, uqc);
    std::vector<u64> nodes(std::size_t(bound) + 1), vals(std::size_t(bound) + 1);
    for (int k = 0; k <= bound; ++k) {
      nodes[k] = node_residue(k, p);
      std::vector<u64> pv(upc.size()), qv(uqc.size());
      for (std::size_t i = 0; i < upc.size(); ++i)
        pv[i] = horner_mod(upc[i], nodes[k], p);
      for (std::size_t i = 0; i < uqc.size(); ++i)
        qv[i] = horner_mod(uqc[i], nodes[k], p);
      vals[k] = sylv_det_mod(pv, qv, o.m, o.n, p);
    }
    for (int j = 1; j <= bound; ++j)
      for (int i = bound; i >= j; --i) {
        u64 inv = invmod(submod(nodes[i], nodes[i - j], p), p);
        vals[i] = mulmod(submod(vals[i], vals[i - 1], p), inv, p);
      }
    for (int j = bound; j >= 0; --j)
      if (vals[j]) {
        best = std::max(best, j);
        break;
      }
  }
  return best;
}

bool verify_candidate(const Sylvester& syl, const MultiPoly& res, int trials) {
  // Deterministic pseudo-random check points.
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  for (int t = 0; t < trials; ++t) {
    std::map<std::string, Rational> point;
    for (const auto& s : syl.survivors) {
      long num = long(next() % 41) - 20;
      long den = long(next() % 7) + 1;
      point[s] = Rational(num, den);
    }
    std::map<std::string, Rational> full = point;
    for (const auto& v : res.vars())
      if (!full.count(v)) full[v] = Rational(0);
    if (res.eval(full) != syl.det_at(point)) return false;
  }
  return true;
}

}  // namespace

MultiPoly sylvester_resultant(const MultiPoly& p_in, const MultiPoly& q_in,
                              const std::string& var) {
  MultiPoly p = p_in, q = q_in;
  MultiPoly::align(p, q);
  const int dp = p.depends_on(var) ? p.degree(var) : 0;
  const int dq = q.depends_on(var) ? q.degree(var) : 0;
  if (dp == 0 && dq == 0)
    throw DegreeZero("sylvester_resultant: both inputs constant in " + var);
  // Constant-resultant convention when one side has degree zero.
  if (dp == 0) return p.pow(unsigned(dq));
  if (dq == 0) return q.pow(unsigned(dp));

  Sylvester syl;
  syl.m = dp;
  syl.n = dq;
  syl.pc = p.coeffs_wrt(var);
  syl.qc = q.coeffs_wrt(var);
  for (const auto& name : p.vars()) {
    if (name == var) continue;
    if (p.depends_on(name) || q.depends_on(name)) syl.survivors.push_back(name);
  }

  // Worst-case degree bounds per surviving variable.
  std::vector<int> bounds;
  for (const auto& w : syl.survivors)
    bounds.push_back(p.degree(w) * syl.n + q.degree(w) * syl.m);

  const bool big = syl.size() >= 10 && syl.survivors.size() >= 2;
  double grid = 1.0;
  for (int b : bounds) grid *= b + 1;
  if (!big || syl.survivors.empty() || grid > 5e7)
    return bareiss_ring(syl.ring_matrix());

  // Probe actual degrees (cheap univariate interpolations), then build the
  // dense grid with the probed sizes.
  std::vector<int> degs(bounds.size());
  for (std::size_t i = 0; i < syl.survivors.size(); ++i)
    degs[i] = probe_degree(syl, syl.survivors[i], bounds[i]);

  // Interpolate innermost over the variable with the largest degree so the
  // expensive Newton levels run over the fewest polynomial samples.
  std::vector<std::size_t> idx(syl.survivors.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return degs[a] < degs[b]; });
  std::vector<std::string> order;
  std::vector<int> ordered_degs;
  for (std::size_t i : idx) {
    order.push_back(syl.survivors[i]);
    ordered_degs.push_back(degs[i]);
  }

  if (auto res = modular_resultant(syl, order, ordered_degs, p.vars()))
    return *res;

  // Probed degrees were short (unlucky pin values); redo with full bounds.
  std::vector<int> full_degs;
  for (std::size_t i : idx) full_degs.push_back(bounds[i]);
  if (auto res = modular_resultant(syl, order, full_degs, p.vars()))
    return *res;

  // Last resort: exact interpolation over the rationals.
  std::map<std::string, Rational> point;
  MultiPoly res = interpolate_recursive(syl, order, full_degs, 0, point);
  if (!verify_candidate(syl, res, 8))
    throw std::logic_error("sylvester_resultant: interpolation self-check failed");
  return res;
}

}  // namespace starcycle

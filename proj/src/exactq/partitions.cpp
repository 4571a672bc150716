#include <algorithm>
#include <cstdint>
#include <functional>

#include "mockmod/exactq.hpp"

namespace mockmod::exactq {

namespace {

void require_positive_order(std::int64_t T, const char* what) {
  if (T < 1) fail(ErrorCode::domain, std::string(what) + ": truncation order must be >= 1");
}

// Dense bivariate table indexed by q-exponent e and zeta exponent m with
// |m| <= e + slack.
template <class V>
struct Grid {
  std::int64_t T;
  std::int64_t slack;
  std::vector<std::vector<V>> rows;

  Grid(std::int64_t T_, std::int64_t slack_) : T(T_), slack(slack_), rows(static_cast<std::size_t>(T_)) {
    for (std::int64_t e = 0; e < T; ++e) rows[static_cast<std::size_t>(e)].assign(static_cast<std::size_t>(2 * (e + slack) + 1), V(0));
  }
  bool in_range(std::int64_t e, std::int64_t m) const { return e >= 0 && e < T && m >= -(e + slack) && m <= e + slack; }
  V& at(std::int64_t e, std::int64_t m) { return rows[static_cast<std::size_t>(e)][static_cast<std::size_t>(m + e + slack)]; }
  const V& at(std::int64_t e, std::int64_t m) const {
    return rows[static_cast<std::size_t>(e)][static_cast<std::size_t>(m + e + slack)];
  }
};

// Dyson product form: term_n = term_{n-1} q^{2n-1} / ((1 - zeta q^n)(1 - zeta^{-1} q^n)).
// All coefficients are nonnegative, so any unsigned-safe type with headroom
// above p(T-1) works.
template <class V>
Grid<V> dyson_grid(std::int64_t T) {
  Grid<V> total(T, 0);
  Grid<V> term(T, 0);
  total.at(0, 0) = 1;
  term.at(0, 0) = 1;
  for (std::int64_t n = 1; n * n < T; ++n) {
    const std::int64_t s = 2 * n - 1;
    for (std::int64_t e = T - 1; e >= 0; --e) {
      for (std::int64_t m = -e; m <= e; ++m) {
        term.at(e, m) = (e - s >= 0 && m >= -(e - s) && m <= e - s) ? term.at(e - s, m) : V(0);
      }
    }
    // divide by (1 - zeta q^n): G[e][m] += G[e-n][m-1]
    for (std::int64_t e = n; e < T; ++e)
      for (std::int64_t m = -(e - n) + 1; m <= e - n + 1; ++m) term.at(e, m) += term.at(e - n, m - 1);
    // divide by (1 - zeta^{-1} q^n)
    for (std::int64_t e = n; e < T; ++e)
      for (std::int64_t m = -(e - n) - 1; m <= e - n - 1; ++m) term.at(e, m) += term.at(e - n, m + 1);
    for (std::int64_t e = 0; e < T; ++e)
      for (std::int64_t m = -e; m <= e; ++m) total.at(e, m) += term.at(e, m);
  }
  return total;
}

std::vector<Integer> partition_numbers(std::int64_t nmax) {
  std::vector<Integer> p(static_cast<std::size_t>(std::max<std::int64_t>(nmax, 0) + 1));
  p[0] = 1;
  for (std::int64_t n = 1; n <= nmax; ++n) {
    Integer s = 0;
    for (std::int64_t k = 1;; ++k) {
      const std::int64_t g1 = k * (3 * k - 1) / 2;
      if (g1 > n) break;
      const std::int64_t g2 = k * (3 * k + 1) / 2;
      const bool plus = (k % 2) == 1;
      if (plus) s += p[static_cast<std::size_t>(n - g1)];
      else s -= p[static_cast<std::size_t>(n - g1)];
      if (g2 <= n) {
        if (plus) s += p[static_cast<std::size_t>(n - g2)];
        else s -= p[static_cast<std::size_t>(n - g2)];
      }
    }
    p[static_cast<std::size_t>(n)] = s;
  }
  return p;
}

Rational pow_int(const Rational& x, int k) {
  Rational r(1);
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

QSeries euler_product(std::int64_t T) {
  require_positive_order(T, "euler_product");
  std::vector<Rational> c(static_cast<std::size_t>(T));
  c[0] = 1;
  for (std::int64_t k = 1;; ++k) {
    const std::int64_t g1 = k * (3 * k - 1) / 2;
    if (g1 >= T) break;
    const std::int64_t g2 = k * (3 * k + 1) / 2;
    const int sgn = (k % 2) ? -1 : 1;
    c[static_cast<std::size_t>(g1)] += sgn;
    if (g2 < T) c[static_cast<std::size_t>(g2)] += sgn;
  }
  return QSeries(1, 0, std::move(c), T);
}

QSeries eta_expansion(std::int64_t T) {
  const QSeries e = euler_product(T);
  return e.with_den(24).shifted(1, 24);
}

QSeries partition_series(std::int64_t T) {
  require_positive_order(T, "partition_series");
  const auto p = partition_numbers(T - 1);
  std::vector<Rational> c(p.begin(), p.end());
  return QSeries(1, 0, std::move(c), T);
}

Integer partition_number(std::int64_t n) {
  if (n < 0) return 0;
  return partition_numbers(n)[static_cast<std::size_t>(n)];
}

RankTable::RankTable(std::int64_t nmax) : nmax_(nmax) {
  if (nmax < 0) fail(ErrorCode::domain, "RankTable: nmax must be nonnegative");
  rows_.resize(static_cast<std::size_t>(nmax + 1));
  for (std::int64_t n = 0; n <= nmax; ++n) rows_[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(2 * n + 1), 0);
}

const Integer& RankTable::at(std::int64_t m, std::int64_t n) const {
  static const Integer zero = 0;
  if (n < 0 || n > nmax_) fail(ErrorCode::domain, "RankTable: n=" + std::to_string(n) + " outside table");
  if (m < -n || m > n) return zero;
  return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(m + n)];
}

Integer& RankTable::mutable_at(std::int64_t m, std::int64_t n) {
  if (n < 0 || n > nmax_ || m < -n || m > n) fail(ErrorCode::domain, "RankTable: index outside table");
  return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(m + n)];
}

Integer RankTable::moment(int k, std::int64_t n) const {
  Integer s = 0;
  for (std::int64_t m = -n; m <= n; ++m) {
    const Integer& c = at(m, n);
    if (c == 0) continue;
    Integer mk;
    mpz_pow_ui(mk.get_mpz_t(), Integer(static_cast<long>(m)).get_mpz_t(), static_cast<unsigned long>(k));
    s += mk * c;
  }
  return s;
}

ZetaLaurent rank_generating_function(std::int64_t T) {
  require_positive_order(T, "rank_generating_function");
  const Grid<Integer> g = dyson_grid<Integer>(T);
  ZetaLaurent r(1, T);
  for (std::int64_t e = 0; e < T; ++e)
    for (std::int64_t m = -e; m <= e; ++m)
      if (g.at(e, m) != 0) r.add(e, 2 * m, Rational(g.at(e, m)));
  return r;
}

ZetaLaurent rank_generating_function_lerch(std::int64_t T) {
  require_positive_order(T, "rank_generating_function_lerch");
  // inner = sum_{n != 0} (-1)^n q^{n(3n+1)/2} / (1 - zeta q^n); the n = 0 term
  // contributes exactly 1 after multiplying by (1 - zeta).
  Grid<Integer> inner(T, 1);
  std::int64_t nr = 1;
  while (nr * nr < T) ++nr;
  nr += 2;
  for (std::int64_t n = -nr; n <= nr; ++n) {
    if (n == 0) continue;
    const int sgn = (n % 2 == 0) ? 1 : -1;
    const std::int64_t base = n * (3 * n + 1) / 2;
    if (n > 0) {
      for (std::int64_t k = 0; base + n * k < T; ++k) inner.at(base + n * k, k) += sgn;
    } else {
      // 1/(1 - zeta q^n) = -sum_{k>=1} zeta^{-k} q^{-n k}
      for (std::int64_t k = 1; base - n * k < T; ++k) {
        if (base - n * k < 0) continue;
        inner.at(base - n * k, -k) -= sgn;
      }
    }
  }
  // times (1 - zeta)
  Grid<Integer> w(T, 2);
  for (std::int64_t e = 0; e < T; ++e) {
    for (std::int64_t m = -(e + 1); m <= e + 1; ++m) {
      const Integer& c = inner.at(e, m);
      if (c == 0) continue;
      w.at(e, m) += c;
      w.at(e, m + 1) -= c;
    }
  }
  w.at(0, 0) += 1;
  // times P(q)
  const auto p = partition_numbers(T - 1);
  ZetaLaurent r(1, T);
  for (std::int64_t e = 0; e < T; ++e) {
    for (std::int64_t m = -(e + 2); m <= e + 2; ++m) {
      Integer s = 0;
      for (std::int64_t f = 0; f <= e; ++f) {
        if (!w.in_range(f, m)) continue;
        const Integer& c = w.at(f, m);
        if (c != 0) s += c * p[static_cast<std::size_t>(e - f)];
      }
      if (s != 0) r.add(e, 2 * m, Rational(s));
    }
  }
  return r;
}

QSeries mock_theta_f(std::int64_t T) {
  require_positive_order(T, "mock_theta_f");
  std::vector<Integer> total(static_cast<std::size_t>(T), 0), term(static_cast<std::size_t>(T), 0);
  total[0] = 1;
  term[0] = 1;
  for (std::int64_t n = 1; n * n < T; ++n) {
    const std::int64_t s = 2 * n - 1;
    for (std::int64_t e = T - 1; e >= 0; --e) term[static_cast<std::size_t>(e)] = e >= s ? term[static_cast<std::size_t>(e - s)] : Integer(0);
    // divide twice by (1 + q^n): G[e] = F[e] - G[e-n]
    for (int rep = 0; rep < 2; ++rep)
      for (std::int64_t e = n; e < T; ++e) term[static_cast<std::size_t>(e)] -= term[static_cast<std::size_t>(e - n)];
    for (std::int64_t e = 0; e < T; ++e) total[static_cast<std::size_t>(e)] += term[static_cast<std::size_t>(e)];
  }
  return QSeries(1, 0, std::vector<Rational>(total.begin(), total.end()), T);
}

RankTable rank_table_from(const ZetaLaurent& r, std::int64_t nmax) {
  if (r.den() != 1 || r.trunc() <= nmax) fail(ErrorCode::domain, "rank_table_from: expansion too short or not integral in q");
  RankTable t(nmax);
  for (const auto& [e, row] : r.terms()) {
    if (e < 0 || e > nmax) continue;
    for (const auto& [m2, c] : row) {
      if (m2 % 2 != 0 || c.get_den() != 1 || std::abs(m2 / 2) > e) {
        fail(ErrorCode::internal, "rank_table_from: coefficient outside the rank support");
      }
      t.mutable_at(m2 / 2, e) = c.get_num();
    }
  }
  return t;
}

RankTable rank_table(std::int64_t nmax, bool cross_check) {
  if (nmax < 1) fail(ErrorCode::domain, "rank_table: nmax must be >= 1");
  const std::int64_t T = nmax + 1;
  RankTable t(nmax);
  if (nmax <= 400) {
    // p(400) < 2^63, and every intermediate coefficient is bounded by p(e)
    const Grid<std::int64_t> g = dyson_grid<std::int64_t>(T);
    for (std::int64_t e = 0; e < T; ++e)
      for (std::int64_t m = -e; m <= e; ++m) t.mutable_at(m, e) = Integer(static_cast<long>(g.at(e, m)));
  } else {
    const Grid<Integer> g = dyson_grid<Integer>(T);
    for (std::int64_t e = 0; e < T; ++e)
      for (std::int64_t m = -e; m <= e; ++m) t.mutable_at(m, e) = g.at(e, m);
  }
  if (cross_check) {
    // The Lerch form needs a full Cauchy product with P(q); limit its cost.
    const std::int64_t nc = std::min<std::int64_t>(nmax, 100);
    const RankTable other = rank_table_from(rank_generating_function_lerch(nc + 1), nc);
    for (std::int64_t n = 0; n <= nc; ++n)
      for (std::int64_t m = -n; m <= n; ++m)
        if (t.at(m, n) != other.at(m, n)) {
          fail(ErrorCode::internal, "rank_table: Dyson and Lerch forms disagree at N(" + std::to_string(m) + "," +
                                        std::to_string(n) + ")");
        }
  }
  return t;
}

RankTable rank_table_enumerated(std::int64_t nmax) {
  if (nmax > 80) fail(ErrorCode::domain, "rank_table_enumerated: nmax too large for enumeration");
  RankTable t(nmax);
  t.mutable_at(0, 0) = 1;
  std::vector<std::int64_t> parts;
  // partitions of n into parts <= cap, nonincreasing
  std::function<void(std::int64_t, std::int64_t, std::int64_t)> rec = [&](std::int64_t n, std::int64_t remaining,
                                                                          std::int64_t cap) {
    if (remaining == 0) {
      const std::int64_t rank = parts.front() - static_cast<std::int64_t>(parts.size());
      t.mutable_at(rank, n) += 1;
      return;
    }
    for (std::int64_t p = std::min(cap, remaining); p >= 1; --p) {
      parts.push_back(p);
      rec(n, remaining - p, p);
      parts.pop_back();
    }
  };
  for (std::int64_t n = 1; n <= nmax; ++n) rec(n, n, n);
  return t;
}

QSeries rank_moment_series(const RankTable& table, int ell, std::int64_t T) {
  if (ell < 0) fail(ErrorCode::domain, "rank_moment_series: ell must be >= 0");
  if (T < 1 || T - 1 > table.nmax()) fail(ErrorCode::domain, "rank_moment_series: table too short for requested order");
  std::vector<Rational> c(static_cast<std::size_t>(T));
  for (std::int64_t n = 0; n < T; ++n) c[static_cast<std::size_t>(n)] = Rational(table.moment(2 * ell, n));
  return QSeries(1, 0, std::move(c), T);
}

Rational symmetrized_moment(const RankTable& table, int k, std::int64_t n) {
  if (k < 0 || n < 0) fail(ErrorCode::domain, "symmetrized_moment: k and n must be nonnegative");
  // floor((k-1)/2) with floor semantics for k = 0
  const std::int64_t shift = (k - 1 >= 0) ? (k - 1) / 2 : -1;
  Rational s(0);
  for (std::int64_t m = -n; m <= n; ++m) {
    const Integer& c = table.at(m, n);
    if (c == 0) continue;
    s += binomial_poly(Rational(static_cast<long>(m + shift)), k) * c;
  }
  return s;
}

Rational binomial_poly(const Rational& x, int k) {
  if (k < 0) return 0;
  Rational r(1);
  for (int i = 0; i < k; ++i) r *= (x - i);
  return r / Rational(factorial(k));
}

Integer factorial(int n) {
  if (n < 0) fail(ErrorCode::domain, "factorial of a negative number");
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

std::int64_t sigma1(std::int64_t n) {
  if (n < 1) return 0;
  std::int64_t s = 0;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    s += d;
    if (d * d != n) s += n / d;
  }
  return s;
}

QSeries e2_expansion(std::int64_t T) {
  require_positive_order(T, "e2_expansion");
  std::vector<Rational> c(static_cast<std::size_t>(T));
  // sieve sigma_1 instead of factoring each n
  std::vector<std::int64_t> sig(static_cast<std::size_t>(T), 0);
  for (std::int64_t d = 1; d < T; ++d)
    for (std::int64_t m = d; m < T; m += d) sig[static_cast<std::size_t>(m)] += d;
  c[0] = 1;
  for (std::int64_t n = 1; n < T; ++n) c[static_cast<std::size_t>(n)] = Rational(-24 * sig[static_cast<std::size_t>(n)]);
  return QSeries(1, 0, std::move(c), T);
}

Rational bernoulli_number(int n) {
  if (n < 0) fail(ErrorCode::domain, "bernoulli_number: n must be >= 0");
  std::vector<Rational> B(static_cast<std::size_t>(n + 1));
  B[0] = 1;
  for (int m = 1; m <= n; ++m) {
    // sum_{k=0}^{m} binom(m+1, k) B_k = 0
    Rational s(0);
    Integer binom = 1;
    for (int k = 0; k < m; ++k) {
      s += Rational(binom) * B[static_cast<std::size_t>(k)];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    B[static_cast<std::size_t>(m)] = -s / Rational(m + 1);
  }
  return B[static_cast<std::size_t>(n)];
}

Rational bernoulli_half(int n) {
  if (n < 0) fail(ErrorCode::domain, "bernoulli_half: n must be >= 0");
  Rational s(0);
  Integer binom = 1;
  for (int k = 0; k <= n; ++k) {
    s += Rational(binom) * bernoulli_number(k) * pow_int(Rational(1, 2), n - k);
    binom = binom * (n - k) / (k + 1);
  }
  return s;
}

}  // namespace mockmod::exactq

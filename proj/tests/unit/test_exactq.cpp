#include <doctest.h>

#include <random>

#include "mockmod/exactq.hpp"

using namespace mockmod;
using namespace mockmod::exactq;

namespace {

// p(n) by counting partitions directly (parts <= k recursion)
std::int64_t count_partitions(std::int64_t n, std::int64_t k) {
  if (n == 0) return 1;
  if (k == 0) return 0;
  std::int64_t s = 0;
  for (std::int64_t p = std::min(n, k); p >= 1; --p) s += count_partitions(n - p, p);
  return s;
}

QSeries random_series(std::mt19937_64& rng, std::int64_t T) {
  std::vector<Rational> c(static_cast<std::size_t>(T));
  for (auto& x : c) x = Rational(static_cast<long>(rng() % 11) - 5, static_cast<long>(rng() % 4) + 1);
  return QSeries(1, static_cast<std::int64_t>(rng() % 3), c, T);
}

}  // namespace

TEST_CASE("qs_mul basics") {
  const QSeries a = QSeries::from_integers({1, 1}, 10), b = QSeries::from_integers({1, -1}, 10);
  CHECK(qs_mul(a, b) == QSeries::from_integers({1, 0, -1}, 10));
  const QSeries eta = eta_expansion(30);
  const QSeries prod = qs_mul(eta, qs_inv(eta));
  CHECK(prod.den() == 24);
  CHECK(prod.normalized().coeffs().size() == 1);
  CHECK(prod.coeff(0) == 1);
  CHECK(qs_mul(euler_product(50), partition_series(50)) == QSeries::one(50));
}

TEST_CASE("qs_mul associative and commutative") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const QSeries a = random_series(rng, 12), b = random_series(rng, 12), c = random_series(rng, 12);
    CHECK(qs_mul(a, b) == qs_mul(b, a));
    CHECK(qs_mul(qs_mul(a, b), c) == qs_mul(a, qs_mul(b, c)));
  }
}

TEST_CASE("qs_inv") {
  const QSeries g = qs_inv(QSeries::from_integers({1, -1}, 20));
  for (int n = 0; n < 20; ++n) CHECK(g.coeff(n) == 1);
  const QSeries p = qs_inv(euler_product(25));
  for (int n = 0; n < 25; ++n) CHECK(p.coeff(n) == count_partitions(n, n));
  try {
    qs_inv(QSeries::from_integers({0, 1}, 10));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_invertible);
  }
  CHECK_THROWS_AS(g.coeff(20), Error);
}

TEST_CASE("eta expansion") {
  const QSeries e = eta_expansion(40);
  CHECK(e.den() == 24);
  CHECK(e.coeff(1) == 1);
  CHECK(e.coeff(25) == -1);
  // direct product oracle
  std::vector<std::int64_t> prod(40, 0);
  prod[0] = 1;
  for (int n = 1; n < 40; ++n)
    for (int e2 = 39; e2 >= n; --e2) prod[e2] -= prod[e2 - n];
  for (int k = 0; k < 40; ++k) CHECK(e.coeff(24 * k + 1) == prod[k]);
  for (auto s : e.support()) {
    const std::int64_t m = (s - 1) / 24;
    bool pent = false;
    for (std::int64_t j = -10; j <= 10; ++j) pent |= (j * (3 * j - 1) / 2 == m);
    CHECK(pent);
  }
}

TEST_CASE("partition numbers") {
  CHECK(partition_number(0) == 1);
  CHECK(partition_number(4) == 5);
  CHECK(partition_number(100) == Integer("190569292"));
  const QSeries P = partition_series(30);
  for (int n = 0; n < 30; ++n) CHECK(P.coeff(n) == count_partitions(n, n));
}

TEST_CASE("rank table vs enumeration") {
  const RankTable t = rank_table(30);
  CHECK(t == rank_table_enumerated(30));
  CHECK(t.at(-3, 4) == 1);
  CHECK(t.at(-1, 4) == 1);
  CHECK(t.at(0, 4) == 1);
  CHECK(t.at(1, 4) == 1);
  CHECK(t.at(3, 4) == 1);
  CHECK(t.at(2, 4) == 0);
  for (int n = 0; n <= 30; ++n) {
    CHECK(t.moment(0, n) == partition_number(n));
    CHECK(t.moment(1, n) == 0);
    CHECK(t.moment(3, n) == 0);
  }
  Integer n24 = 0;
  for (int m = -4; m <= 4; ++m) n24 += m * m * t.at(m, 4);
  CHECK(t.moment(2, 4) == n24);
  CHECK(n24 == 20);
}

TEST_CASE("rank table int64 and mpz paths agree with Lerch form") {
  const RankTable t = rank_table(60);
  CHECK(t == rank_table_from(rank_generating_function(61), 60));
  CHECK(t == rank_table_from(rank_generating_function_lerch(61), 60));
}

TEST_CASE("R(1) = P and R(-1) = f") {
  const ZetaLaurent R = rank_generating_function(51);
  CHECK(R.symmetric());
  CHECK(R.at_zeta(1) == partition_series(51));
  CHECK(R.at_zeta(-1) == mock_theta_f(51));
  const QSeries f = mock_theta_f(8);
  // f(q) = 1 + q - 2q^2 + 3q^3 - 3q^4 + 3q^5 - 5q^6 + 7q^7
  CHECK(f == QSeries::from_integers({1, 1, -2, 3, -3, 3, -5, 7}, 8));
}

TEST_CASE("TaylorR consistency") {
  const std::int64_t T = 30;
  const ZetaLaurent R = rank_generating_function(T);
  const RankTable t = rank_table(T - 1);
  for (int ell = 0; ell <= 3; ++ell) CHECK(R.zeta_moment(2 * ell) == rank_moment_series(t, ell, T));
  CHECK(rank_moment_series(t, 0, T) == partition_series(T));
}

TEST_CASE("symmetrized moments") {
  const RankTable t = rank_table(20);
  for (int n = 0; n <= 20; ++n) CHECK(symmetrized_moment(t, 0, n) == Rational(partition_number(n)));
  for (int n = 0; n <= 20; ++n) CHECK(symmetrized_moment(t, 1, n) == 0);
  // eta_2(4) = sum_m binom(m, 2) N(m,4); row 4 is m in {-3,-1,0,1,3}
  // binom(-3,2)=6, binom(-1,2)=1, binom(0,2)=0, binom(1,2)=0, binom(3,2)=3
  CHECK(symmetrized_moment(t, 2, 4) == 10);
  CHECK(binomial_poly(Rational(-3), 2) == 6);
  CHECK(binomial_poly(Rational(1, 2), 2) == Rational(-1, 8));
}

TEST_CASE("E2 and sigma") {
  const QSeries e = e2_expansion(20);
  CHECK(e.coeff(0) == 1);
  CHECK(e.coeff(1) == -24);
  CHECK(e.coeff(2) == -72);
  for (int n = 1; n < 20; ++n) {
    std::int64_t s = 0;
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) s += d;
    CHECK(sigma1(n) == s);
    CHECK(e.coeff(n) == -24 * s);
  }
}

TEST_CASE("Bernoulli") {
  CHECK(bernoulli_number(1) == Rational(-1, 2));
  CHECK(bernoulli_number(2) == Rational(1, 6));
  CHECK(bernoulli_number(12) == Rational(-691, 2730));
  CHECK(bernoulli_half(0) == 1);
  CHECK(bernoulli_half(1) == 0);
  CHECK(bernoulli_half(2) == Rational(-1, 12));
  for (int n = 0; n <= 10; ++n) CHECK(bernoulli_half(2 * n + 1) == 0);
  // B_n(1/2) = (2^{1-n} - 1) B_n
  for (int n = 0; n <= 14; n += 2) {
    Rational f(1);
    for (int i = 0; i < n - 1; ++i) f /= 2;
    if (n == 0) f = 2;
    CHECK(bernoulli_half(n) == (f - 1) * bernoulli_number(n));
  }
}

TEST_CASE("Joyce series") {
  for (int k : {2, 4, 6}) {
    const QSeries j = joyce_expansion(k, 40);
    CHECK(j.coeff(0) == 0);
    CHECK(j == joyce_expansion_paired(k, 40));
  }
  CHECK(joyce_expansion(2, 10).coeff(1) == Rational(1, 2));
  CHECK_THROWS_AS(joyce_expansion(3, 10), Error);
}

TEST_CASE("theta expansions") {
  const QSeries t1 = theta_q_expansion(ThetaKind::theta1, 60);
  const QSeries t3 = theta_q_expansion(ThetaKind::theta3, 60);
  CHECK(theta_q_expansion(ThetaKind::vartheta_m1, 60) == -t1.with_den(4).dilated(2).truncated(4 * 60));
  CHECK(theta_q_expansion(ThetaKind::vartheta_0, 60) == -t3.dilated(2).truncated(8 * 60));
  CHECK(jacobi_theta_series(40) == triple_product_series(40));
}

TEST_CASE("Rankin-Cohen formal bracket") {
  const QSeries f = theta_q_expansion(ThetaKind::vartheta_0, 20);
  const QSeries g = theta_q_expansion(ThetaKind::theta1, 20);
  CHECK(rc_bracket_formal(f, Rational(1, 2), g, Rational(1, 2), 0) == qs_mul(f, g));
  const Rational k(3, 2);
  CHECK(rc_bracket_formal(f, k, g, k, 1) == -rc_bracket_formal(g, k, f, k, 1));
  // double loop oracle: [f,f]_1 with k1 = k2 = 1/2 is k1 f Df - k2 Df f = 0
  CHECK(rc_bracket_formal(f, Rational(1, 2), f, Rational(1, 2), 1).normalized().coeffs().empty());
  // [f,g]_2 with weights 1/2, 3/2 term-by-term
  const QSeries br = rc_bracket_formal(f, Rational(1, 2), g, Rational(3, 2), 2);
  const QSeries F = f.with_den(4), G = g.with_den(4);
  for (std::int64_t e = 0; e < br.trunc(); ++e) {
    Rational s(0);
    for (std::int64_t a = 0; a <= e; ++a) {
      const Rational fa = F.coeff(a), gb = G.coeff(e - a);
      if (fa == 0 || gb == 0) continue;
      const Rational x(a, 4), y(e - a, 4);
      // binom(3/2, 2 - j) binom(5/2, j)
      s += fa * gb * (Rational(3, 8) * y * y - Rational(3, 2) * Rational(5, 2) * x * y + Rational(15, 8) * x * x);
    }
    CHECK(br.coeff_at(e, 4) == s);
  }
}

TEST_CASE("QSeries JSON round trip") {
  const QSeries s = joyce_expansion(4, 12);
  const QSeries back = qseries_from_json(to_json(s));
  CHECK(back == s.normalized());
  CHECK_THROWS_AS(qseries_from_json("{\"den\":1}"), Error);
  CHECK_THROWS_AS(qseries_from_json("{\"den\":0,\"offset\":0,\"coeffs\":[],\"trunc\":1}"), Error);
}

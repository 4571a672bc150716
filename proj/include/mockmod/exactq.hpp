#pragma once

// Exact truncated q-series with rational coefficients, bivariate (zeta, q)
// expansions, and the formal objects built from them: eta, the partition
// series, Dyson's rank table and its moments, E2, Bernoulli values, the Joyce
// series, theta expansions and Rankin-Cohen brackets.
//
// A QSeries stores coefficients for exponents (offset + i) / den, i >= 0, and
// is valid for every exponent whose numerator is < trunc. Nothing at or beyond
// trunc is ever stored.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mockmod/core.hpp"

namespace mockmod::exactq {

using Rational = mpq_class;
using Integer = mpz_class;

class QSeries {
 public:
  QSeries() = default;
  /// Coefficients beyond trunc are dropped; den must be positive.
  QSeries(std::int64_t den, std::int64_t offset, std::vector<Rational> coeffs, std::int64_t trunc);

  /// The series 1 + O(q^T) (integer exponents).
  static QSeries one(std::int64_t T);
  /// Sum of c_k q^k from an integer-exponent coefficient list, valid below q^T.
  static QSeries from_integers(const std::vector<std::int64_t>& coeffs, std::int64_t T);

  std::int64_t den() const noexcept { return den_; }
  std::int64_t offset() const noexcept { return offset_; }
  std::int64_t trunc() const noexcept { return trunc_; }
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }

  /// Coefficient of q^(numerator/den). Throws Error(domain) if numerator >= trunc.
  Rational coeff(std::int64_t numerator) const;
  /// Coefficient of q^(num/den) for an arbitrary fraction (must be representable).
  Rational coeff_at(std::int64_t num, std::int64_t den) const;

  /// Same series with a denominator that is a multiple of den().
  QSeries with_den(std::int64_t new_den) const;
  /// Drop leading zeros (offset moves up) and trailing zeros.
  QSeries normalized() const;
  /// Reduce validity to exponents < new_trunc / den().
  QSeries truncated(std::int64_t new_trunc) const;

  /// Multiply by q^(num/den).
  QSeries shifted(std::int64_t num, std::int64_t den) const;
  /// q -> q^k
  QSeries dilated(std::int64_t k) const;
  /// Formal D = q d/dq: coefficient of q^e is multiplied by e.
  QSeries derivative() const;

  QSeries operator-() const;
  QSeries& operator*=(const Rational& s);

  /// Exponents (as numerator over den) of the nonzero stored coefficients.
  std::vector<std::int64_t> support() const;

  friend bool operator==(const QSeries& a, const QSeries& b);

 private:
  std::int64_t den_ = 1;
  std::int64_t offset_ = 0;
  std::vector<Rational> coeffs_;
  std::int64_t trunc_ = 0;
};

QSeries operator+(const QSeries& a, const QSeries& b);
QSeries operator-(const QSeries& a, const QSeries& b);
QSeries operator*(const QSeries& a, const Rational& s);

/// Exact Cauchy product; the result is valid up to the smaller of the two
/// operands' relative precisions.
QSeries qs_mul(const QSeries& a, const QSeries& b);
/// Exact reciprocal. Throws Error(not_invertible) if the lowest stored
/// coefficient is zero.
QSeries qs_inv(const QSeries& a);

/// Coefficients c(m) zeta^m q^n with half-integral m allowed (stored as 2m).
class ZetaLaurent {
 public:
  ZetaLaurent(std::int64_t den, std::int64_t trunc) : den_(den), trunc_(trunc) {}

  std::int64_t den() const noexcept { return den_; }
  std::int64_t trunc() const noexcept { return trunc_; }

  void add(std::int64_t q_num, std::int64_t zeta_twice, const Rational& c);
  Rational coeff(std::int64_t q_num, std::int64_t zeta_twice) const;
  const std::map<std::int64_t, std::map<std::int64_t, Rational>>& terms() const noexcept { return terms_; }

  /// Sum over zeta-exponents of (m)^j c(m, n) for each n: the coefficient of
  /// (2 pi i z)^j / j! after substituting zeta = e^{2 pi i z}.
  QSeries zeta_moment(int j) const;
  /// Substitute zeta = 1 or zeta = -1 (integral zeta-exponents only for -1).
  QSeries at_zeta(int sign) const;
  /// c(m, n) == c(-m, n) for all stored terms.
  bool symmetric() const;

  friend bool operator==(const ZetaLaurent& a, const ZetaLaurent& b);

 private:
  std::int64_t den_;
  std::int64_t trunc_;
  std::map<std::int64_t, std::map<std::int64_t, Rational>> terms_;
};

/// q^{1/24} prod_{n>=1} (1 - q^n), valid for exponents below T + 1/24.
QSeries eta_expansion(std::int64_t T);
/// (q; q)_infinity truncated below q^T.
QSeries euler_product(std::int64_t T);
/// P(q) = sum p(n) q^n, n < T.
QSeries partition_series(std::int64_t T);
/// p(n) by Euler's pentagonal recurrence.
Integer partition_number(std::int64_t n);

/// N(m, n) for 0 <= n <= nmax, |m| <= n.
class RankTable {
 public:
  explicit RankTable(std::int64_t nmax);
  std::int64_t nmax() const noexcept { return nmax_; }
  /// N(m, n); zero outside |m| <= n.
  const Integer& at(std::int64_t m, std::int64_t n) const;
  Integer& mutable_at(std::int64_t m, std::int64_t n);
  /// sum_m m^k N(m, n)
  Integer moment(int k, std::int64_t n) const;

  friend bool operator==(const RankTable& a, const RankTable& b) { return a.rows_ == b.rows_; }

 private:
  std::int64_t nmax_;
  std::vector<std::vector<Integer>> rows_;  // rows_[n][m + n]
};

/// R(zeta; q) from 1 + sum q^{n^2} / ((zeta q; q)_n (zeta^{-1} q; q)_n), q-order < T.
ZetaLaurent rank_generating_function(std::int64_t T);
/// R(zeta; q) from (1 - zeta)/(q;q)_inf * sum (-1)^n q^{n(3n+1)/2} / (1 - zeta q^n).
ZetaLaurent rank_generating_function_lerch(std::int64_t T);
/// Ramanujan's f(q) = 1 + sum q^{n^2} / (-q; q)_n^2, from its own definition.
QSeries mock_theta_f(std::int64_t T);

/// Rank table via the Dyson-product expansion, cross-checked against the
/// Lerch-sum form (throws Error(internal) on disagreement).
RankTable rank_table(std::int64_t nmax, bool cross_check = true);
RankTable rank_table_from(const ZetaLaurent& r, std::int64_t nmax);
/// Brute-force enumeration over partitions (test oracle, small n only).
RankTable rank_table_enumerated(std::int64_t nmax);

/// N_{2l}(q) = sum_n (sum_m m^{2l} N(m, n)) q^n, n < T.
QSeries rank_moment_series(const RankTable& table, int ell, std::int64_t T);
/// Andrews' symmetrized moment: sum_m binom(m + floor((k-1)/2), k) N(m, n).
Rational symmetrized_moment(const RankTable& table, int k, std::int64_t n);

/// binom(x, k) = x (x-1) ... (x-k+1) / k! for rational x.
Rational binomial_poly(const Rational& x, int k);
Integer factorial(int n);

/// 1 - 24 sum sigma_1(n) q^n, n < T.
QSeries e2_expansion(std::int64_t T);
std::int64_t sigma1(std::int64_t n);

/// Bernoulli numbers with B_1 = -1/2.
Rational bernoulli_number(int n);
/// B_n(1/2) from B_n(x) = sum_k binom(n, k) B_k x^{n-k}.
Rational bernoulli_half(int n);

/// 1/2 sum_{n != 0} n^{k-1} q^{n^2} / (1 - q^n), k even >= 2, q-order < T.
QSeries joyce_expansion(int k, std::int64_t T);
/// 1/2 sum_{n >= 1} n^{k-1} q^{n^2} (1 + q^n) / (1 - q^n).
QSeries joyce_expansion_paired(int k, std::int64_t T);

enum class ThetaKind { theta1, theta3, vartheta_m1, vartheta_0 };
ThetaKind parse_theta_kind(const std::string& s);

/// theta1(tau) = sum q^{n^2/2}; theta3(tau) = sum q^{(n+1/2)^2/2};
/// vartheta_nu(tau) = q^{nu^2/4} vartheta(nu tau + 1/2; 2 tau) from the
/// half-integral theta sum. Exponents below T.
QSeries theta_q_expansion(ThetaKind which, std::int64_t T);

/// i * vartheta(z; tau) = sum_{n in 1/2 + Z} i^{2n+1} q^{n^2/2} zeta^n.
ZetaLaurent jacobi_theta_series(std::int64_t T);
/// q^{1/8} zeta^{-1/2} prod (1 - q^n)(1 - zeta q^{n-1})(1 - zeta^{-1} q^n).
ZetaLaurent triple_product_series(std::int64_t T);

/// [f, g]_nu = sum_j (-1)^j binom(k1+nu-1, nu-j) binom(k2+nu-1, j) D^j f D^{nu-j} g
/// with formal D(q^e) = e q^e.
QSeries rc_bracket_formal(const QSeries& f, const Rational& k1, const QSeries& g, const Rational& k2, int nu);

/// Bracket coefficient binom(k1+nu-1, nu-j) binom(k2+nu-1, j) (without sign).
Rational rc_coefficient(const Rational& k1, const Rational& k2, int nu, int j);

std::string to_json(const QSeries& s);
QSeries qseries_from_json(const std::string& text);

}  // namespace mockmod::exactq

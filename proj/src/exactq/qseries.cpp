#include <algorithm>
#include <numeric>

#include "mockmod/exactq.hpp"

namespace mockmod::exactq {

namespace {

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

}  // namespace

QSeries::QSeries(std::int64_t den, std::int64_t offset, std::vector<Rational> coeffs, std::int64_t trunc)
    : den_(den), offset_(offset), coeffs_(std::move(coeffs)), trunc_(trunc) {
  if (den <= 0) fail(ErrorCode::validation, "QSeries denominator must be positive");
  const std::int64_t keep = std::max<std::int64_t>(0, trunc_ - offset_);
  if (static_cast<std::int64_t>(coeffs_.size()) > keep) coeffs_.resize(static_cast<std::size_t>(keep));
  for (auto& c : coeffs_) c.canonicalize();
}

QSeries QSeries::one(std::int64_t T) { return QSeries(1, 0, {Rational(1)}, T); }

QSeries QSeries::from_integers(const std::vector<std::int64_t>& coeffs, std::int64_t T) {
  std::vector<Rational> c;
  c.reserve(coeffs.size());
  for (auto x : coeffs) c.emplace_back(static_cast<long>(x));
  return QSeries(1, 0, std::move(c), T);
}

Rational QSeries::coeff(std::int64_t numerator) const {
  if (numerator >= trunc_) {
    fail(ErrorCode::domain, "coefficient of q^(" + std::to_string(numerator) + "/" + std::to_string(den_) +
                                ") is beyond the truncation order " + std::to_string(trunc_));
  }
  const std::int64_t i = numerator - offset_;
  if (i < 0 || i >= static_cast<std::int64_t>(coeffs_.size())) return Rational(0);
  return coeffs_[static_cast<std::size_t>(i)];
}

Rational QSeries::coeff_at(std::int64_t num, std::int64_t den) const {
  if (den <= 0) fail(ErrorCode::validation, "coeff_at: denominator must be positive");
  // exponent num/den in units of 1/den_
  const __int128 scaled = static_cast<__int128>(num) * den_;
  if (scaled % den != 0) {
    // Not on this series' exponent lattice; still must respect validity.
    if (scaled / den >= trunc_) fail(ErrorCode::domain, "coeff_at: exponent beyond truncation order");
    return Rational(0);
  }
  return coeff(static_cast<std::int64_t>(scaled / den));
}

QSeries QSeries::with_den(std::int64_t new_den) const {
  if (new_den % den_ != 0) fail(ErrorCode::validation, "with_den: new denominator must be a multiple");
  const std::int64_t f = new_den / den_;
  if (f == 1) return *this;
  std::vector<Rational> c(coeffs_.empty() ? 0 : (coeffs_.size() - 1) * static_cast<std::size_t>(f) + 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i * static_cast<std::size_t>(f)] = coeffs_[i];
  return QSeries(new_den, offset_ * f, std::move(c), trunc_ * f);
}

QSeries QSeries::normalized() const {
  std::size_t lo = 0;
  while (lo < coeffs_.size() && coeffs_[lo] == 0) ++lo;
  if (lo == coeffs_.size()) return QSeries(den_, offset_, {}, trunc_);
  std::size_t hi = coeffs_.size();
  while (hi > lo && coeffs_[hi - 1] == 0) --hi;
  return QSeries(den_, offset_ + static_cast<std::int64_t>(lo),
                 std::vector<Rational>(coeffs_.begin() + static_cast<std::ptrdiff_t>(lo),
                                       coeffs_.begin() + static_cast<std::ptrdiff_t>(hi)),
                 trunc_);
}

QSeries QSeries::truncated(std::int64_t new_trunc) const {
  return QSeries(den_, offset_, coeffs_, std::min(trunc_, new_trunc));
}

QSeries QSeries::shifted(std::int64_t num, std::int64_t den) const {
  if (den <= 0) fail(ErrorCode::validation, "shifted: denominator must be positive");
  const std::int64_t L = checked_lcm(den_, den);
  QSeries s = with_den(L);
  const std::int64_t delta = num * (L / den);
  s.offset_ += delta;
  s.trunc_ += delta;
  return s;
}

QSeries QSeries::dilated(std::int64_t k) const {
  if (k <= 0) fail(ErrorCode::validation, "dilated: factor must be positive");
  std::vector<Rational> c(coeffs_.empty() ? 0 : (coeffs_.size() - 1) * static_cast<std::size_t>(k) + 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i * static_cast<std::size_t>(k)] = coeffs_[i];
  return QSeries(den_, offset_ * k, std::move(c), trunc_ * k);
}

QSeries QSeries::derivative() const {
  QSeries s = *this;
  for (std::size_t i = 0; i < s.coeffs_.size(); ++i) {
    if (s.coeffs_[i] == 0) continue;
    s.coeffs_[i] *= Rational(static_cast<long>(offset_ + static_cast<std::int64_t>(i)), static_cast<long>(den_));
    s.coeffs_[i].canonicalize();
  }
  return s;
}

QSeries QSeries::operator-() const {
  QSeries s = *this;
  for (auto& c : s.coeffs_) c = -c;
  return s;
}

QSeries& QSeries::operator*=(const Rational& s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

std::vector<std::int64_t> QSeries::support() const {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) out.push_back(offset_ + static_cast<std::int64_t>(i));
  return out;
}

bool operator==(const QSeries& a, const QSeries& b) {
  const std::int64_t L = checked_lcm(a.den_, b.den_);
  const QSeries A = a.with_den(L), B = b.with_den(L);
  if (A.trunc_ != B.trunc_) return false;
  const std::int64_t lo = std::min(A.offset_, B.offset_);
  for (std::int64_t e = lo; e < A.trunc_; ++e) {
    if (A.coeff(e) != B.coeff(e)) return false;
  }
  return true;
}

QSeries operator+(const QSeries& a, const QSeries& b) {
  const std::int64_t L = std::lcm(a.den(), b.den());
  const QSeries A = a.with_den(L), B = b.with_den(L);
  const std::int64_t lo = std::min(A.offset(), B.offset());
  const std::int64_t T = std::min(A.trunc(), B.trunc());
  std::int64_t hi = lo;
  hi = std::max(hi, A.offset() + static_cast<std::int64_t>(A.coeffs().size()));
  hi = std::max(hi, B.offset() + static_cast<std::int64_t>(B.coeffs().size()));
  hi = std::min(hi, T);
  std::vector<Rational> c(static_cast<std::size_t>(std::max<std::int64_t>(0, hi - lo)));
  for (std::size_t i = 0; i < A.coeffs().size(); ++i) {
    const std::int64_t e = A.offset() + static_cast<std::int64_t>(i);
    if (e < hi) c[static_cast<std::size_t>(e - lo)] += A.coeffs()[i];
  }
  for (std::size_t i = 0; i < B.coeffs().size(); ++i) {
    const std::int64_t e = B.offset() + static_cast<std::int64_t>(i);
    if (e < hi) c[static_cast<std::size_t>(e - lo)] += B.coeffs()[i];
  }
  return QSeries(L, lo, std::move(c), T);
}

QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

QSeries operator*(const QSeries& a, const Rational& s) {
  QSeries r = a;
  r *= s;
  return r;
}

QSeries qs_mul(const QSeries& a, const QSeries& b) {
  const std::int64_t L = std::lcm(a.den(), b.den());
  const QSeries A = a.with_den(L), B = b.with_den(L);
  const std::int64_t off = A.offset() + B.offset();
  const std::int64_t T = std::min(A.trunc() + B.offset(), B.trunc() + A.offset());
  const std::int64_t len = std::max<std::int64_t>(0, T - off);
  std::vector<Rational> c(static_cast<std::size_t>(len));
  const auto& ac = A.coeffs();
  const auto& bc = B.coeffs();
  std::vector<std::size_t> bnz;
  for (std::size_t j = 0; j < bc.size(); ++j)
    if (bc[j] != 0) bnz.push_back(j);
  for (std::size_t i = 0; i < ac.size() && static_cast<std::int64_t>(i) < len; ++i) {
    if (ac[i] == 0) continue;
    for (std::size_t j : bnz) {
      if (static_cast<std::int64_t>(i + j) >= len) break;
      c[i + j] += ac[i] * bc[j];
    }
  }
  return QSeries(L, off, std::move(c), T);
}

QSeries qs_inv(const QSeries& a) {
  if (a.coeffs().empty() || a.coeffs()[0] == 0) {
    fail(ErrorCode::not_invertible, "series has zero lowest-order coefficient; not invertible");
  }
  const std::int64_t P = a.trunc() - a.offset();
  const auto& ac = a.coeffs();
  std::vector<std::size_t> nz;
  for (std::size_t k = 1; k < ac.size(); ++k)
    if (ac[k] != 0) nz.push_back(k);
  const Rational inv0 = 1 / ac[0];
  std::vector<Rational> b(static_cast<std::size_t>(std::max<std::int64_t>(0, P)));
  if (!b.empty()) b[0] = inv0;
  for (std::size_t n = 1; n < b.size(); ++n) {
    Rational s(0);
    for (std::size_t k : nz) {
      if (k > n) break;
      if (b[n - k] != 0) s += ac[k] * b[n - k];
    }
    b[n] = -inv0 * s;
  }
  return QSeries(a.den(), -a.offset(), std::move(b), -a.offset() + P);
}

void ZetaLaurent::add(std::int64_t q_num, std::int64_t zeta_twice, const Rational& c) {
  if (q_num >= trunc_ || c == 0) return;
  auto& row = terms_[q_num];
  auto it = row.find(zeta_twice);
  if (it == row.end()) {
    row.emplace(zeta_twice, c);
  } else {
    it->second += c;
    if (it->second == 0) row.erase(it);
  }
  if (row.empty()) terms_.erase(q_num);
}

Rational ZetaLaurent::coeff(std::int64_t q_num, std::int64_t zeta_twice) const {
  if (q_num >= trunc_) fail(ErrorCode::domain, "ZetaLaurent coefficient beyond truncation order");
  auto r = terms_.find(q_num);
  if (r == terms_.end()) return Rational(0);
  auto c = r->second.find(zeta_twice);
  return c == r->second.end() ? Rational(0) : c->second;
}

QSeries ZetaLaurent::zeta_moment(int j) const {
  const std::int64_t lo = terms_.empty() ? 0 : std::min<std::int64_t>(0, terms_.begin()->first);
  std::vector<Rational> c(static_cast<std::size_t>(std::max<std::int64_t>(0, trunc_ - lo)));
  for (const auto& [qn, row] : terms_) {
    Rational s(0);
    for (const auto& [m2, v] : row) {
      Rational m(static_cast<long>(m2), 2);
      Rational p(1);
      for (int i = 0; i < j; ++i) p *= m;
      s += p * v;
    }
    c[static_cast<std::size_t>(qn - lo)] = s;
  }
  return QSeries(den_, lo, std::move(c), trunc_);
}

QSeries ZetaLaurent::at_zeta(int sign) const {
  const std::int64_t lo = terms_.empty() ? 0 : std::min<std::int64_t>(0, terms_.begin()->first);
  std::vector<Rational> c(static_cast<std::size_t>(std::max<std::int64_t>(0, trunc_ - lo)));
  for (const auto& [qn, row] : terms_) {
    Rational s(0);
    for (const auto& [m2, v] : row) {
      if (sign > 0) {
        s += v;
      } else {
        if (m2 % 2 != 0) fail(ErrorCode::domain, "at_zeta(-1) needs integral zeta exponents");
        s += ((m2 / 2) % 2 == 0) ? v : Rational(-v);
      }
    }
    c[static_cast<std::size_t>(qn - lo)] = s;
  }
  return QSeries(den_, lo, std::move(c), trunc_);
}

bool ZetaLaurent::symmetric() const {
  for (const auto& [qn, row] : terms_) {
    for (const auto& [m2, v] : row) {
      auto it = row.find(-m2);
      if (it == row.end() || it->second != v) return false;
    }
  }
  return true;
}

bool operator==(const ZetaLaurent& a, const ZetaLaurent& b) {
  return a.den_ == b.den_ && a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
}

}  // namespace mockmod::exactq

#include <map>

#include <json.hpp>

#include "mockmod/exactq.hpp"

namespace mockmod::exactq {

namespace {

void check_joyce_weight(int k) {
  if (k < 2 || k % 2 != 0) fail(ErrorCode::domain, "Joyce series needs even k >= 2, got k=" + std::to_string(k));
}

Integer ipow(std::int64_t base, int e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), Integer(static_cast<long>(base)).get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

}  // namespace

QSeries joyce_expansion(int k, std::int64_t T) {
  check_joyce_weight(k);
  if (T < 1) fail(ErrorCode::domain, "joyce_expansion: T must be >= 1");
  std::vector<Rational> c(static_cast<std::size_t>(T));
  for (std::int64_t n = 1; n * n < T; ++n) {
    const Rational w = Rational(ipow(n, k - 1)) / 2;
    // n > 0: q^{n^2} sum_j q^{nj}
    for (std::int64_t e = n * n; e < T; e += n) c[static_cast<std::size_t>(e)] += w;
    // n < 0: (-n)^{k-1} q^{n^2}/(1 - q^{-n}) = n^{k-1} q^{n^2+n} sum_j q^{nj}
    for (std::int64_t e = n * n + n; e < T; e += n) c[static_cast<std::size_t>(e)] += w;
  }
  return QSeries(1, 0, std::move(c), T);
}

QSeries joyce_expansion_paired(int k, std::int64_t T) {
  check_joyce_weight(k);
  if (T < 1) fail(ErrorCode::domain, "joyce_expansion_paired: T must be >= 1");
  QSeries acc(1, 0, {}, T);
  for (std::int64_t n = 1; n * n < T; ++n) {
    std::vector<Rational> num(static_cast<std::size_t>(n + 1)), den(static_cast<std::size_t>(n + 1));
    num[0] = 1;
    num[static_cast<std::size_t>(n)] += 1;
    den[0] = 1;
    den[static_cast<std::size_t>(n)] -= 1;
    const QSeries frac = qs_mul(QSeries(1, 0, num, T), qs_inv(QSeries(1, 0, den, T)));
    acc = acc + frac.shifted(n * n, 1).truncated(T) * (Rational(ipow(n, k - 1)) / 2);
  }
  return acc;
}

ThetaKind parse_theta_kind(const std::string& s) {
  if (s == "theta1") return ThetaKind::theta1;
  if (s == "theta3") return ThetaKind::theta3;
  if (s == "vartheta_m1" || s == "vartheta-1") return ThetaKind::vartheta_m1;
  if (s == "vartheta_0" || s == "vartheta0") return ThetaKind::vartheta_0;
  fail(ErrorCode::config, "unknown theta kind '" + s + "'");
}

QSeries theta_q_expansion(ThetaKind which, std::int64_t T) {
  if (T < 1) fail(ErrorCode::domain, "theta_q_expansion: T must be >= 1");
  switch (which) {
    case ThetaKind::theta1: {
      // sum_n q^{n^2/2}
      const std::int64_t D = 2;
      std::vector<Rational> c(static_cast<std::size_t>(D * T));
      for (std::int64_t n = 0; n * n < D * T; ++n) c[static_cast<std::size_t>(n * n)] += (n == 0 ? 1 : 2);
      return QSeries(D, 0, std::move(c), D * T);
    }
    case ThetaKind::theta3: {
      // sum_n q^{(2n+1)^2/8}
      const std::int64_t D = 8;
      std::vector<Rational> c(static_cast<std::size_t>(D * T));
      for (std::int64_t j = 0; (2 * j + 1) * (2 * j + 1) < D * T; ++j) c[static_cast<std::size_t>((2 * j + 1) * (2 * j + 1))] += 2;
      return QSeries(D, 0, std::move(c), D * T);
    }
    case ThetaKind::vartheta_m1:
    case ThetaKind::vartheta_0: {
      // q^{nu^2/4} vartheta(nu tau + 1/2; 2tau) with n = (2j+1)/2:
      //   e^{2 pi i n^2 tau} e^{2 pi i n (nu tau + 1)} q^{nu^2/4} = e^{2 pi i n} q^{(n + nu/2)^2}
      // and e^{2 pi i n} = -1 for n in 1/2 + Z. Exponents in units of 1/4.
      const std::int64_t nu = which == ThetaKind::vartheta_m1 ? -1 : 0;
      const std::int64_t D = 4;
      std::vector<Rational> c(static_cast<std::size_t>(D * T));
      for (std::int64_t j = -T - 2; j <= T + 2; ++j) {
        const std::int64_t twice = 2 * j + 1 + nu;  // 2(n + nu/2)
        const std::int64_t e = twice * twice;       // 4 (n + nu/2)^2
        if (e < D * T) c[static_cast<std::size_t>(e)] -= 1;
      }
      return QSeries(D, 0, std::move(c), D * T);
    }
  }
  fail(ErrorCode::internal, "theta_q_expansion: bad kind");
}

ZetaLaurent jacobi_theta_series(std::int64_t T) {
  if (T < 1) fail(ErrorCode::domain, "jacobi_theta_series: T must be >= 1");
  ZetaLaurent r(8, 8 * T);
  for (std::int64_t j = -T - 2; j <= T + 2; ++j) {
    const std::int64_t two_n = 2 * j + 1;
    const std::int64_t e = two_n * two_n;  // 8 * n^2/2
    if (e >= 8 * T) continue;
    // i^{2n+1} with 2n+1 = two_n + 1 even
    const std::int64_t p = ((two_n + 1) / 2) % 2;
    r.add(e, two_n, Rational(p == 0 ? 1 : -1));
  }
  return r;
}

ZetaLaurent triple_product_series(std::int64_t T) {
  if (T < 1) fail(ErrorCode::domain, "triple_product_series: T must be >= 1");
  // integer exponents (e, m) before the q^{1/8} zeta^{-1/2} shift; keep e < T
  std::map<std::pair<std::int64_t, std::int64_t>, Integer> poly{{{0, 0}, Integer(1)}};
  auto times_binomial = [&](std::int64_t de, std::int64_t dm) {
    std::map<std::pair<std::int64_t, std::int64_t>, Integer> out = poly;
    for (const auto& [key, c] : poly) {
      if (key.first + de >= T) continue;
      auto& slot = out[{key.first + de, key.second + dm}];
      slot -= c;
    }
    for (auto it = out.begin(); it != out.end();) it = (it->second == 0) ? out.erase(it) : std::next(it);
    poly.swap(out);
  };
  for (std::int64_t n = 1; n <= T; ++n) {
    if (n < T) times_binomial(n, 0);
    if (n - 1 < T) times_binomial(n - 1, 1);
    if (n < T) times_binomial(n, -1);
  }
  ZetaLaurent r(8, 8 * T);
  for (const auto& [key, c] : poly) r.add(8 * key.first + 1, 2 * key.second - 1, Rational(c));
  return r;
}

Rational rc_coefficient(const Rational& k1, const Rational& k2, int nu, int j) {
  return binomial_poly(k1 + nu - 1, nu - j) * binomial_poly(k2 + nu - 1, j);
}

QSeries rc_bracket_formal(const QSeries& f, const Rational& k1, const QSeries& g, const Rational& k2, int nu) {
  if (nu < 0) fail(ErrorCode::domain, "rc_bracket_formal: nu must be >= 0");
  std::vector<QSeries> df{f}, dg{g};
  for (int i = 1; i <= nu; ++i) {
    df.push_back(df.back().derivative());
    dg.push_back(dg.back().derivative());
  }
  QSeries acc;
  bool first = true;
  for (int j = 0; j <= nu; ++j) {
    Rational coef = rc_coefficient(k1, k2, nu, j);
    if (j % 2) coef = -coef;
    QSeries term = qs_mul(df[static_cast<std::size_t>(j)], dg[static_cast<std::size_t>(nu - j)]) * coef;
    acc = first ? term : acc + term;
    first = false;
  }
  return acc;
}

std::string to_json(const QSeries& s) {
  const QSeries n = s.normalized();
  nlohmann::json j;
  j["den"] = n.den();
  j["offset"] = n.offset();
  std::vector<std::string> cs;
  cs.reserve(n.coeffs().size());
  for (const auto& c : n.coeffs()) cs.push_back(c.get_str());
  j["coeffs"] = cs;
  j["trunc"] = n.trunc();
  return j.dump();
}

QSeries qseries_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    std::vector<Rational> c;
    for (const auto& x : j.at("coeffs")) {
      Rational r(x.get<std::string>());
      if (r.get_den() == 0) fail(ErrorCode::validation, "zero denominator in coefficient");
      r.canonicalize();
      c.push_back(r);
    }
    return QSeries(j.at("den").get<std::int64_t>(), j.at("offset").get<std::int64_t>(), std::move(c),
                   j.at("trunc").get<std::int64_t>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::validation, std::string("malformed QSeries JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    fail(ErrorCode::validation, std::string("malformed rational in QSeries JSON: ") + e.what());
  }
}

}  // namespace mockmod::exactq

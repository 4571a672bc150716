#include "mockmod/special.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <limits>

namespace mockmod::special {

namespace {

constexpr double kSqrtPi = 1.77245385090551602729816748334114518;
// Terms with log-magnitude below this relative to the peak are dropped.
constexpr double kLogCut = 42.0;

void check_alpha(double alpha) {
  if (alpha != 0.5 && alpha != -0.5) fail(ErrorCode::domain, "upper_gamma: alpha must be +-1/2");
}

// Lentz evaluation of the Legendre continued fraction; returns e^x Gamma(a, x).
double gamma_cf_scaled(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-17) return std::exp(a * std::log(x)) * h;
  }
  fail(ErrorCode::numeric, "upper_gamma: continued fraction did not converge at x=" + fmt_double(x));
}

// Gamma(a) - sum_n (-1)^n x^{a+n} / (n! (a+n)), unscaled.
double gamma_series(double a, double x) {
  const double complete = a > 0 ? kSqrtPi : -2.0 * kSqrtPi;
  double term = 1.0;  // (-x)^n / n!
  double s = 0.0;
  for (int n = 0; n < 200; ++n) {
    const double add = term / (a + n);
    s += add;
    if (std::abs(add) < 1e-18 * std::abs(s)) break;
    term *= -x / (n + 1);
  }
  return complete - std::exp(a * std::log(x)) * s;
}

}  // namespace

double gauss_E(double x) { return std::erf(kSqrtPi * x); }

double erfcx(double t) {
  if (std::abs(t) < 0.5) return std::exp(t * t) * std::erfc(t);
  if (t > 0) return upper_gamma_scaled(0.5, t * t).value_scaled / kSqrtPi;
  // erfc(t) = 2 - erfc(-t)
  return 2.0 * std::exp(t * t) - upper_gamma_scaled(0.5, t * t).value_scaled / kSqrtPi;
}

double sgn_minus_E(double x) {
  if (x == 0.0) return 0.0;
  const double s = x > 0 ? 1.0 : -1.0;
  return s * std::erfc(kSqrtPi * std::abs(x));
}

ScaledGamma upper_gamma_scaled(double alpha, double x) {
  check_alpha(alpha);
  if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::domain, "upper_gamma: x must be positive and finite");
  ScaledGamma g;
  g.alpha = alpha;
  g.x = x;
  g.value_scaled = x >= 1.5 ? gamma_cf_scaled(alpha, x) : std::exp(x) * gamma_series(alpha, x);
  if (!(g.value_scaled > 0.0)) fail(ErrorCode::internal, "upper_gamma: nonpositive result");
  return g;
}

double upper_gamma(double alpha, double x, bool scaled) {
  const ScaledGamma g = upper_gamma_scaled(alpha, x);
  return scaled ? g.value_scaled : g.value();
}

SeriesValue eval_qseries(const exactq::QSeries& s, const Tau& tau, Precision p) {
  return NumericQSeries(s).eval(tau, p);
}

NumericQSeries::NumericQSeries(const exactq::QSeries& s) : den_(s.den()), trunc_(s.trunc()) {
  const auto& c = s.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) terms_.emplace_back(s.offset() + static_cast<std::int64_t>(i), c[i].get_d());
}

SeriesValue NumericQSeries::eval(const Tau& tau, Precision p) const {
  SeriesSum sum(p);
  for (const auto& [e, c] : terms_) sum.add(c * q_power(tau, static_cast<double>(e), static_cast<double>(den_)));
  SeriesValue out;
  out.value = sum.value();
  // tail: largest coefficient among the last quarter of the stored range,
  // times the first omitted q-power and a geometric factor
  double cmax = 0.0;
  if (!terms_.empty()) {
    const std::int64_t lo = terms_.front().first, hi = terms_.back().first;
    const std::int64_t cut = hi - (hi - lo) / 4;
    for (const auto& [e, c] : terms_)
      if (e >= cut) cmax = std::max(cmax, std::abs(c));
  }
  const double qd = std::exp(-2.0 * kPi * tau.v() / static_cast<double>(den_));
  out.tail_bound = cmax * std::exp(-2.0 * kPi * tau.v() * static_cast<double>(trunc_) / static_cast<double>(den_)) /
                   (1.0 - qd);
  return out;
}

cplx theta_value(cplx z, const Tau& tau, Precision p) {
  const double v = tau.v(), u = tau.u();
  const double y = z.imag(), x = z.real();
  const double center = -y / v;
  const double radius = std::sqrt(kLogCut / (kPi * v)) + 1.0;
  const std::int64_t jlo = static_cast<std::int64_t>(std::floor(center - radius - 0.5));
  const std::int64_t jhi = static_cast<std::int64_t>(std::ceil(center + radius - 0.5));
  SeriesSum sum(p);
  for (std::int64_t j = jlo; j <= jhi; ++j) {
    const double n = static_cast<double>(j) + 0.5;
    const double mag = -kPi * n * n * v - 2.0 * kPi * n * y;
    const double ph = std::fmod(0.5 * n * n * u, 1.0) + std::fmod(n * (x + 0.5), 1.0);
    sum.add(std::exp(mag) * std::polar(1.0, 2.0 * kPi * ph));
  }
  return sum.value();
}

cplx eta_value(const Tau& tau, Precision p) {
  const double bound = std::sqrt(kLogCut * 24.0 / (2.0 * kPi * tau.v()));
  const std::int64_t kmax = static_cast<std::int64_t>(bound / 6.0) + 2;
  SeriesSum sum(p);
  for (std::int64_t k = -kmax; k <= kmax; ++k) {
    const double m = static_cast<double>(6 * k + 1);
    const cplx t = q_power(tau, m * m, 24.0);
    sum.add((k % 2 == 0) ? t : -t);
  }
  return sum.value();
}

cplx eta_multiplier_raw(const Mobius& g, const Tau& tau) {
  return eta_value(g.apply(tau)) / (principal_halfpower(g.automorphy(tau), 1) * eta_value(tau));
}

cplx eta_multiplier(const Mobius& g, const Tau& tau) {
  const cplx at_tau = eta_multiplier_raw(g, tau);
  const Tau base = g.c() == 0 ? Tau(0.0, 1.0)
                              : Tau(-static_cast<double>(g.d()) / static_cast<double>(g.c()),
                                    1.0 / std::abs(static_cast<double>(g.c())));
  const cplx at_base = eta_multiplier_raw(g, base);
  if (std::abs(at_tau - at_base) > 1e-8) {
    fail(ErrorCode::internal, "eta_multiplier: tau-dependence detected for " + g.to_string() + " (" + fmt_cplx(at_tau) +
                                  " vs " + fmt_cplx(at_base) + ")");
  }
  const double k = std::round(std::arg(at_base) * 24.0 / (2.0 * kPi));
  const cplx snapped = std::polar(1.0, 2.0 * kPi * k / 24.0);
  if (std::abs(snapped - at_base) > 1e-8) fail(ErrorCode::numeric, "eta_multiplier: not a 24th root of unity");
  return snapped;
}

cplx e2_value(const Tau& tau, bool completed, Precision p) {
  SeriesSum sum(p);
  sum.add(1.0);
  const double qa = std::exp(-2.0 * kPi * tau.v());
  for (std::int64_t n = 1;; ++n) {
    const cplx qn = q_power(tau, static_cast<double>(n));
    // n q^n / (1 - q^n)
    sum.add(-24.0 * static_cast<double>(n) * qn / (1.0 - qn));
    if (static_cast<double>(n) * std::pow(qa, static_cast<double>(n)) < 1e-19) break;
    if (n > 1000000) fail(ErrorCode::numeric, "e2_value: series did not converge");
  }
  cplx val = sum.value();
  if (completed) val -= 3.0 / (kPi * tau.v());
  return val;
}

cplx single_term_closed_form(int k, const Tau& tau) {
  const double m = static_cast<double>((6 * k + 1) * (6 * k + 1)) / 24.0;
  const ScaledGamma g = upper_gamma_scaled(-0.5, 4.0 * kPi * m * tau.v());
  // Gamma(-1/2, 4 pi m v) |q^{-m}| = value_scaled e^{-4 pi m v} e^{2 pi m v}
  const double mag = std::sqrt(2.0 * kPi * m) * g.value_scaled * std::exp(-2.0 * kPi * m * tau.v());
  const double ph = -std::fmod(m * tau.u(), 1.0);
  return kI * mag * std::polar(1.0, 2.0 * kPi * ph);
}

IntegralValue period_integral(PeriodKind kind, const Tau& tau, int k) {
  const double u = tau.u(), v = tau.v();
  std::function<cplx(double)> f;
  double mmin = 1.0;
  switch (kind) {
    case PeriodKind::eta:
      f = [&](double t) { return eta_value(Tau(-u, v + t)); };
      mmin = 1.0 / 24.0;
      break;
    case PeriodKind::eta24:
      f = [&](double t) { return eta_value(Tau(-24.0 * u, 24.0 * (v + t))); };
      mmin = 1.0;
      break;
    case PeriodKind::single_term: {
      const double m = static_cast<double>((6 * k + 1) * (6 * k + 1)) / 24.0;
      mmin = m;
      f = [m, u, v](double t) {
        return std::exp(-2.0 * kPi * m * (v + t)) * std::polar(1.0, -2.0 * kPi * std::fmod(m * u, 1.0));
      };
      break;
    }
  }
  const double tcut = kLogCut / (2.0 * kPi * mmin);
  // -i(tau + w) = 2v + t, dw = i dt
  auto integrand = [&](double t) { return kI * f(t) * std::pow(2.0 * v + t, -1.5); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  // integrate on a few panels so the exponential decay is resolved early
  const double edges[] = {0.0, tcut / 64.0, tcut / 16.0, tcut / 4.0, tcut};
  IntegralValue out{cplx(0.0, 0.0), 0.0};
  double l1 = 0.0;
  for (int i = 0; i < 4; ++i) {
    double er = 0.0, ei = 0.0, l1r = 0.0, l1i = 0.0;
    const double re = GK::integrate([&](double t) { return integrand(t).real(); }, edges[i], edges[i + 1], 10, 1e-12,
                                    &er, &l1r);
    const double im = GK::integrate([&](double t) { return integrand(t).imag(); }, edges[i], edges[i + 1], 10, 1e-12,
                                    &ei, &l1i);
    out.value += cplx(re, im);
    out.error += std::hypot(er, ei);
    l1 += l1r + l1i;
  }
  if (!(out.error <= 1e-10 * std::max(std::abs(out.value), 1e-3 * l1))) {
    fail(ErrorCode::numeric, "period_integral: quadrature error " + fmt_double(out.error) + " for value " +
                                 fmt_cplx(out.value) + " at tau=" + fmt_tau(tau));
  }
  return out;
}

LoweringValue lowering_numeric(const TauFunction& f, const Tau& tau, double tol, double rel_step) {
  const double u = tau.u(), v = tau.v();
  auto dbar = [&](double h) {
    if (h >= v) fail(ErrorCode::domain, "lowering_numeric: step leaves the upper half-plane");
    const cplx du = (f(Tau(u + h, v)) - f(Tau(u - h, v))) / (2.0 * h);
    const cplx dv = (f(Tau(u, v + h)) - f(Tau(u, v - h))) / (2.0 * h);
    return 0.5 * (du + kI * dv);
  };
  const double h = rel_step * v;
  const cplx d1 = dbar(h);
  const cplx d2 = dbar(0.5 * h);
  const cplx rich = (4.0 * d2 - d1) / 3.0;
  const cplx scale = -2.0 * kI * v * v;
  LoweringValue out;
  out.value = scale * rich;
  out.error = std::abs(scale) * std::abs(rich - d2);
  out.noisy = !(out.error <= tol * std::max(1.0, std::abs(out.value)));
  return out;
}

}  // namespace mockmod::special

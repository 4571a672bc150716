#pragma once

// Numerical building blocks: the error-type function E, scaled incomplete
// gamma for alpha = +-1/2, point evaluation of q-series, theta, eta and E2
// values, the eta multiplier, period integrals and a finite-difference
// lowering operator.

#include <cmath>
#include <functional>

#include "mockmod/core.hpp"
#include "mockmod/exactq.hpp"

namespace mockmod::special {

/// E(x) = 2 int_0^x e^{-pi t^2} dt = erf(sqrt(pi) x)
double gauss_E(double x);
/// sgn(x) - E(x), computed without cancellation; sgn(0) = 0.
double sgn_minus_E(double x);
/// e^{t^2} erfc(t)
double erfcx(double t);

struct ScaledGamma {
  double alpha = 0.0;
  double x = 0.0;
  double value_scaled = 0.0;  // e^x Gamma(alpha, x)

  double log_value() const { return std::log(value_scaled) - x; }
  double value() const { return value_scaled * std::exp(-x); }
};

/// Gamma(alpha, x) for alpha in {-1/2, 1/2}, x > 0, in scaled form.
ScaledGamma upper_gamma_scaled(double alpha, double x);
/// Unscaled when scaled == false.
double upper_gamma(double alpha, double x, bool scaled = false);

struct SeriesValue {
  cplx value;
  double tail_bound = 0.0;
};

/// Sum c_e q^{e/D}; tail_bound estimates the omitted terms from the size of
/// the last stored coefficients.
SeriesValue eval_qseries(const exactq::QSeries& s, const Tau& tau, Precision p = Precision::f64);

/// Double-precision copy of a QSeries for repeated evaluation.
class NumericQSeries {
 public:
  NumericQSeries() = default;
  explicit NumericQSeries(const exactq::QSeries& s);
  SeriesValue eval(const Tau& tau, Precision p = Precision::f64) const;
  std::int64_t den() const noexcept { return den_; }
  std::int64_t trunc() const noexcept { return trunc_; }

 private:
  std::int64_t den_ = 1;
  std::int64_t trunc_ = 0;
  std::vector<std::pair<std::int64_t, double>> terms_;
};

/// vartheta(z; tau) = sum_{n in 1/2+Z} e^{pi i n^2 tau + 2 pi i n (z + 1/2)}
cplx theta_value(cplx z, const Tau& tau, Precision p = Precision::f64);
/// Dedekind eta via the pentagonal sum.
cplx eta_value(const Tau& tau, Precision p = Precision::f64);
/// psi(gamma) = eta(gamma tau) / (sqrt(c tau + d) eta(tau)), principal branch,
/// snapped to the exact 24th root of unity after a tau-independence check.
cplx eta_multiplier(const Mobius& g, const Tau& tau);
/// The same quotient without the consistency check or snapping.
cplx eta_multiplier_raw(const Mobius& g, const Tau& tau);
/// E2(tau), or E2 - 3/(pi v) when completed.
cplx e2_value(const Tau& tau, bool completed = false, Precision p = Precision::f64);

enum class PeriodKind { eta, eta24, single_term };

struct IntegralValue {
  cplx value;
  double error = 0.0;
};

/// int_{-conj(tau)}^{i infinity} f(w) (-i(tau + w))^{-3/2} dw along
/// w = -conj(tau) + i t with f = eta(w), eta(24 w) or e^{2 pi i m w},
/// m = (6k+1)^2/24 (single_term).
IntegralValue period_integral(PeriodKind kind, const Tau& tau, int k = 0);
/// Closed form of the single-term integral: i sqrt(2 pi m) Gamma(-1/2, 4 pi m v) q^{-m}.
cplx single_term_closed_form(int k, const Tau& tau);

struct LoweringValue {
  cplx value;
  double error = 0.0;
  bool noisy = false;
};

using TauFunction = std::function<cplx(const Tau&)>;

/// L f = -2 i v^2 d f / d conj(tau), central differences with step h and h/2
/// (h = rel_step * v) and one Richardson step. noisy is set when the error
/// estimate exceeds tol.
LoweringValue lowering_numeric(const TauFunction& f, const Tau& tau, double tol = 1e-6, double rel_step = 1e-4);

}  // namespace mockmod::special

#include "mockmod/core.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mockmod {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::domain: return "domain";
    case ErrorCode::validation: return "validation";
    case ErrorCode::not_invertible: return "not_invertible";
    case ErrorCode::pole: return "pole";
    case ErrorCode::numeric: return "numeric";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

Tau::Tau(double u, double v) : u_(u), v_(v) {
  if (!(v > 0.0) || !std::isfinite(u) || !std::isfinite(v)) {
    fail(ErrorCode::domain, "tau must lie in the upper half-plane (v > 0), got v = " + fmt_double(v));
  }
}

bool Tau::in_sampling_domain() const noexcept { return v_ >= 0.8 && v_ <= 2.0 && std::abs(u_) <= 0.5; }

cplx q_power(const Tau& tau, double num, double den) {
  const double e = num / den;
  double phase = std::fmod(e * tau.u(), 1.0);
  return std::exp(-2.0 * kPi * tau.v() * e) * std::polar(1.0, 2.0 * kPi * phase);
}

cplx Mobius::automorphy(const Tau& tau) const noexcept {
  return cplx(static_cast<double>(c_) * tau.u() + static_cast<double>(d_), static_cast<double>(c_) * tau.v());
}

Tau Mobius::apply(const Tau& tau) const { return Tau(apply(tau.value())); }

cplx Mobius::apply(cplx tau) const {
  const double a = static_cast<double>(a_), b = static_cast<double>(b_);
  const double c = static_cast<double>(c_), d = static_cast<double>(d_);
  const cplx num = a * tau + b;
  const cplx den = c * tau + d;
  // Im(gamma tau) = v / |c tau + d|^2 exactly; use that instead of the
  // quotient's imaginary part to avoid cancellation.
  const cplx w = num / den;
  return {w.real(), tau.imag() / std::norm(den)};
}

Mobius Mobius::operator*(const Mobius& o) const {
  return Mobius(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_);
}

std::int64_t Mobius::max_abs_entry() const noexcept {
  auto m = std::max(std::abs(a_), std::abs(b_));
  return std::max(m, std::max(std::abs(c_), std::abs(d_)));
}

std::string Mobius::to_string() const {
  std::ostringstream os;
  os << "(" << a_ << "," << b_ << ";" << c_ << "," << d_ << ")";
  return os.str();
}

Mobius validate_mobius(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  if (a * d - b * c != 1) {
    fail(ErrorCode::validation, "matrix (" + std::to_string(a) + "," + std::to_string(b) + ";" + std::to_string(c) +
                                    "," + std::to_string(d) + ") has determinant " + std::to_string(a * d - b * c));
  }
  return Mobius(a, b, c, d);
}

cplx principal_halfpower(cplx w, int twice_weight) {
  if (w == cplx(0.0, 0.0)) fail(ErrorCode::domain, "principal_halfpower: base is zero");
  if (twice_weight % 2 == 0) {
    const int k = twice_weight / 2;
    cplx r(1.0, 0.0);
    const cplx base = k >= 0 ? w : 1.0 / w;
    for (int i = 0; i < std::abs(k); ++i) r *= base;
    return r;
  }
  const cplx s = std::sqrt(w);  // branch cut on the negative axis, arg in (-pi/2, pi/2]
  const cplx root = (w.imag() == 0.0 && w.real() < 0.0) ? cplx(0.0, std::sqrt(-w.real())) : s;
  cplx r(1.0, 0.0);
  const cplx base = twice_weight >= 0 ? root : 1.0 / root;
  for (int i = 0; i < std::abs(twice_weight); ++i) r *= base;
  return r;
}

const char* precision_name(Precision p) noexcept { return p == Precision::dd ? "dd" : "f64"; }

Precision parse_precision(const std::string& s) {
  if (s == "f64") return Precision::f64;
  if (s == "dd") return Precision::dd;
  fail(ErrorCode::config, "unknown precision mode '" + s + "' (expected f64 or dd)");
}

const char* verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::variant: return "variant";
  }
  return "fail";
}

Report make_report(std::string check_id, double residual, double tolerance) {
  Report r;
  r.check_id = std::move(check_id);
  r.residual = std::isfinite(residual) ? residual : std::numeric_limits<double>::infinity();
  r.tolerance = tolerance;
  r.finalize();
  return r;
}

double rel_residual(cplx lhs, cplx rhs, double floor) {
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), floor);
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_cplx(cplx z) { return fmt_double(z.real()) + (z.imag() < 0 ? "" : "+") + fmt_double(z.imag()) + "i"; }

std::string fmt_tau(const Tau& t) { return fmt_cplx(t.value()); }

}  // namespace mockmod

#pragma once

// Shared domain types for the mockmod kernel: points of the upper half-plane,
// unimodular matrices, verification reports, the error type and the
// compensated-summation switch used by every series evaluator.

#include <chrono>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mockmod {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr cplx kI{0.0, 1.0};

enum class ErrorCode : int {
  ok = 0,
  domain = 1,
  validation = 2,
  not_invertible = 3,
  pole = 4,
  numeric = 5,
  config = 6,
  io = 7,
  internal = 8,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

/// A point tau = u + i v of the upper half-plane.
class Tau {
 public:
  Tau(double u, double v);
  explicit Tau(cplx tau) : Tau(tau.real(), tau.imag()) {}

  double u() const noexcept { return u_; }
  double v() const noexcept { return v_; }
  cplx value() const noexcept { return {u_, v_}; }

  /// Default sampling region of the harness: v in [0.8, 2], |u| <= 1/2.
  bool in_sampling_domain() const noexcept;

 private:
  double u_;
  double v_;
};

/// q^e = exp(2 pi i tau e) for a rational exponent num/den, with the phase
/// reduced modulo 1 before exponentiation so large u does not cost accuracy.
cplx q_power(const Tau& tau, double num, double den = 1.0);

/// Integer matrix (a b; c d) with ad - bc = 1.
class Mobius {
 public:
  std::int64_t a() const noexcept { return a_; }
  std::int64_t b() const noexcept { return b_; }
  std::int64_t c() const noexcept { return c_; }
  std::int64_t d() const noexcept { return d_; }

  static Mobius identity() { return Mobius(1, 0, 0, 1); }
  static Mobius S() { return Mobius(0, -1, 1, 0); }
  static Mobius T() { return Mobius(1, 1, 0, 1); }

  /// c tau + d
  cplx automorphy(const Tau& tau) const noexcept;
  Tau apply(const Tau& tau) const;
  /// Moebius action on a complex point (for z-like arguments: z / (c tau + d)).
  cplx apply(cplx tau) const;

  Mobius operator*(const Mobius& o) const;
  Mobius inverse() const { return Mobius(d_, -b_, -c_, a_); }
  bool operator==(const Mobius& o) const = default;

  std::int64_t max_abs_entry() const noexcept;
  std::string to_string() const;

 private:
  friend Mobius validate_mobius(std::int64_t, std::int64_t, std::int64_t, std::int64_t);
  Mobius(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) : a_(a), b_(b), c_(c), d_(d) {}
  std::int64_t a_, b_, c_, d_;
};

/// Throws Error(validation) unless ad - bc = 1.
Mobius validate_mobius(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

/// w^(twice_weight/2) on the principal branch of the square root
/// (arg sqrt(w) in (-pi/2, pi/2]) followed by an integer power.
cplx principal_halfpower(cplx w, int twice_weight);

enum class Precision { f64, dd };

const char* precision_name(Precision p) noexcept;
Precision parse_precision(const std::string& s);

/// Complex accumulator. In dd mode every addition goes through a TwoSum so the
/// running total is carried as an unevaluated hi + lo pair.
class SeriesSum {
 public:
  explicit SeriesSum(Precision p = Precision::f64) : compensated_(p == Precision::dd) {}

  void add(cplx x) noexcept {
    if (!compensated_) {
      hi_ += x;
      return;
    }
    hi_ = cplx(two_sum(hi_.real(), x.real(), lo_re_), two_sum(hi_.imag(), x.imag(), lo_im_));
  }
  SeriesSum& operator+=(cplx x) noexcept {
    add(x);
    return *this;
  }
  cplx value() const noexcept { return hi_ + cplx(lo_re_, lo_im_); }

 private:
  static double two_sum(double a, double b, double& lo) noexcept {
    const double s = a + b;
    const double bb = s - a;
    lo += (a - (s - bb)) + (b - bb);
    return s;
  }

  bool compensated_;
  cplx hi_{0.0, 0.0};
  double lo_re_ = 0.0;
  double lo_im_ = 0.0;
};

enum class Verdict { pass, fail, variant };

const char* verdict_name(Verdict v) noexcept;

/// One verification record. For ordinary checks verdict is pass iff
/// residual <= tolerance; adjudication records carry verdict=variant and name
/// the surviving reading in `variant`.
struct Report {
  std::string check_id;
  std::vector<std::pair<std::string, std::string>> params;
  double residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::fail;
  std::int64_t runtime_ms = 0;
  std::string variant;
  std::string note;

  void add_param(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }
  void finalize() { verdict = residual <= tolerance ? Verdict::pass : Verdict::fail; }
  bool passed() const noexcept { return verdict != Verdict::fail; }
};

Report make_report(std::string check_id, double residual, double tolerance);

/// Relative residual |lhs - rhs| / |rhs| with a floor on the denominator.
double rel_residual(cplx lhs, cplx rhs, double floor = 1e-300);

std::string fmt_double(double x);
std::string fmt_cplx(cplx z);
std::string fmt_tau(const Tau& t);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  std::int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace mockmod

#include "mockmod/jets.hpp"

#include <cmath>
#include <json.hpp>

#include "mockmod/special.hpp"

namespace mockmod::jets {

namespace {

constexpr double kLogCut = 42.0;

std::size_t row_offset(int order, int j) {
  return static_cast<std::size_t>(j * (order + 1) - j * (j - 1) / 2);
}

double factorial_d(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double binom_d(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// sign of (-1)^{n - 1/2} for n = j + 1/2
double half_sign(std::int64_t j) { return (j % 2 == 0) ? 1.0 : -1.0; }

// Accumulates jets coefficientwise, compensated in dd mode.
class JetAccumulator {
 public:
  JetAccumulator(int order, const Tau& base, Precision p)
      : order_(order), base_(base), sums_(static_cast<std::size_t>((order + 1) * (order + 2) / 2), SeriesSum(p)) {}
  void add(const Jet& j) {
    std::size_t idx = 0;
    for (int a = 0; a <= order_; ++a)
      for (int b = 0; a + b <= order_; ++b) sums_[idx++].add(j.coeff(a, b));
  }
  Jet result() const {
    Jet out(order_, base_);
    std::size_t idx = 0;
    for (int a = 0; a <= order_; ++a)
      for (int b = 0; a + b <= order_; ++b) out.at(a, b) = sums_[idx++].value();
    return out;
  }

 private:
  int order_;
  Tau base_;
  std::vector<SeriesSum> sums_;
};

}  // namespace

Jet::Jet(int order, const Tau& base) : order_(order), base_(base) {
  if (order < 0) fail(ErrorCode::domain, "Jet order must be nonnegative");
  c_.assign(static_cast<std::size_t>((order + 1) * (order + 2) / 2), cplx(0.0, 0.0));
}

Jet Jet::constant(cplx c, int order, const Tau& base) {
  Jet j(order, base);
  j.at(0, 0) = c;
  return j;
}

Jet Jet::z(int order, const Tau& base) {
  Jet j(order, base);
  if (order >= 1) j.at(1, 0) = 1.0;
  return j;
}

Jet Jet::zbar(int order, const Tau& base) {
  Jet j(order, base);
  if (order >= 1) j.at(0, 1) = 1.0;
  return j;
}

cplx Jet::coeff(int j, int k) const {
  if (j < 0 || k < 0 || j + k > order_) return {0.0, 0.0};
  return c_[row_offset(order_, j) + static_cast<std::size_t>(k)];
}

cplx& Jet::at(int j, int k) {
  if (j < 0 || k < 0 || j + k > order_) fail(ErrorCode::domain, "Jet index outside the truncation order");
  return c_[row_offset(order_, j) + static_cast<std::size_t>(k)];
}

cplx Jet::derivative_at_zero(int j) const { return factorial_d(j) * coeff(j, 0); }

bool Jet::is_holomorphic(double tol) const {
  for (int j = 0; j <= order_; ++j)
    for (int k = 1; j + k <= order_; ++k)
      if (std::abs(coeff(j, k)) > tol) return false;
  return true;
}

void Jet::check_compatible(const Jet& o) const {
  if (o.order_ != order_) fail(ErrorCode::validation, "jets of different order");
  if (o.base_.u() != base_.u() || o.base_.v() != base_.v()) fail(ErrorCode::validation, "jets at different base points");
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(cplx s) {
  for (auto& x : c_) x *= s;
  return *this;
}

std::string Jet::to_json() const {
  nlohmann::json j;
  j["order"] = order_;
  j["tau"] = {base_.u(), base_.v()};
  nlohmann::json rows = nlohmann::json::array();
  for (int a = 0; a <= order_; ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (int b = 0; a + b <= order_; ++b) row.push_back({coeff(a, b).real(), coeff(a, b).imag()});
    rows.push_back(row);
  }
  j["coeffs"] = rows;
  return j.dump();
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(Jet a, cplx s) { return a *= s; }
Jet operator*(cplx s, Jet a) { return a *= s; }

Jet jet_product(const Jet& a, const Jet& b) {
  if (a.order() != b.order()) fail(ErrorCode::validation, "jet_product: orders differ");
  if (a.base_tau().u() != b.base_tau().u() || a.base_tau().v() != b.base_tau().v()) {
    fail(ErrorCode::validation, "jet_product: base points differ");
  }
  const int N = a.order();
  Jet r(N, a.base_tau());
  for (int j1 = 0; j1 <= N; ++j1)
    for (int k1 = 0; j1 + k1 <= N; ++k1) {
      const cplx x = a.coeff(j1, k1);
      if (x == cplx(0.0, 0.0)) continue;
      for (int j2 = 0; j1 + k1 + j2 <= N; ++j2)
        for (int k2 = 0; j1 + k1 + j2 + k2 <= N; ++k2) r.at(j1 + j2, k1 + k2) += x * b.coeff(j2, k2);
    }
  return r;
}

Jet jet_exp(const Jet& a) {
  if (a.coeff(0, 0) != cplx(0.0, 0.0)) fail(ErrorCode::domain, "jet_exp: constant term must be zero");
  const int N = a.order();
  Jet result = Jet::constant(1.0, N, a.base_tau());
  Jet power = Jet::constant(1.0, N, a.base_tau());
  for (int k = 1; k <= N; ++k) {
    power = jet_product(power, a) * cplx(1.0 / k, 0.0);
    result += power;
  }
  return result;
}

Jet jet_dz(const Jet& a) {
  const int N = std::max(a.order() - 1, 0);
  Jet r(N, a.base_tau());
  for (int j = 0; j <= N; ++j)
    for (int k = 0; j + k <= N; ++k) r.at(j, k) = static_cast<double>(j + 1) * a.coeff(j + 1, k);
  return r;
}

Jet jet_dzbar(const Jet& a) {
  const int N = std::max(a.order() - 1, 0);
  Jet r(N, a.base_tau());
  for (int j = 0; j <= N; ++j)
    for (int k = 0; j + k <= N; ++k) r.at(j, k) = static_cast<double>(k + 1) * a.coeff(j, k + 1);
  return r;
}

Jet y_substitute(const std::vector<cplx>& s, int order, const Tau& base) {
  Jet r(order, base);
  cplx inv2i_pow(1.0, 0.0);  // (2i)^{-i}
  const cplx inv2i = 1.0 / cplx(0.0, 2.0);
  for (int i = 0; i < static_cast<int>(s.size()) && i <= order; ++i) {
    if (s[static_cast<std::size_t>(i)] != cplx(0.0, 0.0)) {
      for (int a = 0; a <= i; ++a) {
        const double sgn = ((i - a) % 2 == 0) ? 1.0 : -1.0;
        r.at(a, i - a) += s[static_cast<std::size_t>(i)] * inv2i_pow * (sgn * binom_d(i, a));
      }
    }
    inv2i_pow *= inv2i;
  }
  return r;
}

Jet z_series(const std::vector<cplx>& s, int order, const Tau& base) {
  Jet r(order, base);
  for (int j = 0; j < static_cast<int>(s.size()) && j <= order; ++j) r.at(j, 0) = s[static_cast<std::size_t>(j)];
  return r;
}

Jet zwegers_S_jet(double alpha, double shift_tau, cplx shift_const, int tau_mult, const Tau& tau, int order,
                  Precision p) {
  if (tau_mult < 1) fail(ErrorCode::domain, "zwegers_S_jet: tau multiplier must be positive");
  const double vp = tau_mult * tau.v(), up = tau_mult * tau.u();
  const double re0 = shift_tau * tau.u() + shift_const.real();
  const double y0 = shift_tau * tau.v() + shift_const.imag();
  const double beta = alpha * std::sqrt(2.0 / vp);
  // P_0 = 2, P_{i+1} = P_i' - 2 pi x P_i; stored as coefficient vectors
  std::vector<std::vector<double>> P{{2.0}};
  for (int i = 1; i < order; ++i) {
    const auto& prev = P.back();
    std::vector<double> next(prev.size() + 1, 0.0);
    for (std::size_t d = 1; d < prev.size(); ++d) next[d - 1] += static_cast<double>(d) * prev[d];
    for (std::size_t d = 0; d < prev.size(); ++d) next[d + 1] -= 2.0 * kPi * prev[d];
    P.push_back(std::move(next));
  }
  auto eval_poly = [](const std::vector<double>& c, double x) {
    double r = 0.0;
    for (std::size_t d = c.size(); d-- > 0;) r = r * x + c[d];
    return r;
  };
  const double center = -y0 / vp;
  const double radius = std::sqrt((kLogCut + 4.0 * order) / (kPi * vp)) + 2.0;
  const std::int64_t jlo = static_cast<std::int64_t>(std::floor(center - radius - 0.5));
  const std::int64_t jhi = static_cast<std::int64_t>(std::ceil(center + radius - 0.5));
  JetAccumulator acc(order, tau, p);
  std::vector<cplx> ys(static_cast<std::size_t>(order + 1)), hs(static_cast<std::size_t>(order + 1));
  for (std::int64_t j = jlo; j <= jhi; ++j) {
    const double n = static_cast<double>(j) + 0.5;
    const double sg = n > 0 ? 1.0 : -1.0;
    const double logmag = kPi * n * n * vp + 2.0 * kPi * n * y0;
    const double x0 = (n + y0 / vp) * std::sqrt(2.0 * vp);
    const double t = sg * std::sqrt(kPi) * x0;
    // sgn(n) - E(x0) = sgn(n) erfc(t), paired with the q-power magnitude
    ys[0] = t >= 0 ? sg * special::erfcx(t) * std::exp(logmag - t * t) : sg * std::erfc(t) * std::exp(logmag);
    const double gauss = std::exp(logmag - kPi * x0 * x0);
    double bpow = 1.0;
    for (int i = 1; i <= order; ++i) {
      bpow *= beta;
      ys[static_cast<std::size_t>(i)] = -eval_poly(P[static_cast<std::size_t>(i - 1)], x0) * gauss * bpow / factorial_d(i);
    }
    const cplx hz(0.0, -2.0 * kPi * n * alpha);
    cplx hp(1.0, 0.0);
    for (int i = 0; i <= order; ++i) {
      hs[static_cast<std::size_t>(i)] = hp / factorial_d(i);
      hp *= hz;
    }
    const double ph = -(std::fmod(0.5 * n * n * up, 1.0) + std::fmod(n * re0, 1.0));
    const cplx unit = half_sign(j) * std::polar(1.0, 2.0 * kPi * ph);
    Jet term = jet_product(y_substitute(ys, order, tau), z_series(hs, order, tau));
    term *= unit;
    acc.add(term);
  }
  return acc.result();
}

namespace {

Jet theta_jet(const ThetaShifted& b, const Tau& tau, int order, Precision p) {
  const double vp = b.tau_mult * tau.v(), up = b.tau_mult * tau.u();
  const double re0 = b.shift_tau * tau.u() + b.shift_const.real();
  const double y0 = b.shift_tau * tau.v() + b.shift_const.imag();
  const double center = -y0 / vp;
  const double radius = std::sqrt((kLogCut + 4.0 * order) / (kPi * vp)) + 2.0;
  const std::int64_t jlo = static_cast<std::int64_t>(std::floor(center - radius - 0.5));
  const std::int64_t jhi = static_cast<std::int64_t>(std::ceil(center + radius - 0.5));
  std::vector<SeriesSum> sums(static_cast<std::size_t>(order + 1), SeriesSum(p));
  for (std::int64_t j = jlo; j <= jhi; ++j) {
    const double n = static_cast<double>(j) + 0.5;
    const double mag = -kPi * n * n * vp - 2.0 * kPi * n * y0;
    const double ph = std::fmod(0.5 * n * n * up, 1.0) + std::fmod(n * (re0 + 0.5), 1.0);
    const cplx base = std::exp(mag) * std::polar(1.0, 2.0 * kPi * ph);
    const cplx hz(0.0, 2.0 * kPi * n * b.alpha);
    cplx hp(1.0, 0.0);
    for (int i = 0; i <= order; ++i) {
      sums[static_cast<std::size_t>(i)].add(base * hp / factorial_d(i));
      hp *= hz;
    }
  }
  Jet r(order, tau);
  for (int i = 0; i <= order; ++i) r.at(i, 0) = sums[static_cast<std::size_t>(i)].value();
  return r;
}

}  // namespace

Jet expand_block(const BlockSpec& spec, const Tau& tau, int order, Precision p) {
  return std::visit(
      [&](const auto& b) -> Jet {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, ThetaShifted>) {
          if (b.tau_mult < 1) fail(ErrorCode::domain, "theta block: tau multiplier must be positive");
          return theta_jet(b, tau, order, p);
        } else if constexpr (std::is_same_v<B, ZwegersSShifted>) {
          return zwegers_S_jet(b.alpha, b.shift_tau, b.shift_const, b.tau_mult, tau, order, p);
        } else if constexpr (std::is_same_v<B, Gaussian>) {
          std::vector<cplx> s(static_cast<std::size_t>(order + 1));
          cplx cp(1.0, 0.0);
          for (int m = 0; 2 * m <= order; ++m) {
            s[static_cast<std::size_t>(2 * m)] = cp / factorial_d(m);
            cp *= b.c;
          }
          return z_series(s, order, tau);
        } else if constexpr (std::is_same_v<B, ExpLinear>) {
          std::vector<cplx> s(static_cast<std::size_t>(order + 1));
          cplx ap(1.0, 0.0);
          for (int j = 0; j <= order; ++j) {
            s[static_cast<std::size_t>(j)] = ap / factorial_d(j);
            ap *= b.a;
          }
          return z_series(s, order, tau);
        } else {
          std::vector<cplx> s(static_cast<std::size_t>(order + 1));
          cplx cp(1.0, 0.0);
          for (int m = 0; 2 * m <= order; ++m) {
            s[static_cast<std::size_t>(2 * m)] = cp / factorial_d(m);
            cp *= b.c;
          }
          return y_substitute(s, order, tau);
        }
      },
      spec);
}

Jet cauchy_taylor(const std::function<cplx(cplx)>& f, int order, const Tau& base, double radius, int points) {
  if (radius <= 0.0 || points <= 2 * order) fail(ErrorCode::domain, "cauchy_taylor: need radius > 0 and more points than 2 * order");
  std::vector<cplx> vals(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) vals[static_cast<std::size_t>(k)] = f(std::polar(radius, 2.0 * kPi * k / points));
  std::vector<cplx> c(static_cast<std::size_t>(order + 1));
  for (int a = 0; a <= order; ++a) {
    SeriesSum s;
    for (int k = 0; k < points; ++k) s.add(vals[static_cast<std::size_t>(k)] * std::polar(1.0, -2.0 * kPi * a * k / points));
    c[static_cast<std::size_t>(a)] = s.value() / (static_cast<double>(points) * std::pow(radius, a));
  }
  return z_series(c, order, base);
}

cplx taylor_completion_psi(const std::vector<cplx>& chi, double m, const Tau& tau, int n) {
  const double c = kPi * m / tau.v();
  cplx s(0.0, 0.0);
  double cj = 1.0;
  for (int j = 0; n - 2 * j >= 0; ++j) {
    const int idx = n - 2 * j;
    if (idx < static_cast<int>(chi.size())) s += cj / factorial_d(j) * chi[static_cast<std::size_t>(idx)];
    cj *= c;
  }
  return s;
}

cplx taylor_completion_rho(const std::vector<cplx>& chi, double m, const Tau& tau, int n) {
  const cplx c = kPi * kPi * m / 3.0 * special::e2_value(tau);
  cplx s(0.0, 0.0);
  cplx cj(1.0, 0.0);
  for (int j = 0; n - 2 * j >= 0; ++j) {
    const int idx = n - 2 * j;
    if (idx < static_cast<int>(chi.size())) s += cj / factorial_d(j) * chi[static_cast<std::size_t>(idx)];
    cj *= c;
  }
  return s;
}

}  // namespace mockmod::jets

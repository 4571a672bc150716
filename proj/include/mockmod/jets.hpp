#pragma once

// Truncated Wirtinger jets: polynomials in (z, zbar) of total degree <= N with
// complex coefficients, attached to a base point tau. Building blocks expand
// theta- and S-type factors around z = 0.

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "mockmod/core.hpp"

namespace mockmod::jets {

class Jet {
 public:
  Jet(int order, const Tau& base);

  static Jet constant(cplx c, int order, const Tau& base);
  static Jet z(int order, const Tau& base);
  static Jet zbar(int order, const Tau& base);

  int order() const noexcept { return order_; }
  const Tau& base_tau() const noexcept { return base_; }

  /// Coefficient of z^j zbar^k; zero when j + k > order.
  cplx coeff(int j, int k) const;
  cplx& at(int j, int k);

  /// j! times the coefficient of z^j zbar^0: the j-th holomorphic derivative at 0.
  cplx derivative_at_zero(int j) const;
  bool is_holomorphic(double tol = 0.0) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(cplx s);

  std::string to_json() const;

 private:
  void check_compatible(const Jet& o) const;
  int order_;
  Tau base_;
  std::vector<cplx> c_;  // row-major over (j, k), j + k <= order
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(Jet a, cplx s);
Jet operator*(cplx s, Jet a);

/// Truncated product; throws Error(validation) on mismatched base or order.
Jet jet_product(const Jet& a, const Jet& b);
/// exp of a jet with zero constant term; throws Error(domain) otherwise.
Jet jet_exp(const Jet& a);
Jet jet_dz(const Jet& a);
Jet jet_dzbar(const Jet& a);
/// sum_i s[i] y^i with y = (z - zbar)/(2i), truncated to the given order.
Jet y_substitute(const std::vector<cplx>& s, int order, const Tau& base);
/// Holomorphic jet sum_j s[j] z^j.
Jet z_series(const std::vector<cplx>& s, int order, const Tau& base);

/// vartheta(alpha z + shift_tau tau + shift_const; tau_mult tau)
struct ThetaShifted {
  double alpha = 1.0;
  double shift_tau = 0.0;
  cplx shift_const{0.0, 0.0};
  int tau_mult = 1;
};
/// S(alpha z + shift_tau tau + shift_const; tau_mult tau) with the real-analytic
/// dependence through y = Im of the first argument.
struct ZwegersSShifted {
  double alpha = 1.0;
  double shift_tau = 0.0;
  cplx shift_const{0.0, 0.0};
  int tau_mult = 1;
};
/// e^{c z^2}
struct Gaussian {
  cplx c;
};
/// e^{a z}
struct ExpLinear {
  cplx a;
};
/// e^{c y^2}, y = Im z
struct GaussianY {
  cplx c;
};

using BlockSpec = std::variant<ThetaShifted, ZwegersSShifted, Gaussian, ExpLinear, GaussianY>;

Jet expand_block(const BlockSpec& spec, const Tau& tau, int order, Precision p = Precision::f64);

/// The y-series of S(Z; tau') around Z0 = shift_tau tau + shift_const when
/// Z = Z0 + alpha z, paired with the holomorphic factor. Exposed for tests.
Jet zwegers_S_jet(double alpha, double shift_tau, cplx shift_const, int tau_mult, const Tau& tau, int order,
                  Precision p = Precision::f64);

/// Holomorphic jet of f around 0 from the trapezoidal rule on |z| = radius.
Jet cauchy_taylor(const std::function<cplx(cplx)>& f, int order, const Tau& base, double radius = 0.2, int points = 64);

/// psi_n = sum_j (pi m / v)^j / j! chi_{n-2j}; chi[j] is the j-th Taylor
/// coefficient at z = 0, missing or negative indices count as 0.
cplx taylor_completion_psi(const std::vector<cplx>& chi, double m, const Tau& tau, int n);
/// rho_n = sum_j (pi^2 m E2 / 3)^j / j! chi_{n-2j}
cplx taylor_completion_rho(const std::vector<cplx>& chi, double m, const Tau& tau, int n);

}  // namespace mockmod::jets

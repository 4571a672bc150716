#pragma once

// Level-l Appell functions A_l, Zwegers' S, the completion A_l-hat, their
// elliptic and modular residual checks and the w -> 0 extrapolation used by
// the Joyce limit construction.

#include <functional>

#include "mockmod/core.hpp"
#include "mockmod/jets.hpp"

namespace mockmod::appell {

struct AppellPoint {
  int ell = 2;
  cplx z1{0.0, 0.0};
  cplx z2{0.0, 0.0};
  Tau tau{0.0, 1.0};
};

struct AppellValue {
  cplx value;
  double tail_bound = 0.0;
  double abs_sum = 0.0;  // sum of term moduli, the cancellation scale
  int terms = 0;
};

/// A_l(z1, z2; tau) by a symmetric n-range grown until the tail is < 1e-16
/// of the running sum. Throws Error(pole) when z1 lies on Z tau + Z.
AppellValue appell_A_value(const AppellPoint& p, Precision prec = Precision::f64);
cplx appell_A(const AppellPoint& p, Precision prec = Precision::f64);

/// Taylor jet in z of A_l(z1, z2 + z; tau) (holomorphic in z).
jets::Jet appell_A_z2_jet(int ell, cplx z1, cplx z2, const Tau& tau, int order, Precision prec = Precision::f64);

/// One term of S(Z; tau) for n in 1/2 + Z, with y = Y supplied separately.
cplx zwegers_S_term(double n, cplx z, double y, const Tau& tau);
/// S(z; tau) with the real-analytic dependence on y = Im z.
cplx zwegers_S(cplx z, const Tau& tau, Precision prec = Precision::f64);
/// S with y decoupled from z: the sum evaluated at Z = z but with E((n + y/v) sqrt(2v)).
cplx zwegers_S_ext(cplx z, double y, const Tau& tau, Precision prec = Precision::f64);
/// Natural log of the modulus of the n-th S term; the sgn - E factor is paired
/// with the growing q-power as a scaled incomplete gamma.
double zwegers_S_term_log_modulus(double n, cplx z, double y, const Tau& tau);

/// A_l-hat(z1, z2; tau) = A_l + (i/2) sum_nu e^{2 pi i nu z1} theta(...) S(...).
cplx appell_hat(const AppellPoint& p, Precision prec = Precision::f64);
/// The completion term alone.
cplx appell_completion(const AppellPoint& p, Precision prec = Precision::f64);

/// Elliptic law for shifts (z1 + n1 tau + m1, z2 + n2 tau + m2).
Report check_elliptic(const AppellPoint& p, int n1, int m1, int n2, int m2, double tol = 1e-7);
/// Modular law for gamma in SL2(Z).
Report check_modular(const AppellPoint& p, const Mobius& g, double tol = 1e-7);

struct LimitValue {
  cplx value;
  double error = 0.0;
  cplx samples[3];
};

/// Richardson extrapolation of f(w) to w = 0 over w in {1, 1/2, 1/4} * base,
/// assuming f(w) = f0 + c1 w + c2 w^2 + O(w^3).
LimitValue richardson_limit(const std::function<cplx(cplx)>& f, cplx base = cplx(1e-2, 1e-2));

/// Limit of f(t) as t -> 0 along a real line for f smooth in t: the even part
/// (f(t) + f(-t))/2 at t in {1, 1/2, 1/4} * h extrapolated twice in t^2.
/// error compares the result against the first extrapolation.
LimitValue richardson_limit_even(const std::function<cplx(double)>& f, double h = 2e-2);

/// (1 - zeta) zeta^{-3/2} / (q; q)_inf * A_3(z, -tau; tau)
cplx rank_via_appell(cplx z, const Tau& tau, Precision prec = Precision::f64);
/// 1 + sum_{n >= 1} q^{n^2} / ((zeta q; q)_n (zeta^{-1} q; q)_n), summed directly.
cplx rank_via_series(cplx z, const Tau& tau, Precision prec = Precision::f64);

}  // namespace mockmod::appell

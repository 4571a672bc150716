#pragma once

// Joyce series J_k, the theta and incomplete-gamma components vartheta_nu and
// s_nu, the Rankin-Cohen assembly of the completion J-hat_k and its
// transformation, lowering and Appell-limit checks.

#include <vector>

#include "mockmod/core.hpp"
#include "mockmod/exactq.hpp"

namespace mockmod::joyce {

struct JoyceCompletion {
  int k = 2;
  Tau tau{0.0, 1.0};
  cplx j_holo, delta_term, bracket_term, total;
};

struct CheckOptions {
  Precision precision = Precision::f64;
  double tol = -1.0;  // < 0: the check's default
};

/// J_k(tau) = 1/2 sum_{n != 0} n^{k-1} q^{n^2} / (1 - q^n), summed directly.
cplx joyce_series(int k, const Tau& tau, Precision p = Precision::f64);

/// D^j vartheta_nu(tau) with D = q d/dq applied formally to
/// vartheta_{-1} = -sum_{n in Z} q^{n^2}, vartheta_0 = -sum_{n in 1/2+Z} q^{n^2}.
cplx theta_nu(int nu, const Tau& tau, int d_order = 0, Precision p = Precision::f64);

/// sqrt(pi) sum_{m in (nu+1)/2 + Z} |m| Gamma(-1/2, 4 pi m^2 v) q^{-m^2}, the m = 0
/// term read as its limit 1/sqrt(v), with d_order Wirtinger D = (2 pi i)^{-1} d/dtau
/// applied term by term in closed form.
cplx s_nu(int nu, const Tau& tau, int d_order = 0, Precision p = Precision::f64);
/// The same sum over n in (nu+1)/2 + Z with |n + nu/2|, taken literally.
cplx s_nu_literal(int nu, const Tau& tau, Precision p = Precision::f64);
/// [d/dz S_nu(z; tau)]_{z=0} for S_nu(z; tau) = e^{-pi i nu z} q^{-nu^2/4} S(z + nu tau + 1/2; 2 tau),
/// from the Wirtinger jet.
cplx s_nu_from_jet(int nu, const Tau& tau, Precision p = Precision::f64);
/// Scaled modulus of the s_nu term at m (including the q-power), d_order = 0.
double s_nu_term_modulus(double m, const Tau& tau);

/// vartheta_{l,nu}(tau): the (l-1)-th z-derivative at 0 of
/// vartheta(z + nu tau + 1/2; 2 tau) e^{pi i nu z} q^{nu^2/4} e^{pi z^2 / (4v)}, from the jet.
cplx theta_ln(int ell, int nu, const Tau& tau, Precision p = Precision::f64);
/// The same value from sum_j binom(l-1, 2j) [d^{l-1-2j} vartheta_nu(z)]_0 c_j (pi/(4v))^j / j!
/// with c_j = (2j)! when central_factorial is set and c_j = 1 otherwise.
cplx theta_ln_expansion(int ell, int nu, const Tau& tau, bool central_factorial = true, Precision p = Precision::f64);

/// (k-2)! (-1)^{k/2+1} / (Gamma((k-1)/2)^2 2^{k+1}).
double completion_prefactor(int k);
/// [vartheta_nu, s_nu]_kappa with weights 1/2 and 3/2.
cplx theta_s_bracket(int nu, int kappa, const Tau& tau, Precision p = Precision::f64);

/// J-hat_k = J_k + delta_{k=2}/(8 pi v) + prefactor * sum_nu [vartheta_nu, s_nu]_{k/2-1}.
/// Throws Error(domain) for odd or non-positive k.
JoyceCompletion joyce_hat(int k, const Tau& tau, Precision p = Precision::f64);

struct ComparebinRow {
  int ell = 1;
  int j = 0;
  exactq::Rational lhs;  // pi times binom(l, 2j) (-1)^{(l-1)/2+j} / (4 pi)
  exactq::Rational rhs;  // pi times the bracket-side coefficient
};
/// Both sides of the bracket coefficient identity for odd l <= k_max - 1,
/// 0 <= j <= (l-1)/2, as exact rationals (the common 1/pi removed).
std::vector<ComparebinRow> comparebin_rows(int k_max);
/// Gamma(l/2)^2 / pi for odd l, exactly.
exactq::Rational gamma_half_squared_over_pi(int ell);

/// g_l(tau) = (2 pi i)^{-l} lim_{w -> 0} [d^l/dz^l A_2(w, z; tau)]_{z = -tau}, l odd.
cplx g_appell_limit(int ell, const Tau& tau, double* error = nullptr, Precision p = Precision::f64);
/// g-hat_l(tau) = (2 pi i)^{-l} lim_{w -> 0} [d^l/dz^l (e^{pi z w / v} A-hat_2(w, z; tau))]_{z=0}.
cplx ghat_appell_limit(int ell, const Tau& tau, double* error = nullptr, Precision p = Precision::f64);
/// delta_{l=1}/(4 pi v) + (i/2)(2 pi i)^{-l} [d^l/dz^l sum_nu vartheta(z + nu tau + 1/2; 2 tau) S(z + nu tau + 1/2; 2 tau)]_0.
cplx difference_jet(int ell, const Tau& tau, Precision p = Precision::f64);

/// |J-hat_k(g tau) - (c tau + d)^k J-hat_k(tau)| / scale, scale the larger of
/// |J-hat_k(tau)| and its holomorphic part (J-hat_2 vanishes at tau = i).
Report check_joyce_transform(int k, const Mobius& g, const Tau& tau, const CheckOptions& o = {});
/// The lowering check: a pass/fail record for the best candidate and an
/// adjudication record comparing the candidate right-hand sides at v and 2v.
std::vector<Report> check_joyce_lowering(int k, const Tau& tau, const CheckOptions& o = {});
/// vartheta*_nu(z/(c tau + d); g tau) = chi_nu(g) (c tau + d)^{1/2} vartheta*_nu(z; tau) on Gamma_1(4),
/// chi_nu = psi^3(a, 2b; c/2, d) i^{c/4} i^{nu b}. The second record evaluates the
/// nu-independent multiplier without i^{nu b}. Throws Error(domain) outside Gamma_1(4).
std::vector<Report> gamma1_4_theta_transform(const Mobius& g, const Tau& tau, cplx z, const CheckOptions& o = {});
/// s_nu against the jet-extracted S_nu, with the literal index set as an adjudication record.
std::vector<Report> check_s_nu(int nu, const Tau& tau, const CheckOptions& o = {});
/// J_k q-series against g_{k-1}/2 from the extrapolated Appell limit.
Report check_appell_limit(int k, const Tau& tau, const CheckOptions& o = {});
/// g-hat_{k-1} = 2 J-hat_k, and g-hat - g against the jet-assembled difference.
std::vector<Report> check_ghat(int k, const Tau& tau, const CheckOptions& o = {});
/// 1/Im(g tau) = (c tau + d)^2 / v - 2 i c (c tau + d).
Report check_im_identity(const Mobius& g, const Tau& tau, const CheckOptions& o = {});
/// The two expansion forms of vartheta_{l,nu} against the jet value.
std::vector<Report> check_theta_ln(int ell, const Tau& tau, const CheckOptions& o = {});

}  // namespace mockmod::joyce

#pragma once

// Report-producing checks for the building blocks that have no check entry
// point of their own: theta, eta, E2, incomplete gamma, lowering calibration,
// the theta^8 Taylor completions and the exact-layer identities.

#include <vector>

#include "mockmod/core.hpp"

namespace mockmod::harness::checks {

/// theta(z + l tau + m) against (-1)^{l+m} q^{-l^2/2} e^{-2 pi i l z} theta(z), l, m in {-1, 0, 1, 2}.
Report theta_elliptic(const Tau& tau, cplx z, double tol = 1e-9);
/// theta(z/(c tau + d); g tau) against psi^3 (c tau + d)^{1/2} e^{pi i c z^2/(c tau + d)} theta(z; tau).
Report theta_modular(const Mobius& g, const Tau& tau, cplx z, double tol = 1e-9);
/// E2(g tau) - (c tau + d)^2 E2(tau) + (6 i c / pi)(c tau + d).
Report e2_transform(const Mobius& g, const Tau& tau, double tol = 1e-9);
Report e2hat_transform(const Mobius& g, const Tau& tau, double tol = 1e-9);
/// max of ||psi| - 1|, |psi^24 - 1| and the tau-dependence of the raw quotient.
Report eta_multiplier(const Mobius& g, const Tau& tau, double tol = 1e-9);
/// Both incomplete-gamma relations over a log grid.
Report incomplete_gamma(double tol = 1e-12);
/// L(1/v) = -1, L(E2-hat) = 3/pi, L(eta) = 0.
Report lowering_calibration(const Tau& tau, double tol = 1e-6);
/// psi_n and rho_n of theta^8 (index 4, weight 4) at g tau against (c tau + d)^{4+n} at tau.
std::vector<Report> theta8_completions(const Mobius& g, const Tau& tau, int order = 12, double tol = 1e-8);
/// Heat equation: [d^3/dz^3 S_nu]_0 = -(2 pi i)^2 D s_nu with analytic D.
Report heat_equation(int nu, const Tau& tau, double tol = 1e-9);
/// The eta period integral against the term-by-term single-term closed forms.
Report period_eta(const Tau& tau, double tol = 1e-9);
/// R(zeta; q) through A_3 against the direct series at (z, tau).
Report rank_lerch(cplx z, const Tau& tau, double tol = 1e-9);
/// S(-z) = S(z).
Report zwegers_even(cplx z, const Tau& tau, double tol = 1e-12);

// Exact layer: residual 0 on exact agreement, 1 otherwise.
Report triple_product(int order = 40);
Report rewrite_theta(int order = 60);
Report rank_table_enumeration(int nmax = 30);
Report rank_row_sums(int nmax = 60);
Report partition_congruences(int nmax = 100);
Report rank_specializations(int order = 50);
Report taylor_r(int order = 30);
Report comparebin(int k_max = 12);

}  // namespace mockmod::harness::checks

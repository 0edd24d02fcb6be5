#ifndef G2STROM_TORSION_HPP
#define G2STROM_TORSION_HPP

#include <string>

#include "g2strom/fourier.hpp"
#include "g2strom/g2.hpp"

namespace g2strom {

/// Grid parameters for the pointwise (metric-dependent) operations.
/// out_cutoff < 0 selects 2 * max(1, input cutoff); the grid then has
/// 2 * oversample * out_cutoff + 1 points per active axis.
struct GridOptions {
  int out_cutoff = -1;
  int oversample = 2;
};

/// Hodge star of the field s with the metric induced by omega(x) at every
/// point. Exact (per-mode) when omega is constant; collocation otherwise.
/// Throws MetricError with the grid location when omega(x) fails to be
/// positive.
FourierField pointwise_star(const FourierField& s, const FourierField& omega_field,
                            GridOptions opts = {});

/// The Lee form of omega: the unique 1-form field with
/// pi_{Lambda^5_7}(d * omega) = theta ^ *omega, computed by the adjoint of
/// the injective map alpha -> alpha ^ *omega and a pointwise 7x7 normal
/// solve. Sign convention: on solutions of the coclosure equation
/// d*omega = -4 dphi ^ *omega this returns exactly -4 dphi.
FourierField lee_form(const FourierField& omega_field, GridOptions opts = {});

/// Torsion 3-form H = -*(d omega + 4 d phi ^ omega), with the omega-induced
/// star evaluated pointwise.
FourierField torsion_H(const FourierField& omega_field, const FourierField& phi_field,
                       GridOptions opts = {});

/// Fernandez-Gray component norms of the intrinsic torsion plus verdicts.
struct ClassReport {
  double pi1_domega = 0.0, pi7_domega = 0.0, pi27_domega = 0.0;
  double pi7_dstar = 0.0, pi14_dstar = 0.0;
  double lee_exactness_residual = 0.0; // |d theta_w| and harmonic part combined
  double w3_residual = 0.0;            // |d*w + 4 dphi ^ *w| for the recovered phi
  bool torsion_free = false;
  bool cocalibrated = false;
  bool cocalibrated_w3 = false; // dw ^ w = 0 and coclosure with recovered phi
  bool conformally_coclosed = false;
  std::string verdict;
  double tol = 0.0;
};

ClassReport fernandez_gray(const FourierField& omega_field, double tol = 1e-9,
                           GridOptions opts = {});

/// The four residual fields of the coupled system:
/// E1 = dw ^ w, E2 = d*w + 4 dphi ^ *w,
/// E3 = -d(*(dw + 4 dphi ^ w)) - c(F ^ F), E4 = F ^ *w.
struct StromingerResidual {
  FourierField E1, E2, E3, E4;
  double norm_E1 = 0.0, norm_E2 = 0.0, norm_E3 = 0.0, norm_E4 = 0.0;
  /// Norm of the zero-mode of c(F ^ F); nonzero values obstruct solvability
  /// of E3 (the Pontryagin-class condition).
  double bianchi_obstruction = 0.0;
  bool solvability_flag = false;
  bool first_line_warning = false;
  double tol = 0.0;

  double max_norm() const;
};

StromingerResidual strominger_residual(const FourierField& omega_field,
                                       const FourierField& phi_field, const ConnectionField& theta,
                                       const LieAlgebraConfig& lie, double tol = 1e-9,
                                       GridOptions opts = {});

} // namespace g2strom

#endif

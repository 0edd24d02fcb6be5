#ifndef G2STROM_MODULI_HPP
#define G2STROM_MODULI_HPP

#include <string>
#include <vector>

#include "g2strom/fourier.hpp"
#include "g2strom/g2.hpp"
#include "g2strom/lie.hpp"
#include "g2strom/torsion.hpp"

namespace g2strom {

/// Which linearized complex to assemble.
enum class ComplexKind { KS, GenKS, MetricOnly, InstantonOnly };

std::string to_string(ComplexKind kind);

/// Numerical thresholds for rank, containment and the complex property.
struct ModuliTolerances {
  double rank_tol = 1e-9;
  double angle_tol = 1e-9;
  double complex_tol = 1e-12;
  double residual_tol = 1e-12;
};

/// A torsion-free flat base point on T^7: constant positive 3-form,
/// constant dilaton, flat connection. Construction verifies that the
/// full system residual vanishes. Only such bases are supported: at them
/// the full linearization collapses to the reduced operators (every term
/// carrying d omega, d phi or F multiplies zero, including the variation
/// of the Hodge star against the torsion).
class BasePoint {
public:
  static BasePoint flat(G2Structure g2, LieAlgebraConfig lie, double phi = 0.0,
                        double residual_tol = 1e-12);

  const G2Structure& g2() const { return m_g2; }
  const LieAlgebraConfig& lie() const { return m_lie; }
  double phi() const { return m_phi; }

  FourierField omega_field(int cutoff = 1) const;
  FourierField phi_field(int cutoff = 1) const;
  ConnectionField theta_field(int cutoff = 1) const;

private:
  BasePoint(G2Structure g2, LieAlgebraConfig lie, double phi);
  G2Structure m_g2;
  LieAlgebraConfig m_lie;
  double m_phi;
};

/// Per-mode matrices of the gauge action P and the linearization L.
/// Assembled over the real covector u = 2 pi k; the powers of i carried by
/// the true per-mode operators factor through block-consistent diagonal
/// rescalings of the graded domain and codomain, so kernels, ranks and
/// principal angles agree with the complex operators exactly.
struct BlockOperator {
  Wavevector k{};
  Eigen::MatrixXd P, L;
  std::vector<std::pair<std::string, int>> gauge_segments, domain_segments, codomain_segments;

  double complex_residual() const; // |L P| / (|L| |P|), 0 for zero factors
};

BlockOperator assemble_KS_block(const BasePoint& base, const Wavevector& k);
BlockOperator assemble_genKS_block(const BasePoint& base, const Wavevector& k);
BlockOperator assemble_block(const BasePoint& base, const Wavevector& k, ComplexKind kind);

struct ModeResult {
  Wavevector k{};
  int dim_ker_L = 0;
  int rank_P = 0;
  int defect = 0;
  double containment_angle = 0.0;
  double complex_residual = 0.0;
};

struct CohomologyResult {
  ComplexKind kind = ComplexKind::KS;
  int cutoff = 0;
  long total_H1 = 0;
  int n_modes = 0;
  double max_containment_angle = 0.0;
  double max_complex_residual = 0.0;
  std::vector<ModeResult> modes_with_defect;
  /// Kernel representatives at k = 0 (columns), the harmonic sector.
  Eigen::MatrixXd harmonic_basis;
  std::vector<std::pair<std::string, int>> domain_segments;
  bool containment_ok = false;
};

/// Sum of per-mode defects dim ker L_k - rank P_k over |k|_inf <= K, with
/// the containment im P_k within ker L_k verified by principal angle.
CohomologyResult cohomology_dimension(const BasePoint& base, int K, ComplexKind kind,
                                      ModuliTolerances tols = {});

/// Field-level reduced operators at the flat base (the same maps whose
/// per-mode blocks assemble_* build).
struct TangentFields {
  FourierField omega_dot, phi_dot, theta_dot;
};
struct GenTangentFields {
  FourierField omega_dot, phi_dot, theta_dot, b_dot;
};

TangentFields apply_P(const BasePoint& base, const FourierField& V, const FourierField& r);
std::vector<FourierField> apply_L(const BasePoint& base, const TangentFields& t);
GenTangentFields apply_genP(const BasePoint& base, const FourierField& V, const FourierField& r,
                            const FourierField& xi);
std::vector<FourierField> apply_genL(const BasePoint& base, const GenTangentFields& t);

/// Flux map: harmonic (k = 0) part of T_dot - 2 c(theta_dot, F) for a
/// kernel element; throws when the element is not in ker L.
Eigen::VectorXd flux_map(const BasePoint& base, const TangentFields& element,
                         double tol = 1e-9);

} // namespace g2strom

#endif

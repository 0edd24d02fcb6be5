#ifndef G2STROM_SYMBOLS_HPP
#define G2STROM_SYMBOLS_HPP

#include <string>
#include <vector>

#include "g2strom/g2.hpp"
#include "g2strom/lie.hpp"

namespace g2strom {

/// Per-covector matrix of a constant-coefficient (multi-degree) operator
/// between direct sums of form bundles. block_degree(i,j) records the
/// homogeneity of block (i,j) in the covector (-1 for structurally zero
/// blocks), which makes the multi-degree system of orders testable.
struct SymbolMatrix {
  KForm covector;
  std::vector<std::string> domain_labels, codomain_labels;
  std::vector<int> domain_dims, codomain_dims;
  Eigen::MatrixXd matrix;
  Eigen::MatrixXi block_degree;

  int domain_dim() const;
  int codomain_dim() const;
  int domain_offset(int block) const;
  int codomain_offset(int block) const;
  Eigen::MatrixXd block(int row_block, int col_block) const;
};

/// sigma_{P_M}(v)(V) = (v ^ i_V omega, 0): R^7 -> Lambda^3 + R.
SymbolMatrix symbol_P_M(const G2Structure& g2, const KForm& v);

/// sigma_{L_M}(v)(w,f) = (v^w^omega, v^(*Jw + f *omega), v^*(v^(w + f omega))):
/// Lambda^3 + R -> Lambda^7 + Lambda^5 + Lambda^4.
SymbolMatrix symbol_L_M(const G2Structure& g2, const KForm& v);

/// Gauge-action symbol r -> v (x) r on the bundle factor.
SymbolMatrix symbol_P_P(const LieAlgebraConfig& lie, const KForm& v);

/// Instanton-equation symbol a -> (v ^ a) ^ *omega.
SymbolMatrix symbol_L_P(const G2Structure& g2, const LieAlgebraConfig& lie, const KForm& v);

/// sigma_{D_theta}(xi) a = (*omega ^ (xi ^ a), i_{xi#} a); injective for
/// xi != 0.
SymbolMatrix symbol_D_theta(const G2Structure& g2, const LieAlgebraConfig& lie, const KForm& xi);

/// Full coupled symbols, assembled directly from the highest-order system.
SymbolMatrix symbol_P_full(const G2Structure& g2, const LieAlgebraConfig& lie, const KForm& v);
SymbolMatrix symbol_L_full(const G2Structure& g2, const LieAlgebraConfig& lie, const KForm& v);

struct ExactnessReport {
  Eigen::VectorXd covector;
  int rank_P = 0;
  int dim_ker_L = 0;
  double containment_angle = 0.0;     // max principal angle im sigma_P vs ker sigma_L
  double composition_residual = 0.0;  // |sigma_L sigma_P| / (|sigma_L||sigma_P|)
  double sigma_min_D_theta = 0.0;     // 0 when the bundle is trivial
  int rank_D_theta = 0;
  double product_split_residual = 0.0; // |full symbol - product of factors|
  double rank_margin_P = 0.0;          // smallest kept singular value / sigma_max
  double kernel_margin_L = 0.0;        // smallest kept singular value / sigma_max
  bool pass = false;

  static constexpr double kCompositionTol = 1e-12;
};

/// Middle-exactness of the symbol sequence at covector v, plus the
/// bundle-block injectivity and the product-splitting consistency check.
ExactnessReport check_exactness_middle(const G2Structure& g2, const LieAlgebraConfig& lie,
                                       const KForm& v, double tol, double rank_tol = 1e-9);

struct AggregateReport {
  int n_samples = 0;
  uint64_t seed = 0;
  double tol = 0.0;
  double rank_tol = 0.0;
  int n_pass = 0;
  int min_rank_P = 0, max_rank_P = 0;
  int min_dim_ker_L = 0, max_dim_ker_L = 0;
  double max_containment_angle = 0.0;
  double max_composition_residual = 0.0;
  double min_sigma_min_D_theta = 0.0;
  double min_rank_margin_P = 0.0;
  double min_kernel_margin_L = 0.0;
  double max_product_split_residual = 0.0;
  std::vector<Eigen::VectorXd> failing_covectors;
  bool pass = false;
};

/// Deterministic sweep over seeded random unit covectors.
AggregateReport sweep_symbols(const G2Structure& g2, const LieAlgebraConfig& lie, int n_samples,
                              uint64_t seed, double tol, double rank_tol = 1e-9);

} // namespace g2strom

#endif

#ifndef G2STROM_LIE_HPP
#define G2STROM_LIE_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "g2strom/errors.hpp"

namespace g2strom {

/// A real Lie algebra given by structure constants together with an
/// invariant pairing c and the alpha' scale entering c = -2 alpha' tr.
/// dim() == 0 plays the role of the trivial structure group.
class LieAlgebraConfig {
public:
  static LieAlgebraConfig trivial();
  /// su(2) with [T_a,T_b] = eps_{abc} T_c and c = alpha' * Id (the pairing
  /// -2 alpha' tr in the fundamental representation).
  static LieAlgebraConfig su2(double alpha_prime = 1.0);
  /// u(1): abelian with vanishing Killing pairing; kept as the canonical
  /// degenerate example that downstream constructors must reject.
  static LieAlgebraConfig u1();
  /// Look up by name: "trivial", "su2", "u1".
  static LieAlgebraConfig by_name(const std::string& name, double alpha_prime = 1.0);

  const std::string& name() const { return m_name; }
  int dim() const { return m_dim; }
  double alpha_prime() const { return m_alpha_prime; }
  const Eigen::MatrixXd& pairing() const { return m_pairing; }

  /// [x, y] in coordinates over the chosen basis.
  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  double structure_constant(int a, int b, int c) const;
  double pairing_value(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  double jacobi_residual() const;
  double ad_invariance_residual() const;
  double pairing_min_singular_value() const;
  bool pairing_nondegenerate(double tol = 1e-12) const;

  /// Structural checks (Jacobi, ad-invariance of c); throws LieAlgebraError.
  /// Pairing nondegeneracy is checked by the consumers that require it.
  void validate(double tol = 1e-12) const;

private:
  LieAlgebraConfig(std::string name, int dim, std::vector<Eigen::MatrixXd> ad,
                   Eigen::MatrixXd pairing, double alpha_prime);

  std::string m_name;
  int m_dim;
  std::vector<Eigen::MatrixXd> m_ad; // ad[a](b,c): [T_a, T_b] = sum_c ad[a](c,b) T_c
  Eigen::MatrixXd m_pairing;
  double m_alpha_prime;
};

} // namespace g2strom

#endif

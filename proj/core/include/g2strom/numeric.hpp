#ifndef G2STROM_NUMERIC_HPP
#define G2STROM_NUMERIC_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

namespace g2strom {

/// Numerical rank: number of singular values above tol * sigma_max.
/// The zero matrix has rank 0 regardless of tol.
int rank_with_tol(const Eigen::MatrixXd& m, double tol = 1e-9);

/// Orthonormal basis of the kernel (relative threshold as in rank_with_tol).
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& m, double tol = 1e-9);

/// Orthonormal basis of the column space.
Eigen::MatrixXd image_basis(const Eigen::MatrixXd& m, double tol = 1e-9);

/// Largest principal angle (radians) between the spans of two orthonormal
/// bases; 0 when either is empty. Angle 0 means containment/equality of
/// the smaller span in the larger.
double max_principal_angle(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V);

/// Spectral norm.
double operator_norm(const Eigen::MatrixXd& m);

/// Smallest singular value.
double min_singular_value(const Eigen::MatrixXd& m);

/// Run fn(i) for i in [0, n), distributing chunks over hardware threads.
/// fn must only touch disjoint state per index.
void parallel_for(int n, const std::function<void(int)>& fn);

/// xorshift-based deterministic generator used for all seeded sampling;
/// identical streams across platforms, unlike std:: distributions.
class Rng {
public:
  explicit Rng(uint64_t seed);
  uint64_t next_u64();
  /// Uniform in [0,1).
  double uniform();
  /// Uniform in [lo,hi).
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller.
  double normal();
  /// Uniform integer in [0, n).
  int below(int n);

private:
  uint64_t m_state[4];
  bool m_have_spare = false;
  double m_spare = 0.0;
};

} // namespace g2strom

#endif

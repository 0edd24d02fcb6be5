#ifndef G2STROM_EXTERIOR_HPP
#define G2STROM_EXTERIOR_HPP

#include <Eigen/Dense>
#include <array>
#include <initializer_list>
#include <memory>
#include <vector>

#include "g2strom/errors.hpp"

namespace g2strom {

inline constexpr int kDim = 7;

/// Dimension of the space of alternating k-forms on R^7, i.e. C(7,k).
int form_dim(int degree);

using Vector7 = Eigen::Matrix<double, 7, 1>;
using Matrix7 = Eigen::Matrix<double, 7, 7>;

/// Strictly increasing tuple of indices in 1..7. Basis k-forms e^{i1...ik}
/// are enumerated lexicographically within each degree.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> indices);
  MultiIndex(std::initializer_list<int> indices);

  int degree() const { return static_cast<int>(m_indices.size()); }
  const std::vector<int>& indices() const { return m_indices; }
  int operator[](int a) const { return m_indices[static_cast<size_t>(a)]; }
  bool contains(int i) const;

  /// Lexicographic position among all multi-indices of the same degree.
  int position() const;
  static const MultiIndex& at(int degree, int position);
  static const std::vector<MultiIndex>& basis(int degree);

  /// Complementary index set in 1..7 (increasing).
  MultiIndex complement() const;

  bool operator==(const MultiIndex& other) const { return m_indices == other.m_indices; }

private:
  std::vector<int> m_indices;
};

/// Degree-k alternating form with real coefficients over the canonical
/// multi-index basis. Plain value type; all operations are non-mutating.
class KForm {
public:
  KForm() : m_degree(0), m_coeffs(Eigen::VectorXd::Zero(1)) {}
  explicit KForm(int degree);
  KForm(int degree, Eigen::VectorXd coeffs);

  /// Basis monomial with sign normalization, e.g. basis({2,1}) = -e^{12}.
  static KForm basis(std::initializer_list<int> indices);
  static KForm basis(const MultiIndex& idx);

  int degree() const { return m_degree; }
  const Eigen::VectorXd& coeffs() const { return m_coeffs; }
  Eigen::VectorXd& coeffs() { return m_coeffs; }
  double coeff(const MultiIndex& idx) const;
  void set_coeff(const MultiIndex& idx, double value);

  bool is_zero(double tol = 0.0) const;
  double max_abs() const { return m_coeffs.lpNorm<Eigen::Infinity>(); }

  KForm& operator+=(const KForm& other);
  KForm& operator-=(const KForm& other);
  KForm& operator*=(double s);
  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(double s, KForm a) { return a *= s; }
  friend KForm operator*(KForm a, double s) { return a *= s; }
  friend KForm operator-(KForm a) { return a *= -1.0; }

private:
  int m_degree;
  Eigen::VectorXd m_coeffs;
};

/// Constant metric data on R^7: Gram matrix, orientation sign, and the
/// volume form orientation * sqrt(det g) e^{1...7}. Construction
/// precomputes the induced Gram and Hodge star matrices on every Lambda^k;
/// instances are immutable and cheap to copy.
class MetricData {
public:
  static MetricData euclidean();
  static MetricData from_gram(const Matrix7& gram, int orientation = +1);

  const Matrix7& gram() const { return m_gram; }
  int orientation() const { return m_orientation; }
  const KForm& volume_form() const { return m_volume; }
  double sqrt_det() const { return m_sqrt_det; }

  /// Gram matrix of the induced inner product on Lambda^k.
  const Eigen::MatrixXd& form_gram(int degree) const;
  /// Matrix of the Hodge star Lambda^k -> Lambda^{7-k}.
  const Eigen::MatrixXd& star_matrix(int degree) const;

private:
  MetricData(const Matrix7& gram, int orientation);

  Matrix7 m_gram;
  int m_orientation;
  double m_sqrt_det;
  KForm m_volume;
  struct Cache {
    std::array<Eigen::MatrixXd, kDim + 1> form_gram;
    std::array<Eigen::MatrixXd, kDim + 1> star;
  };
  std::shared_ptr<const Cache> m_cache;
};

/// Exterior product. Throws DegreeError if deg a + deg b > 7.
KForm wedge(const KForm& a, const KForm& b);

/// Coefficient of e^{1...7} in a ^ b, for deg a + deg b = 7.
double wedge_top(const KForm& a, const KForm& b);

/// Interior product i_v a. Throws DegreeError for degree-0 input.
KForm interior(const Vector7& v, const KForm& a);

/// Hodge star with respect to the metric: a ^ *b = <a,b> vol.
KForm hodge_star(const KForm& a, const MetricData& m);

/// Induced inner product on forms of equal degree.
double inner_product(const KForm& a, const KForm& b, const MetricData& m);

/// Metric norm sqrt(<a,a>).
double form_norm(const KForm& a, const MetricData& m);

/// Musical isomorphism: the vector xi^# with g(xi^#, w) = xi(w).
Vector7 sharp(const KForm& xi, const MetricData& m);

/// One-form v^flat with (v^flat)(w) = g(v,w).
KForm flat(const Vector7& v, const MetricData& m);

/// Pullback A^* x of a k-form along the linear map A (coefficients of
/// (A^*x)(e_{j1},...,e_{jk}) = x(A e_{j1},...,A e_{jk})).
KForm pullback(const Matrix7& A, const KForm& x);

/// Matrix of the pullback A^* acting on Lambda^k coefficients.
Eigen::MatrixXd pullback_matrix(const Matrix7& A, int degree);

/// Matrix of v ^ . : Lambda^k -> Lambda^{k+1}.
Eigen::MatrixXd wedge_matrix(const KForm& v, int degree);

/// Matrix of i_v : Lambda^k -> Lambda^{k-1}.
Eigen::MatrixXd interior_matrix(const Vector7& v, int degree);

} // namespace g2strom

#endif

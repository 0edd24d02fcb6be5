#ifndef G2STROM_G2_HPP
#define G2STROM_G2_HPP

#include <map>
#include <utility>

#include "g2strom/exterior.hpp"

namespace g2strom {

/// Irreducible component of Lambda^k under G2; label is the dimension of
/// the component (Lambda^2: 7,14; Lambda^3, Lambda^4: 1,7,27; Lambda^5: 7,14).
struct TypeComponent {
  int degree;
  int label;
};

/// Whether (degree, label) names an irreducible component handled here.
bool valid_type_component(int degree, int label);

/// Induced metric of a positive 3-form: the symmetric form B with
/// B(u,v) vol = lambda i_u omega ^ i_v omega ^ omega, normalized so the
/// standard form yields the Euclidean metric (lambda = -1/6 with the
/// e^{1...7} orientation). Throws MetricError when omega is not positive.
MetricData metric_from_positive_3form(const KForm& omega);

/// A G2 structure at a point: positive 3-form, induced metric, Hodge dual,
/// and the G2-irreducible projectors on Lambda^2..Lambda^5. Immutable
/// after construction; safe for concurrent reads.
class G2Structure {
public:
  /// The model form e^123 + e^1^(e^45 - e^67) + e^2^(e^46 - e^75)
  /// + e^3^(e^47 - e^56), whose induced metric is Euclidean.
  static G2Structure standard();

  /// Build from an arbitrary positive 3-form.
  static G2Structure from_three_form(const KForm& omega);

  const KForm& omega() const { return m_omega; }
  const KForm& star_omega() const { return m_star_omega; }
  const MetricData& metric() const { return m_metric; }

  /// Matrix of the projector onto the labelled component of Lambda^degree.
  const Eigen::MatrixXd& projector(int degree, int label) const;

  /// Apply the projector; throws DegreeError on invalid (degree,label).
  KForm project(const TypeComponent& c, const KForm& a) const;

  /// J = 4/3 pi_1 + pi_7 - pi_27 on 3- and 4-forms.
  KForm j_operator(const KForm& a) const;
  const Eigen::MatrixXd& j_matrix(int degree) const;

  /// Residuals of the eigenvalue characterization of 2-form types:
  /// first = |pi_14(b) ^ omega + *pi_14(b)|, second = |pi_7(b) ^ omega - 2 *pi_7(b)|.
  std::pair<double, double> two_form_eigen_characterization(const KForm& beta) const;

private:
  explicit G2Structure(const KForm& omega);

  KForm m_omega;
  MetricData m_metric;
  KForm m_star_omega;
  std::map<std::pair<int, int>, Eigen::MatrixXd> m_projectors;
  Eigen::MatrixXd m_j3, m_j4;
};

/// The model 3-form by itself.
KForm standard_g2_form();

/// Signed permutation matrices whose pullback fixes the standard form,
/// found by seeded search; a finite sample of the stabilizer used for
/// invariance checks. Throws if none are found within the try budget.
std::vector<Matrix7> standard_form_stabilizer_sample(int count, uint64_t seed);

} // namespace g2strom

#endif

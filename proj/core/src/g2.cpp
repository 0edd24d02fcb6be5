#include "g2strom/g2.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "g2strom/numeric.hpp"

namespace g2strom {

namespace {

// Orthogonal projection onto the column span of B in the G-inner product.
Eigen::MatrixXd span_projector(const Eigen::MatrixXd& B, const Eigen::MatrixXd& G) {
  Eigen::MatrixXd M = B.transpose() * G * B;
  return B * M.ldlt().solve(B.transpose() * G);
}

} // namespace

bool valid_type_component(int degree, int label) {
  switch (degree) {
    case 2:
    case 5:
      return label == 7 || label == 14;
    case 3:
    case 4:
      return label == 1 || label == 7 || label == 27;
    default:
      return false;
  }
}

KForm standard_g2_form() {
  KForm w(3);
  w += KForm::basis({1, 2, 3});
  w += KForm::basis({1, 4, 5});
  w -= KForm::basis({1, 6, 7});
  w += KForm::basis({2, 4, 6});
  w -= KForm::basis({2, 7, 5});
  w += KForm::basis({3, 4, 7});
  w -= KForm::basis({3, 5, 6});
  return w;
}

MetricData metric_from_positive_3form(const KForm& omega) {
  if (omega.degree() != 3) throw DegreeError("a G2 structure is defined by a 3-form");
  Matrix7 b;
  std::array<KForm, kDim> contractions;
  for (int i = 0; i < kDim; ++i) contractions[static_cast<size_t>(i)] = interior(Vector7::Unit(i), omega);
  for (int i = 0; i < kDim; ++i)
    for (int j = i; j < kDim; ++j) {
      double v = -1.0 / 6.0 *
                 wedge_top(wedge(contractions[static_cast<size_t>(i)], contractions[static_cast<size_t>(j)]), omega);
      b(i, j) = v;
      b(j, i) = v;
    }
  double det = b.determinant();
  if (!(det > 0.0)) throw MetricError("3-form is not positive (induced form has det <= 0)");
  Matrix7 gram = b / std::pow(det, 1.0 / 9.0);
  Eigen::LLT<Matrix7> llt(gram);
  if (llt.info() != Eigen::Success)
    throw MetricError("3-form is not positive (induced form not positive definite)");
  return MetricData::from_gram(gram, +1);
}

G2Structure::G2Structure(const KForm& omega)
    : m_omega(omega), m_metric(metric_from_positive_3form(omega)),
      m_star_omega(hodge_star(omega, m_metric)) {
  const Eigen::MatrixXd& G2g = m_metric.form_gram(2);
  const Eigen::MatrixXd& G3g = m_metric.form_gram(3);
  int n2 = form_dim(2), n3 = form_dim(3);

  // Lambda^2 splits as the eigenspaces of beta -> *(beta ^ omega), with
  // eigenvalue +2 on the 7-part and -1 on the 14-part.
  Eigen::MatrixXd K2 = m_metric.star_matrix(5) * wedge_matrix(m_omega, 2);
  Eigen::MatrixXd A = G2g * K2;
  A = 0.5 * (A + A.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, G2g);
  Eigen::MatrixXd V7(n2, 7), V14(n2, 14);
  int c7 = 0, c14 = 0;
  for (int i = 0; i < n2; ++i) {
    if (es.eigenvalues()[i] > 0.5) {
      if (c7 >= 7) throw MetricError("unexpected spectrum of *(. ^ omega) on 2-forms");
      V7.col(c7++) = es.eigenvectors().col(i);
    } else {
      if (c14 >= 14) throw MetricError("unexpected spectrum of *(. ^ omega) on 2-forms");
      V14.col(c14++) = es.eigenvectors().col(i);
    }
  }
  m_projectors[{2, 7}] = V7 * V7.transpose() * G2g;
  m_projectors[{2, 14}] = V14 * V14.transpose() * G2g;

  // Lambda^3: the 1-part is spanned by omega, the 7-part by *(omega ^ alpha).
  Eigen::MatrixXd P31 =
      m_omega.coeffs() * (m_omega.coeffs().transpose() * G3g) / inner_product(m_omega, m_omega, m_metric);
  Eigen::MatrixXd B7 = m_metric.star_matrix(4) * wedge_matrix(m_omega, 1);
  Eigen::MatrixXd P37 = span_projector(B7, G3g);
  m_projectors[{3, 1}] = P31;
  m_projectors[{3, 7}] = P37;
  m_projectors[{3, 27}] = Eigen::MatrixXd::Identity(n3, n3) - P31 - P37;

  // Lambda^4 and Lambda^5 by star conjugation.
  for (int label : {1, 7, 27})
    m_projectors[{4, label}] =
        m_metric.star_matrix(3) * m_projectors[{3, label}] * m_metric.star_matrix(4);
  for (int label : {7, 14})
    m_projectors[{5, label}] =
        m_metric.star_matrix(2) * m_projectors[{2, label}] * m_metric.star_matrix(5);

  m_j3 = 4.0 / 3.0 * m_projectors[{3, 1}] + m_projectors[{3, 7}] - m_projectors[{3, 27}];
  m_j4 = 4.0 / 3.0 * m_projectors[{4, 1}] + m_projectors[{4, 7}] - m_projectors[{4, 27}];
}

G2Structure G2Structure::standard() { return G2Structure(standard_g2_form()); }

G2Structure G2Structure::from_three_form(const KForm& omega) { return G2Structure(omega); }

const Eigen::MatrixXd& G2Structure::projector(int degree, int label) const {
  auto it = m_projectors.find({degree, label});
  if (it == m_projectors.end())
    throw DegreeError("no G2 component of dimension " + std::to_string(label) + " in degree " +
                      std::to_string(degree));
  return it->second;
}

KForm G2Structure::project(const TypeComponent& c, const KForm& a) const {
  if (a.degree() != c.degree)
    throw DegreeError("form degree does not match requested component");
  return KForm(c.degree, projector(c.degree, c.label) * a.coeffs());
}

const Eigen::MatrixXd& G2Structure::j_matrix(int degree) const {
  if (degree == 3) return m_j3;
  if (degree == 4) return m_j4;
  throw DegreeError("J is defined on 3- and 4-forms only");
}

KForm G2Structure::j_operator(const KForm& a) const {
  return KForm(a.degree(), j_matrix(a.degree()) * a.coeffs());
}

std::vector<Matrix7> standard_form_stabilizer_sample(int count, uint64_t seed) {
  // Signed permutations act on the monomials of the standard form by index
  // relabelling; candidates are screened with exact coefficient bookkeeping.
  KForm w0 = standard_g2_form();
  Rng rng(seed);
  std::vector<Matrix7> found;
  const int max_tries = 2000000;
  for (int t = 0; t < max_tries && static_cast<int>(found.size()) < count; ++t) {
    std::array<int, 7> perm{};
    for (int i = 0; i < 7; ++i) perm[static_cast<size_t>(i)] = i;
    for (int i = 6; i > 0; --i) std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(rng.below(i + 1))]);
    std::array<double, 7> sign{};
    for (int i = 0; i < 7; ++i) sign[static_cast<size_t>(i)] = rng.below(2) ? 1.0 : -1.0;
    // A e_i = sign_i e_{perm(i)}; pullback permutes covectors the same way
    KForm pulled(3);
    bool ok = true;
    for (const auto& idx : MultiIndex::basis(3)) {
      double c = w0.coeff(idx);
      if (c == 0.0) continue;
      std::vector<int> mapped(3);
      double s = c;
      for (int a = 0; a < 3; ++a) {
        int src = idx[a] - 1;
        // e^{src+1} appears in A^* e^{j} when perm(j) = src
        int j = 0;
        while (perm[static_cast<size_t>(j)] != src) ++j;
        mapped[static_cast<size_t>(a)] = j + 1;
        s *= sign[static_cast<size_t>(j)];
      }
      // sort with sign
      for (int a = 0; a < 3; ++a)
        for (int b2 = 0; b2 < 2 - a; ++b2)
          if (mapped[static_cast<size_t>(b2)] > mapped[static_cast<size_t>(b2 + 1)]) {
            std::swap(mapped[static_cast<size_t>(b2)], mapped[static_cast<size_t>(b2 + 1)]);
            s = -s;
          }
      pulled.set_coeff(MultiIndex(mapped), pulled.coeff(MultiIndex(mapped)) + s);
    }
    ok = (pulled - w0).is_zero();
    if (ok) {
      Matrix7 A = Matrix7::Zero();
      for (int i = 0; i < 7; ++i) A(perm[static_cast<size_t>(i)], i) = sign[static_cast<size_t>(i)];
      bool fresh = true;
      for (const auto& B : found)
        if ((A - B).cwiseAbs().maxCoeff() == 0.0) fresh = false;
      if (fresh) found.push_back(A);
    }
  }
  if (found.empty()) throw Error("no stabilizer elements found (unexpected)");
  return found;
}

std::pair<double, double> G2Structure::two_form_eigen_characterization(const KForm& beta) const {
  if (beta.degree() != 2) throw DegreeError("expected a 2-form");
  KForm b14 = project({2, 14}, beta);
  KForm b7 = project({2, 7}, beta);
  double r14 = form_norm(wedge(b14, m_omega) + hodge_star(b14, m_metric), m_metric);
  double r7 = form_norm(wedge(b7, m_omega) - 2.0 * hodge_star(b7, m_metric), m_metric);
  return {r14, r7};
}

} // namespace g2strom

#include "g2strom/exterior.hpp"

#include <algorithm>
#include <cmath>

namespace g2strom {

namespace {

constexpr std::array<int, kDim + 2> kFormDims = {1, 7, 21, 35, 35, 21, 7, 1, 0};

// Basis enumeration, wedge structure constants and complement signs are
// generated once by permutation-sign counting and shared process-wide.
struct Tables {
  std::array<std::vector<MultiIndex>, kDim + 1> bases;
  // position lookup keyed by bitmask of the index set
  std::array<int, 1 << kDim> position_of_mask{};
  // wedge[p][q]: per (i,j) basis pair, sign (0 if overlapping) and target
  struct WedgeEntry {
    int out;
    double sign;
  };
  std::array<std::array<std::vector<WedgeEntry>, kDim + 1>, kDim + 1> wedge_table;
  // complement sign eps(I): e^I ^ e^{I^c} = eps(I) e^{1..7}
  std::array<std::vector<double>, kDim + 1> complement_sign;
  std::array<std::vector<int>, kDim + 1> complement_pos;

  static const Tables& instance() {
    static const Tables t;
    return t;
  }

  Tables() {
    for (int mask = 0; mask < (1 << kDim); ++mask) {
      std::vector<int> idx;
      for (int i = 0; i < kDim; ++i)
        if (mask & (1 << i)) idx.push_back(i + 1);
      int deg = static_cast<int>(idx.size());
      bases[static_cast<size_t>(deg)].push_back(MultiIndex(idx));
    }
    for (auto& b : bases)
      std::sort(b.begin(), b.end(), [](const MultiIndex& x, const MultiIndex& y) {
        return x.indices() < y.indices();
      });
    for (int deg = 0; deg <= kDim; ++deg)
      for (size_t p = 0; p < bases[static_cast<size_t>(deg)].size(); ++p)
        position_of_mask[mask_of(bases[static_cast<size_t>(deg)][p])] = static_cast<int>(p);

    for (int p = 0; p <= kDim; ++p) {
      for (int q = 0; q <= kDim - p; ++q) {
        auto& table = wedge_table[static_cast<size_t>(p)][static_cast<size_t>(q)];
        const auto& bp = bases[static_cast<size_t>(p)];
        const auto& bq = bases[static_cast<size_t>(q)];
        table.resize(bp.size() * bq.size());
        for (size_t i = 0; i < bp.size(); ++i) {
          for (size_t j = 0; j < bq.size(); ++j) {
            auto& e = table[i * bq.size() + j];
            std::vector<int> merged = bp[i].indices();
            merged.insert(merged.end(), bq[j].indices().begin(), bq[j].indices().end());
            double s = sort_sign(merged);
            if (s == 0.0) {
              e.out = -1;
              e.sign = 0.0;
            } else {
              e.out = position_of_mask[mask_of(MultiIndex(merged))];
              e.sign = s;
            }
          }
        }
      }
    }

    for (int deg = 0; deg <= kDim; ++deg) {
      const auto& b = bases[static_cast<size_t>(deg)];
      auto& cs = complement_sign[static_cast<size_t>(deg)];
      auto& cp = complement_pos[static_cast<size_t>(deg)];
      cs.resize(b.size());
      cp.resize(b.size());
      for (size_t i = 0; i < b.size(); ++i) {
        MultiIndex c = b[i].complement();
        std::vector<int> merged = b[i].indices();
        merged.insert(merged.end(), c.indices().begin(), c.indices().end());
        cs[i] = sort_sign(merged);
        cp[i] = position_of_mask[mask_of(c)];
      }
    }
  }

  static int mask_of(const MultiIndex& m) {
    int mask = 0;
    for (int v : m.indices()) mask |= 1 << (v - 1);
    return mask;
  }

  // Sign of the permutation sorting `v` in place; 0 on repeated entries.
  static double sort_sign(std::vector<int>& v) {
    double sign = 1.0;
    for (size_t i = 0; i + 1 < v.size(); ++i)
      for (size_t j = 0; j + 1 < v.size() - i; ++j) {
        if (v[j] == v[j + 1]) return 0.0;
        if (v[j] > v[j + 1]) {
          std::swap(v[j], v[j + 1]);
          sign = -sign;
        }
      }
    return sign;
  }
};

void check_degree(int degree) {
  if (degree < 0 || degree > kDim)
    throw DegreeError("form degree must be in 0..7, got " + std::to_string(degree));
}

} // namespace

int form_dim(int degree) {
  check_degree(degree);
  return kFormDims[static_cast<size_t>(degree)];
}

MultiIndex::MultiIndex(std::vector<int> indices) : m_indices(std::move(indices)) {
  for (size_t a = 0; a < m_indices.size(); ++a) {
    if (m_indices[a] < 1 || m_indices[a] > kDim)
      throw DegreeError("multi-index entries must lie in 1..7");
    if (a > 0 && m_indices[a] <= m_indices[a - 1])
      throw DegreeError("multi-index must be strictly increasing");
  }
}

MultiIndex::MultiIndex(std::initializer_list<int> indices)
    : MultiIndex(std::vector<int>(indices)) {}

bool MultiIndex::contains(int i) const {
  return std::find(m_indices.begin(), m_indices.end(), i) != m_indices.end();
}

int MultiIndex::position() const {
  return Tables::instance().position_of_mask[Tables::mask_of(*this)];
}

const MultiIndex& MultiIndex::at(int degree, int position) {
  const auto& b = basis(degree);
  if (position < 0 || position >= static_cast<int>(b.size()))
    throw DegreeError("multi-index position out of range");
  return b[static_cast<size_t>(position)];
}

const std::vector<MultiIndex>& MultiIndex::basis(int degree) {
  check_degree(degree);
  return Tables::instance().bases[static_cast<size_t>(degree)];
}

MultiIndex MultiIndex::complement() const {
  std::vector<int> c;
  for (int i = 1; i <= kDim; ++i)
    if (!contains(i)) c.push_back(i);
  return MultiIndex(c);
}

KForm::KForm(int degree) : m_degree(degree), m_coeffs(Eigen::VectorXd::Zero(form_dim(degree))) {}

KForm::KForm(int degree, Eigen::VectorXd coeffs) : m_degree(degree), m_coeffs(std::move(coeffs)) {
  if (m_coeffs.size() != form_dim(degree))
    throw DegreeError("coefficient vector has wrong dimension for degree " +
                      std::to_string(degree));
}

KForm KForm::basis(std::initializer_list<int> indices) {
  std::vector<int> v(indices);
  std::vector<int> sorted = v;
  double sign = 1.0;
  // bubble sort with sign tracking; duplicates yield the zero form
  for (size_t i = 0; i + 1 < sorted.size(); ++i)
    for (size_t j = 0; j + 1 < sorted.size() - i; ++j) {
      if (sorted[j] == sorted[j + 1]) return KForm(static_cast<int>(sorted.size()));
      if (sorted[j] > sorted[j + 1]) {
        std::swap(sorted[j], sorted[j + 1]);
        sign = -sign;
      }
    }
  KForm f(static_cast<int>(sorted.size()));
  f.set_coeff(MultiIndex(sorted), sign);
  return f;
}

KForm KForm::basis(const MultiIndex& idx) {
  KForm f(idx.degree());
  f.set_coeff(idx, 1.0);
  return f;
}

double KForm::coeff(const MultiIndex& idx) const {
  if (idx.degree() != m_degree) throw DegreeError("multi-index degree mismatch");
  return m_coeffs[idx.position()];
}

void KForm::set_coeff(const MultiIndex& idx, double value) {
  if (idx.degree() != m_degree) throw DegreeError("multi-index degree mismatch");
  m_coeffs[idx.position()] = value;
}

bool KForm::is_zero(double tol) const { return m_coeffs.lpNorm<Eigen::Infinity>() <= tol; }

KForm& KForm::operator+=(const KForm& other) {
  if (other.m_degree != m_degree) throw DegreeError("cannot add forms of different degree");
  m_coeffs += other.m_coeffs;
  return *this;
}

KForm& KForm::operator-=(const KForm& other) {
  if (other.m_degree != m_degree) throw DegreeError("cannot subtract forms of different degree");
  m_coeffs -= other.m_coeffs;
  return *this;
}

KForm& KForm::operator*=(double s) {
  m_coeffs *= s;
  return *this;
}

MetricData::MetricData(const Matrix7& gram, int orientation)
    : m_gram(gram), m_orientation(orientation >= 0 ? +1 : -1) {
  Eigen::LLT<Matrix7> llt(gram);
  if (!gram.isApprox(gram.transpose(), 1e-12) || llt.info() != Eigen::Success)
    throw MetricError("metric Gram matrix must be symmetric positive definite");
  m_sqrt_det = std::sqrt(gram.determinant());
  m_volume = KForm(kDim);
  m_volume.coeffs()[0] = m_orientation * m_sqrt_det;

  Matrix7 ginv = gram.inverse();
  auto cache = std::make_shared<Cache>();
  for (int deg = 0; deg <= kDim; ++deg) {
    const auto& b = MultiIndex::basis(deg);
    int n = form_dim(deg);
    Eigen::MatrixXd G(n, n);
    Eigen::MatrixXd minor(deg, deg);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        // <e^I, e^J> = det [ g^{I_a J_b} ]
        for (int a = 0; a < deg; ++a)
          for (int c = 0; c < deg; ++c)
            minor(a, c) = ginv(b[static_cast<size_t>(i)][a] - 1, b[static_cast<size_t>(j)][c] - 1);
        G(i, j) = deg == 0 ? 1.0 : minor.determinant();
      }
    }
    cache->form_gram[static_cast<size_t>(deg)] = G;
  }
  // Solve a ^ *b = <a,b> vol on the basis: star_k = orient*sqrt(det g) * W_k^T G_k,
  // with W_k the signed complement pairing (W_k^{-1} = W_k^T).
  const auto& t = Tables::instance();
  for (int deg = 0; deg <= kDim; ++deg) {
    int n = form_dim(deg);
    int m = form_dim(kDim - deg);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, m);
    for (int i = 0; i < n; ++i)
      W(i, t.complement_pos[static_cast<size_t>(deg)][static_cast<size_t>(i)]) =
          t.complement_sign[static_cast<size_t>(deg)][static_cast<size_t>(i)];
    cache->star[static_cast<size_t>(deg)] = m_orientation * m_sqrt_det * W.transpose() *
                                            cache->form_gram[static_cast<size_t>(deg)];
  }
  m_cache = std::move(cache);
}

MetricData MetricData::euclidean() { return MetricData(Matrix7::Identity(), +1); }

MetricData MetricData::from_gram(const Matrix7& gram, int orientation) {
  return MetricData(gram, orientation);
}

const Eigen::MatrixXd& MetricData::form_gram(int degree) const {
  check_degree(degree);
  return m_cache->form_gram[static_cast<size_t>(degree)];
}

const Eigen::MatrixXd& MetricData::star_matrix(int degree) const {
  check_degree(degree);
  return m_cache->star[static_cast<size_t>(degree)];
}

KForm wedge(const KForm& a, const KForm& b) {
  int p = a.degree(), q = b.degree();
  if (p + q > kDim)
    throw DegreeError("degree overflow in wedge: " + std::to_string(p) + " + " +
                      std::to_string(q) + " > 7");
  const auto& table =
      Tables::instance().wedge_table[static_cast<size_t>(p)][static_cast<size_t>(q)];
  int nq = form_dim(q);
  KForm out(p + q);
  for (int i = 0; i < form_dim(p); ++i) {
    double ai = a.coeffs()[i];
    if (ai == 0.0) continue;
    for (int j = 0; j < nq; ++j) {
      const auto& e = table[static_cast<size_t>(i * nq + j)];
      if (e.sign != 0.0) out.coeffs()[e.out] += e.sign * ai * b.coeffs()[j];
    }
  }
  return out;
}

double wedge_top(const KForm& a, const KForm& b) {
  if (a.degree() + b.degree() != kDim)
    throw DegreeError("wedge_top requires complementary degrees");
  return wedge(a, b).coeffs()[0];
}

KForm interior(const Vector7& v, const KForm& a) {
  if (a.degree() == 0) throw DegreeError("interior product of a 0-form is undefined");
  const auto& b = MultiIndex::basis(a.degree());
  KForm out(a.degree() - 1);
  for (size_t i = 0; i < b.size(); ++i) {
    double ai = a.coeffs()[static_cast<int>(i)];
    if (ai == 0.0) continue;
    const auto& idx = b[i].indices();
    double sign = 1.0;
    for (size_t a_pos = 0; a_pos < idx.size(); ++a_pos) {
      std::vector<int> rest;
      for (size_t rr = 0; rr < idx.size(); ++rr)
        if (rr != a_pos) rest.push_back(idx[rr]);
      out.coeffs()[MultiIndex(rest).position()] += sign * v[idx[a_pos] - 1] * ai;
      sign = -sign;
    }
  }
  return out;
}

KForm hodge_star(const KForm& a, const MetricData& m) {
  return KForm(kDim - a.degree(), m.star_matrix(a.degree()) * a.coeffs());
}

double inner_product(const KForm& a, const KForm& b, const MetricData& m) {
  if (a.degree() != b.degree()) throw DegreeError("inner product needs equal degrees");
  return a.coeffs().dot(m.form_gram(a.degree()) * b.coeffs());
}

double form_norm(const KForm& a, const MetricData& m) {
  return std::sqrt(std::max(0.0, inner_product(a, a, m)));
}

Vector7 sharp(const KForm& xi, const MetricData& m) {
  if (xi.degree() != 1) throw DegreeError("sharp expects a 1-form");
  return m.gram().ldlt().solve(xi.coeffs());
}

KForm flat(const Vector7& v, const MetricData& m) { return KForm(1, m.gram() * v); }

Eigen::MatrixXd pullback_matrix(const Matrix7& A, int degree) {
  const auto& b = MultiIndex::basis(degree);
  int n = form_dim(degree);
  Eigen::MatrixXd M(n, n);
  Eigen::MatrixXd minor(degree, degree);
  for (int j = 0; j < n; ++j) {    // output index J
    for (int i = 0; i < n; ++i) {  // input index I
      for (int a = 0; a < degree; ++a)
        for (int c = 0; c < degree; ++c)
          minor(a, c) = A(b[static_cast<size_t>(i)][a] - 1, b[static_cast<size_t>(j)][c] - 1);
      M(j, i) = degree == 0 ? 1.0 : minor.determinant();
    }
  }
  return M;
}

KForm pullback(const Matrix7& A, const KForm& x) {
  return KForm(x.degree(), pullback_matrix(A, x.degree()) * x.coeffs());
}

Eigen::MatrixXd wedge_matrix(const KForm& v, int degree) {
  int n = form_dim(degree);
  if (v.degree() + degree > kDim) throw DegreeError("degree overflow in wedge_matrix");
  Eigen::MatrixXd M(form_dim(v.degree() + degree), n);
  for (int j = 0; j < n; ++j) {
    KForm ej(degree);
    ej.coeffs()[j] = 1.0;
    M.col(j) = wedge(v, ej).coeffs();
  }
  return M;
}

Eigen::MatrixXd interior_matrix(const Vector7& v, int degree) {
  int n = form_dim(degree);
  Eigen::MatrixXd M(form_dim(degree - 1), n);
  for (int j = 0; j < n; ++j) {
    KForm ej(degree);
    ej.coeffs()[j] = 1.0;
    M.col(j) = interior(v, ej).coeffs();
  }
  return M;
}

} // namespace g2strom

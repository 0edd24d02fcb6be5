#include "g2strom/fourier.hpp"

#include <algorithm>
#include <cmath>

namespace g2strom {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
const Complexd kI(0.0, 1.0);
} // namespace

int infnorm(const Wavevector& k) {
  int m = 0;
  for (int v : k) m = std::max(m, std::abs(v));
  return m;
}

Wavevector negate(const Wavevector& k) {
  Wavevector out;
  for (int i = 0; i < 7; ++i) out[static_cast<size_t>(i)] = -k[static_cast<size_t>(i)];
  return out;
}

Wavevector add(const Wavevector& a, const Wavevector& b) {
  Wavevector out;
  for (int i = 0; i < 7; ++i)
    out[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] + b[static_cast<size_t>(i)];
  return out;
}

KForm covector_form(const Wavevector& k) {
  KForm f(1);
  for (int i = 0; i < 7; ++i) f.coeffs()[i] = k[static_cast<size_t>(i)];
  return f;
}

FourierField::FourierField(int degree, int cutoff, int lie_dim, std::string lie_name)
    : m_degree(degree), m_cutoff(cutoff), m_lie_dim(lie_dim), m_lie_name(std::move(lie_name)) {
  form_dim(degree); // validates degree
  if (cutoff < 0) throw FieldError("cutoff must be >= 0");
  if (lie_dim < 0) throw FieldError("lie_dim must be >= 0");
}

FourierField FourierField::constant(const KForm& value, int cutoff) {
  FourierField f(value.degree(), cutoff);
  if (!value.is_zero()) f.set_coeff(Wavevector{}, value.coeffs().cast<Complexd>());
  return f;
}

FourierField FourierField::zero_like(const FourierField& f) {
  return FourierField(f.degree(), f.cutoff(), f.lie_dim(), f.lie_name());
}

void FourierField::check_shape(const Eigen::MatrixXcd& value, const Wavevector& k) const {
  if (value.rows() != coeff_rows() || value.cols() != coeff_cols())
    throw FieldError("coefficient shape mismatch");
  if (infnorm(k) > m_cutoff)
    throw FieldError("wavevector exceeds the declared cutoff " + std::to_string(m_cutoff));
}

Eigen::MatrixXcd FourierField::coeff(const Wavevector& k) const {
  auto it = m_coeffs.find(k);
  if (it == m_coeffs.end()) return Eigen::MatrixXcd::Zero(coeff_rows(), coeff_cols());
  return it->second;
}

void FourierField::set_coeff(const Wavevector& k, Eigen::MatrixXcd value) {
  check_shape(value, k);
  if (value.cwiseAbs().maxCoeff() == 0.0)
    m_coeffs.erase(k);
  else
    m_coeffs[k] = std::move(value);
}

void FourierField::add_coeff(const Wavevector& k, const Eigen::MatrixXcd& value) {
  check_shape(value, k);
  auto it = m_coeffs.find(k);
  if (it == m_coeffs.end())
    m_coeffs[k] = value;
  else
    it->second += value;
}

void FourierField::add_cos(const Wavevector& k, const KForm& amplitude, int lie_index) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(coeff_rows(), coeff_cols());
  int col = lie_valued() ? lie_index : 0;
  if (col < 0 || col >= coeff_cols()) throw FieldError("lie_index out of range");
  c.col(col) = 0.5 * amplitude.coeffs().cast<Complexd>();
  add_coeff(k, c);
  add_coeff(negate(k), c);
}

void FourierField::add_sin(const Wavevector& k, const KForm& amplitude, int lie_index) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(coeff_rows(), coeff_cols());
  int col = lie_valued() ? lie_index : 0;
  if (col < 0 || col >= coeff_cols()) throw FieldError("lie_index out of range");
  c.col(col) = -0.5 * kI * amplitude.coeffs().cast<Complexd>();
  add_coeff(k, c);
  c.col(col) = 0.5 * kI * amplitude.coeffs().cast<Complexd>();
  add_coeff(negate(k), c);
}

void FourierField::prune(double rel_eps) {
  double m = max_coeff_norm();
  if (m == 0.0) {
    m_coeffs.clear();
    return;
  }
  for (auto it = m_coeffs.begin(); it != m_coeffs.end();) {
    if (it->second.cwiseAbs().maxCoeff() <= rel_eps * m)
      it = m_coeffs.erase(it);
    else
      ++it;
  }
}

void FourierField::symmetrize_reality() {
  std::map<Wavevector, Eigen::MatrixXcd> out;
  for (const auto& [k, c] : m_coeffs) {
    Eigen::MatrixXcd avg = 0.5 * (c + coeff(negate(k)).conjugate());
    out[k] = avg;
    out[negate(k)] = avg.conjugate();
  }
  m_coeffs = std::move(out);
}

double FourierField::reality_residual() const {
  double r = 0.0;
  for (const auto& [k, c] : m_coeffs)
    r = std::max(r, (c - coeff(negate(k)).conjugate()).cwiseAbs().maxCoeff());
  return r;
}

bool FourierField::is_real(double tol) const { return reality_residual() <= tol; }

bool FourierField::is_constant(double tol) const {
  for (const auto& [k, c] : m_coeffs)
    if (infnorm(k) > 0 && c.cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

double FourierField::max_coeff_norm() const {
  double m = 0.0;
  for (const auto& [k, c] : m_coeffs) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

double FourierField::coeff_abs_sum() const {
  double s = 0.0;
  for (const auto& [k, c] : m_coeffs) s += c.cwiseAbs().sum();
  return s;
}

double FourierField::l2_norm(const MetricData& m) const {
  return l2_norm(m, Eigen::MatrixXd::Identity(coeff_cols(), coeff_cols()));
}

double FourierField::l2_norm(const MetricData& m, const Eigen::MatrixXd& lie_gram) const {
  const Eigen::MatrixXd& G = m.form_gram(m_degree);
  double s = 0.0;
  for (const auto& [k, c] : m_coeffs) s += ((c.adjoint() * G * c) * lie_gram).trace().real();
  return std::sqrt(std::max(0.0, s));
}

std::vector<int> FourierField::active_axes() const {
  std::array<bool, 7> act{};
  for (const auto& [k, c] : m_coeffs) {
    if (c.cwiseAbs().maxCoeff() == 0.0) continue;
    for (int i = 0; i < 7; ++i)
      if (k[static_cast<size_t>(i)] != 0) act[static_cast<size_t>(i)] = true;
  }
  std::vector<int> out;
  for (int i = 0; i < 7; ++i)
    if (act[static_cast<size_t>(i)]) out.push_back(i);
  return out;
}

Eigen::MatrixXcd FourierField::evaluate(const std::array<double, 7>& x) const {
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(coeff_rows(), coeff_cols());
  for (const auto& [k, c] : m_coeffs) {
    double phase = 0.0;
    for (int i = 0; i < 7; ++i) phase += k[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
    v += std::exp(kI * (kTwoPi * phase)) * c;
  }
  return v;
}

double FourierField::linf_estimate() const {
  std::vector<int> axes = active_axes();
  if (axes.empty()) {
    auto it = m_coeffs.find(Wavevector{});
    return it == m_coeffs.end() ? 0.0 : it->second.cwiseAbs().maxCoeff();
  }
  int n = std::min(41, 4 * std::max(1, m_cutoff) + 5);
  if (axes.size() > 3) n = 7; // coarse sample in high-dimensional cases
  long total = 1;
  for (size_t i = 0; i < axes.size(); ++i) total *= n;
  double best = 0.0;
  for (long p = 0; p < total; ++p) {
    std::array<double, 7> x{};
    long q = p;
    for (int a : axes) {
      x[static_cast<size_t>(a)] = static_cast<double>(q % n) / n;
      q /= n;
    }
    best = std::max(best, evaluate(x).cwiseAbs().maxCoeff());
  }
  return best;
}

FourierField& FourierField::operator+=(const FourierField& other) {
  if (other.m_degree != m_degree || other.coeff_cols() != coeff_cols())
    throw FieldError("field shape mismatch in addition");
  m_cutoff = std::max(m_cutoff, other.m_cutoff);
  for (const auto& [k, c] : other.m_coeffs) add_coeff(k, c);
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& other) {
  if (other.m_degree != m_degree || other.coeff_cols() != coeff_cols())
    throw FieldError("field shape mismatch in subtraction");
  m_cutoff = std::max(m_cutoff, other.m_cutoff);
  for (const auto& [k, c] : other.m_coeffs) add_coeff(k, -c);
  return *this;
}

FourierField& FourierField::operator*=(double s) {
  for (auto& [k, c] : m_coeffs) c *= s;
  return *this;
}

FourierField& FourierField::operator*=(Complexd s) {
  for (auto& [k, c] : m_coeffs) c *= s;
  return *this;
}

FourierField d(const FourierField& f) {
  if (f.degree() == kDim) throw DegreeError("d of a top-degree field is undefined");
  FourierField out(f.degree() + 1, f.cutoff(), f.lie_dim(), f.lie_name());
  for (const auto& [k, c] : f.coeffs()) {
    if (infnorm(k) == 0) continue;
    Eigen::MatrixXd W = wedge_matrix(covector_form(k), f.degree());
    out.add_coeff(k, (kTwoPi * kI) * (W * c));
  }
  return out;
}

FourierField codifferential(const FourierField& f, const MetricData& m) {
  if (f.degree() == 0) throw DegreeError("codifferential of a 0-form field is undefined");
  const Eigen::MatrixXd& Gout = m.form_gram(f.degree() - 1);
  const Eigen::MatrixXd& Gin = m.form_gram(f.degree());
  Eigen::LDLT<Eigen::MatrixXd> solver(Gout);
  FourierField out(f.degree() - 1, f.cutoff(), f.lie_dim(), f.lie_name());
  for (const auto& [k, c] : f.coeffs()) {
    if (infnorm(k) == 0) continue;
    Eigen::MatrixXd W = wedge_matrix(covector_form(k), f.degree() - 1);
    // adjoint of (2 pi i k ^ .) between weighted coefficient spaces
    out.add_coeff(k, (-kTwoPi * kI) * solver.solve(W.transpose() * (Gin * c)));
  }
  return out;
}

FourierField convolve(const FourierField& f, const FourierField& g, int out_degree,
                      int out_lie_dim, const std::string& out_lie_name,
                      const std::function<void(const Eigen::MatrixXcd&, const Eigen::MatrixXcd&,
                                               Eigen::MatrixXcd&)>& op) {
  FourierField out(out_degree, f.cutoff() + g.cutoff(), out_lie_dim, out_lie_name);
  Eigen::MatrixXcd tmp(out.coeff_rows(), out.coeff_cols());
  for (const auto& [k1, c1] : f.coeffs())
    for (const auto& [k2, c2] : g.coeffs()) {
      tmp.setZero();
      op(c1, c2, tmp);
      out.add_coeff(add(k1, k2), tmp);
    }
  return out;
}

namespace {

// Complex wedge of coefficient columns via the real wedge table.
Eigen::VectorXcd cwedge(int p, const Eigen::VectorXcd& a, int q, const Eigen::VectorXcd& b) {
  KForm rr = wedge(KForm(p, a.real()), KForm(q, b.real()));
  KForm ii = wedge(KForm(p, a.imag()), KForm(q, b.imag()));
  KForm ri = wedge(KForm(p, a.real()), KForm(q, b.imag()));
  KForm ir = wedge(KForm(p, a.imag()), KForm(q, b.real()));
  return (rr.coeffs() - ii.coeffs()).cast<Complexd>() +
         kI * (ri.coeffs() + ir.coeffs()).cast<Complexd>();
}

} // namespace

FourierField fourier_wedge(const FourierField& f, const FourierField& g) {
  if (f.lie_valued() || g.lie_valued())
    throw FieldError("fourier_wedge expects plain fields; use wedge_pairing/wedge_bracket");
  int p = f.degree(), q = g.degree();
  return convolve(f, g, p + q, 0, "",
                  [p, q](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                         Eigen::MatrixXcd& out) { out.col(0) = cwedge(p, a.col(0), q, b.col(0)); });
}

FourierField wedge_pairing(const FourierField& f, const FourierField& g,
                           const LieAlgebraConfig& lie) {
  if (f.lie_dim() != lie.dim() || g.lie_dim() != lie.dim())
    throw FieldError("wedge_pairing expects Lie-valued fields matching the algebra");
  int p = f.degree(), q = g.degree();
  const Eigen::MatrixXd& C = lie.pairing();
  return convolve(f, g, p + q, 0, "",
                  [p, q, &C](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                             Eigen::MatrixXcd& out) {
                    for (int i = 0; i < a.cols(); ++i)
                      for (int j = 0; j < b.cols(); ++j)
                        if (C(i, j) != 0.0)
                          out.col(0) += C(i, j) * cwedge(p, a.col(i), q, b.col(j));
                  });
}

FourierField wedge_bracket(const FourierField& f, const FourierField& g,
                           const LieAlgebraConfig& lie) {
  if (f.lie_dim() != lie.dim() || g.lie_dim() != lie.dim())
    throw FieldError("wedge_bracket expects Lie-valued fields matching the algebra");
  int p = f.degree(), q = g.degree();
  int dim = lie.dim();
  return convolve(f, g, p + q, dim, lie.name(),
                  [p, q, dim, &lie](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                    Eigen::MatrixXcd& out) {
                    for (int i = 0; i < dim; ++i)
                      for (int j = 0; j < dim; ++j) {
                        bool any = false;
                        for (int c = 0; c < dim; ++c)
                          if (lie.structure_constant(i, j, c) != 0.0) any = true;
                        if (!any) continue;
                        Eigen::VectorXcd w = cwedge(p, a.col(i), q, b.col(j));
                        for (int c = 0; c < dim; ++c) {
                          double s = lie.structure_constant(i, j, c);
                          if (s != 0.0) out.col(c) += s * w;
                        }
                      }
                  });
}

FourierField wedge_mixed(const FourierField& lie_field, const FourierField& plain) {
  if (plain.lie_valued()) throw FieldError("wedge_mixed expects a plain second factor");
  int p = lie_field.degree(), q = plain.degree();
  return convolve(lie_field, plain, p + q, lie_field.lie_dim(), lie_field.lie_name(),
                  [p, q](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                         Eigen::MatrixXcd& out) {
                    for (int c = 0; c < a.cols(); ++c) out.col(c) = cwedge(p, a.col(c), q, b.col(0));
                  });
}

FourierField apply_constant_star(const FourierField& f, const MetricData& m) {
  const Eigen::MatrixXd& S = m.star_matrix(f.degree());
  FourierField out(kDim - f.degree(), f.cutoff(), f.lie_dim(), f.lie_name());
  for (const auto& [k, c] : f.coeffs()) out.add_coeff(k, S * c);
  return out;
}

FourierField field_dot(const FourierField& covector, const FourierField& vector) {
  if (covector.degree() != 1 || vector.degree() != 1)
    throw FieldError("field_dot expects two degree-1 fields");
  if (covector.lie_valued() || vector.lie_valued())
    throw FieldError("field_dot expects plain fields");
  return convolve(covector, vector, 0, 0, "",
                  [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, Eigen::MatrixXcd& out) {
                    out(0, 0) = (a.col(0).transpose() * b.col(0))(0, 0);
                  });
}

FourierField interior_field(const FourierField& X, const FourierField& f) {
  if (X.degree() != 1 || X.lie_valued())
    throw FieldError("interior_field expects a plain vector field");
  if (f.degree() == 0) throw DegreeError("interior product of a 0-form field is undefined");
  int p = f.degree();
  std::vector<Eigen::MatrixXd> contr;
  contr.reserve(7);
  for (int i = 0; i < 7; ++i) contr.push_back(interior_matrix(Vector7::Unit(i), p));
  return convolve(X, f, p - 1, f.lie_dim(), f.lie_name(),
                  [&contr](const Eigen::MatrixXcd& xc, const Eigen::MatrixXcd& fc,
                           Eigen::MatrixXcd& out) {
                    for (int i = 0; i < 7; ++i)
                      if (xc(i, 0) != Complexd(0.0, 0.0)) out += xc(i, 0) * (contr[static_cast<size_t>(i)] * fc);
                  });
}

FourierField lie_derivative(const FourierField& X, const FourierField& f) {
  if (f.degree() == 0) return interior_field(X, d(f));
  if (f.degree() == kDim) return d(interior_field(X, f));
  return d(interior_field(X, f)) + interior_field(X, d(f));
}

FourierField vector_bracket(const FourierField& X, const FourierField& Y) {
  if (X.degree() != 1 || Y.degree() != 1 || X.lie_valued() || Y.lie_valued())
    throw FieldError("vector_bracket expects plain vector fields");
  // [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i, with d_j = 2 pi i k_j per mode
  FourierField out(1, X.cutoff() + Y.cutoff());
  for (const auto& [k1, a] : X.coeffs())
    for (const auto& [k2, b] : Y.coeffs()) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(7);
      Complexd xdotk2(0, 0), ydotk1(0, 0);
      for (int j = 0; j < 7; ++j) {
        xdotk2 += a(j, 0) * static_cast<double>(k2[static_cast<size_t>(j)]);
        ydotk1 += b(j, 0) * static_cast<double>(k1[static_cast<size_t>(j)]);
      }
      v = (kTwoPi * kI) * (xdotk2 * b.col(0) - ydotk1 * a.col(0));
      if (v.cwiseAbs().maxCoeff() != 0.0) out.add_coeff(add(k1, k2), v);
    }
  return out;
}

FourierField scalar_multiply(const FourierField& scalar, const FourierField& f) {
  if (scalar.degree() != 0 || scalar.lie_valued())
    throw FieldError("scalar_multiply expects a plain degree-0 field");
  return convolve(scalar, f, f.degree(), f.lie_dim(), f.lie_name(),
                  [](const Eigen::MatrixXcd& s, const Eigen::MatrixXcd& fc, Eigen::MatrixXcd& out) {
                    out = s(0, 0) * fc;
                  });
}

ConnectionField ConnectionField::flat(const LieAlgebraConfig& lie, int cutoff) {
  return ConnectionField(FourierField(1, cutoff, lie.dim(), lie.name()));
}

FourierField curvature(const ConnectionField& theta, const LieAlgebraConfig& lie) {
  FourierField F = d(theta.a);
  if (lie.dim() > 0) F += 0.5 * wedge_bracket(theta.a, theta.a, lie);
  return F;
}

double bianchi_connection_residual(const ConnectionField& theta, const LieAlgebraConfig& lie) {
  FourierField F = curvature(theta, lie);
  FourierField res = d(F);
  if (lie.dim() > 0) res += wedge_bracket(theta.a, F, lie);
  return res.max_coeff_norm();
}

Collocation::Collocation(std::vector<int> axes, int points_per_axis)
    : m_axes(std::move(axes)), m_n(points_per_axis) {
  if (m_n < 1) throw FieldError("collocation grid needs at least one point per axis");
}

Collocation Collocation::for_fields(const std::vector<const FourierField*>& fields,
                                    int out_cutoff, int oversample) {
  std::array<bool, 7> act{};
  for (const auto* f : fields)
    for (int a : f->active_axes()) act[static_cast<size_t>(a)] = true;
  std::vector<int> axes;
  for (int i = 0; i < 7; ++i)
    if (act[static_cast<size_t>(i)]) axes.push_back(i);
  int n = 2 * std::max(1, oversample) * std::max(1, out_cutoff) + 1;
  return Collocation(std::move(axes), n);
}

int Collocation::num_points() const {
  int total = 1;
  for (size_t i = 0; i < m_axes.size(); ++i) total *= m_n;
  return total;
}

std::array<double, 7> Collocation::point(int p) const {
  std::array<double, 7> x{};
  int q = p;
  for (int a : m_axes) {
    x[static_cast<size_t>(a)] = static_cast<double>(q % m_n) / m_n;
    q /= m_n;
  }
  return x;
}

std::vector<Eigen::MatrixXcd> Collocation::evaluate(const FourierField& f) const {
  int np = num_points();
  std::vector<Eigen::MatrixXcd> values(static_cast<size_t>(np));
  for (int p = 0; p < np; ++p) values[static_cast<size_t>(p)] = f.evaluate(point(p));
  return values;
}

FourierField Collocation::synthesize(const std::vector<Eigen::MatrixXcd>& values, int degree,
                                     int lie_dim, const std::string& lie_name, int out_cutoff,
                                     double prune_eps) const {
  int np = num_points();
  if (static_cast<int>(values.size()) != np) throw FieldError("value count mismatch");
  if (2 * out_cutoff + 1 > m_n)
    throw FieldError("collocation grid too coarse for the requested output cutoff");
  FourierField out(degree, out_cutoff, lie_dim, lie_name);
  // enumerate target wavevectors supported on the active axes
  int per_axis = 2 * out_cutoff + 1;
  long n_modes = 1;
  for (size_t i = 0; i < m_axes.size(); ++i) n_modes *= per_axis;
  for (long m = 0; m < n_modes; ++m) {
    Wavevector k{};
    long q = m;
    for (int a : m_axes) {
      k[static_cast<size_t>(a)] = static_cast<int>(q % per_axis) - out_cutoff;
      q /= per_axis;
    }
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(form_dim(degree), lie_dim > 0 ? lie_dim : 1);
    for (int p = 0; p < np; ++p) {
      std::array<double, 7> x = point(p);
      double phase = 0.0;
      for (int i = 0; i < 7; ++i) phase += k[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
      c += std::exp(-kI * (kTwoPi * phase)) * values[static_cast<size_t>(p)];
    }
    c /= static_cast<double>(np);
    out.add_coeff(k, c);
  }
  out.prune(prune_eps);
  return out;
}

} // namespace g2strom

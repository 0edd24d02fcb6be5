#ifndef G2STROM_FOURIER_HPP
#define G2STROM_FOURIER_HPP

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "g2strom/exterior.hpp"
#include "g2strom/lie.hpp"

namespace g2strom {

using Wavevector = std::array<int, 7>;
using Complexd = std::complex<double>;

int infnorm(const Wavevector& k);
Wavevector negate(const Wavevector& k);
Wavevector add(const Wavevector& a, const Wavevector& b);
KForm covector_form(const Wavevector& k);

/// A k-form-valued field on the flat torus T^7 = (R/Z)^7 stored as finitely
/// many Fourier coefficients, f(x) = sum_k c_k e^{2 pi i k.x}. Coefficients
/// are complex matrices of shape form_dim(degree) x max(1, lie_dim); the
/// column index runs over a Lie algebra basis for bundle-valued fields.
/// Real fields satisfy c_{-k} = conj(c_k).
class FourierField {
public:
  FourierField(int degree, int cutoff, int lie_dim = 0, std::string lie_name = "");

  static FourierField constant(const KForm& value, int cutoff = 0);
  static FourierField zero_like(const FourierField& f);

  int degree() const { return m_degree; }
  int cutoff() const { return m_cutoff; }
  int lie_dim() const { return m_lie_dim; }
  bool lie_valued() const { return m_lie_dim > 0; }
  const std::string& lie_name() const { return m_lie_name; }
  int coeff_rows() const { return form_dim(m_degree); }
  int coeff_cols() const { return m_lie_dim > 0 ? m_lie_dim : 1; }

  const std::map<Wavevector, Eigen::MatrixXcd>& coeffs() const { return m_coeffs; }
  Eigen::MatrixXcd coeff(const Wavevector& k) const;
  void set_coeff(const Wavevector& k, Eigen::MatrixXcd value);
  void add_coeff(const Wavevector& k, const Eigen::MatrixXcd& value);

  /// Add amplitude * cos(2 pi k.x) (resp. sin); keeps the field real.
  void add_cos(const Wavevector& k, const KForm& amplitude, int lie_index = -1);
  void add_sin(const Wavevector& k, const KForm& amplitude, int lie_index = -1);

  /// Drop coefficients below eps * max coefficient magnitude.
  void prune(double rel_eps = 1e-15);
  /// Enforce c_{-k} = conj(c_k) by averaging conjugate pairs.
  void symmetrize_reality();

  double reality_residual() const;
  bool is_real(double tol = 1e-10) const;
  bool is_constant(double tol = 0.0) const;

  double max_coeff_norm() const;
  double coeff_abs_sum() const;
  /// L2 norm via Parseval for a constant metric; an optional Gram matrix
  /// contracts the Lie index (identity when omitted).
  double l2_norm(const MetricData& m) const;
  double l2_norm(const MetricData& m, const Eigen::MatrixXd& lie_gram) const;
  /// Max pointwise coefficient magnitude over a dense deterministic sample.
  double linf_estimate() const;

  std::vector<int> active_axes() const;
  Eigen::MatrixXcd evaluate(const std::array<double, 7>& x) const;

  FourierField& operator+=(const FourierField& other);
  FourierField& operator-=(const FourierField& other);
  FourierField& operator*=(double s);
  FourierField& operator*=(Complexd s);
  friend FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
  friend FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
  friend FourierField operator*(double s, FourierField a) { return a *= s; }
  friend FourierField operator-(FourierField a) { return a *= -1.0; }

private:
  void check_shape(const Eigen::MatrixXcd& value, const Wavevector& k) const;

  int m_degree;
  int m_cutoff;
  int m_lie_dim;
  std::string m_lie_name;
  std::map<Wavevector, Eigen::MatrixXcd> m_coeffs;
};

/// Exterior derivative, per mode c_k -> 2 pi i (k^flat) ^ c_k. d o d = 0
/// holds exactly. Throws DegreeError on degree-7 input.
FourierField d(const FourierField& f);

/// L2 adjoint of d for a constant metric: <d f, h> = <f, d* h> exactly by
/// construction (per mode, the metric adjoint of the wedge).
FourierField codifferential(const FourierField& f, const MetricData& m);

/// Generic bilinear convolution product: out_k = sum op(f_{k1}, g_{k2})
/// over k1 + k2 = k. Exact for trigonometric polynomials; the result
/// carries cutoff cutoff(f) + cutoff(g).
FourierField convolve(const FourierField& f, const FourierField& g, int out_degree,
                      int out_lie_dim, const std::string& out_lie_name,
                      const std::function<void(const Eigen::MatrixXcd&, const Eigen::MatrixXcd&,
                                               Eigen::MatrixXcd&)>& op);

/// Wedge of two plain fields.
FourierField fourier_wedge(const FourierField& f, const FourierField& g);

/// c(f ^ g): Lie indices of two bundle-valued fields contracted with the
/// pairing, yielding a plain field.
FourierField wedge_pairing(const FourierField& f, const FourierField& g,
                           const LieAlgebraConfig& lie);

/// [f ^ g]: wedge combined with the Lie bracket on coefficients.
FourierField wedge_bracket(const FourierField& f, const FourierField& g,
                           const LieAlgebraConfig& lie);

/// Wedge of a Lie-valued field with a plain field (Lie index carried along).
FourierField wedge_mixed(const FourierField& lie_field, const FourierField& plain);

/// Apply the Hodge star of a constant metric mode by mode.
FourierField apply_constant_star(const FourierField& f, const MetricData& m);

/// Pointwise pairing of a covector field with a vector field (degree-1
/// coefficients interpreted as vector components, frame is global on T^7).
FourierField field_dot(const FourierField& covector, const FourierField& vector);

/// Interior product i_X f for a vector field X (degree-1 components).
FourierField interior_field(const FourierField& X, const FourierField& f);

/// Lie derivative via Cartan's formula, d i_X f + i_X d f.
FourierField lie_derivative(const FourierField& X, const FourierField& f);

/// Commutator of vector fields.
FourierField vector_bracket(const FourierField& X, const FourierField& Y);

/// Multiplication by a scalar (degree-0, plain) field.
FourierField scalar_multiply(const FourierField& scalar, const FourierField& f);

/// Connection on the trivialized bundle: theta = theta_0,flat + a. For a
/// trivial structure group the potential is the zero plain field.
struct ConnectionField {
  FourierField a;

  explicit ConnectionField(FourierField potential) : a(std::move(potential)) {
    if (a.degree() != 1) throw FieldError("connection potential must be a 1-form field");
  }
  static ConnectionField flat(const LieAlgebraConfig& lie, int cutoff);
};

/// Curvature F = d a + 1/2 [a ^ a] of a trivialized connection.
FourierField curvature(const ConnectionField& theta, const LieAlgebraConfig& lie);

/// |d^theta F| for the curvature of theta (always ~0; reported, not assumed).
double bianchi_connection_residual(const ConnectionField& theta, const LieAlgebraConfig& lie);

/// Tensor-product collocation grid over the axes a set of fields actually
/// varies along; axes the fields are constant along are collapsed to a
/// point, which is exact for such fields. Used for the pointwise
/// (metric-dependent, nonlinear) operations; bilinear products use exact
/// convolution instead.
class Collocation {
public:
  Collocation(std::vector<int> axes, int points_per_axis);
  static Collocation for_fields(const std::vector<const FourierField*>& fields, int out_cutoff,
                                int oversample = 2);

  const std::vector<int>& axes() const { return m_axes; }
  int points_per_axis() const { return m_n; }
  int num_points() const;
  std::array<double, 7> point(int p) const;

  std::vector<Eigen::MatrixXcd> evaluate(const FourierField& f) const;
  FourierField synthesize(const std::vector<Eigen::MatrixXcd>& values, int degree, int lie_dim,
                          const std::string& lie_name, int out_cutoff,
                          double prune_eps = 1e-14) const;

private:
  std::vector<int> m_axes;
  int m_n;
};

} // namespace g2strom

#endif

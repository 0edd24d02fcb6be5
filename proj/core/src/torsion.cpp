#include "g2strom/torsion.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace g2strom {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

int auto_cutoff(GridOptions opts, int input_cutoff) {
  return opts.out_cutoff >= 0 ? opts.out_cutoff : 2 * std::max(1, input_cutoff);
}

std::string point_string(const std::array<double, 7>& x) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < 7; ++i) os << (i ? "," : "") << x[static_cast<size_t>(i)];
  os << ")";
  return os.str();
}

// omega evaluated on a collocation grid, one G2 structure per point (or a
// single one when omega is constant).
class PointwiseG2 {
public:
  PointwiseG2(const FourierField& omega, const Collocation& grid) : m_grid(grid) {
    if (omega.degree() != 3 || omega.lie_valued())
      throw DegreeError("expected a plain 3-form field");
    double scale = std::max(1.0, omega.max_coeff_norm());
    m_constant = omega.active_axes().empty();
    int n = m_constant ? 1 : grid.num_points();
    m_g2s.reserve(static_cast<size_t>(n));
    for (int p = 0; p < n; ++p) {
      std::array<double, 7> x = m_constant ? std::array<double, 7>{} : grid.point(p);
      Eigen::MatrixXcd v = omega.evaluate(x);
      if (v.imag().cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw MetricError("omega field is not real at grid point " + point_string(x));
      try {
        m_g2s.push_back(G2Structure::from_three_form(KForm(3, v.real())));
      } catch (const MetricError& e) {
        throw MetricError(std::string(e.what()) + " at grid point " + point_string(x));
      }
    }
  }

  bool constant() const { return m_constant; }
  const Collocation& grid() const { return m_grid; }
  const G2Structure& at(int p) const {
    return m_g2s[static_cast<size_t>(m_constant ? 0 : p)];
  }

private:
  Collocation m_grid;
  bool m_constant = false;
  std::vector<G2Structure> m_g2s;
};

Collocation grid_for(const std::vector<const FourierField*>& fields, int out_cutoff,
                     int oversample) {
  return Collocation::for_fields(fields, out_cutoff, oversample);
}

// L2 norm of a plain field by grid quadrature against the omega(x)-metric
// and volume; used for component norms with a varying structure.
double quadrature_norm(const FourierField& f, const PointwiseG2& pw,
                       const std::optional<std::pair<int, int>>& component) {
  const Collocation& grid = pw.grid();
  int np = grid.num_points();
  double acc = 0.0;
  for (int p = 0; p < np; ++p) {
    const G2Structure& g2 = pw.at(p);
    Eigen::VectorXcd v = f.evaluate(grid.point(p)).col(0);
    if (component)
      v = (g2.projector(component->first, component->second) * v).eval();
    const Eigen::MatrixXd& G = g2.metric().form_gram(f.degree());
    acc += (v.adjoint() * G * v)(0, 0).real() * g2.metric().sqrt_det();
  }
  return std::sqrt(std::max(0.0, acc / np));
}

} // namespace

FourierField pointwise_star(const FourierField& s, const FourierField& omega_field,
                            GridOptions opts) {
  if (omega_field.active_axes().empty()) {
    Eigen::MatrixXcd w0 = omega_field.coeff(Wavevector{});
    G2Structure g2 = G2Structure::from_three_form(KForm(3, w0.real()));
    return apply_constant_star(s, g2.metric());
  }
  int out = auto_cutoff(opts, std::max(s.cutoff(), omega_field.cutoff()));
  Collocation grid = grid_for({&s, &omega_field}, out, opts.oversample);
  PointwiseG2 pw(omega_field, grid);
  int np = grid.num_points();
  std::vector<Eigen::MatrixXcd> values(static_cast<size_t>(np));
  for (int p = 0; p < np; ++p) {
    const Eigen::MatrixXd& S = pw.at(p).metric().star_matrix(s.degree());
    values[static_cast<size_t>(p)] = S * s.evaluate(grid.point(p));
  }
  FourierField out_field =
      grid.synthesize(values, kDim - s.degree(), s.lie_dim(), s.lie_name(), out);
  out_field.symmetrize_reality();
  return out_field;
}

FourierField lee_form(const FourierField& omega_field, GridOptions opts) {
  int out = auto_cutoff(opts, omega_field.cutoff());
  Collocation grid = grid_for({&omega_field}, out, opts.oversample);
  PointwiseG2 pw(omega_field, grid);
  int np = pw.constant() ? 1 : grid.num_points();

  // *omega as a field, then d (*omega) spectrally
  std::vector<Eigen::MatrixXcd> star_values(static_cast<size_t>(grid.num_points()));
  for (int p = 0; p < grid.num_points(); ++p)
    star_values[static_cast<size_t>(p)] = pw.at(p).star_omega().coeffs().cast<Complexd>();
  FourierField star_field = grid.synthesize(star_values, 4, 0, "", out);
  FourierField dstar = d(star_field);

  std::vector<Eigen::MatrixXcd> theta_values(static_cast<size_t>(grid.num_points()));
  for (int p = 0; p < grid.num_points(); ++p) {
    const G2Structure& g2 = pw.at(np == 1 ? 0 : p);
    // normal equations for alpha -> alpha ^ *omega(x), solved in the
    // omega(x)-metric; picks off exactly the Lambda^5_7 part of d*omega
    Eigen::MatrixXd A(form_dim(5), 7);
    for (int j = 0; j < 7; ++j) {
      KForm ej(1);
      ej.coeffs()[j] = 1.0;
      A.col(j) = wedge(ej, g2.star_omega()).coeffs();
    }
    const Eigen::MatrixXd& G5 = g2.metric().form_gram(5);
    Eigen::MatrixXd N = A.transpose() * G5 * A;
    Eigen::VectorXcd psi = dstar.evaluate(grid.point(p)).col(0);
    Eigen::VectorXcd rhs = A.transpose() * G5 * psi;
    theta_values[static_cast<size_t>(p)] =
        N.ldlt().solve(rhs.real()).cast<Complexd>() +
        Complexd(0, 1) * N.ldlt().solve(rhs.imag()).cast<Complexd>();
  }
  FourierField theta = grid.synthesize(theta_values, 1, 0, "", out);
  theta.symmetrize_reality();
  return theta;
}

FourierField torsion_H(const FourierField& omega_field, const FourierField& phi_field,
                       GridOptions opts) {
  if (phi_field.degree() != 0) throw DegreeError("dilaton must be a 0-form field");
  FourierField s = d(omega_field);
  s += 4.0 * fourier_wedge(d(phi_field), omega_field);
  return -pointwise_star(s, omega_field, opts);
}

ClassReport fernandez_gray(const FourierField& omega_field, double tol, GridOptions opts) {
  ClassReport rep;
  rep.tol = tol;
  int out = auto_cutoff(opts, omega_field.cutoff());
  Collocation grid = grid_for({&omega_field}, out, opts.oversample);
  PointwiseG2 pw(omega_field, grid);

  FourierField domega = d(omega_field);
  FourierField star_field = pointwise_star(omega_field, omega_field, opts);
  FourierField dstar = d(star_field);

  rep.pi1_domega = quadrature_norm(domega, pw, std::pair<int, int>{4, 1});
  rep.pi7_domega = quadrature_norm(domega, pw, std::pair<int, int>{4, 7});
  rep.pi27_domega = quadrature_norm(domega, pw, std::pair<int, int>{4, 27});
  rep.pi7_dstar = quadrature_norm(dstar, pw, std::pair<int, int>{5, 7});
  rep.pi14_dstar = quadrature_norm(dstar, pw, std::pair<int, int>{5, 14});

  FourierField lee = lee_form(omega_field, opts);
  MetricData euclid = MetricData::euclidean();
  double harmonic_part = lee.coeff(Wavevector{}).cwiseAbs().maxCoeff();
  rep.lee_exactness_residual = std::hypot(d(lee).l2_norm(euclid), harmonic_part);

  // recover phi from theta_w = -4 dphi (least squares per mode) and
  // measure the coclosure residual with that phi
  FourierField phi(0, lee.cutoff());
  for (const auto& [k, c] : lee.coeffs()) {
    if (infnorm(k) == 0) continue;
    double k2 = 0.0;
    Complexd kdot(0, 0);
    for (int i = 0; i < 7; ++i) {
      k2 += static_cast<double>(k[static_cast<size_t>(i)]) * k[static_cast<size_t>(i)];
      kdot += static_cast<double>(k[static_cast<size_t>(i)]) * c(i, 0);
    }
    Eigen::MatrixXcd pc(1, 1);
    pc(0, 0) = -0.25 * kdot / (Complexd(0, 1) * kTwoPi * k2);
    phi.add_coeff(k, pc);
  }
  FourierField w3 = dstar + 4.0 * fourier_wedge(d(phi), star_field);
  rep.w3_residual = w3.l2_norm(euclid);

  bool lee_exact = rep.lee_exactness_residual <= tol;
  rep.torsion_free = rep.pi1_domega <= tol && rep.pi7_domega <= tol && rep.pi27_domega <= tol &&
                     rep.pi7_dstar <= tol && rep.pi14_dstar <= tol;
  rep.cocalibrated = rep.pi7_dstar <= tol && rep.pi14_dstar <= tol;
  rep.cocalibrated_w3 = rep.pi1_domega <= tol && rep.w3_residual <= tol && lee_exact;
  rep.conformally_coclosed = rep.pi14_dstar <= tol && lee_exact;

  if (rep.torsion_free)
    rep.verdict = "torsion-free";
  else if (rep.cocalibrated && rep.pi1_domega <= tol)
    rep.verdict = "cocalibrated of type W3";
  else if (rep.cocalibrated)
    rep.verdict = "cocalibrated";
  else if (rep.conformally_coclosed)
    rep.verdict = "conformally co-closed";
  else
    rep.verdict = "general torsion";
  return rep;
}

double StromingerResidual::max_norm() const {
  return std::max(std::max(norm_E1, norm_E2), std::max(norm_E3, norm_E4));
}

StromingerResidual strominger_residual(const FourierField& omega_field,
                                       const FourierField& phi_field, const ConnectionField& theta,
                                       const LieAlgebraConfig& lie, double tol, GridOptions opts) {
  if (phi_field.degree() != 0) throw DegreeError("dilaton must be a 0-form field");
  MetricData euclid = MetricData::euclidean();
  FourierField domega = d(omega_field);
  FourierField dphi = d(phi_field);
  FourierField star_field = pointwise_star(omega_field, omega_field, opts);
  FourierField F = curvature(theta, lie);

  StromingerResidual res{FourierField(7, 0),
                         FourierField(5, 0),
                         FourierField(4, 0),
                         FourierField(6, 0, lie.dim(), lie.name()),
                         0, 0, 0, 0, 0, false, false, tol};

  res.E1 = fourier_wedge(domega, omega_field);
  res.E2 = d(star_field) + 4.0 * fourier_wedge(dphi, star_field);
  FourierField s = domega + 4.0 * fourier_wedge(dphi, omega_field);
  res.E3 = -d(pointwise_star(s, omega_field, opts));
  if (lie.dim() > 0) {
    FourierField cFF = wedge_pairing(F, F, lie);
    res.E3 -= cFF;
    res.bianchi_obstruction = cFF.coeff(Wavevector{}).cwiseAbs().maxCoeff();
    res.E4 = wedge_mixed(F, star_field);
  }
  res.norm_E1 = res.E1.l2_norm(euclid);
  res.norm_E2 = res.E2.l2_norm(euclid);
  res.norm_E3 = res.E3.l2_norm(euclid);
  res.norm_E4 = res.E4.l2_norm(euclid);
  res.solvability_flag = res.bianchi_obstruction > tol;
  res.first_line_warning = res.norm_E1 > tol || res.norm_E2 > tol;
  return res;
}

} // namespace g2strom

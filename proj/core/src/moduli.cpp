#include "g2strom/moduli.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <mutex>

#include "g2strom/numeric.hpp"

namespace g2strom {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

std::string to_string(ComplexKind kind) {
  switch (kind) {
    case ComplexKind::KS: return "KS";
    case ComplexKind::GenKS: return "genKS";
    case ComplexKind::MetricOnly: return "metric-only";
    case ComplexKind::InstantonOnly: return "instanton-only";
  }
  return "?";
}

BasePoint::BasePoint(G2Structure g2, LieAlgebraConfig lie, double phi)
    : m_g2(std::move(g2)), m_lie(std::move(lie)), m_phi(phi) {}

BasePoint BasePoint::flat(G2Structure g2, LieAlgebraConfig lie, double phi, double residual_tol) {
  lie.validate();
  BasePoint base(std::move(g2), std::move(lie), phi);
  StromingerResidual res =
      strominger_residual(base.omega_field(0), base.phi_field(0), base.theta_field(0), base.m_lie);
  if (res.max_norm() > residual_tol)
    throw Error("base point is not a solution: residual " + std::to_string(res.max_norm()));
  return base;
}

FourierField BasePoint::omega_field(int cutoff) const {
  return FourierField::constant(m_g2.omega(), cutoff);
}

FourierField BasePoint::phi_field(int cutoff) const {
  FourierField f(0, cutoff);
  Eigen::MatrixXcd c(1, 1);
  c(0, 0) = m_phi;
  if (m_phi != 0.0) f.set_coeff(Wavevector{}, c);
  return f;
}

ConnectionField BasePoint::theta_field(int cutoff) const {
  return ConnectionField::flat(m_lie, cutoff);
}

double BlockOperator::complex_residual() const {
  if (P.cols() == 0 || L.rows() == 0) return 0.0;
  double np = operator_norm(P), nl = operator_norm(L);
  if (np == 0.0 || nl == 0.0) return 0.0;
  return operator_norm(L * P) / (np * nl);
}

namespace {

// Assembly over the real covector u = 2 pi k. Domain order
// [omega_dot, phi_dot, theta_dot(, b_dot)], gauge order [V, r(, xi)],
// codomain [L7, L5, L4-or-L3, L6xg].
BlockOperator assemble(const BasePoint& base, const Wavevector& k, ComplexKind kind) {
  const G2Structure& g2 = base.g2();
  const MetricData& m = g2.metric();
  int dg = base.lie().dim();
  bool gen = kind == ComplexKind::GenKS;
  bool metric_sector = kind != ComplexKind::InstantonOnly;
  bool bundle_sector = kind != ComplexKind::MetricOnly && dg > 0;
  if (kind == ComplexKind::InstantonOnly && dg == 0)
    throw Error("instanton-only complex needs a nontrivial bundle");

  KForm u = covector_form(k);
  u *= kTwoPi;

  BlockOperator op;
  op.k = k;

  int dom = 0, cod = 0, gauge = 0;
  if (metric_sector) {
    op.domain_segments = {{"omega_dot", 35}, {"phi_dot", 1}};
    op.codomain_segments = {{"L7", 1}, {"L5", 21}, {gen ? "L3" : "L4", 35}};
    op.gauge_segments = {{"V", 7}};
  }
  if (bundle_sector) {
    op.domain_segments.push_back({"theta_dot", 7 * dg});
    op.codomain_segments.push_back({"L6xg", 7 * dg});
    op.gauge_segments.push_back({"r", dg});
  }
  if (gen) {
    op.domain_segments.push_back({"b_dot", 21});
    op.gauge_segments.push_back({"xi", 7});
  }
  for (const auto& s : op.domain_segments) dom += s.second;
  for (const auto& s : op.codomain_segments) cod += s.second;
  for (const auto& s : op.gauge_segments) gauge += s.second;

  op.P = Eigen::MatrixXd::Zero(dom, gauge);
  op.L = Eigen::MatrixXd::Zero(cod, dom);
  if (infnorm(k) == 0) return op; // constants: both operators vanish

  Eigen::MatrixXd wedge_u3 = wedge_matrix(u, 3); // Lambda^3 -> Lambda^4
  int row = 0, col = 0;

  if (metric_sector) {
    // P: V -> (u ^ i_V omega, 0)
    for (int j = 0; j < 7; ++j)
      op.P.col(j).head(35) = wedge(u, interior(Vector7::Unit(j), g2.omega())).coeffs();

    // L rows for (omega_dot, phi_dot)
    Eigen::MatrixXd row1 = wedge_matrix(g2.omega(), 4) * wedge_u3; // u^w^omega
    op.L.block(0, 0, 1, 35) = row1;
    op.L.block(1, 0, 21, 35) = wedge_matrix(u, 4) * m.star_matrix(3) * g2.j_matrix(3);
    op.L.block(1, 35, 21, 1) = 4.0 * wedge(u, g2.star_omega()).coeffs();
    if (!gen) {
      // L3 = -d*(d w + 4 d phi ^ omega): per mode +u ^ *(u ^ (w + 4 phi omega))
      Eigen::MatrixXd quad = wedge_u3 * m.star_matrix(4) * wedge_u3;
      op.L.block(22, 0, 35, 35) = quad;
      op.L.block(22, 35, 35, 1) = 4.0 * quad * g2.omega().coeffs();
    } else {
      // L3hat = T_dot - db: -*(u ^ (w + 4 phi omega)) - u ^ b
      Eigen::MatrixXd tdot = -m.star_matrix(4) * wedge_u3;
      op.L.block(22, 0, 35, 35) = tdot;
      op.L.block(22, 35, 35, 1) = 4.0 * tdot * g2.omega().coeffs();
    }
    row = 57;
    col = 36;
  }

  if (bundle_sector) {
    // P: r -> u r; L: theta_dot -> (u ^ theta_dot) ^ *omega
    for (int a = 0; a < dg; ++a)
      for (int j = 0; j < 7; ++j)
        op.P(col + j * dg + a, metric_sector ? 7 + a : a) = u.coeffs()[j];
    Eigen::MatrixXd M = wedge_matrix(g2.star_omega(), 2) * wedge_matrix(u, 1);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        if (M(i, j) != 0.0)
          for (int a = 0; a < dg; ++a) op.L(row + i * dg + a, col + j * dg + a) = M(i, j);
    row += 7 * dg;
    col += 7 * dg;
  }

  if (gen) {
    // P: xi -> b_dot = u ^ xi; L3 gains -u ^ b
    int xi_off = 7 + (bundle_sector ? dg : 0);
    op.P.block(col, xi_off, 21, 7) = wedge_matrix(u, 1);
    op.L.block(22, col, 35, 21) = -wedge_matrix(u, 2);
  }
  return op;
}

} // namespace

BlockOperator assemble_KS_block(const BasePoint& base, const Wavevector& k) {
  return assemble(base, k, ComplexKind::KS);
}
BlockOperator assemble_genKS_block(const BasePoint& base, const Wavevector& k) {
  return assemble(base, k, ComplexKind::GenKS);
}
BlockOperator assemble_block(const BasePoint& base, const Wavevector& k, ComplexKind kind) {
  return assemble(base, k, kind);
}

CohomologyResult cohomology_dimension(const BasePoint& base, int K, ComplexKind kind,
                                      ModuliTolerances tols) {
  if (K < 1) throw Error("cutoff K must be >= 1");
  CohomologyResult out;
  out.kind = kind;
  out.cutoff = K;

  // enumerate all modes |k|_inf <= K
  std::vector<Wavevector> modes;
  int width = 2 * K + 1;
  long total = 1;
  for (int i = 0; i < 7; ++i) total *= width;
  modes.reserve(static_cast<size_t>(total));
  for (long m = 0; m < total; ++m) {
    Wavevector k{};
    long q = m;
    for (int i = 0; i < 7; ++i) {
      k[static_cast<size_t>(i)] = static_cast<int>(q % width) - K;
      q /= width;
    }
    modes.push_back(k);
  }
  out.n_modes = static_cast<int>(modes.size());

  std::vector<ModeResult> results(modes.size());
  parallel_for(static_cast<int>(modes.size()), [&](int i) {
    BlockOperator op = assemble(base, modes[static_cast<size_t>(i)], kind);
    ModeResult r;
    r.k = modes[static_cast<size_t>(i)];
    r.complex_residual = op.complex_residual();
    Eigen::MatrixXd kerL = kernel_basis(op.L, tols.rank_tol);
    Eigen::MatrixXd imP = image_basis(op.P, tols.rank_tol);
    r.dim_ker_L = static_cast<int>(kerL.cols());
    r.rank_P = static_cast<int>(imP.cols());
    r.defect = r.dim_ker_L - r.rank_P;
    r.containment_angle = r.rank_P > 0 ? max_principal_angle(imP, kerL) : 0.0;
    results[static_cast<size_t>(i)] = r;
  });

  out.containment_ok = true;
  for (const auto& r : results) {
    out.total_H1 += r.defect;
    out.max_containment_angle = std::max(out.max_containment_angle, r.containment_angle);
    out.max_complex_residual = std::max(out.max_complex_residual, r.complex_residual);
    if (r.containment_angle > tols.angle_tol) out.containment_ok = false;
    if (r.defect != 0) out.modes_with_defect.push_back(r);
  }

  BlockOperator zero_block = assemble(base, Wavevector{}, kind);
  out.domain_segments = zero_block.domain_segments;
  out.harmonic_basis = kernel_basis(zero_block.L, tols.rank_tol);
  return out;
}

TangentFields apply_P(const BasePoint& base, const FourierField& V, const FourierField& r) {
  FourierField omega = base.omega_field(0);
  FourierField omega_dot = d(interior_field(V, omega)); // L_V omega at d omega = 0
  FourierField phi_dot(0, V.cutoff());                  // L_V phi = i_V d phi = 0
  FourierField theta_dot = base.lie().dim() > 0 ? d(r) : FourierField(1, r.cutoff(), 0, "");
  return {omega_dot, phi_dot, theta_dot};
}

std::vector<FourierField> apply_L(const BasePoint& base, const TangentFields& t) {
  const G2Structure& g2 = base.g2();
  const MetricData& m = g2.metric();
  FourierField omega = base.omega_field(0);
  FourierField star_omega = FourierField::constant(g2.star_omega(), 0);

  FourierField jw = FourierField(3, t.omega_dot.cutoff());
  for (const auto& [k, c] : t.omega_dot.coeffs())
    jw.add_coeff(k, g2.j_matrix(3) * c);

  FourierField L1 = fourier_wedge(d(t.omega_dot), omega);
  FourierField L2 = d(apply_constant_star(jw, m)) + 4.0 * fourier_wedge(d(t.phi_dot), star_omega);
  FourierField inner = d(t.omega_dot) + 4.0 * fourier_wedge(d(t.phi_dot), omega);
  FourierField L3 = -d(apply_constant_star(inner, m));
  std::vector<FourierField> out{L1, L2, L3};
  if (base.lie().dim() > 0) out.push_back(wedge_mixed(d(t.theta_dot), star_omega));
  return out;
}

GenTangentFields apply_genP(const BasePoint& base, const FourierField& V, const FourierField& r,
                            const FourierField& xi) {
  TangentFields t = apply_P(base, V, r);
  // b_dot = d xi + i_V H - 2 c(r, F); H = 0 and F = 0 at the flat base
  FourierField b_dot = d(xi);
  return {t.omega_dot, t.phi_dot, t.theta_dot, b_dot};
}

std::vector<FourierField> apply_genL(const BasePoint& base, const GenTangentFields& t) {
  const MetricData& m = base.g2().metric();
  FourierField omega = base.omega_field(0);
  std::vector<FourierField> rows = apply_L(base, {t.omega_dot, t.phi_dot, t.theta_dot});
  // third row becomes T_dot - db with T_dot = -*(d w + 4 d phi ^ omega)
  FourierField inner = d(t.omega_dot) + 4.0 * fourier_wedge(d(t.phi_dot), omega);
  rows[2] = -apply_constant_star(inner, m) - d(t.b_dot);
  return rows;
}

Eigen::VectorXd flux_map(const BasePoint& base, const TangentFields& element, double tol) {
  MetricData euclid = MetricData::euclidean();
  double scale = std::max({element.omega_dot.max_coeff_norm(), element.phi_dot.max_coeff_norm(),
                           element.theta_dot.max_coeff_norm(), 1.0});
  for (const auto& row : apply_L(base, element))
    if (row.l2_norm(euclid) > tol * scale)
      throw Error("flux_map: element is not in the kernel of the linearization");

  const MetricData& m = base.g2().metric();
  FourierField omega = base.omega_field(0);
  FourierField inner = d(element.omega_dot) + 4.0 * fourier_wedge(d(element.phi_dot), omega);
  FourierField t_dot = -apply_constant_star(inner, m);
  if (base.lie().dim() > 0) {
    FourierField F = curvature(base.theta_field(0), base.lie()); // zero at flat base
    t_dot -= 2.0 * wedge_pairing(element.theta_dot, F, base.lie());
  }
  return t_dot.coeff(Wavevector{}).real().col(0);
}

} // namespace g2strom

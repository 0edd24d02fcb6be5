#include "g2strom/symbols.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numeric>

#include "g2strom/numeric.hpp"

namespace g2strom {

namespace {

Eigen::MatrixXd kron_identity(const Eigen::MatrixXd& M, int d) {
  // M acting on the form index, identity on the Lie index; Lie index fastest.
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(M.rows() * d, M.cols() * d);
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0.0)
        out.block(i * d, j * d, d, d) = M(i, j) * Eigen::MatrixXd::Identity(d, d);
  return out;
}

void require_nonzero(const KForm& v, const char* what) {
  if (v.degree() != 1) throw DegreeError("covector must be a 1-form");
  if (v.is_zero()) throw DegreeError(std::string(what) + " is undefined at the zero covector");
}

} // namespace

int SymbolMatrix::domain_dim() const {
  return std::accumulate(domain_dims.begin(), domain_dims.end(), 0);
}
int SymbolMatrix::codomain_dim() const {
  return std::accumulate(codomain_dims.begin(), codomain_dims.end(), 0);
}
int SymbolMatrix::domain_offset(int block) const {
  return std::accumulate(domain_dims.begin(), domain_dims.begin() + block, 0);
}
int SymbolMatrix::codomain_offset(int block) const {
  return std::accumulate(codomain_dims.begin(), codomain_dims.begin() + block, 0);
}
Eigen::MatrixXd SymbolMatrix::block(int rb, int cb) const {
  return matrix.block(codomain_offset(rb), domain_offset(cb), codomain_dims[static_cast<size_t>(rb)],
                      domain_dims[static_cast<size_t>(cb)]);
}

SymbolMatrix symbol_P_M(const G2Structure& g2, const KForm& v) {
  require_nonzero(v, "sigma_P");
  SymbolMatrix s;
  s.covector = v;
  s.domain_labels = {"V"};
  s.domain_dims = {7};
  s.codomain_labels = {"Omega3", "Omega0"};
  s.codomain_dims = {35, 1};
  s.matrix = Eigen::MatrixXd::Zero(36, 7);
  for (int j = 0; j < 7; ++j)
    s.matrix.col(j).head(35) = wedge(v, interior(Vector7::Unit(j), g2.omega())).coeffs();
  s.block_degree = Eigen::MatrixXi(2, 1);
  s.block_degree << 1, -1;
  return s;
}

SymbolMatrix symbol_L_M(const G2Structure& g2, const KForm& v) {
  require_nonzero(v, "sigma_L");
  SymbolMatrix s;
  s.covector = v;
  s.domain_labels = {"omega_dot", "phi_dot"};
  s.domain_dims = {35, 1};
  s.codomain_labels = {"Omega7", "Omega5", "Omega4"};
  s.codomain_dims = {1, 21, 35};
  s.matrix = Eigen::MatrixXd::Zero(57, 36);
  const MetricData& m = g2.metric();

  Eigen::MatrixXd wedge_v3 = wedge_matrix(v, 3);  // Lambda^3 -> Lambda^4
  Eigen::MatrixXd wedge_v4 = wedge_matrix(v, 4);  // Lambda^4 -> Lambda^5

  // row 1: v ^ omega_dot ^ omega
  Eigen::MatrixXd row1 = wedge_matrix(g2.omega(), 4) * wedge_v3;
  s.matrix.block(0, 0, 1, 35) = row1;
  // row 2: v ^ (*J omega_dot + phi_dot *omega)
  s.matrix.block(1, 0, 21, 35) = wedge_v4 * m.star_matrix(3) * g2.j_matrix(3);
  s.matrix.block(1, 35, 21, 1) = wedge(v, g2.star_omega()).coeffs();
  // row 3: v ^ *(v ^ (omega_dot + phi_dot omega)), quadratic in v
  Eigen::MatrixXd quad = wedge_v3 * m.star_matrix(4) * wedge_v3;
  s.matrix.block(22, 0, 35, 35) = quad;
  s.matrix.block(22, 35, 35, 1) = quad * g2.omega().coeffs();

  s.block_degree = Eigen::MatrixXi(3, 2);
  s.block_degree << 1, -1, 1, 1, 2, 2;
  return s;
}

SymbolMatrix symbol_P_P(const LieAlgebraConfig& lie, const KForm& v) {
  require_nonzero(v, "sigma_P_P");
  int dg = lie.dim();
  SymbolMatrix s;
  s.covector = v;
  s.domain_labels = {"r"};
  s.domain_dims = {dg};
  s.codomain_labels = {"Omega1xg"};
  s.codomain_dims = {7 * dg};
  s.matrix = kron_identity(v.coeffs(), dg);
  s.block_degree = Eigen::MatrixXi::Constant(1, 1, 1);
  return s;
}

SymbolMatrix symbol_L_P(const G2Structure& g2, const LieAlgebraConfig& lie, const KForm& v) {
  require_nonzero(v, "sigma_L_P");
  int dg = lie.dim();
  SymbolMatrix s;
  s.covector = v;
  s.domain_labels = {"theta_dot"};
  s.domain_dims = {7 * dg};
  s.codomain_labels = {"Omega6xg"};
  s.codomain_dims = {7 * dg};
  Eigen::MatrixXd M = wedge_matrix(g2.star_omega(), 2) * wedge_matrix(v, 1);
  s.matrix = kron_identity(M, dg);
  s.block_degree = Eigen::MatrixXi::Constant(1, 1, 1);
  return s;
}

SymbolMatrix symbol_D_theta(const G2Structure& g2, const LieAlgebraConfig& lie, const KForm& xi) {
  require_nonzero(xi, "sigma_D_theta");
  if (lie.dim() == 0) throw LieAlgebraError("sigma_D_theta needs a nontrivial bundle");
  int dg = lie.dim();
  SymbolMatrix s;
  s.covector = xi;
  s.domain_labels = {"a"};
  s.domain_dims = {7 * dg};
  s.codomain_labels = {"Omega6xg", "Omega0xg"};
  s.codomain_dims = {7 * dg, dg};
  Eigen::MatrixXd top = wedge_matrix(g2.star_omega(), 2) * wedge_matrix(xi, 1);
  Eigen::MatrixXd bottom = sharp(xi, g2.metric()).transpose(); // i_{xi#} on 1-forms
  s.matrix = Eigen::MatrixXd::Zero(8 * dg, 7 * dg);
  s.matrix.topRows(7 * dg) = kron_identity(top, dg);
  s.matrix.bottomRows(dg) = kron_identity(bottom, dg);
  s.block_degree = Eigen::MatrixXi(2, 1);
  s.block_degree << 1, 1;
  return s;
}

SymbolMatrix symbol_P_full(const G2Structure& g2, const LieAlgebraConfig& lie, const KForm& v) {
  SymbolMatrix pm = symbol_P_M(g2, v);
  int dg = lie.dim();
  if (dg == 0) return pm;
  SymbolMatrix pp = symbol_P_P(lie, v);
  SymbolMatrix s;
  s.covector = v;
  s.domain_labels = {"V", "r"};
  s.domain_dims = {7, dg};
  s.codomain_labels = {"Omega3", "Omega0", "Omega1xg"};
  s.codomain_dims = {35, 1, 7 * dg};
  s.matrix = Eigen::MatrixXd::Zero(36 + 7 * dg, 7 + dg);
  s.matrix.block(0, 0, 36, 7) = pm.matrix;
  s.matrix.block(36, 7, 7 * dg, dg) = pp.matrix;
  s.block_degree = Eigen::MatrixXi(3, 2);
  s.block_degree << 1, -1, -1, -1, -1, 1;
  return s;
}

SymbolMatrix symbol_L_full(const G2Structure& g2, const LieAlgebraConfig& lie, const KForm& v) {
  require_nonzero(v, "sigma_L_full");
  int dg = lie.dim();
  if (dg == 0) return symbol_L_M(g2, v);
  SymbolMatrix s;
  s.covector = v;
  s.domain_labels = {"omega_dot", "phi_dot", "theta_dot"};
  s.domain_dims = {35, 1, 7 * dg};
  s.codomain_labels = {"Omega7", "Omega5", "Omega4", "Omega6xg"};
  s.codomain_dims = {1, 21, 35, 7 * dg};
  s.matrix = Eigen::MatrixXd::Zero(57 + 7 * dg, 36 + 7 * dg);
  // metric rows from the highest-order system; bundle row (v ^ a) ^ *omega
  const MetricData& m = g2.metric();
  Eigen::MatrixXd wedge_v3 = wedge_matrix(v, 3);
  s.matrix.block(0, 0, 1, 35) = wedge_matrix(g2.omega(), 4) * wedge_v3;
  s.matrix.block(1, 0, 21, 35) = wedge_matrix(v, 4) * m.star_matrix(3) * g2.j_matrix(3);
  s.matrix.block(1, 35, 21, 1) = wedge(v, g2.star_omega()).coeffs();
  Eigen::MatrixXd quad = wedge_v3 * m.star_matrix(4) * wedge_v3;
  s.matrix.block(22, 0, 35, 35) = quad;
  s.matrix.block(22, 35, 35, 1) = quad * g2.omega().coeffs();
  s.matrix.block(57, 36, 7 * dg, 7 * dg) =
      kron_identity(wedge_matrix(g2.star_omega(), 2) * wedge_matrix(v, 1), dg);
  s.block_degree = Eigen::MatrixXi(4, 3);
  s.block_degree << 1, -1, -1, 1, 1, -1, 2, 2, -1, -1, -1, 1;
  return s;
}

ExactnessReport check_exactness_middle(const G2Structure& g2, const LieAlgebraConfig& lie,
                                       const KForm& v, double tol, double rank_tol) {
  if (tol <= 0.0) throw Error("tolerance must be positive");
  require_nonzero(v, "exactness check");
  ExactnessReport r;
  r.covector = v.coeffs();

  SymbolMatrix P = symbol_P_M(g2, v);
  SymbolMatrix L = symbol_L_M(g2, v);

  Eigen::JacobiSVD<Eigen::MatrixXd> svdP(P.matrix, Eigen::ComputeThinU);
  Eigen::JacobiSVD<Eigen::MatrixXd> svdL(L.matrix, Eigen::ComputeFullV);
  const auto& sp = svdP.singularValues();
  const auto& sl = svdL.singularValues();
  int rank_p = 0;
  for (int i = 0; i < sp.size(); ++i)
    if (sp[i] > rank_tol * sp[0]) ++rank_p;
  int rank_l = 0;
  for (int i = 0; i < sl.size(); ++i)
    if (sl[i] > rank_tol * sl[0]) ++rank_l;
  r.rank_P = rank_p;
  r.dim_ker_L = static_cast<int>(L.matrix.cols()) - rank_l;
  r.rank_margin_P = sp[rank_p - 1] / sp[0];
  r.kernel_margin_L = sl[rank_l - 1] / sl[0];

  Eigen::MatrixXd imP = svdP.matrixU().leftCols(rank_p);
  Eigen::MatrixXd kerL = svdL.matrixV().rightCols(L.matrix.cols() - rank_l);
  r.containment_angle = max_principal_angle(imP, kerL);

  double denom = sp[0] * sl[0];
  r.composition_residual = denom > 0.0 ? operator_norm(L.matrix * P.matrix) / denom : 0.0;

  if (lie.dim() > 0) {
    SymbolMatrix D = symbol_D_theta(g2, lie, v);
    Eigen::JacobiSVD<Eigen::MatrixXd> svdD(D.matrix);
    r.sigma_min_D_theta = svdD.singularValues().minCoeff();
    int rd = 0;
    for (int i = 0; i < svdD.singularValues().size(); ++i)
      if (svdD.singularValues()[i] > rank_tol * svdD.singularValues()[0]) ++rd;
    r.rank_D_theta = rd;
  }

  // product structure of the coupled symbols
  SymbolMatrix Pf = symbol_P_full(g2, lie, v);
  SymbolMatrix Lf = symbol_L_full(g2, lie, v);
  int dg = lie.dim();
  Eigen::MatrixXd Pprod = Eigen::MatrixXd::Zero(Pf.matrix.rows(), Pf.matrix.cols());
  Pprod.block(0, 0, 36, 7) = P.matrix;
  Eigen::MatrixXd Lprod = Eigen::MatrixXd::Zero(Lf.matrix.rows(), Lf.matrix.cols());
  Lprod.block(0, 0, 57, 36) = L.matrix;
  if (dg > 0) {
    Pprod.block(36, 7, 7 * dg, dg) = symbol_P_P(lie, v).matrix;
    Lprod.block(57, 36, 7 * dg, 7 * dg) = symbol_L_P(g2, lie, v).matrix;
  }
  r.product_split_residual =
      std::max((Pf.matrix - Pprod).cwiseAbs().maxCoeff(), (Lf.matrix - Lprod).cwiseAbs().maxCoeff());

  bool bundle_ok = lie.dim() == 0 || (r.rank_D_theta == 7 * lie.dim() && r.sigma_min_D_theta > 0.0);
  r.pass = r.rank_P == r.dim_ker_L && r.containment_angle <= tol &&
           r.composition_residual <= ExactnessReport::kCompositionTol && bundle_ok &&
           r.product_split_residual <= tol;
  return r;
}

AggregateReport sweep_symbols(const G2Structure& g2, const LieAlgebraConfig& lie, int n_samples,
                              uint64_t seed, double tol, double rank_tol) {
  if (n_samples < 1) throw Error("sweep needs n_samples >= 1");
  AggregateReport agg;
  agg.n_samples = n_samples;
  agg.seed = seed;
  agg.tol = tol;
  agg.rank_tol = rank_tol;

  Rng rng(seed);
  std::vector<KForm> covectors;
  covectors.reserve(static_cast<size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    Eigen::VectorXd x(7);
    double norm = 0.0;
    do {
      for (int j = 0; j < 7; ++j) x[j] = rng.normal();
      norm = x.norm();
    } while (norm < 1e-8);
    covectors.push_back(KForm(1, x / norm));
  }

  std::vector<ExactnessReport> reports(static_cast<size_t>(n_samples));
  parallel_for(n_samples, [&](int i) {
    reports[static_cast<size_t>(i)] =
        check_exactness_middle(g2, lie, covectors[static_cast<size_t>(i)], tol, rank_tol);
  });

  agg.min_rank_P = agg.max_rank_P = reports[0].rank_P;
  agg.min_dim_ker_L = agg.max_dim_ker_L = reports[0].dim_ker_L;
  agg.min_sigma_min_D_theta = reports[0].sigma_min_D_theta;
  agg.min_rank_margin_P = reports[0].rank_margin_P;
  agg.min_kernel_margin_L = reports[0].kernel_margin_L;
  for (const auto& r : reports) {
    agg.n_pass += r.pass ? 1 : 0;
    agg.min_rank_P = std::min(agg.min_rank_P, r.rank_P);
    agg.max_rank_P = std::max(agg.max_rank_P, r.rank_P);
    agg.min_dim_ker_L = std::min(agg.min_dim_ker_L, r.dim_ker_L);
    agg.max_dim_ker_L = std::max(agg.max_dim_ker_L, r.dim_ker_L);
    agg.max_containment_angle = std::max(agg.max_containment_angle, r.containment_angle);
    agg.max_composition_residual = std::max(agg.max_composition_residual, r.composition_residual);
    agg.min_sigma_min_D_theta = std::min(agg.min_sigma_min_D_theta, r.sigma_min_D_theta);
    agg.min_rank_margin_P = std::min(agg.min_rank_margin_P, r.rank_margin_P);
    agg.min_kernel_margin_L = std::min(agg.min_kernel_margin_L, r.kernel_margin_L);
    agg.max_product_split_residual =
        std::max(agg.max_product_split_residual, r.product_split_residual);
    if (!r.pass) agg.failing_covectors.push_back(r.covector);
  }
  agg.pass = agg.n_pass == n_samples;
  return agg;
}

} // namespace g2strom

#include "g2strom/courant.hpp"

#include <Eigen/QR>
#include <cmath>

#include "g2strom/numeric.hpp"
#include "g2strom/torsion.hpp"

namespace g2strom {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
const Complexd kI(0.0, 1.0);

FourierField cov_derivative(const FourierField& s, const ConnectionField& theta0,
                            const LieAlgebraConfig& lie) {
  // d^theta s = d s + [a0 ^ s] on the trivialization
  FourierField out = d(s);
  if (lie.dim() > 0 && !theta0.a.coeffs().empty()) out += wedge_bracket(theta0.a, s, lie);
  return out;
}

} // namespace

CourantSection::CourantSection(FourierField X_, FourierField r_, FourierField xi_)
    : X(std::move(X_)), r(std::move(r_)), xi(std::move(xi_)) {
  if (X.degree() != 1 || X.lie_valued()) throw FieldError("X must be a plain vector field");
  if (r.degree() != 0) throw FieldError("r must be a degree-0 Lie-valued field");
  if (xi.degree() != 1 || xi.lie_valued()) throw FieldError("xi must be a plain 1-form field");
}

CourantSection CourantSection::zero(const LieAlgebraConfig& lie, int cutoff) {
  return CourantSection(FourierField(1, cutoff), FourierField(0, cutoff, lie.dim(), lie.name()),
                        FourierField(1, cutoff));
}

CourantSection& CourantSection::operator+=(const CourantSection& other) {
  X += other.X;
  r += other.r;
  xi += other.xi;
  return *this;
}
CourantSection& CourantSection::operator-=(const CourantSection& other) {
  X -= other.X;
  r -= other.r;
  xi -= other.xi;
  return *this;
}
CourantSection& CourantSection::operator*=(double s) {
  X *= s;
  r *= s;
  xi *= s;
  return *this;
}

double CourantSection::linf_estimate() const {
  return std::max({X.linf_estimate(), r.linf_estimate(), xi.linf_estimate()});
}

double CourantSection::coeff_abs_sum() const {
  return X.coeff_abs_sum() + r.coeff_abs_sum() + xi.coeff_abs_sum();
}

AlgebroidData::AlgebroidData(FourierField H0, ConnectionField theta0, LieAlgebraConfig lie)
    : m_H0(std::move(H0)), m_theta0(std::move(theta0)), m_lie(std::move(lie)),
      m_F0(curvature(m_theta0, m_lie)), m_bianchi_norm(0.0) {
  if (m_H0.degree() != 3 || m_H0.lie_valued())
    throw FieldError("H0 must be a plain 3-form field");
  m_lie.validate();
  if (m_lie.dim() > 0 && !m_lie.pairing_nondegenerate())
    throw LieAlgebraError("Courant algebroid requires a non-degenerate pairing (got '" +
                          m_lie.name() + "')");
  FourierField res = d(m_H0);
  if (m_lie.dim() > 0) res -= wedge_pairing(m_F0, m_F0, m_lie);
  m_bianchi_norm = res.l2_norm(MetricData::euclidean());
}

AlgebroidData AlgebroidData::flat(const LieAlgebraConfig& lie, int cutoff) {
  return AlgebroidData(FourierField(3, cutoff), ConnectionField::flat(lie, cutoff), lie);
}

FourierField bianchi_residual(const AlgebroidData& alg) {
  FourierField res = d(alg.H0());
  if (alg.lie().dim() > 0) res -= wedge_pairing(alg.F0(), alg.F0(), alg.lie());
  return res;
}

FourierField pairing(const CourantSection& e1, const CourantSection& e2,
                     const LieAlgebraConfig& lie) {
  FourierField out = 0.5 * (field_dot(e2.xi, e1.X) + field_dot(e1.xi, e2.X));
  if (lie.dim() > 0) out += wedge_pairing(e1.r, e2.r, lie);
  return out;
}

CourantSection pi_star(const FourierField& alpha, const LieAlgebraConfig& lie) {
  return CourantSection(FourierField(1, alpha.cutoff()),
                        FourierField(0, alpha.cutoff(), lie.dim(), lie.name()), alpha);
}

CourantSection dorfman_bracket(const CourantSection& e1, const CourantSection& e2,
                               const AlgebroidData& alg) {
  const LieAlgebraConfig& lie = alg.lie();
  const FourierField &X = e1.X, &Y = e2.X, &xi = e1.xi, &eta = e2.xi;

  FourierField outX = vector_bracket(X, Y);
  FourierField out_xi = lie_derivative(X, eta) - interior_field(Y, d(xi)) +
                        interior_field(Y, interior_field(X, alg.H0()));
  FourierField out_r(0, 0, lie.dim(), lie.name());
  if (lie.dim() > 0) {
    const FourierField &r = e1.r, &t = e2.r;
    FourierField dtheta_r = cov_derivative(r, alg.theta0(), lie);
    FourierField dtheta_t = cov_derivative(t, alg.theta0(), lie);
    out_r = -wedge_bracket(r, t, lie) - interior_field(Y, interior_field(X, alg.F0())) +
            interior_field(X, dtheta_t) - interior_field(Y, dtheta_r);
    out_xi += 2.0 * wedge_pairing(dtheta_r, t, lie) +
              2.0 * wedge_pairing(interior_field(X, alg.F0()), t, lie) -
              2.0 * wedge_pairing(interior_field(Y, alg.F0()), r, lie);
  }
  return CourantSection(outX, out_r, out_xi);
}

std::vector<CourantSection> sample_sections(const LieAlgebraConfig& lie, int n, uint64_t seed,
                                            int axis_a, int axis_b) {
  Rng rng(seed);
  std::vector<Wavevector> pool;
  {
    Wavevector k{};
    k[static_cast<size_t>(axis_a)] = 1;
    pool.push_back(k);
    k = Wavevector{};
    k[static_cast<size_t>(axis_b)] = 1;
    pool.push_back(k);
    k[static_cast<size_t>(axis_a)] = 1;
    pool.push_back(k);
    k[static_cast<size_t>(axis_a)] = 1;
    k[static_cast<size_t>(axis_b)] = -1;
    pool.push_back(k);
  }
  auto random_plain = [&](int degree) {
    FourierField f(degree, 1);
    for (int c = 0; c < form_dim(degree); ++c) {
      KForm amp(degree);
      amp.coeffs()[c] = 1.0;
      const Wavevector& k = pool[static_cast<size_t>(rng.below(static_cast<int>(pool.size())))];
      f.add_cos(k, (0.5 * rng.normal()) * amp);
      f.add_sin(k, (0.5 * rng.normal()) * amp);
      if (rng.uniform() < 0.5) f.add_cos(Wavevector{}, (0.5 * rng.normal()) * amp);
    }
    return f;
  };
  std::vector<CourantSection> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    FourierField X = random_plain(1);
    FourierField xi = random_plain(1);
    FourierField r(0, 1, lie.dim(), lie.name());
    for (int a = 0; a < lie.dim(); ++a) {
      KForm amp(0);
      amp.coeffs()[0] = 1.0;
      const Wavevector& k = pool[static_cast<size_t>(rng.below(static_cast<int>(pool.size())))];
      r.add_cos(k, (0.5 * rng.normal()) * amp, a);
      r.add_sin(k, (0.5 * rng.normal()) * amp, a);
    }
    out.push_back(CourantSection(X, r, xi));
  }
  return out;
}

namespace {

std::vector<std::array<int, 3>> unordered_triples(int n) {
  std::vector<std::array<int, 3>> triples;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int l = j + 1; l < n; ++l) triples.push_back({i, j, l});
  return triples;
}

} // namespace

std::pair<double, double> d1_residual(const AlgebroidData& alg,
                                      const std::vector<CourantSection>& sections) {
  auto triples = unordered_triples(static_cast<int>(sections.size()));
  std::vector<double> sums(triples.size(), 0.0), linfs(triples.size(), 0.0);
  parallel_for(static_cast<int>(triples.size()), [&](int idx) {
    auto [i, j, l] = triples[static_cast<size_t>(idx)];
    CourantSection res = dorfman_bracket(sections[static_cast<size_t>(i)],
                                         dorfman_bracket(sections[static_cast<size_t>(j)],
                                                         sections[static_cast<size_t>(l)], alg),
                                         alg) -
                         dorfman_bracket(dorfman_bracket(sections[static_cast<size_t>(i)],
                                                         sections[static_cast<size_t>(j)], alg),
                                         sections[static_cast<size_t>(l)], alg) -
                         dorfman_bracket(sections[static_cast<size_t>(j)],
                                         dorfman_bracket(sections[static_cast<size_t>(i)],
                                                         sections[static_cast<size_t>(l)], alg),
                                         alg);
    sums[static_cast<size_t>(idx)] = res.coeff_abs_sum();
    linfs[static_cast<size_t>(idx)] = res.linf_estimate();
  });
  double s = 0.0, li = 0.0;
  for (size_t idx = 0; idx < triples.size(); ++idx) {
    s = std::max(s, sums[idx]);
    li = std::max(li, linfs[idx]);
  }
  return {s, li};
}

AxiomReport check_axioms(const AlgebroidData& alg, const std::vector<CourantSection>& sections,
                         double tol) {
  AxiomReport rep;
  rep.tol = tol;
  rep.n_sections = static_cast<int>(sections.size());
  rep.bianchi = alg.bianchi_residual_norm();
  const LieAlgebraConfig& lie = alg.lie();
  int n = rep.n_sections;
  if (n < 3) throw Error("axiom check needs at least three sections");
  for (const auto& s : sections) rep.section_scale = std::max(rep.section_scale, s.linf_estimate());

  // D1 (Jacobi/Leibniz of the bracket) over unordered triples
  auto triples = unordered_triples(n);
  std::tie(rep.d1, rep.d1_linf) = d1_residual(alg, sections);

  // D2 (anchor is bracket-homomorphism) and D5 (symmetrized bracket) on pairs
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const CourantSection &e = sections[static_cast<size_t>(i)],
                           &f = sections[static_cast<size_t>(j)];
      CourantSection bij = dorfman_bracket(e, f, alg);
      rep.d2 = std::max(rep.d2, (bij.X - vector_bracket(e.X, f.X)).coeff_abs_sum());
      CourantSection sym = bij + dorfman_bracket(f, e, alg) -
                           2.0 * pi_star(d(pairing(e, f, lie)), lie);
      rep.d5 = std::max(rep.d5, sym.coeff_abs_sum());
    }

  // D3 (Leibniz in the function slot) with deterministic trig-poly factors
  std::vector<FourierField> funcs;
  {
    std::array<bool, 7> act{};
    for (const auto& s : sections) {
      for (int ax : s.X.active_axes()) act[static_cast<size_t>(ax)] = true;
      for (int ax : s.xi.active_axes()) act[static_cast<size_t>(ax)] = true;
    }
    std::vector<int> axes;
    for (int i = 0; i < 7; ++i)
      if (act[static_cast<size_t>(i)]) axes.push_back(i);
    if (axes.empty()) axes.push_back(0);
    Rng rng(0x5eedULL);
    KForm one(0);
    one.coeffs()[0] = 1.0;
    for (int q = 0; q < 3; ++q) {
      FourierField f(0, 1);
      f.add_cos(Wavevector{}, rng.normal() * one);
      for (int ax : axes) {
        Wavevector k{};
        k[static_cast<size_t>(ax)] = 1;
        f.add_cos(k, (0.5 * rng.normal()) * one);
        f.add_sin(k, (0.5 * rng.normal()) * one);
      }
      funcs.push_back(f);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; j += 3) {
      const CourantSection &e = sections[static_cast<size_t>(i)],
                           &f = sections[static_cast<size_t>(j)];
      for (const auto& phi : funcs) {
        CourantSection phif(scalar_multiply(phi, f.X), scalar_multiply(phi, f.r),
                            scalar_multiply(phi, f.xi));
        FourierField xphi = interior_field(e.X, d(phi));
        CourantSection lhs = dorfman_bracket(e, phif, alg);
        CourantSection bif = dorfman_bracket(e, f, alg);
        CourantSection rhs(scalar_multiply(xphi, f.X) + scalar_multiply(phi, bif.X),
                           scalar_multiply(xphi, f.r) + scalar_multiply(phi, bif.r),
                           scalar_multiply(xphi, f.xi) + scalar_multiply(phi, bif.xi));
        rep.d3 = std::max(rep.d3, (lhs - rhs).coeff_abs_sum());
      }
    }

  // D4 (pairing invariance) over unordered triples, one orientation each
  for (size_t idx = 0; idx < triples.size(); ++idx) {
    auto [i, j, l] = triples[idx];
    const CourantSection &e = sections[static_cast<size_t>(i)],
                         &f = sections[static_cast<size_t>(j)],
                         &g = sections[static_cast<size_t>(l)];
    FourierField lhs = interior_field(e.X, d(pairing(f, g, lie)));
    FourierField rhs =
        pairing(dorfman_bracket(e, f, alg), g, lie) + pairing(f, dorfman_bracket(e, g, alg), lie);
    rep.d4 = std::max(rep.d4, (lhs - rhs).coeff_abs_sum());
  }

  rep.pass = rep.bianchi <= tol && rep.max_residual() <= tol;
  return rep;
}

bool GeneralizedMetricData::admissible(const LieAlgebraConfig& lie, double tol) const {
  // graph basis of V+ at x = 0: columns (X, a(X), (b+g)X) and (0, T_a, 0)
  int dg = lie.dim();
  MetricData g = metric_from_positive_3form(KForm(3, omega.coeff(Wavevector{}).real()));
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(14 + 2 * dg, 7 + dg);
  Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(7, 7);
  {
    Eigen::VectorXd bc = b.coeff(Wavevector{}).real().col(0);
    const auto& basis2 = MultiIndex::basis(2);
    for (size_t i = 0; i < basis2.size(); ++i) {
      b0(basis2[i][0] - 1, basis2[i][1] - 1) = bc[static_cast<int>(i)];
      b0(basis2[i][1] - 1, basis2[i][0] - 1) = -bc[static_cast<int>(i)];
    }
  }
  B.block(0, 0, 7, 7) = Eigen::MatrixXd::Identity(7, 7);
  if (dg > 0) {
    Eigen::MatrixXd a0 = a.coeff(Wavevector{}).real().transpose(); // dg x 7
    B.block(7, 0, dg, 7) = a0;
    B.block(7, 7, dg, dg) = Eigen::MatrixXd::Identity(dg, dg);
  }
  B.block(7 + dg, 0, 7, 7) = b0 + g.gram();
  // rank = rk E - dim M, and intersection with T* is trivial iff the
  // (T + adP)-block of the basis has full column rank
  bool full_rank = rank_with_tol(B, tol) == 7 + dg;
  bool no_tstar = rank_with_tol(B.topRows(7 + dg), tol) == 7 + dg;
  return full_rank && no_tstar;
}

DictionaryResult strominger_to_killing_data(const FourierField& omega, const FourierField& phi,
                                            const ConnectionField& theta, const AlgebroidData& alg,
                                            double tol) {
  const LieAlgebraConfig& lie = alg.lie();
  MetricData euclid = MetricData::euclidean();

  // torsion of omega: H = -*(d omega - theta_w ^ omega)
  FourierField lee = lee_form(omega);
  FourierField s = d(omega) - fourier_wedge(lee, omega);
  FourierField H = -pointwise_star(s, omega);

  FourierField rhs = alg.H0();
  FourierField a = theta.a;
  if (lie.dim() > 0) {
    a -= alg.theta0().a;
    rhs += 2.0 * wedge_pairing(a, alg.F0(), lie);
    rhs += wedge_pairing(a, cov_derivative(a, alg.theta0(), lie), lie);
    rhs += (1.0 / 3.0) * wedge_pairing(a, wedge_bracket(a, a, lie), lie);
  }

  FourierField mismatch = H - rhs;
  // least squares for db against the mismatch, mode by mode; the k = 0
  // (harmonic) part cannot be absorbed and stays in the residual
  FourierField b(2, std::max(1, mismatch.cutoff()));
  double res_sq = 0.0;
  for (const auto& [k, c] : mismatch.coeffs()) {
    if (infnorm(k) == 0) {
      res_sq += c.col(0).squaredNorm();
      continue;
    }
    Eigen::MatrixXd M = wedge_matrix(covector_form(k), 2); // 35 x 21
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
    Eigen::VectorXcd x = cod.solve(c.col(0).real()).cast<Complexd>() +
                         kI * cod.solve(c.col(0).imag()).cast<Complexd>();
    res_sq += (M * x - c.col(0)).squaredNorm();
    if (infnorm(k) <= b.cutoff()) b.add_coeff(k, x / (kTwoPi * kI));
  }
  b.symmetrize_reality();

  DictionaryResult out{GeneralizedMetricData{omega, b, a, phi}, std::sqrt(res_sq), false, tol};
  out.compatible = out.matching_residual <= tol;
  (void)euclid;
  return out;
}

GenTangentFields inner_symmetry_image(const CourantSection& e, const AlgebroidData& alg,
                                      const FourierField& omega, const FourierField& phi,
                                      const ConnectionField& theta, const FourierField& H) {
  const LieAlgebraConfig& lie = alg.lie();
  FourierField omega_dot = lie_derivative(e.X, omega);
  FourierField phi_dot = interior_field(e.X, d(phi));
  FourierField F = curvature(theta, lie);
  FourierField theta_dot(1, e.r.cutoff(), lie.dim(), lie.name());
  FourierField b_dot = d(e.xi) + interior_field(e.X, H);
  if (lie.dim() > 0) {
    theta_dot = cov_derivative(e.r, theta, lie) + interior_field(e.X, F);
    b_dot -= 2.0 * wedge_pairing(e.r, F, lie);
  }
  return {omega_dot, phi_dot, theta_dot, b_dot};
}

} // namespace g2strom

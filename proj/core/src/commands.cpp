#include "g2strom/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "g2strom/courant.hpp"
#include "g2strom/field_io.hpp"
#include "g2strom/moduli.hpp"
#include "g2strom/numeric.hpp"
#include "g2strom/symbols.hpp"
#include "g2strom/torsion.hpp"

namespace g2strom {

using nlohmann::json;

void RunConfig::validate() const {
  if (tol <= 0.0 || rank_tol <= 0.0) throw Error("tolerances must be positive");
  if (cutoff < 0) throw Error("cutoff must be >= 0");
  if (samples < 1) throw Error("samples must be >= 1");
}

json RunConfig::to_json() const {
  json j;
  j["command"] = command;
  j["tol"] = tol;
  j["rank_tol"] = rank_tol;
  j["seed"] = seed;
  j["cutoff"] = cutoff;
  j["lie"] = lie;
  j["alpha_prime"] = alpha_prime;
  j["samples"] = samples;
  j["input"] = input;
  j["phi_input"] = phi_input;
  j["theta_input"] = theta_input;
  j["output"] = output;
  j["perturb_bianchi"] = perturb_bianchi;
  j["which"] = which;
  return j;
}

namespace {

KForm random_form(Rng& rng, int degree) {
  KForm f(degree);
  for (int i = 0; i < form_dim(degree); ++i) f.coeffs()[i] = rng.normal();
  return f;
}

Report make_report(const RunConfig& cfg) {
  Report rep;
  rep.command = cfg.command;
  rep.config = cfg.to_json();
  rep.include_timing = cfg.timing;
  return rep;
}

double projector_closed_form_gap(const G2Structure& g2) {
  // pi_14 = 2/3 Id - 1/3 *(. ^ omega) against the spectral projector
  Eigen::MatrixXd K2 = g2.metric().star_matrix(5) * wedge_matrix(g2.omega(), 2);
  Eigen::MatrixXd closed =
      2.0 / 3.0 * Eigen::MatrixXd::Identity(21, 21) - 1.0 / 3.0 * K2;
  return operator_norm(closed - g2.projector(2, 14));
}

} // namespace

Report cmd_verify_algebra(const RunConfig& cfg) {
  Report rep = make_report(cfg);
  Rng rng(cfg.seed);
  MetricData euclid = MetricData::euclidean();
  G2Structure g2 = G2Structure::standard();

  { // graded anticommutativity and associativity
    double anti = 0.0, assoc = 0.0;
    for (int p = 0; p <= 7; ++p)
      for (int q = 0; q <= 7 - p; ++q)
        for (int rep_i = 0; rep_i < 4; ++rep_i) {
          KForm a = random_form(rng, p), b = random_form(rng, q);
          double scale = std::max(1e-30, a.max_abs() * b.max_abs());
          double sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
          anti = std::max(anti, (wedge(a, b) - sign * wedge(b, a)).max_abs() / scale);
          for (int s = 0; p + q + s <= 7 && s <= 2; ++s) {
            KForm c = random_form(rng, s);
            assoc = std::max(assoc, (wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).max_abs() /
                                        std::max(1e-30, scale * c.max_abs()));
          }
        }
    rep.add(CheckEntry::pass_fail("algebra/wedge-graded-anticommutativity", anti <= 1e-14,
                                  {{"max_rel_residual", anti}}));
    rep.add(CheckEntry::pass_fail("algebra/wedge-associativity", assoc <= 1e-13,
                                  {{"max_rel_residual", assoc}}));
  }

  { // basis examples
    bool ok = (wedge(KForm::basis({1}), KForm::basis({2})) - KForm::basis({1, 2})).is_zero() &&
              wedge(KForm::basis({1, 2}), KForm::basis({1, 2})).is_zero();
    KForm top = wedge(g2.omega(), g2.star_omega());
    ok = ok && std::abs(top.coeffs()[0] - 7.0) <= 1e-13;
    rep.add(CheckEntry::pass_fail("algebra/wedge-basis-examples", ok,
                                  {{"omega_wedge_star_omega", top.coeffs()[0]}}));
  }

  { // star involution and compatibility, Euclidean and a random SPD metric
    Matrix7 Arand;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) Arand(i, j) = 0.3 * rng.normal();
    MetricData skew = MetricData::from_gram(Matrix7::Identity() + Arand.transpose() * Arand);
    double invol = 0.0, compat = 0.0;
    for (const MetricData* m : {&euclid, &skew}) {
      for (int k = 0; k <= 7; ++k) {
        Eigen::MatrixXd SS = m->star_matrix(7 - k) * m->star_matrix(k);
        invol = std::max(invol,
                         (SS - Eigen::MatrixXd::Identity(SS.rows(), SS.cols())).cwiseAbs().maxCoeff());
        for (int i = 0; i < form_dim(k); ++i)
          for (int j = 0; j < form_dim(k); ++j) {
            KForm ei(k), ej(k);
            ei.coeffs()[i] = 1.0;
            ej.coeffs()[j] = 1.0;
            double lhs = wedge_top(ei, hodge_star(ej, *m));
            double rhs = inner_product(ei, ej, *m) * m->volume_form().coeffs()[0];
            compat = std::max(compat, std::abs(lhs - rhs));
          }
      }
    }
    rep.add(CheckEntry::pass_fail("algebra/star-involution", invol <= 1e-12,
                                  {{"max_residual", invol}}));
    rep.add(CheckEntry::pass_fail("algebra/star-compatibility", compat <= 1e-12,
                                  {{"max_residual", compat}}));
  }

  { // interior product: adjunction and antiderivation
    double adj = 0.0, antider = 0.0;
    for (int k = 1; k <= 7; ++k)
      for (int rep_i = 0; rep_i < 6; ++rep_i) {
        Vector7 v;
        for (int i = 0; i < 7; ++i) v[i] = rng.normal();
        KForm a = random_form(rng, k), b = random_form(rng, k - 1);
        double lhs = inner_product(interior(v, a), b, euclid);
        double rhs = inner_product(a, wedge(flat(v, euclid), b), euclid);
        adj = std::max(adj, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
        if (k <= 5) {
          KForm c = random_form(rng, 2);
          KForm lhs2 = interior(v, wedge(a, c));
          KForm rhs2 = wedge(interior(v, a), c) + (k % 2 == 0 ? 1.0 : -1.0) * wedge(a, interior(v, c));
          antider = std::max(antider, (lhs2 - rhs2).max_abs());
        }
      }
    rep.add(CheckEntry::pass_fail("algebra/interior-adjunction", adj <= 1e-12,
                                  {{"max_rel_residual", adj}}));
    rep.add(CheckEntry::pass_fail("algebra/interior-antiderivation", antider <= 1e-11,
                                  {{"max_residual", antider}}));
  }

  { // sharp
    Matrix7 diag = Matrix7::Identity();
    diag(0, 0) = 4.0;
    MetricData md = MetricData::from_gram(diag);
    Vector7 s = sharp(KForm::basis({1}), md);
    bool ok = std::abs(s[0] - 0.25) <= 1e-14 && s.tail(6).cwiseAbs().maxCoeff() <= 1e-14;
    double res = 0.0;
    for (int t = 0; t < 5; ++t) {
      KForm xi = random_form(rng, 1);
      Vector7 w;
      for (int i = 0; i < 7; ++i) w[i] = rng.normal();
      res = std::max(res, std::abs(sharp(xi, md).dot(md.gram() * w) - xi.coeffs().dot(w)));
    }
    rep.add(CheckEntry::pass_fail("algebra/sharp", ok && res <= 1e-12, {{"max_residual", res}}));
  }

  { // standard model data
    KForm w0 = standard_g2_form();
    int nnz = 0;
    for (int i = 0; i < 35; ++i) nnz += w0.coeffs()[i] != 0.0 ? 1 : 0;
    bool ok = std::abs(w0.coeff(MultiIndex{1, 2, 3}) - 1.0) == 0.0 &&
              std::abs(w0.coeff(MultiIndex{2, 5, 7}) - 1.0) == 0.0 && nnz == 7 &&
              std::abs(inner_product(w0, w0, euclid) - 7.0) <= 1e-14;
    KForm contr = interior(Vector7::Unit(0), w0);
    KForm expected = KForm::basis({2, 3}) + KForm::basis({4, 5}) - KForm::basis({6, 7});
    ok = ok && (contr - expected).is_zero();
    rep.add(CheckEntry::pass_fail("g2/standard-form", ok,
                                  {{"nonzero_monomials", nnz},
                                   {"norm_sq", inner_product(w0, w0, euclid)}}));
  }

  { // induced metric
    double gap = (g2.metric().gram() - Matrix7::Identity()).cwiseAbs().maxCoeff();
    double t = 1.37;
    MetricData scaled = metric_from_positive_3form(std::pow(t, 3) * standard_g2_form());
    double gap2 = (scaled.gram() - t * t * Matrix7::Identity()).cwiseAbs().maxCoeff();
    double gap3 = 0.0;
    for (const Matrix7& A : standard_form_stabilizer_sample(4, cfg.seed ^ 0x9d2c)) {
      MetricData mA = metric_from_positive_3form(pullback(A, standard_g2_form()));
      gap3 = std::max(gap3, (mA.gram() - Matrix7::Identity()).cwiseAbs().maxCoeff());
    }
    bool ok = gap <= 1e-12 && gap2 <= 1e-11 && gap3 <= 1e-12;
    rep.add(CheckEntry::pass_fail(
        "g2/induced-metric", ok,
        {{"standard_gap", gap}, {"scaling_gap", gap2}, {"stabilizer_gap", gap3}}));
  }

  { // projector structure; ranks use the configured rank tolerance
    struct Item {
      int deg, label;
    };
    std::vector<Item> items = {{2, 7}, {2, 14}, {3, 1}, {3, 7}, {3, 27},
                               {4, 1}, {4, 7}, {4, 27}, {5, 7}, {5, 14}};
    bool ranks_ok = true;
    double idem = 0.0, selfadj = 0.0, complete = 0.0, trace_gap = 0.0;
    json rank_data = json::object();
    for (const auto& it : items) {
      const Eigen::MatrixXd& P = g2.projector(it.deg, it.label);
      int r = rank_with_tol(P, cfg.rank_tol);
      rank_data[std::to_string(it.deg) + ":" + std::to_string(it.label)] = r;
      if (r != it.label) ranks_ok = false;
      idem = std::max(idem, (P * P - P).cwiseAbs().maxCoeff());
      const Eigen::MatrixXd& G = g2.metric().form_gram(it.deg);
      selfadj = std::max(selfadj, (G * P - P.transpose() * G).cwiseAbs().maxCoeff());
      trace_gap = std::max(trace_gap, std::abs(P.trace() - it.label));
    }
    for (int deg : {2, 3, 4, 5}) {
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(form_dim(deg), form_dim(deg));
      for (const auto& it : items)
        if (it.deg == deg) sum += g2.projector(it.deg, it.label);
      complete = std::max(
          complete, (sum - Eigen::MatrixXd::Identity(form_dim(deg), form_dim(deg))).cwiseAbs().maxCoeff());
    }
    rep.add(CheckEntry::pass_fail("g2/projector-ranks", ranks_ok, {{"ranks", rank_data}}));
    rep.add(CheckEntry::pass_fail("g2/projector-structure",
                                  idem <= 1e-12 && selfadj <= 1e-12 && complete <= 1e-12 &&
                                      trace_gap <= 1e-10,
                                  {{"idempotency", idem},
                                   {"self_adjointness", selfadj},
                                   {"completeness", complete},
                                   {"trace_gap", trace_gap}}));
  }

  { // duality * pi = pi * between complementary degrees
    double dual = 0.0;
    const MetricData& m = g2.metric();
    for (auto [low, label] : std::vector<std::pair<int, int>>{{2, 7}, {2, 14}, {3, 1}, {3, 7}, {3, 27}}) {
      int high = 7 - low;
      Eigen::MatrixXd lhs = m.star_matrix(low) * g2.projector(low, label);
      Eigen::MatrixXd rhs = g2.projector(high, label) * m.star_matrix(low);
      dual = std::max(dual, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    rep.add(CheckEntry::pass_fail("g2/projector-duality", dual <= 1e-12, {{"max_residual", dual}}));
  }

  { // closed-form pi_14 and the displayed pi_7 value
    double gap = projector_closed_form_gap(g2);
    KForm p7 = g2.project({2, 7}, KForm::basis({1, 2}));
    KForm expect = (1.0 / 3.0) * (KForm::basis({1, 2}) - KForm::basis({4, 7}) + KForm::basis({5, 6}));
    double gap7 = (p7 - expect).max_abs();
    rep.add(CheckEntry::pass_fail("g2/pi14-closed-form", gap <= 1e-12, {{"operator_norm_gap", gap}}));
    rep.add(CheckEntry::pass_fail("g2/pi7-displayed-value", gap7 <= 1e-14, {{"max_residual", gap7}}));
  }

  { // J operator
    KForm jw = g2.j_operator(g2.omega());
    double r1 = (jw - (4.0 / 3.0) * g2.omega()).max_abs();
    KForm chi = g2.project({3, 27}, random_form(rng, 3));
    double r2 = (g2.j_operator(chi) + chi).max_abs();
    KForm a = random_form(rng, 4);
    KForm nofix = a - g2.project({4, 1}, a);
    double r3 = (g2.j_operator(g2.j_operator(nofix)) - nofix).max_abs();
    rep.add(CheckEntry::pass_fail("g2/j-operator", r1 <= 1e-13 && r2 <= 1e-13 && r3 <= 1e-13,
                                  {{"eigen_1", r1}, {"eigen_27", r2}, {"involution", r3}}));
  }

  { // 2-form eigenvalue characterization
    KForm beta14 = g2.project({2, 14}, random_form(rng, 2));
    auto [r14a, r7a] = g2.two_form_eigen_characterization(beta14);
    KForm beta7 = interior(Vector7::Unit(0), g2.omega());
    auto [r14b, r7b] = g2.two_form_eigen_characterization(beta7);
    auto [z14, z7] = g2.two_form_eigen_characterization(KForm(2));
    bool ok = r14a <= 1e-12 && r7b <= 1e-12 && z14 == 0.0 && z7 == 0.0;
    rep.add(CheckEntry::pass_fail("g2/two-form-types", ok,
                                  {{"residual14_on_14part", r14a}, {"residual7_on_7part", r7b}}));
  }

  { // projections commute with the stabilizer sample
    double inv = 0.0;
    for (const Matrix7& A : standard_form_stabilizer_sample(4, cfg.seed ^ 0x51ab)) {
      for (int deg : {2, 3}) {
        Eigen::MatrixXd PB = pullback_matrix(A, deg);
        for (int label : deg == 2 ? std::vector<int>{7, 14} : std::vector<int>{1, 7, 27}) {
          const Eigen::MatrixXd& P = g2.projector(deg, label);
          inv = std::max(inv, (P * PB - PB * P).cwiseAbs().maxCoeff());
        }
      }
    }
    rep.add(CheckEntry::pass_fail("g2/stabilizer-invariance", inv <= 1e-10, {{"max_residual", inv}}));
  }

  return rep;
}

namespace {

double block_homogeneity_residual(const G2Structure& g2, const LieAlgebraConfig& lie, Rng& rng,
                                  double lambda) {
  Eigen::VectorXd x(7);
  for (int i = 0; i < 7; ++i) x[i] = rng.normal();
  KForm v(1, x / x.norm());
  KForm lv = lambda * v;
  double worst = 0.0;
  auto compare = [&](const SymbolMatrix& a, const SymbolMatrix& b) {
    for (int rb = 0; rb < static_cast<int>(a.codomain_dims.size()); ++rb)
      for (int cb = 0; cb < static_cast<int>(a.domain_dims.size()); ++cb) {
        int deg = a.block_degree(rb, cb);
        if (deg < 0) {
          worst = std::max(worst, b.block(rb, cb).cwiseAbs().maxCoeff());
          continue;
        }
        Eigen::MatrixXd expect = std::pow(lambda, deg) * a.block(rb, cb);
        double scale = std::max(1.0, expect.cwiseAbs().maxCoeff());
        worst = std::max(worst, (b.block(rb, cb) - expect).cwiseAbs().maxCoeff() / scale);
      }
  };
  compare(symbol_P_M(g2, v), symbol_P_M(g2, lv));
  compare(symbol_L_M(g2, v), symbol_L_M(g2, lv));
  if (lie.dim() > 0) compare(symbol_D_theta(g2, lie, v), symbol_D_theta(g2, lie, lv));
  return worst;
}

} // namespace

Report cmd_symbols(const RunConfig& cfg) {
  Report rep = make_report(cfg);
  G2Structure g2 = G2Structure::standard();
  LieAlgebraConfig lie = LieAlgebraConfig::by_name(cfg.lie, cfg.alpha_prime);
  if (cfg.lie != "trivial") lie.validate();

  AggregateReport agg = sweep_symbols(g2, lie, cfg.samples, cfg.seed, cfg.tol, cfg.rank_tol);
  json agg_data = {{"n_samples", agg.n_samples},
                   {"n_pass", agg.n_pass},
                   {"min_rank_P", agg.min_rank_P},
                   {"max_rank_P", agg.max_rank_P},
                   {"min_dim_ker_L", agg.min_dim_ker_L},
                   {"max_dim_ker_L", agg.max_dim_ker_L},
                   {"max_containment_angle", agg.max_containment_angle},
                   {"max_composition_residual", agg.max_composition_residual},
                   {"min_rank_margin_P", agg.min_rank_margin_P},
                   {"min_kernel_margin_L", agg.min_kernel_margin_L},
                   {"max_product_split_residual", agg.max_product_split_residual}};
  rep.add(CheckEntry::pass_fail("symbols/exactness-sweep",
                                agg.pass && agg.min_rank_P == 7 && agg.max_rank_P == 7 &&
                                    agg.min_dim_ker_L == 7 && agg.max_dim_ker_L == 7,
                                agg_data));
  rep.add(CheckEntry::pass_fail("symbols/composition-vanishes",
                                agg.max_composition_residual <= 1e-12,
                                {{"max_composition_residual", agg.max_composition_residual}}));
  if (lie.dim() > 0) {
    constexpr double kInjectivityFloor = 1e-6;
    rep.add(CheckEntry::pass_fail("symbols/instanton-injectivity",
                                  agg.min_sigma_min_D_theta > kInjectivityFloor,
                                  {{"min_sigma_min", agg.min_sigma_min_D_theta},
                                   {"floor", kInjectivityFloor}}));
  }

  { // per-block homogeneity in the covector
    Rng rng(cfg.seed ^ 0x4a31ULL);
    double worst = 0.0;
    for (int t = 0; t < 3; ++t)
      worst = std::max(worst, block_homogeneity_residual(g2, lie, rng, 2.0 + t));
    rep.add(CheckEntry::pass_fail("symbols/homogeneity", worst <= 1e-10,
                                  {{"max_rel_residual", worst}}));
  }

  { // singular values are invariant under the stabilizer action on covectors
    Rng rng(cfg.seed ^ 0x77fULL);
    Eigen::VectorXd x(7);
    for (int i = 0; i < 7; ++i) x[i] = rng.normal();
    KForm v(1, x / x.norm());
    double worst = 0.0;
    for (const Matrix7& A : standard_form_stabilizer_sample(3, cfg.seed ^ 0x77fULL)) {
      KForm av = pullback(A, v);
      auto sv_gap = [&](const Eigen::MatrixXd& M1, const Eigen::MatrixXd& M2) {
        Eigen::JacobiSVD<Eigen::MatrixXd> s1(M1), s2(M2);
        return (s1.singularValues() - s2.singularValues()).cwiseAbs().maxCoeff();
      };
      worst = std::max(worst, sv_gap(symbol_P_M(g2, v).matrix, symbol_P_M(g2, av).matrix));
      worst = std::max(worst, sv_gap(symbol_L_M(g2, v).matrix, symbol_L_M(g2, av).matrix));
      if (lie.dim() > 0)
        worst = std::max(worst, sv_gap(symbol_D_theta(g2, lie, v).matrix,
                                       symbol_D_theta(g2, lie, av).matrix));
    }
    rep.add(CheckEntry::pass_fail("symbols/frame-invariance", worst <= 1e-10,
                                  {{"max_sv_gap", worst}}));
  }

  { // determinism: a short repeated sweep must agree bit for bit
    int n = std::min(cfg.samples, 25);
    AggregateReport a1 = sweep_symbols(g2, lie, n, cfg.seed, cfg.tol, cfg.rank_tol);
    AggregateReport a2 = sweep_symbols(g2, lie, n, cfg.seed, cfg.tol, cfg.rank_tol);
    bool same = a1.n_pass == a2.n_pass && a1.max_containment_angle == a2.max_containment_angle &&
                a1.max_composition_residual == a2.max_composition_residual &&
                a1.min_sigma_min_D_theta == a2.min_sigma_min_D_theta &&
                a1.min_rank_margin_P == a2.min_rank_margin_P &&
                a1.min_kernel_margin_L == a2.min_kernel_margin_L;
    rep.add(CheckEntry::pass_fail("symbols/determinism", same, {{"n_samples", n}}));
  }

  { // the zero covector must be rejected
    bool rejected = false;
    try {
      symbol_P_M(g2, KForm(1));
    } catch (const DegreeError&) {
      rejected = true;
    }
    rep.add(CheckEntry::pass_fail("symbols/zero-covector-rejected", rejected, json::object()));
  }

  return rep;
}

Report cmd_moduli(const RunConfig& cfg) {
  Report rep = make_report(cfg);
  LieAlgebraConfig lie = LieAlgebraConfig::by_name(cfg.lie, cfg.alpha_prime);
  BasePoint base = BasePoint::flat(G2Structure::standard(), lie, 0.0);
  ModuliTolerances tols;
  tols.rank_tol = cfg.rank_tol;
  tols.angle_tol = std::max(cfg.tol, 1e-12);

  std::vector<ComplexKind> kinds;
  if (cfg.which == "all") {
    kinds = {ComplexKind::KS, ComplexKind::MetricOnly, ComplexKind::GenKS};
    if (lie.dim() > 0) kinds.push_back(ComplexKind::InstantonOnly);
  } else if (cfg.which == "KS")
    kinds = {ComplexKind::KS};
  else if (cfg.which == "genKS")
    kinds = {ComplexKind::GenKS};
  else if (cfg.which == "metric-only")
    kinds = {ComplexKind::MetricOnly};
  else if (cfg.which == "instanton-only")
    kinds = {ComplexKind::InstantonOnly};
  else
    throw Error("unknown complex '" + cfg.which + "'");

  long totals_ks = -1, totals_metric = -1, totals_inst = -1, totals_gen = -1;
  CohomologyResult ks_result;
  bool have_ks = false;
  for (ComplexKind kind : kinds) {
    CohomologyResult res = cohomology_dimension(base, cfg.cutoff, kind, tols);
    json defects = json::array();
    for (const auto& m : res.modes_with_defect)
      defects.push_back({{"k", std::vector<int>(m.k.begin(), m.k.end())},
                         {"dim_ker_L", m.dim_ker_L},
                         {"rank_P", m.rank_P},
                         {"defect", m.defect}});
    json data = {{"total_H1", res.total_H1},
                 {"n_modes", res.n_modes},
                 {"max_containment_angle", res.max_containment_angle},
                 {"max_complex_residual", res.max_complex_residual},
                 {"modes_with_defect", defects}};
    bool ok = res.containment_ok && res.max_complex_residual <= 1e-12;
    rep.add(CheckEntry::pass_fail("moduli/" + to_string(kind), ok, data));
    switch (kind) {
      case ComplexKind::KS: totals_ks = res.total_H1; ks_result = res; have_ks = true; break;
      case ComplexKind::MetricOnly: totals_metric = res.total_H1; break;
      case ComplexKind::InstantonOnly: totals_inst = res.total_H1; break;
      case ComplexKind::GenKS: totals_gen = res.total_H1; break;
    }
  }

  if (have_ks) {
    // flux map on the harmonic sector plus gauge invariance
    int dg = lie.dim();
    int defect0 = static_cast<int>(ks_result.harmonic_basis.cols());
    int ker_delta = 0;
    double max_flux = 0.0;
    for (int c = 0; c < defect0; ++c) {
      Eigen::VectorXd col = ks_result.harmonic_basis.col(c);
      FourierField wdot(3, 0);
      Eigen::MatrixXcd wc = col.head(35).cast<Complexd>();
      wdot.set_coeff(Wavevector{}, wc);
      FourierField pdot(0, 0);
      Eigen::MatrixXcd pc(1, 1);
      pc(0, 0) = col[35];
      pdot.set_coeff(Wavevector{}, pc);
      FourierField tdot(1, 0, dg, lie.name());
      if (dg > 0) {
        Eigen::MatrixXcd tc = Eigen::MatrixXcd::Zero(7, dg);
        for (int i = 0; i < 7; ++i)
          for (int a = 0; a < dg; ++a) tc(i, a) = col[36 + i * dg + a];
        tdot.set_coeff(Wavevector{}, tc);
      }
      double norm = flux_map(base, {wdot, pdot, tdot}, 1e-9).norm();
      max_flux = std::max(max_flux, norm);
      if (norm <= 1e-12) ++ker_delta;
    }
    // gauge invariance: flux of P(V, r) vanishes
    FourierField V(1, 1);
    Wavevector k{};
    k[0] = 1;
    V.add_cos(k, KForm::basis({3}));
    FourierField r(0, 1, dg, lie.name());
    if (dg > 0) {
      KForm one(0);
      one.coeffs()[0] = 1.0;
      r.add_sin(k, one, 0);
    }
    TangentFields gauge = apply_P(base, V, r);
    double gauge_flux = flux_map(base, gauge, 1e-9).norm();
    rep.add(CheckEntry::pass_fail("moduli/flux-map", gauge_flux <= 1e-12,
                                  {{"harmonic_dim", defect0},
                                   {"ker_delta", ker_delta},
                                   {"max_flux_norm", max_flux},
                                   {"gauge_image_flux", gauge_flux}}));
    if (totals_gen >= 0) {
      long expected = 21 + ker_delta; // b2(T^7) + dim ker delta
      rep.add(CheckEntry::pass_fail("moduli/extension-count", totals_gen == expected,
                                    {{"genKS_total", totals_gen},
                                     {"b2", 21},
                                     {"ker_delta", ker_delta}}));
    }
  }
  if (totals_ks >= 0 && totals_metric >= 0 && totals_inst >= 0)
    rep.add(CheckEntry::pass_fail("moduli/splitting-consistency",
                                  totals_ks == totals_metric + totals_inst,
                                  {{"KS", totals_ks},
                                   {"metric_only", totals_metric},
                                   {"instanton_only", totals_inst}}));
  return rep;
}

Report cmd_torsion(const RunConfig& cfg) {
  Report rep = make_report(cfg);
  if (cfg.input.empty()) throw IoError("torsion command needs --input <field file>");
  FourierField omega = load_field(cfg.input);
  if (omega.degree() != 3 || omega.lie_valued())
    throw IoError("torsion input must be a plain degree-3 field", "/degree");

  ClassReport cls = fernandez_gray(omega, cfg.tol);
  json data = {{"pi1_domega", cls.pi1_domega},
               {"pi7_domega", cls.pi7_domega},
               {"pi27_domega", cls.pi27_domega},
               {"pi7_dstar", cls.pi7_dstar},
               {"pi14_dstar", cls.pi14_dstar},
               {"lee_exactness_residual", cls.lee_exactness_residual},
               {"w3_residual", cls.w3_residual},
               {"torsion_free", cls.torsion_free},
               {"cocalibrated", cls.cocalibrated},
               {"cocalibrated_w3", cls.cocalibrated_w3},
               {"conformally_coclosed", cls.conformally_coclosed},
               {"verdict", cls.verdict}};
  rep.add(CheckEntry{"torsion/fernandez-gray", "PASS", data});

  if (!cfg.phi_input.empty() && !cfg.theta_input.empty()) {
    FourierField phi = load_field(cfg.phi_input);
    FourierField a = load_field(cfg.theta_input);
    LieAlgebraConfig lie =
        a.lie_valued() ? LieAlgebraConfig::by_name(a.lie_name(), cfg.alpha_prime)
                       : LieAlgebraConfig::trivial();
    StromingerResidual res = strominger_residual(omega, phi, ConnectionField(a), lie, cfg.tol);
    json sdata = {{"norm_E1", res.norm_E1},
                  {"norm_E2", res.norm_E2},
                  {"norm_E3", res.norm_E3},
                  {"norm_E4", res.norm_E4},
                  {"bianchi_obstruction", res.bianchi_obstruction},
                  {"solvability_flag", res.solvability_flag},
                  {"first_line_warning", res.first_line_warning}};
    rep.add(CheckEntry{"torsion/strominger-residual", "PASS", sdata});
  }
  return rep;
}

Report cmd_courant(const RunConfig& cfg) {
  Report rep = make_report(cfg);
  LieAlgebraConfig lie = LieAlgebraConfig::by_name(cfg.lie, cfg.alpha_prime);
  AlgebroidData alg = cfg.input.empty() ? AlgebroidData::flat(lie, 1) : load_algebroid(cfg.input);

  std::vector<CourantSection> sections = sample_sections(alg.lie(), 20, cfg.seed);
  AxiomReport ax = check_axioms(alg, sections, cfg.tol);
  json data = {{"d1", ax.d1},           {"d2", ax.d2},
               {"d3", ax.d3},           {"d4", ax.d4},
               {"d5", ax.d5},           {"d1_linf", ax.d1_linf},
               {"bianchi", ax.bianchi}, {"section_scale", ax.section_scale},
               {"n_sections", ax.n_sections}};
  rep.add(CheckEntry::pass_fail("courant/axioms", ax.pass, data));
  rep.add(CheckEntry::pass_fail("courant/bianchi", ax.bianchi <= cfg.tol,
                                {{"residual", ax.bianchi}}));

  if (!cfg.perturb_bianchi.empty()) {
    json sweep = json::array();
    KForm amp = KForm::basis({2, 3, 4});
    Wavevector k{};
    k[0] = 1;
    bool monotone = true, zero_at_zero = true, positive = true;
    double prev = -1.0;
    for (double eps : cfg.perturb_bianchi) {
      FourierField H = alg.H0();
      if (H.cutoff() < 1) H = FourierField(3, 1);
      FourierField pert(3, std::max(1, H.cutoff()));
      pert.add_sin(k, eps * amp);
      H += pert;
      AlgebroidData twisted(H, alg.theta0(), alg.lie());
      auto [d1_sum, d1_linf] = d1_residual(twisted, sections);
      sweep.push_back({{"epsilon", eps},
                       {"d1", d1_sum},
                       {"d1_linf", d1_linf},
                       {"bianchi", twisted.bianchi_residual_norm()}});
      if (eps == 0.0 && d1_sum > cfg.tol) zero_at_zero = false;
      if (eps > 0.0 && d1_linf <= 1e-3 * eps * ax.section_scale) positive = false;
      if (d1_linf < prev) monotone = false;
      prev = d1_linf;
    }
    rep.add(CheckEntry::pass_fail("courant/perturb-bianchi",
                                  monotone && zero_at_zero && positive, {{"sweep", sweep}}));
  }
  return rep;
}

Report run_command(const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep = make_report(cfg);
  try {
    cfg.validate();
    if (cfg.command == "verify-algebra")
      rep = cmd_verify_algebra(cfg);
    else if (cfg.command == "symbols")
      rep = cmd_symbols(cfg);
    else if (cfg.command == "moduli")
      rep = cmd_moduli(cfg);
    else if (cfg.command == "torsion")
      rep = cmd_torsion(cfg);
    else if (cfg.command == "courant")
      rep = cmd_courant(cfg);
    else
      throw Error("unknown command '" + cfg.command + "'");
  } catch (const std::exception& e) {
    rep.add(CheckEntry::error("run", e.what()));
  }
  auto t1 = std::chrono::steady_clock::now();
  rep.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rep;
}

std::string finalize_report(const RunConfig& cfg, Report& report) {
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output);
    if (!out) {
      report.add(CheckEntry::error("output", "cannot open '" + cfg.output + "' for writing"));
    } else {
      out << report.to_json().dump(2) << "\n";
    }
  }
  return report.to_text();
}

} // namespace g2strom

#include "g2strom/lie.hpp"

#include <cmath>

namespace g2strom {

LieAlgebraConfig::LieAlgebraConfig(std::string name, int dim, std::vector<Eigen::MatrixXd> ad,
                                   Eigen::MatrixXd pairing, double alpha_prime)
    : m_name(std::move(name)), m_dim(dim), m_ad(std::move(ad)), m_pairing(std::move(pairing)),
      m_alpha_prime(alpha_prime) {
  if (alpha_prime <= 0.0) throw LieAlgebraError("alpha' must be positive");
}

LieAlgebraConfig LieAlgebraConfig::trivial() {
  return LieAlgebraConfig("trivial", 0, {}, Eigen::MatrixXd::Zero(0, 0), 1.0);
}

namespace {
int levi_civita3(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((b - a + 3) % 3 == 1) ? 1 : -1;
}
} // namespace

LieAlgebraConfig LieAlgebraConfig::su2(double alpha_prime) {
  std::vector<Eigen::MatrixXd> ad(3, Eigen::MatrixXd::Zero(3, 3));
  // [T_a, T_b] = eps_{abc} T_c
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        ad[static_cast<size_t>(a)](c, b) = levi_civita3(a, b, c);
  return LieAlgebraConfig("su2", 3, std::move(ad),
                          alpha_prime * Eigen::MatrixXd::Identity(3, 3), alpha_prime);
}

LieAlgebraConfig LieAlgebraConfig::u1() {
  return LieAlgebraConfig("u1", 1, {Eigen::MatrixXd::Zero(1, 1)}, Eigen::MatrixXd::Zero(1, 1),
                          1.0);
}

LieAlgebraConfig LieAlgebraConfig::by_name(const std::string& name, double alpha_prime) {
  if (name == "trivial") return trivial();
  if (name == "su2") return su2(alpha_prime);
  if (name == "u1") return u1();
  throw LieAlgebraError("unknown Lie algebra '" + name + "' (expected trivial, su2, or u1)");
}

Eigen::VectorXd LieAlgebraConfig::bracket(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m_dim);
  for (int a = 0; a < m_dim; ++a) out += x[a] * (m_ad[static_cast<size_t>(a)] * y);
  return out;
}

double LieAlgebraConfig::structure_constant(int a, int b, int c) const {
  return m_ad[static_cast<size_t>(a)](c, b);
}

double LieAlgebraConfig::pairing_value(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  return x.dot(m_pairing * y);
}

double LieAlgebraConfig::jacobi_residual() const {
  double r = 0.0;
  for (int a = 0; a < m_dim; ++a)
    for (int b = 0; b < m_dim; ++b)
      for (int c = 0; c < m_dim; ++c) {
        Eigen::VectorXd ea = Eigen::VectorXd::Unit(m_dim, a);
        Eigen::VectorXd eb = Eigen::VectorXd::Unit(m_dim, b);
        Eigen::VectorXd ec = Eigen::VectorXd::Unit(m_dim, c);
        Eigen::VectorXd res = bracket(ea, bracket(eb, ec)) - bracket(bracket(ea, eb), ec) -
                              bracket(eb, bracket(ea, ec));
        r = std::max(r, res.lpNorm<Eigen::Infinity>());
      }
  return r;
}

double LieAlgebraConfig::ad_invariance_residual() const {
  double r = 0.0;
  for (int a = 0; a < m_dim; ++a)
    for (int b = 0; b < m_dim; ++b)
      for (int c = 0; c < m_dim; ++c) {
        Eigen::VectorXd ea = Eigen::VectorXd::Unit(m_dim, a);
        Eigen::VectorXd eb = Eigen::VectorXd::Unit(m_dim, b);
        Eigen::VectorXd ec = Eigen::VectorXd::Unit(m_dim, c);
        r = std::max(r, std::abs(pairing_value(bracket(ea, eb), ec) +
                                 pairing_value(eb, bracket(ea, ec))));
      }
  return r;
}

double LieAlgebraConfig::pairing_min_singular_value() const {
  if (m_dim == 0) return 1.0; // vacuously nondegenerate
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m_pairing);
  return svd.singularValues().minCoeff();
}

bool LieAlgebraConfig::pairing_nondegenerate(double tol) const {
  return pairing_min_singular_value() > tol;
}

void LieAlgebraConfig::validate(double tol) const {
  if (jacobi_residual() > tol) throw LieAlgebraError("structure constants violate Jacobi");
  if (ad_invariance_residual() > tol)
    throw LieAlgebraError("pairing is not ad-invariant: c([x,y],z) + c(y,[x,z]) != 0");
}

} // namespace g2strom

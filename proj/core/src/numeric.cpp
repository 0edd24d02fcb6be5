#include "g2strom/numeric.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <thread>
#include <vector>

namespace g2strom {

int rank_with_tol(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > tol * s[0]) ++r;
  return r;
}

Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& m, double tol) {
  if (m.cols() == 0) return Eigen::MatrixXd(0, 0);
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s[0] > 0.0)
    for (int i = 0; i < s.size(); ++i)
      if (s[i] > tol * s[0]) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

Eigen::MatrixXd image_basis(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s[0] > 0.0)
    for (int i = 0; i < s.size(); ++i)
      if (s[i] > tol * s[0]) ++r;
  return svd.matrixU().leftCols(r);
}

double max_principal_angle(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V) {
  if (U.cols() == 0 || V.cols() == 0) return 0.0;
  // cosines of principal angles = singular values of U^T V; take the
  // smallest over the smaller subspace.
  const Eigen::MatrixXd& small = U.cols() <= V.cols() ? U : V;
  const Eigen::MatrixXd& large = U.cols() <= V.cols() ? V : U;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(small.transpose() * large);
  double c = svd.singularValues().minCoeff();
  c = std::min(1.0, std::max(-1.0, c));
  return std::acos(c);
}

double operator_norm(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

double min_singular_value(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().minCoeff();
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  int workers = static_cast<int>(hw == 0 ? 1 : hw);
  if (workers <= 1 || n < 4) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  workers = std::min(workers, n);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w]() {
      for (int i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

Rng::Rng(uint64_t seed) {
  // splitmix64 expansion of the seed into xoshiro256** state
  uint64_t x = seed;
  for (auto& s : m_state) {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    s = z ^ (z >> 31);
  }
}

static inline uint64_t rotl64(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

uint64_t Rng::next_u64() {
  uint64_t result = rotl64(m_state[1] * 5, 7) * 9;
  uint64_t t = m_state[1] << 17;
  m_state[2] ^= m_state[0];
  m_state[3] ^= m_state[1];
  m_state[1] ^= m_state[2];
  m_state[0] ^= m_state[3];
  m_state[2] ^= t;
  m_state[3] = rotl64(m_state[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (m_have_spare) {
    m_have_spare = false;
    return m_spare;
  }
  double u1 = 0.0;
  while (u1 == 0.0) u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * 3.14159265358979323846 * u2;
  m_spare = r * std::sin(a);
  m_have_spare = true;
  return r * std::cos(a);
}

int Rng::below(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }

} // namespace g2strom

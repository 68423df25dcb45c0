#include "polarprec/channel.hpp"

#include <cmath>

namespace polarprec {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = splitmix64(master);
  for (std::uint64_t component : path) state = splitmix64(state ^ splitmix64(component + 0x632be59bd9b4e019ULL));
  return state;
}

Complex complex_gaussian(Rng& rng, double variance) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

ComplexMatrix draw_channel(int m_r, int m_t, Rng& rng) {
  if (m_r < 1 || m_t < 1) throw ContractViolation("draw_channel: dimensions must be positive");
  ComplexMatrix h(m_r, m_t);
  for (int r = 0; r < m_r; ++r)
    for (int c = 0; c < m_t; ++c) h(r, c) = complex_gaussian(rng);
  return h;
}

ComplexMatrix random_semi_unitary(int rows, int cols, Rng& rng) {
  if (cols > rows || cols < 1) throw ContractViolation("random_semi_unitary: need 1 <= cols <= rows");
  const ComplexMatrix g = draw_channel(rows, cols, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  const ComplexMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int c = 0; c < cols; ++c) {
    const Complex d = r(c, c);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(c) *= d / mag;
  }
  return q;
}

ComplexMatrix transmit(const ComplexMatrix& h, const ComplexMatrix& f, const ComplexMatrix& s, double es, double n0,
                       Rng& rng) {
  if (h.cols() != f.rows() || f.cols() != s.rows())
    throw ContractViolation("transmit: dimension mismatch between H, F and S");
  if (!(es >= 0.0) || !(n0 >= 0.0)) throw ContractViolation("transmit: energies must be non-negative");
  const double amp = std::sqrt(es / static_cast<double>(f.cols()));
  ComplexMatrix y = amp * (h * (f * s));
  if (n0 > 0.0) {
    for (Eigen::Index c = 0; c < y.cols(); ++c)
      for (Eigen::Index r = 0; r < y.rows(); ++r) y(r, c) += complex_gaussian(rng, n0);
  }
  return y;
}

ComplexMatrix fixed_reference_channel() {
  ComplexMatrix h(3, 3);
  h << Complex(0.61, -0.92), Complex(-0.93, 0.56), Complex(-1.24, 0.35),  //
      Complex(0.93, -1.30), Complex(-0.21, -0.15), Complex(-0.51, -0.60),  //
      Complex(0.01, 0.35), Complex(-0.64, -0.44), Complex(0.78, 0.04);
  return h;
}

}  // namespace polarprec

#include "polarprec/numerics.hpp"

#include <cmath>

namespace polarprec {

SvdResult svd(const ComplexMatrix& a) {
  if (a.rows() < 1 || a.cols() < 1)
    throw ContractViolation("svd: empty matrix");
  if (!a.allFinite())
    throw NumericalError("svd: non-finite input");

  Eigen::JacobiSVD<ComplexMatrix> jacobi(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (jacobi.info() != Eigen::Success)
    throw NumericalError("svd: Jacobi iteration did not converge");

  // Eigen reports descending values; flip everything to ascending.
  const Eigen::Index p = jacobi.singularValues().size();
  SvdResult out;
  out.sigma = jacobi.singularValues().reverse();
  out.u = jacobi.matrixU().rowwise().reverse();
  out.v = jacobi.matrixV().rowwise().reverse();
  if (!out.u.allFinite() || !out.v.allFinite() || !out.sigma.allFinite() || out.sigma.size() != p)
    throw NumericalError("svd: non-finite factors");
  return out;
}

bool is_semi_unitary(const ComplexMatrix& f, double tolerance) {
  if (f.cols() > f.rows()) return false;
  const ComplexMatrix gram = f.adjoint() * f;
  return (gram - ComplexMatrix::Identity(f.cols(), f.cols())).norm() <= tolerance;
}

double logdet_capacity(const ComplexMatrix& g, double es_over_n0, int m) {
  if (g.cols() == 0) return 0.0;
  if (m < 1) throw ContractViolation("logdet_capacity: stream count must be positive");
  if (!(es_over_n0 > 0.0)) throw ContractViolation("logdet_capacity: Es/N0 must be positive");

  const double scale = es_over_n0 / static_cast<double>(m);
  ComplexMatrix gram = scale * (g.adjoint() * g);
  gram.diagonal().array() += 1.0;

  Eigen::LLT<ComplexMatrix> llt(gram);
  if (llt.info() != Eigen::Success)
    throw NumericalError("logdet_capacity: I + c G*G not positive definite");
  double acc = 0.0;
  for (Eigen::Index k = 0; k < gram.rows(); ++k)
    acc += std::log2(llt.matrixLLT()(k, k).real());
  return 2.0 * acc;
}

double chordal_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows())
    throw ContractViolation("chordal_distance: row count mismatch");
  const ComplexMatrix diff = a * a.adjoint() - b * b.adjoint();
  return diff.norm() / std::sqrt(2.0);
}

ComplexMatrix column_block(const ComplexMatrix& m, int first, int count) {
  if (first < 0 || count < 0 || first + count > m.cols())
    throw ContractViolation("column_block: range outside matrix");
  return m.middleCols(first, count);
}

bool equal_up_to_column_phase(const ComplexMatrix& a, const ComplexMatrix& b, double tolerance) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const Complex inner = b.col(c).dot(a.col(c));  // b^H a
    const double mag = std::abs(inner);
    if (mag == 0.0) {
      if (a.col(c).norm() > tolerance || b.col(c).norm() > tolerance) return false;
      continue;
    }
    const Complex phase = inner / mag;
    if ((a.col(c) - phase * b.col(c)).norm() > tolerance) return false;
  }
  return true;
}

}  // namespace polarprec

#pragma once

// Complex linear algebra used by the precoding and capacity code.
//
// Conventions shared by every module:
//   * singular values are reported in ASCENDING order, so "the last m
//     columns of V" are the right-singular vectors of the m largest values;
//   * capacities are in bits per channel use;
//   * the power normalisation Es/(M N0) lives only in logdet_capacity.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace polarprec {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
// ||A - U diag(s) V*||_F <= svd_reconstruction * ||A||_F
inline constexpr double svd_reconstruction = 1e-9;
// ||F*F - I||_F <= semi_unitary
inline constexpr double semi_unitary = 1e-10;
// slack for identities that hold exactly in exact arithmetic
inline constexpr double identity = 1e-9;
}  // namespace tol

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContractViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SvdResult {
  ComplexMatrix u;
  RealVector sigma;  // ascending
  ComplexMatrix v;   // column k pairs with sigma[k]
};

/// Economy SVD a = U diag(sigma) V* with p = min(rows, cols): U is rows x p,
/// V is cols x p and sigma ascending. V is square (a full basis) whenever
/// cols <= rows, which covers every H*W and H with M_T <= M_R used here.
/// Columns belonging to repeated or zero singular values are an arbitrary
/// orthonormal completion.
///
/// Throws NumericalError when the input is not finite or the iteration
/// fails to converge.
SvdResult svd(const ComplexMatrix& a);

bool is_semi_unitary(const ComplexMatrix& f, double tolerance = tol::semi_unitary);

/// log2 det(I + (es_over_n0 / m) G* G). m is the total stream count, which
/// may exceed g.cols() when g is a tail of the effective channel. An empty
/// g contributes 0.
double logdet_capacity(const ComplexMatrix& g, double es_over_n0, int m);

/// (1/sqrt2) ||A A* - B B*||_F
double chordal_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Columns [first, first + count) of m; count may be zero.
ComplexMatrix column_block(const ComplexMatrix& m, int first, int count);

/// True when every column of a equals the matching column of b up to a
/// unit-modulus scalar. Singular-vector comparisons go through this.
bool equal_up_to_column_phase(const ComplexMatrix& a, const ComplexMatrix& b, double tolerance);

}  // namespace polarprec

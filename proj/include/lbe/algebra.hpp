#pragma once

// Small dense complex linear algebra: fixed operator bases, commutators,
// the matrix exponential and a Lie-closure search over the Frobenius span.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lbe/error.hpp"

namespace lbe {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

struct OperatorBasis {
  std::string label;
  std::vector<ComplexMatrix> members;

  std::size_t size() const { return members.size(); }
  /// Common row/column count of the members (0 for an empty basis).
  Eigen::Index dim() const { return members.empty() ? 0 : members.front().rows(); }
};

/// max |m - m^dagger|
double hermiticity_defect(const ComplexMatrix& m);
/// max |m + m^dagger|
double anti_hermiticity_defect(const ComplexMatrix& m);

inline bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

/// ab - ba. Throws InvalidInput unless both are square of equal size.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// exp(m) by scaling and squaring of a degree-18 Taylor polynomial evaluated
/// on m / 2^s with ||m / 2^s||_1 <= 1/2.
ComplexMatrix matrix_exponential(const ComplexMatrix& m);

/// Frobenius inner product <a, b> = tr(a^dagger b).
Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b);

struct SpanFit {
  std::vector<Complex> coefficients;
  double residual = 0.0;  // Frobenius norm of target - sum c_k basis_k
};

/// Least-squares coefficients of `target` in the span of `basis`.
SpanFit span_coefficients(const ComplexMatrix& target, const OperatorBasis& basis);

/// Rank test on the Gram matrix with singular-value cutoff `cutoff`.
bool linearly_independent(const OperatorBasis& basis, double cutoff = 1e-10);

struct ClosureResult {
  OperatorBasis closed;
  bool is_closed_seed = false;
};

/// Thrown when the closure grows past `max_dim`; carries the partial set.
class ClosureOverflow : public Error {
 public:
  ClosureOverflow(const std::string& what, OperatorBasis partial)
      : Error(what), partial_(std::move(partial)) {}
  const OperatorBasis& partial() const noexcept { return partial_; }

 private:
  OperatorBasis partial_;
};

inline constexpr double kSpanResidualThreshold = 1e-9;

/// Adjoins normalized orthogonal components of commutators that leave the
/// current span until the set closes. Seed members are kept verbatim and
/// come first in the result.
ClosureResult lie_closure(const OperatorBasis& seed, std::size_t max_dim);

namespace bases {

ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
/// |1><2|, raises population into level 1.
ComplexMatrix sigma_plus();
/// |2><1|
ComplexMatrix sigma_minus();

/// 3x3 angular-momentum representation acting on the coherence vector.
ComplexMatrix a_x();
ComplexMatrix a_y();
ComplexMatrix a_z();
ComplexMatrix a_plus();   // a_x + i a_y
ComplexMatrix a_minus();  // a_x - i a_y

OperatorBasis pauli();             // {sx, sy, sz}
OperatorBasis angular_momentum();  // {Ax, Ay, Az}

/// O1..O8 = Az, A+, A-, Az^2 - (2/3) I, A+^2, A-^2, A+Az + AzA+, A-Az + AzA-.
/// The fourth member is the traceless part of Az^2 so that the octet spans su(3).
OperatorBasis su3_octet();

/// Orthonormal (unit Frobenius norm) basis of all n x n matrices: I/sqrt(n)
/// followed by the normalized generalized Gell-Mann matrices.
OperatorBasis orthonormal_complete(std::size_t n);

/// The n x n matrix unit with a 1 in row i, column j (zero-based).
ComplexMatrix matrix_unit(std::size_t n, std::size_t i, std::size_t j);

}  // namespace bases

}  // namespace lbe

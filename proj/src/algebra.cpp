#include "lbe/algebra.hpp"

#include <cmath>
#include <utility>

namespace lbe {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidInput(std::string(what) + ": expected a non-empty square matrix, got " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

Eigen::MatrixXcd stacked_columns(const OperatorBasis& basis) {
  const Eigen::Index n = basis.dim();
  Eigen::MatrixXcd cols(n * n, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    cols.col(static_cast<Eigen::Index>(k)) =
        Eigen::Map<const Eigen::VectorXcd>(basis.members[k].data(), n * n);
  }
  return cols;
}

void require_uniform(const OperatorBasis& basis, const char* what) {
  for (const auto& m : basis.members) {
    require_square(m, what);
    if (m.rows() != basis.dim()) {
      throw InvalidInput(std::string(what) + ": basis members differ in dimension");
    }
  }
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double anti_hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m + m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "commutator");
  require_square(b, "commutator");
  if (a.rows() != b.rows()) {
    throw InvalidInput("commutator: dimension mismatch " + std::to_string(a.rows()) + " vs " +
                       std::to_string(b.rows()));
  }
  return a * b - b * a;
}

ComplexMatrix matrix_exponential(const ComplexMatrix& m) {
  require_square(m, "matrix_exponential");
  constexpr int kDegree = 18;
  constexpr double kTheta = 0.5;

  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm1)) throw InvalidInput("matrix_exponential: non-finite entries");

  int squarings = 0;
  if (norm1 > kTheta) squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta)));
  const ComplexMatrix x = m * std::ldexp(1.0, -squarings);

  // Horner: I + x(I + x/2(I + x/3(...)))
  const auto id = ComplexMatrix::Identity(m.rows(), m.cols());
  ComplexMatrix result = id;
  for (int k = kDegree; k >= 1; --k) {
    result = id + (x * result) / static_cast<double>(k);
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace();
}

SpanFit span_coefficients(const ComplexMatrix& target, const OperatorBasis& basis) {
  require_square(target, "span_coefficients");
  SpanFit fit;
  if (basis.members.empty()) {
    fit.residual = target.norm();
    return fit;
  }
  require_uniform(basis, "span_coefficients");
  if (basis.dim() != target.rows()) {
    throw InvalidInput("span_coefficients: target and basis dimensions differ");
  }
  const Eigen::Index nn = target.size();
  const Eigen::MatrixXcd cols = stacked_columns(basis);
  const Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(target.data(), nn);
  const Eigen::VectorXcd coeffs = cols.completeOrthogonalDecomposition().solve(rhs);
  fit.coefficients.assign(coeffs.data(), coeffs.data() + coeffs.size());
  fit.residual = (rhs - cols * coeffs).norm();
  return fit;
}

bool linearly_independent(const OperatorBasis& basis, double cutoff) {
  if (basis.members.empty()) return true;
  require_uniform(basis, "linearly_independent");
  const Eigen::MatrixXcd cols = stacked_columns(basis);
  const Eigen::MatrixXcd gram = cols.adjoint() * cols;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(gram).singularValues();
  return sv.minCoeff() > cutoff;
}

ClosureResult lie_closure(const OperatorBasis& seed, std::size_t max_dim) {
  require_uniform(seed, "lie_closure");
  if (max_dim < seed.size()) {
    throw InvalidInput("lie_closure: max_dim smaller than the seed");
  }

  ClosureResult out;
  out.closed = seed;
  out.closed.label = seed.label;
  out.is_closed_seed = true;
  auto& members = out.closed.members;

  // Every pair (i, j) with i < j is tested once; new members extend the pair set.
  for (std::size_t j = 1; j < members.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const ComplexMatrix c = commutator(members[i], members[j]);
      const SpanFit fit = span_coefficients(c, out.closed);
      if (fit.residual <= kSpanResidualThreshold) continue;

      ComplexMatrix orth = c;
      for (std::size_t k = 0; k < members.size(); ++k) orth -= fit.coefficients[k] * members[k];
      orth /= orth.norm();
      out.is_closed_seed = false;
      members.push_back(std::move(orth));
      if (members.size() > max_dim) {
        throw ClosureOverflow("lie_closure: closure exceeds max_dim = " + std::to_string(max_dim),
                              out.closed);
      }
    }
  }
  return out;
}

namespace bases {

ComplexMatrix sigma_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix sigma_y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

ComplexMatrix sigma_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix sigma_plus() { return matrix_unit(2, 0, 1); }
ComplexMatrix sigma_minus() { return matrix_unit(2, 1, 0); }

ComplexMatrix a_x() {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(1, 2) = 1;
  m(2, 1) = 1;
  return m;
}

ComplexMatrix a_y() {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 2) = -kI;
  m(2, 0) = kI;
  return m;
}

ComplexMatrix a_z() {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 1) = 1;
  m(1, 0) = 1;
  return m;
}

ComplexMatrix a_plus() { return a_x() + kI * a_y(); }
ComplexMatrix a_minus() { return a_x() - kI * a_y(); }

OperatorBasis pauli() { return {"pauli", {sigma_x(), sigma_y(), sigma_z()}}; }

OperatorBasis angular_momentum() { return {"angular-momentum", {a_x(), a_y(), a_z()}}; }

OperatorBasis su3_octet() {
  const ComplexMatrix z = a_z();
  const ComplexMatrix p = a_plus();
  const ComplexMatrix m = a_minus();
  const ComplexMatrix z2 = z * z - (2.0 / 3.0) * ComplexMatrix::Identity(3, 3);
  return {"su3-octet", {z, p, m, z2, p * p, m * m, p * z + z * p, m * z + z * m}};
}

ComplexMatrix matrix_unit(std::size_t n, std::size_t i, std::size_t j) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1;
  return m;
}

OperatorBasis orthonormal_complete(std::size_t n) {
  if (n == 0) throw InvalidInput("orthonormal_complete: n must be positive");
  const auto nn = static_cast<Eigen::Index>(n);
  OperatorBasis basis{"orthonormal-" + std::to_string(n), {}};
  basis.members.push_back(ComplexMatrix::Identity(nn, nn) / std::sqrt(static_cast<double>(n)));

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      basis.members.push_back((matrix_unit(n, i, j) + matrix_unit(n, j, i)) * inv_sqrt2);
      basis.members.push_back((matrix_unit(n, j, i) - matrix_unit(n, i, j)) * (kI * inv_sqrt2));
    }
  }
  // Diagonal Gell-Mann: diag(1, ..., 1, -l, 0, ...) with l ones, normalized.
  for (std::size_t l = 1; l < n; ++l) {
    ComplexMatrix d = ComplexMatrix::Zero(nn, nn);
    for (std::size_t k = 0; k < l; ++k) d(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1;
    d(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)) = -static_cast<double>(l);
    basis.members.push_back(d / d.norm());
  }
  return basis;
}

}  // namespace bases

}  // namespace lbe

#pragma once

// Lindblad models and their embedding into the trace-separated
// Liouville-Bloch form  i d(eta)/dt = L(t) eta + tr(rho) b(t).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lbe/algebra.hpp"
#include "lbe/drive.hpp"

namespace lbe {

struct HamiltonianTerm {
  ComplexMatrix op;  // Hermitian
  DriveSignal coefficient;
};

struct LindbladTerm {
  ComplexMatrix op;
  DriveSignal amplitude;  // multiplies op, so the rate enters as amplitude^2
};

/// drho/dt = -i[H(t), rho] - 1/2 sum_k (L_k^+ L_k rho + rho L_k^+ L_k - 2 L_k rho L_k^+)
/// with H(t) = sum_j f_j(t) H_j and L_k(t) = g_k(t) L_k.
struct LindbladModel {
  std::size_t dim = 0;
  std::vector<HamiltonianTerm> hamiltonian_terms;
  std::vector<LindbladTerm> lindblad_ops;

  /// Throws InvalidInput on non-square, mis-sized or non-Hermitian terms.
  void validate() const;
  ComplexMatrix hamiltonian_at(double t) const;
};

/// The n^2 - 1 coherence components of rho plus its trace. Entry order:
///   rho_ij + rho_ji  for i > j, row-major over (i, j)
///   rho_ij - rho_ji  for i > j, row-major over (i, j)
///   rho_11 - rho_ii  for i = 2..n
/// For n = 2 this is (rho12 + rho21, rho21 - rho12, rho11 - rho22).
struct CoherenceVector {
  std::size_t n = 0;
  ComplexVector entries;
  double trace_of_rho = 0.0;
};

CoherenceVector rho_to_eta(const ComplexMatrix& rho);
ComplexMatrix eta_to_rho(const CoherenceVector& eta);

/// Number of (i > j) pairs, i.e. n(n-1)/2.
constexpr std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho, double t);

/// Time-sampled Liouville-Bloch generator. Each Hamiltonian term and each
/// dissipator contributes a fixed matrix weighted by its scalar signal, so
/// evaluation at any t is a short weighted sum.
class BlochGenerator {
 public:
  std::size_t n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return n_ * n_ - 1; }

  ComplexMatrix matrix_at(double t) const;
  /// Affine term per unit trace; the full source is tr(rho) * affine_at(t).
  ComplexVector affine_at(double t) const;
  /// True when every dissipator is unital (b == 0 identically).
  bool homogeneous() const noexcept { return homogeneous_; }

 private:
  friend BlochGenerator build_bloch_generator(const LindbladModel& model);

  struct Part {
    DriveSignal signal;
    bool squared = false;  // dissipators scale with amplitude^2
    ComplexMatrix matrix;
    ComplexVector affine;
  };
  double weight(const Part& p, double t) const;

  std::size_t n_ = 0;
  std::vector<Part> parts_;
  bool homogeneous_ = true;
};

BlochGenerator build_bloch_generator(const LindbladModel& model);

struct SumRuleResult {
  double proportionality = 0.0;  // c in  S = c (n rho - tr(rho) I)
  double residual = 0.0;         // || S - c (n rho - tr(rho) I) ||_F
};

/// S = 1/2 sum_k (L_k^+ L_k rho + rho L_k^+ L_k - 2 L_k rho L_k^+) over the
/// orthonormal complete basis scaled by `amplitude`, fitted against
/// n rho - tr(rho) I.
SumRuleResult sum_rule_check(std::size_t n, const ComplexMatrix& rho, double amplitude = 1.0);
/// Same, on a random trace-one density matrix drawn from `seed`.
SumRuleResult sum_rule_check(std::size_t n, double amplitude = 1.0, std::uint64_t seed = 20240611);

/// Random density matrix (Hermitian, positive, trace one) of size n.
ComplexMatrix random_density_matrix(std::size_t n, std::uint64_t seed);

}  // namespace lbe

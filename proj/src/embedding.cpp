#include "lbe/embedding.hpp"

#include <cmath>
#include <random>

namespace lbe {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

ComplexMatrix dissipator(const ComplexMatrix& l, const ComplexMatrix& rho) {
  const ComplexMatrix ldl = l.adjoint() * l;
  return -0.5 * (ldl * rho + rho * ldl) + l * rho * l.adjoint();
}

// Coherence entries of an arbitrary square matrix (the trace is dropped).
ComplexVector eta_entries(const ComplexMatrix& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  const std::size_t pairs = pair_count(n);
  ComplexVector e(idx(n * n - 1));
  std::size_t p = 0;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j, ++p) {
      e(idx(p)) = m(idx(i), idx(j)) + m(idx(j), idx(i));
      e(idx(pairs + p)) = m(idx(i), idx(j)) - m(idx(j), idx(i));
    }
  }
  for (std::size_t i = 1; i < n; ++i) e(idx(2 * pairs + i - 1)) = m(0, 0) - m(idx(i), idx(i));
  return e;
}

}  // namespace

void LindbladModel::validate() const {
  if (dim == 0) throw InvalidInput("LindbladModel: dim must be positive");
  const auto n = idx(dim);
  for (const auto& term : hamiltonian_terms) {
    if (term.op.rows() != n || term.op.cols() != n) {
      throw InvalidInput("LindbladModel: Hamiltonian term is not " + std::to_string(dim) + "x" +
                         std::to_string(dim));
    }
    if (!is_hermitian(term.op)) throw InvalidInput("LindbladModel: Hamiltonian term not Hermitian");
  }
  for (const auto& term : lindblad_ops) {
    if (term.op.rows() != n || term.op.cols() != n) {
      throw InvalidInput("LindbladModel: Lindblad operator is not " + std::to_string(dim) + "x" +
                         std::to_string(dim));
    }
  }
}

ComplexMatrix LindbladModel::hamiltonian_at(double t) const {
  ComplexMatrix h = ComplexMatrix::Zero(idx(dim), idx(dim));
  for (const auto& term : hamiltonian_terms) h += term.coefficient(t) * term.op;
  return h;
}

CoherenceVector rho_to_eta(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() < 2) {
    throw InvalidInput("rho_to_eta: expected a square matrix of size >= 2");
  }
  return {static_cast<std::size_t>(rho.rows()), eta_entries(rho), rho.trace().real()};
}

ComplexMatrix eta_to_rho(const CoherenceVector& eta) {
  const std::size_t n = eta.n;
  if (n < 2 || static_cast<std::size_t>(eta.entries.size()) != n * n - 1) {
    throw InvalidInput("eta_to_rho: entry count does not match n^2 - 1");
  }
  const std::size_t pairs = pair_count(n);
  ComplexMatrix rho = ComplexMatrix::Zero(idx(n), idx(n));
  std::size_t p = 0;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j, ++p) {
      const Complex s = eta.entries(idx(p));
      const Complex a = eta.entries(idx(pairs + p));
      rho(idx(i), idx(j)) = 0.5 * (s + a);
      rho(idx(j), idx(i)) = 0.5 * (s - a);
    }
  }
  // rho_11 = (tr + sum_i d_i) / n,  rho_ii = rho_11 - d_i
  Complex d_sum = 0.0;
  for (std::size_t i = 1; i < n; ++i) d_sum += eta.entries(idx(2 * pairs + i - 1));
  const Complex r11 = (eta.trace_of_rho + d_sum) / static_cast<double>(n);
  rho(0, 0) = r11;
  for (std::size_t i = 1; i < n; ++i) rho(idx(i), idx(i)) = r11 - eta.entries(idx(2 * pairs + i - 1));
  return rho;
}

ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho, double t) {
  if (rho.rows() != idx(model.dim) || rho.cols() != idx(model.dim)) {
    throw InvalidInput("lindblad_rhs: rho is " + std::to_string(rho.rows()) + "x" +
                       std::to_string(rho.cols()) + ", model dim is " + std::to_string(model.dim));
  }
  const ComplexMatrix h = model.hamiltonian_at(t);
  ComplexMatrix out = -kI * (h * rho - rho * h);
  for (const auto& term : model.lindblad_ops) {
    const double g = term.amplitude(t);
    if (g == 0.0) continue;
    out += (g * g) * dissipator(term.op, rho);
  }
  return out;
}

double BlochGenerator::weight(const Part& p, double t) const {
  const double s = p.signal(t);
  return p.squared ? s * s : s;
}

ComplexMatrix BlochGenerator::matrix_at(double t) const {
  ComplexMatrix m = ComplexMatrix::Zero(idx(dim()), idx(dim()));
  for (const auto& p : parts_) m += weight(p, t) * p.matrix;
  return m;
}

ComplexVector BlochGenerator::affine_at(double t) const {
  ComplexVector b = ComplexVector::Zero(idx(dim()));
  if (homogeneous_) return b;
  for (const auto& p : parts_) {
    if (p.squared) b += weight(p, t) * p.affine;
  }
  return b;
}

BlochGenerator build_bloch_generator(const LindbladModel& model) {
  model.validate();
  const std::size_t n = model.dim;
  if (n < 2) throw InvalidInput("build_bloch_generator: dim must be >= 2");
  const std::size_t d = n * n - 1;

  // Dual matrices B_k with eta(B_k) = e_k and tr(B_k) = 0.
  std::vector<ComplexMatrix> duals;
  duals.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    CoherenceVector unit{n, ComplexVector::Zero(idx(d)), 0.0};
    unit.entries(idx(k)) = 1.0;
    duals.push_back(eta_to_rho(unit));
  }
  const ComplexMatrix mixed = ComplexMatrix::Identity(idx(n), idx(n)) / static_cast<double>(n);

  // Column k of the generator is i * eta(linear_map(B_k)).
  auto columns_of = [&](auto&& linear_map) {
    ComplexMatrix m(idx(d), idx(d));
    for (std::size_t k = 0; k < d; ++k) m.col(idx(k)) = kI * eta_entries(linear_map(duals[k]));
    return m;
  };

  BlochGenerator gen;
  gen.n_ = n;
  for (const auto& term : model.hamiltonian_terms) {
    const ComplexMatrix& h = term.op;
    auto ham = [&](const ComplexMatrix& r) -> ComplexMatrix { return -kI * (h * r - r * h); };
    gen.parts_.push_back({term.coefficient, false, columns_of(ham), ComplexVector::Zero(idx(d))});
  }
  for (const auto& term : model.lindblad_ops) {
    const ComplexMatrix& l = term.op;
    auto diss = [&](const ComplexMatrix& r) -> ComplexMatrix { return dissipator(l, r); };
    BlochGenerator::Part part{term.amplitude, true, columns_of(diss), kI * eta_entries(diss(mixed))};
    if (part.affine.cwiseAbs().maxCoeff() > 1e-15) gen.homogeneous_ = false;
    gen.parts_.push_back(std::move(part));
  }
  return gen;
}

SumRuleResult sum_rule_check(std::size_t n, const ComplexMatrix& rho, double amplitude) {
  if (n < 2) throw InvalidInput("sum_rule_check: n must be >= 2");
  if (rho.rows() != idx(n) || rho.cols() != idx(n)) {
    throw InvalidInput("sum_rule_check: rho has the wrong size");
  }
  const OperatorBasis basis = bases::orthonormal_complete(n);
  ComplexMatrix s = ComplexMatrix::Zero(idx(n), idx(n));
  for (const auto& member : basis.members) s -= dissipator(amplitude * member, rho);

  const ComplexMatrix target =
      static_cast<double>(n) * rho - rho.trace() * ComplexMatrix::Identity(idx(n), idx(n));
  SumRuleResult result;
  const double tn = target.squaredNorm();
  if (tn < 1e-28) {
    result.residual = s.norm();
    return result;
  }
  result.proportionality = (frobenius_inner(target, s) / tn).real();
  result.residual = (s - result.proportionality * target).norm();
  return result;
}

SumRuleResult sum_rule_check(std::size_t n, double amplitude, std::uint64_t seed) {
  return sum_rule_check(n, random_density_matrix(n, seed), amplitude);
}

ComplexMatrix random_density_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix g(idx(n), idx(n));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace lbe

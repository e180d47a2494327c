#include "lbe/observables.hpp"

#include <algorithm>
#include <cmath>

namespace lbe {

namespace {

constexpr double kClampWindow = 1e-7;
constexpr double kLimitThreshold = 1e-3;

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& rho) {
  const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

double purity(const ComplexMatrix& rho) {
  if (hermiticity_defect(rho) > 1e-8) throw InvalidState("purity: rho is not Hermitian");
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.squaredNorm();
}

double min_eigenvalue(const ComplexMatrix& rho) { return hermitian_eigenvalues(rho).minCoeff(); }

double entropy(const ComplexMatrix& rho) {
  if (hermiticity_defect(rho) > 1e-8) throw InvalidState("entropy: rho is not Hermitian");
  Eigen::VectorXd lambda = hermitian_eigenvalues(rho);
  if (lambda.minCoeff() < -kClampWindow) {
    throw InvalidState("entropy: eigenvalue " + std::to_string(lambda.minCoeff()) + " below -1e-7");
  }
  const double sum = lambda.sum();
  if (std::abs(sum - 1.0) > kClampWindow) {
    throw InvalidState("entropy: eigenvalues sum to " + std::to_string(sum));
  }
  lambda = lambda.cwiseMax(0.0).cwiseMin(1.0);
  lambda /= lambda.sum();
  double s = 0.0;
  for (double l : lambda) {
    if (l > 0.0) s -= l * std::log(l);
  }
  return s;
}

ObservableRow observable_row(double t, const ComplexMatrix& rho) {
  ObservableRow row;
  row.t = t;
  row.rho11 = rho(0, 0).real();
  row.rho22 = rho.rows() > 1 ? rho(1, 1).real() : 0.0;
  if (rho.rows() > 1) {
    row.re_rho12 = rho(0, 1).real();
    row.im_rho12 = rho(0, 1).imag();
    row.re_rho21 = rho(1, 0).real();
    row.im_rho21 = rho(1, 0).imag();
  }
  row.trace = rho.trace().real();
  row.purity = purity(rho);
  row.entropy = entropy(rho);
  return row;
}

std::vector<ObservableRow> evaluate_rows_serial(const std::vector<TimeSeriesRecord>& records) {
  std::vector<ObservableRow> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(observable_row(r.t, r.rho));
  return rows;
}

std::vector<ObservableRow> evaluate_rows(const std::vector<TimeSeriesRecord>& records) {
  const auto count = static_cast<std::ptrdiff_t>(records.size());
  std::vector<ObservableRow> rows(records.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      rows[static_cast<std::size_t>(i)] =
          observable_row(records[static_cast<std::size_t>(i)].t, records[static_cast<std::size_t>(i)].rho);
    } catch (...) {
#pragma omp critical(lbe_rows_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

AsymptoticsSummary asymptotics_report(const std::vector<TimeSeriesRecord>& traj,
                                      double tail_fraction) {
  if (traj.empty()) throw InvalidInput("asymptotics_report: empty trajectory");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw InvalidInput("asymptotics_report: tail_fraction must lie in (0, 1]");
  }
  const ComplexMatrix& rho0 = traj.front().rho;
  const auto n = static_cast<double>(rho0.rows());
  const double tr0 = rho0.trace().real();
  const double p0 = purity(rho0);

  const double t_first = traj.front().t;
  const double t_last = traj.back().t;
  const double t_tail = t_last - tail_fraction * (t_last - t_first);

  AsymptoticsSummary out;
  double max_purity_drift = 0.0;
  for (const auto& rec : traj) {
    if (rec.t < t_tail) continue;
    ++out.tail_samples;
    const ComplexMatrix& rho = rec.rho;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
      out.max_population_gap = std::max(out.max_population_gap, std::abs(rho(i, i).real() - tr0 / n));
      for (Eigen::Index j = 0; j < rho.cols(); ++j) {
        if (i != j) out.max_coherence = std::max(out.max_coherence, std::abs(rho(i, j)));
      }
    }
    const double p = purity(rho);
    out.purity_gap_fraction = std::max(out.purity_gap_fraction, std::abs(p - p0 / n));
    out.purity_gap_exact = std::max(out.purity_gap_exact, std::abs(p - tr0 * tr0 / n));
    out.entropy_gap = std::max(out.entropy_gap, std::abs(entropy(rho) - std::log(n)));
    max_purity_drift = std::max(max_purity_drift, std::abs(p - p0));
  }
  out.non_decaying = max_purity_drift <= 1e-6;
  out.reached_mixed_limit = out.max_coherence <= kLimitThreshold &&
                            out.max_population_gap <= kLimitThreshold &&
                            out.purity_gap_exact <= kLimitThreshold &&
                            out.entropy_gap <= kLimitThreshold;
  out.purity_law = (out.purity_gap_fraction <= kLimitThreshold ? 1 : 0) |
                   (out.purity_gap_exact <= kLimitThreshold ? 2 : 0);
  out.final_rho = traj.back().rho;
  out.final_entropy = entropy(traj.back().rho);
  return out;
}

}  // namespace lbe

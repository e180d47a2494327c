#pragma once

#include <vector>

#include "lbe/integrators.hpp"

namespace lbe {

struct ObservableRow {
  double t = 0.0;
  double rho11 = 0.0;
  double rho22 = 0.0;
  double re_rho12 = 0.0;
  double im_rho12 = 0.0;
  double re_rho21 = 0.0;
  double im_rho21 = 0.0;
  double trace = 0.0;
  double purity = 0.0;
  double entropy = 0.0;  // nats
};

/// tr(rho^2); rho must be Hermitian to 1e-8 (InvalidState otherwise).
double purity(const ComplexMatrix& rho);

/// -tr(rho ln rho) in nats. Eigenvalues are clamped to [0, 1] and renormalized
/// when their sum is within 1e-7 of one; a more negative eigenvalue or a
/// larger trace defect raises InvalidState.
double entropy(const ComplexMatrix& rho);

/// Smallest eigenvalue of the Hermitian part of rho.
double min_eigenvalue(const ComplexMatrix& rho);

ObservableRow observable_row(double t, const ComplexMatrix& rho);

/// One row per record; the loop over records runs under OpenMP.
std::vector<ObservableRow> evaluate_rows(const std::vector<TimeSeriesRecord>& records);
/// Serial reference for evaluate_rows; results are bit-identical.
std::vector<ObservableRow> evaluate_rows_serial(const std::vector<TimeSeriesRecord>& records);

struct AsymptoticsSummary {
  std::size_t tail_samples = 0;
  double max_coherence = 0.0;      // max |rho_ij|, i != j, over the tail
  double max_population_gap = 0.0; // max |rho_ii - tr(rho0)/n|
  double purity_gap_fraction = 0.0;  // max |P - P(0)/n|
  double purity_gap_exact = 0.0;     // max |P - tr(rho0)^2/n|
  double entropy_gap = 0.0;        // max |S - ln n|
  bool non_decaying = false;       // purity stayed at its initial value over the tail
  bool reached_mixed_limit = false;  // all four gaps of the exact limit <= 1e-3
  /// Which asymptotic purity law the tail matches: 0 none, 1 P(0)/n, 2 tr^2/n, 3 both.
  int purity_law = 0;
  ComplexMatrix final_rho;
  double final_entropy = 0.0;
};

/// Summarizes the trailing `tail_fraction` of a trajectory against the
/// maximally mixed limit.
AsymptoticsSummary asymptotics_report(const std::vector<TimeSeriesRecord>& traj,
                                      double tail_fraction);

}  // namespace lbe

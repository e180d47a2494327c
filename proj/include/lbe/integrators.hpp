#pragma once

// Adaptive explicit Runge-Kutta integration (Dormand-Prince 5(4), PI step
// control, native continuous extension for dense output) and the two brute-force propagators
// built on it: the matrix master equation and the embedded Bloch system.

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "lbe/embedding.hpp"

namespace lbe {

using RealVector = Eigen::VectorXd;
using Derivative = std::function<RealVector(double t, const RealVector& y)>;

struct Rk45Step {
  RealVector y_next;
  RealVector error_estimate;  // fifth- minus fourth-order solution, per component
  RealVector dydt_next;       // f(t + h, y_next), reusable as the next first stage
  RealVector dense_term;      // h * sum d_i k_i, the quartic term of the continuous extension
};

Rk45Step rk45_step(const Derivative& f, const RealVector& y, double t, double h);
/// Variant reusing a known f(t, y).
Rk45Step rk45_step(const Derivative& f, const RealVector& y, const RealVector& dydt, double t,
                   double h);

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  /// Output times; the first entry is the initial time.
  std::vector<double> dense_output_grid;
  /// Consecutive rejections tolerated before giving up.
  int max_rejections = 60;

  void validate() const;
};

struct SolverStats {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t evaluations = 0;
  double max_error_estimate = 0.0;  // largest scaled error norm among accepted steps
};

struct DenseResult {
  std::vector<RealVector> samples;  // one per grid time reached
  SolverStats stats;
  bool stopped = false;  // the observer requested an early stop
  double stop_time = 0.0;
};

/// Called after each accepted step; may rewrite y in place (projection).
using StepProjection = std::function<void(RealVector& y)>;
/// Called after each accepted (and projected) step; return false to stop.
/// On a stop, samples are emitted only up to the start of that step.
using StepObserver = std::function<bool(double t, const RealVector& y)>;

/// Integrates y' = f(t, y) across options.dense_output_grid.
/// Throws IntegrationFailure when the step size collapses, too many
/// consecutive rejections occur, or f returns non-finite values.
DenseResult integrate_dense(const Derivative& f, RealVector y0, const IntegratorOptions& options,
                            const StepProjection& projection = {},
                            const StepObserver& observer = {});

struct TimeSeriesRecord {
  double t = 0.0;
  ComplexMatrix rho;
  CoherenceVector eta;
};

struct Trajectory {
  std::vector<TimeSeriesRecord> records;
  SolverStats stats;
  /// Largest max|rho - rho^+| seen just before symmetrization (master equation only).
  double max_hermiticity_drift = 0.0;
};

/// Direct adaptive integration of the master equation. rho0 must be Hermitian,
/// trace one and positive semidefinite (to 1e-12); otherwise InvalidState.
Trajectory integrate_lindblad(const LindbladModel& model, const ComplexMatrix& rho0,
                              const IntegratorOptions& options);

/// Integrates i d(eta)/dt = L(t) eta + tr(rho) b(t) as a real system of twice the size.
Trajectory integrate_bloch(const BlochGenerator& gen, const CoherenceVector& eta0,
                           const IntegratorOptions& options);

/// Uniform grid of `samples` points on [0, t_end].
std::vector<double> uniform_grid(double t_end, std::size_t samples);

}  // namespace lbe

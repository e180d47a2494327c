#include "lbe/integrators.hpp"

#include <algorithm>
#include <cmath>

namespace lbe {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer, Norsett and Wanner).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

double scaled_norm(const RealVector& v, const RealVector& y0, const RealVector& y1,
                   const IntegratorOptions& o) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double sc = o.abs_tol + o.rel_tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double r = v(i) / sc;
    acc += r * r;
  }
  return v.size() == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(v.size()));
}

bool all_finite(const RealVector& v) { return v.allFinite(); }

// Fourth-order interpolant on [t0, t0 + h] from the step's own stages.
RealVector continuous(double t, double t0, double h, const RealVector& y0, const RealVector& f0,
                      const Rk45Step& step) {
  const double s = (t - t0) / h;
  const double s1 = 1.0 - s;
  const RealVector ydiff = step.y_next - y0;
  const RealVector bspl = h * f0 - ydiff;
  const RealVector r4 = ydiff - h * step.dydt_next - bspl;
  return y0 + s * (ydiff + s1 * (bspl + s * (r4 + s1 * step.dense_term)));
}

double initial_step(const Derivative& f, double t0, const RealVector& y0, const RealVector& f0,
                    double span, const IntegratorOptions& o, SolverStats& stats) {
  const double d0 = scaled_norm(y0, y0, y0, o);
  const double d1 = scaled_norm(f0, y0, y0, o);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  const RealVector y1 = y0 + h0 * f0;
  const RealVector f1 = f(t0 + h0, y1);
  ++stats.evaluations;
  const double d2 = scaled_norm(f1 - f0, y0, y0, o) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
  return std::min({100 * h0, h1, o.max_step, span});
}

// Real packing of a complex matrix: [Re(column-major), Im(column-major)].
RealVector pack(const ComplexMatrix& m) {
  const Eigen::Index n = m.size();
  RealVector v(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    v(k) = m.data()[k].real();
    v(n + k) = m.data()[k].imag();
  }
  return v;
}

ComplexMatrix unpack(const RealVector& v, Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  const Eigen::Index n = rows * cols;
  for (Eigen::Index k = 0; k < n; ++k) m.data()[k] = Complex(v(k), v(n + k));
  return m;
}

}  // namespace

Rk45Step rk45_step(const Derivative& f, const RealVector& y, double t, double h) {
  return rk45_step(f, y, f(t, y), t, h);
}

Rk45Step rk45_step(const Derivative& f, const RealVector& y, const RealVector& k1, double t,
                   double h) {
  if (!(h > 0.0)) throw InvalidInput("rk45_step: step size must be positive");
  const RealVector k2 = f(t + c2 * h, y + h * (a21 * k1));
  const RealVector k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
  const RealVector k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const RealVector k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const RealVector k6 =
      f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  Rk45Step out;
  out.y_next = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  out.dydt_next = f(t + h, out.y_next);
  out.error_estimate =
      h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * out.dydt_next);
  out.dense_term = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * out.dydt_next);
  if (!all_finite(out.y_next) || !all_finite(out.dydt_next)) {
    throw IntegrationFailure("rk45_step: non-finite derivative", t);
  }
  return out;
}

void IntegratorOptions::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw InvalidInput("IntegratorOptions: tolerances must be positive");
  }
  if (!(max_step > 0.0)) throw InvalidInput("IntegratorOptions: max_step must be positive");
  if (dense_output_grid.empty()) throw InvalidInput("IntegratorOptions: empty output grid");
  if (!std::is_sorted(dense_output_grid.begin(), dense_output_grid.end())) {
    throw InvalidInput("IntegratorOptions: output grid must be ascending");
  }
  if (max_rejections < 1) throw InvalidInput("IntegratorOptions: max_rejections must be >= 1");
}

DenseResult integrate_dense(const Derivative& f, RealVector y, const IntegratorOptions& o,
                            const StepProjection& projection, const StepObserver& observer) {
  o.validate();
  const auto& grid = o.dense_output_grid;
  DenseResult out;
  out.samples.reserve(grid.size());
  auto& stats = out.stats;

  double t = grid.front();
  const double t_end = grid.back();
  std::size_t next = 0;
  while (next < grid.size() && grid[next] <= t) {
    out.samples.push_back(y);
    ++next;
  }
  if (next == grid.size()) return out;

  if (!all_finite(y)) throw IntegrationFailure("integrate_dense: non-finite initial state", t);
  RealVector dydt = f(t, y);
  ++stats.evaluations;
  if (!all_finite(dydt)) throw IntegrationFailure("integrate_dense: non-finite derivative", t);

  double h = initial_step(f, t, y, dydt, t_end - t, o, stats);
  double err_prev = 1e-4;
  int rejections_in_row = 0;
  constexpr double kSafety = 0.9, kMinFactor = 0.2, kMaxFactor = 5.0;
  constexpr double kAlpha = 0.7 / 5.0, kBeta = 0.4 / 5.0;

  while (t < t_end) {
    h = std::min({h, o.max_step, t_end - t});
    const bool lands_on_end = (t + h >= t_end);
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      throw IntegrationFailure("integrate_dense: step size underflow", t);
    }

    Rk45Step step;
    try {
      step = rk45_step(f, y, dydt, t, h);
    } catch (const IntegrationFailure&) {
      // A non-finite trial stage is treated like a rejected step.
      ++stats.rejected_steps;
      if (++rejections_in_row > o.max_rejections) throw;
      h *= kMinFactor;
      continue;
    }
    stats.evaluations += 6;
    const double err = scaled_norm(step.error_estimate, y, step.y_next, o);

    if (err > 1.0) {
      ++stats.rejected_steps;
      if (++rejections_in_row > o.max_rejections) {
        throw IntegrationFailure("integrate_dense: tolerance not met after repeated rejections", t);
      }
      h *= std::max(kMinFactor, kSafety * std::pow(err, -1.0 / 5.0));
      continue;
    }

    const double t_new = lands_on_end ? t_end : t + h;
    RealVector y_new = step.y_next;
    RealVector dydt_new = step.dydt_next;
    if (projection) {
      projection(y_new);
      dydt_new = f(t_new, y_new);
      ++stats.evaluations;
    }
    ++stats.accepted_steps;
    stats.max_error_estimate = std::max(stats.max_error_estimate, err);

    if (observer && !observer(t_new, y_new)) {
      out.stopped = true;
      out.stop_time = t;
      return out;
    }

    while (next < grid.size() && grid[next] <= t_new) {
      if (grid[next] == t_new) {
        out.samples.push_back(y_new);
      } else {
        RealVector y_mid = continuous(grid[next], t, h, y, dydt, step);
        if (projection) projection(y_mid);
        out.samples.push_back(std::move(y_mid));
      }
      ++next;
    }

    const double e = std::max(err, 1e-10);
    double factor = kSafety * std::pow(e, -kAlpha) * std::pow(err_prev, kBeta);
    factor = std::clamp(factor, kMinFactor, kMaxFactor);
    if (rejections_in_row > 0) factor = std::min(factor, 1.0);
    err_prev = e;
    rejections_in_row = 0;

    t = t_new;
    y = std::move(y_new);
    dydt = std::move(dydt_new);
    h *= factor;
  }
  return out;
}

std::vector<double> uniform_grid(double t_end, std::size_t samples) {
  if (samples < 2 || !(t_end > 0.0)) {
    throw InvalidInput("uniform_grid: need samples >= 2 and t_end > 0");
  }
  std::vector<double> grid(samples);
  const double denom = static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) grid[i] = t_end * (static_cast<double>(i) / denom);
  grid.back() = t_end;
  return grid;
}

Trajectory integrate_lindblad(const LindbladModel& model, const ComplexMatrix& rho0,
                              const IntegratorOptions& options) {
  model.validate();
  const auto n = static_cast<Eigen::Index>(model.dim);
  if (rho0.rows() != n || rho0.cols() != n) {
    throw InvalidInput("integrate_lindblad: rho0 does not match the model dimension");
  }
  if (hermiticity_defect(rho0) > 1e-12) throw InvalidState("integrate_lindblad: rho0 not Hermitian");
  if (std::abs(rho0.trace() - 1.0) > 1e-12) throw InvalidState("integrate_lindblad: tr(rho0) != 1");
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho0, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12) {
    throw InvalidState("integrate_lindblad: rho0 has a negative eigenvalue");
  }

  const Derivative f = [&](double t, const RealVector& y) {
    return pack(lindblad_rhs(model, unpack(y, n, n), t));
  };
  Trajectory traj;
  const StepProjection symmetrize = [&](RealVector& y) {
    ComplexMatrix rho = unpack(y, n, n);
    traj.max_hermiticity_drift = std::max(traj.max_hermiticity_drift, hermiticity_defect(rho));
    y = pack(0.5 * (rho + rho.adjoint()));
  };

  const DenseResult res = integrate_dense(f, pack(rho0), options, symmetrize);
  traj.stats = res.stats;
  traj.records.reserve(res.samples.size());
  for (std::size_t i = 0; i < res.samples.size(); ++i) {
    ComplexMatrix rho = unpack(res.samples[i], n, n);
    // Interpolated samples are symmetrized as well; endpoints already are.
    rho = 0.5 * (rho + rho.adjoint());
    traj.records.push_back({options.dense_output_grid[i], rho, rho_to_eta(rho)});
  }
  return traj;
}

Trajectory integrate_bloch(const BlochGenerator& gen, const CoherenceVector& eta0,
                           const IntegratorOptions& options) {
  const auto d = static_cast<Eigen::Index>(gen.dim());
  if (eta0.n != gen.n() || eta0.entries.size() != d) {
    throw InvalidInput("integrate_bloch: eta0 does not match the generator dimension");
  }
  const double trace = eta0.trace_of_rho;
  // d(eta)/dt = -i (L eta + tr b)
  const Derivative f = [&](double t, const RealVector& y) {
    const ComplexVector eta = unpack(y, d, 1);
    ComplexVector rhs = gen.matrix_at(t) * eta;
    if (!gen.homogeneous()) rhs += trace * gen.affine_at(t);
    return pack(-kI * rhs);
  };

  const DenseResult res = integrate_dense(f, pack(eta0.entries), options);
  Trajectory traj;
  traj.stats = res.stats;
  traj.records.reserve(res.samples.size());
  for (std::size_t i = 0; i < res.samples.size(); ++i) {
    CoherenceVector eta{gen.n(), unpack(res.samples[i], d, 1), trace};
    ComplexMatrix rho = eta_to_rho(eta);
    traj.records.push_back({options.dense_output_grid[i], std::move(rho), std::move(eta)});
  }
  return traj;
}

}  // namespace lbe

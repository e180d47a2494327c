#include "lbe/wei_norman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lbe {

namespace {

constexpr double kPoleAtSample = 1e12;

void validate_grid(const std::vector<double>& t_grid, const char* what) {
  if (t_grid.empty() || t_grid.front() != 0.0) {
    throw InvalidInput(std::string(what) + ": time grid must start at 0");
  }
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw InvalidInput(std::string(what) + ": time grid must be ascending");
  }
}

IntegratorOptions integrator_options(const PropagateOptions& o, std::vector<double> grid) {
  IntegratorOptions io;
  io.rel_tol = o.rel_tol;
  io.abs_tol = o.abs_tol;
  io.max_step = o.max_step;
  io.dense_output_grid = std::move(grid);
  return io;
}

// Riccati-path state: [Re mu+, Im mu+, Re mu-, Im mu-, Re mu, Im mu].
WeiNormanState unpack_exponents(double t, const RealVector& y) {
  return {t, {y(0), y(1)}, {y(2), y(3)}, {y(4), y(5)}};
}

// Linearized-path state: [u, u', u1, u1'] as (re, im) pairs, then E = int eps.
struct Spinor {
  Complex u, u_dot, u1, u1_dot;
  double drive_integral;
};

Spinor unpack_spinor(const RealVector& y) {
  return {{y(0), y(1)}, {y(2), y(3)}, {y(4), y(5)}, {y(6), y(7)}, y(8)};
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return a - two_pi * std::round(a / two_pi);
}

struct LinearizedRun {
  std::vector<Spinor> samples;
  std::vector<double> unwrapped_phase;  // continuous arg(u) at each sample
  SolverStats stats;
};

LinearizedRun integrate_linearized(const ModelParams& params, const std::vector<double>& t_grid,
                                   const PropagateOptions& options) {
  params.validate();
  if (params.J == 0.0) throw InvalidInput("linearized_riccati: J must be non-zero");
  validate_grid(t_grid, "linearized_riccati");

  const double j2 = params.J * params.J;
  const Derivative f = [&](double t, const RealVector& y) {
    const double eps = params.epsilon(t);
    const Spinor s = unpack_spinor(y);
    const Complex ddu = kI * eps * s.u_dot - j2 * s.u;
    const Complex ddu1 = kI * eps * s.u1_dot - j2 * s.u1;
    RealVector dy(9);
    dy << s.u_dot.real(), s.u_dot.imag(), ddu.real(), ddu.imag(), s.u1_dot.real(),
        s.u1_dot.imag(), ddu1.real(), ddu1.imag(), eps;
    return dy;
  };

  RealVector y0 = RealVector::Zero(9);
  y0(0) = 1.0;         // u(0) = 1
  y0(7) = -params.J;   // u1'(0) = -i J

  // arg(u) is unwrapped at every accepted step so that mu stays on a
  // continuous branch; grid samples are unwrapped against the step before them.
  std::vector<double> step_times{0.0};
  std::vector<double> step_phase{0.0};
  double last_raw = 0.0;
  const StepObserver track = [&](double t, const RealVector& y) {
    const double raw = std::arg(Complex(y(0), y(1)));
    step_phase.push_back(step_phase.back() + wrap_angle(raw - last_raw));
    step_times.push_back(t);
    last_raw = raw;
    return true;
  };

  const DenseResult res = integrate_dense(f, y0, integrator_options(options, t_grid), {}, track);
  LinearizedRun run;
  run.stats = res.stats;
  run.samples.reserve(res.samples.size());
  for (std::size_t i = 0; i < res.samples.size(); ++i) {
    const Spinor s = unpack_spinor(res.samples[i]);
    auto it = std::upper_bound(step_times.begin(), step_times.end(), t_grid[i]);
    const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - step_times.begin() - 1, 0));
    const double ref = step_phase[k];
    run.unwrapped_phase.push_back(ref + wrap_angle(std::arg(s.u) - ref));
    run.samples.push_back(s);
  }
  return run;
}

WeiNormanState exponents_from_spinor(double t, double J, const Spinor& s, double phase) {
  const Complex e_minus = std::exp(-kI * s.drive_integral);
  WeiNormanState st;
  st.t = t;
  st.mu_plus = -s.u_dot / (J * s.u);
  st.mu_minus = kI * s.u * s.u1 * e_minus;
  st.mu = Complex(2.0 * phase - s.drive_integral, -2.0 * std::log(std::abs(s.u)));
  return st;
}

// exp(-i mu+ A+) exp(-i mu- A-) exp(-i mu Az) written through the spin-1/2
// evolution U = [[a, b], [c, d]]; polynomial in U, hence finite at poles of mu+.
Eigen::Matrix3cd product_from_spinor(const Spinor& s, double J) {
  const Complex phase = std::exp(-0.5 * kI * s.drive_integral);
  const Complex a = kI * s.u1_dot * phase / J;
  const Complex b = kI * s.u_dot * phase / J;
  const Complex c = s.u1 * phase;
  const Complex d = s.u * phase;
  const Complex a2 = a * a, b2 = b * b, c2 = c * c, d2 = d * d;
  Eigen::Matrix3cd m;
  m << 0.5 * (a2 - b2 - c2 + d2), 0.5 * (a2 + b2 - c2 - d2), a * b - c * d,
      0.5 * (a2 - b2 + c2 - d2), 0.5 * (a2 + b2 + c2 + d2), a * b + c * d,
      a * c - b * d, a * c + b * d, a * d + b * c;
  return m;
}

void require_two_level(const CoherenceVector& eta0, const char* what) {
  if (eta0.n != 2 || eta0.entries.size() != 3) {
    throw InvalidInput(std::string(what) + ": expected a two-level coherence vector");
  }
}

}  // namespace

Complex riccati_rhs(const ModelParams& params, double t, Complex mu_plus) {
  return kI * params.epsilon(t) * mu_plus + params.J * (1.0 + mu_plus * mu_plus);
}

SubsidiaryRates subsidiary_rhs(const ModelParams& params, double t, const WeiNormanState& state) {
  const Complex mu_dot = 2.0 * kI * params.J * state.mu_plus - params.epsilon(t);
  return {mu_dot, params.J + kI * mu_dot * state.mu_minus};
}

CoherenceVector apply_product(double gamma, const WeiNormanState& state,
                              const CoherenceVector& eta0) {
  require_two_level(eta0, "apply_product");
  const ComplexMatrix product = matrix_exponential(-kI * state.mu_plus * bases::a_plus()) *
                                matrix_exponential(-kI * state.mu_minus * bases::a_minus()) *
                                matrix_exponential(-kI * state.mu * bases::a_z());
  return {2, std::exp(-gamma * state.t) * (product * eta0.entries), eta0.trace_of_rho};
}

ComplexMatrix rho_closed_form(const ModelParams& params, const WeiNormanState& state) {
  const double decay = std::exp(-params.gamma * state.t);
  const Complex p = state.mu_plus * state.mu_minus;
  ComplexMatrix rho(2, 2);
  rho(0, 0) = 0.5 + 0.5 * decay * (1.0 - 2.0 * p);
  rho(1, 1) = 0.5 * (1.0 - decay) + p * decay;
  rho(0, 1) = kI * state.mu_minus * decay;
  rho(1, 0) = kI * state.mu_plus * (p - 1.0) * decay;
  return rho;
}

std::vector<LinearizedSample> linearized_riccati(const ModelParams& params,
                                                 const std::vector<double>& t_grid,
                                                 const PropagateOptions& options) {
  const LinearizedRun run = integrate_linearized(params, t_grid, options);
  std::vector<LinearizedSample> out;
  out.reserve(run.samples.size());
  for (std::size_t i = 0; i < run.samples.size(); ++i) {
    const Spinor& s = run.samples[i];
    if (std::abs(s.u_dot) > kPoleAtSample * std::abs(params.J) * std::abs(s.u)) {
      throw PoleAtSample("linearized_riccati: u vanishes at t = " + std::to_string(t_grid[i]),
                         t_grid[i]);
    }
    out.push_back({t_grid[i], s.u, s.u_dot, -s.u_dot / (params.J * s.u)});
  }
  return out;
}

std::vector<WeiNormanState> linearized_exponents(const ModelParams& params,
                                                 const std::vector<double>& t_grid,
                                                 const PropagateOptions& options,
                                                 SolverStats* stats) {
  const LinearizedRun run = integrate_linearized(params, t_grid, options);
  if (stats) *stats = run.stats;
  std::vector<WeiNormanState> out;
  out.reserve(run.samples.size());
  for (std::size_t i = 0; i < run.samples.size(); ++i) {
    out.push_back(exponents_from_spinor(t_grid[i], params.J, run.samples[i], run.unwrapped_phase[i]));
  }
  return out;
}

WeiNormanTrajectory propagate(const ModelParams& params, const CoherenceVector& eta0,
                              const std::vector<double>& t_grid, const PropagateOptions& options) {
  params.validate();
  require_two_level(eta0, "propagate");
  validate_grid(t_grid, "propagate");
  if (!(options.pole_guard > 0.0)) throw InvalidInput("propagate: pole guard must be positive");

  const Derivative f = [&](double t, const RealVector& y) {
    const WeiNormanState s = unpack_exponents(t, y);
    const Complex dplus = riccati_rhs(params, t, s.mu_plus);
    const SubsidiaryRates r = subsidiary_rhs(params, t, s);
    RealVector dy(6);
    dy << dplus.real(), dplus.imag(), r.mu_minus_dot.real(), r.mu_minus_dot.imag(),
        r.mu_dot.real(), r.mu_dot.imag();
    return dy;
  };
  const StepObserver guard = [&](double, const RealVector& y) {
    return std::hypot(y(0), y(1)) <= options.pole_guard;
  };

  WeiNormanTrajectory traj;
  DenseResult res;
  try {
    res = integrate_dense(f, RealVector::Zero(6), integrator_options(options, t_grid), {}, guard);
  } catch (const IntegrationFailure& e) {
    // Step collapse next to a pole is treated like a guard trip.
    if (!options.linearized_fallback) throw;
    res = DenseResult{};
    res.stopped = true;
    res.stop_time = e.last_good_time();
  }
  traj.stats = res.stats;

  for (std::size_t i = 0; i < res.samples.size(); ++i) {
    const WeiNormanState s = unpack_exponents(t_grid[i], res.samples[i]);
    traj.samples.push_back({s, apply_product(params.gamma, s, eta0)});
  }
  if (!res.stopped) return traj;

  if (!options.linearized_fallback) {
    throw PoleProximity("propagate: |mu+| exceeded the pole guard", res.stop_time);
  }
  if (params.J == 0.0) {
    throw IntegrationFailure("propagate: Riccati integration failed with J = 0", res.stop_time);
  }

  // Remaining grid points come from the pole-free representation, integrated from t = 0.
  const std::size_t first = traj.samples.size();
  std::vector<double> rest{0.0};
  rest.insert(rest.end(), t_grid.begin() + static_cast<std::ptrdiff_t>(first), t_grid.end());
  const LinearizedRun run = integrate_linearized(params, rest, options);
  traj.used_linearized = true;
  traj.switch_time = rest.size() > 1 ? rest[1] : res.stop_time;
  traj.stats.accepted_steps += run.stats.accepted_steps;
  traj.stats.rejected_steps += run.stats.rejected_steps;
  traj.stats.evaluations += run.stats.evaluations;
  traj.stats.max_error_estimate = std::max(traj.stats.max_error_estimate, run.stats.max_error_estimate);

  for (std::size_t i = 1; i < run.samples.size(); ++i) {
    const Spinor& s = run.samples[i];
    const double t = rest[i];
    const WeiNormanState st = exponents_from_spinor(t, params.J, s, run.unwrapped_phase[i]);
    const ComplexVector eta = std::exp(-params.gamma * t) * (product_from_spinor(s, params.J) * eta0.entries);
    traj.samples.push_back({st, {2, eta, eta0.trace_of_rho}});
  }
  return traj;
}

}  // namespace lbe

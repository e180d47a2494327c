#pragma once

// Product-of-exponentials propagation of the coherence vector for the
// generator  L(t) = -i Gamma I - eps(t) Az + 2 J Ax :
//
//   eta(t) = exp(-Gamma t) exp(-i mu+ A+) exp(-i mu- A-) exp(-i mu Az) eta(0)
//
// with the exponents obeying
//
//   mu+' = i eps mu+ + J (1 + mu+^2)        (Riccati)
//   mu'  = 2 i J mu+ - eps
//   mu-' = J + i mu' mu-                    mu+(0) = mu-(0) = mu(0) = 0.
//
// mu+ can diverge in finite time while eta stays bounded. Past a pole guard
// the exponents are rebuilt from two fundamental solutions of the linearized
// equation u'' - i eps u' + J^2 u = 0, which are entire:
//
//   mu+ = -u' / (J u),   mu- = i u u1 exp(-i E),   mu = -2 i log(u) - E,
//
// where u(0) = 1, u'(0) = 0, u1(0) = 0, u1'(0) = -i J and E = int_0^t eps.

#include <complex>
#include <vector>

#include "lbe/embedding.hpp"
#include "lbe/integrators.hpp"
#include "lbe/models.hpp"

namespace lbe {

struct WeiNormanState {
  double t = 0.0;
  Complex mu_plus{0.0, 0.0};
  Complex mu_minus{0.0, 0.0};
  Complex mu{0.0, 0.0};
};

/// i eps(t) mu+ + J (1 + mu+^2)
Complex riccati_rhs(const ModelParams& params, double t, Complex mu_plus);

struct SubsidiaryRates {
  Complex mu_dot;
  Complex mu_minus_dot;
};

/// mu' = 2 i J mu+ - eps(t);  mu-' = J + i mu' mu-.
SubsidiaryRates subsidiary_rhs(const ModelParams& params, double t, const WeiNormanState& state);

struct PropagateOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double pole_guard = 1e6;
  bool linearized_fallback = true;
};

struct WeiNormanSample {
  WeiNormanState state;
  CoherenceVector eta;
};

struct WeiNormanTrajectory {
  std::vector<WeiNormanSample> samples;
  SolverStats stats;
  /// Set when the pole guard tripped; samples from `switch_time` on come from
  /// the linearized representation.
  bool used_linearized = false;
  double switch_time = 0.0;
};

/// Propagates a two-level coherence vector (n = 2) over an ascending grid
/// starting at 0. Throws PoleProximity when |mu+| exceeds the guard and the
/// fallback is disabled.
WeiNormanTrajectory propagate(const ModelParams& params, const CoherenceVector& eta0,
                              const std::vector<double>& t_grid,
                              const PropagateOptions& options = {});

/// Applies exp(-Gamma t) exp(-i mu+ A+) exp(-i mu- A-) exp(-i mu Az) to eta0.
CoherenceVector apply_product(double gamma, const WeiNormanState& state,
                              const CoherenceVector& eta0);

/// Closed-form rho(t) for rho(0) = diag(1, 0).
ComplexMatrix rho_closed_form(const ModelParams& params, const WeiNormanState& state);

struct LinearizedSample {
  double t = 0.0;
  Complex u;
  Complex u_dot;
  Complex mu_plus;
};

/// Integrates u'' - i eps u' + J^2 u = 0, u(0) = 1, u'(0) = 0, and returns
/// mu+ = -u'/(J u). Requires J != 0. Throws PoleAtSample when a grid time
/// lands on a zero of u (|mu+| > 1e12).
std::vector<LinearizedSample> linearized_riccati(const ModelParams& params,
                                                 const std::vector<double>& t_grid,
                                                 const PropagateOptions& options = {});

/// Exponents at each grid time from the linearized representation.
std::vector<WeiNormanState> linearized_exponents(const ModelParams& params,
                                                 const std::vector<double>& t_grid,
                                                 const PropagateOptions& options = {},
                                                 SolverStats* stats = nullptr);

}  // namespace lbe

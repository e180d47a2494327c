#include <doctest.h>

#include <cmath>

#include "lbe/error.hpp"
#include "lbe/models.hpp"
#include "lbe/wei_norman.hpp"
#include "test_support.hpp"

using namespace lbe;
using lbe::test::max_abs;

namespace {

const double kPi = std::acos(-1.0);

CoherenceVector excited() { return {2, Eigen::Vector3cd(0, 0, 1), 1.0}; }

double max_eta_gap(const WeiNormanTrajectory& wn, const Trajectory& ref) {
  double worst = 0.0;
  for (std::size_t i = 0; i < wn.samples.size(); ++i) {
    worst = std::max(worst, max_abs(wn.samples[i].eta.entries - ref.records[i].eta.entries));
  }
  return worst;
}

Trajectory bloch_reference(const ModelParams& p, const CoherenceVector& eta0,
                           const std::vector<double>& grid) {
  IntegratorOptions o;
  o.rel_tol = 1e-12;
  o.abs_tol = 1e-14;
  o.dense_output_grid = grid;
  return integrate_bloch(build_bloch_generator(symmetric_pauli_model(p)), eta0, o);
}

}  // namespace

TEST_CASE("riccati_rhs and subsidiary_rhs: evaluated by hand") {
  const ModelParams p{2.0, 0.0, DriveSignal::constant(3.0)};
  CHECK(riccati_rhs(p, 0.0, 0.0) == Complex(2.0, 0.0));
  // i*3*(1+i) + 2*(1 + 2i) = -3 + 3i + 2 + 4i
  CHECK(std::abs(riccati_rhs(p, 0.0, Complex(1, 1)) - Complex(-1, 7)) < 1e-15);
  WeiNormanState s{0.0, Complex(1, 1), Complex(0.5, 0), 0.0};
  const SubsidiaryRates r = subsidiary_rhs(p, 0.0, s);
  // mu' = 2i*2*(1+i) - 3 = -7 + 4i;  mu-' = 2 + i(-7 + 4i)(0.5) = 0 - 3.5i
  CHECK(std::abs(r.mu_dot - Complex(-7, 4)) < 1e-15);
  CHECK(std::abs(r.mu_minus_dot - Complex(0, -3.5)) < 1e-15);
}

TEST_CASE("undriven exponents follow tan, sin cos and log cos") {
  const double J = 0.5;
  const ModelParams p{J, 0.0, DriveSignal::constant(0.0)};
  const std::vector<double> grid = uniform_grid(1.0, 11);  // Jt <= 0.5
  const WeiNormanTrajectory wn = propagate(p, excited(), grid);
  CHECK_FALSE(wn.used_linearized);
  for (const auto& s : wn.samples) {
    const double x = J * s.state.t;
    CHECK(std::abs(s.state.mu_plus - std::tan(x)) < 1e-10);
    CHECK(std::abs(s.state.mu_minus - std::sin(x) * std::cos(x)) < 1e-10);
    CHECK(std::abs(s.state.mu - Complex(0, -2 * std::log(std::cos(x)))) < 1e-10);
  }
  // For small t, mu- ~ J t.
  CHECK(std::abs(propagate(p, excited(), {0.0, 1e-4}).samples[1].state.mu_minus - J * 1e-4) < 1e-12);
}

TEST_CASE("property: exponents satisfy their ODEs by finite differences") {
  const ModelParams p{3.0, 0.35, DriveSignal::cosine(45.0, 1.0)};
  const double h = 1e-5;
  std::vector<double> grid{0.0};
  std::vector<double> centers;
  for (int k = 0; k < 200; ++k) {
    const double tc = 0.05 + 0.02 * k;
    centers.push_back(tc);
    grid.push_back(tc - h);
    grid.push_back(tc);
    grid.push_back(tc + h);
  }
  PropagateOptions o;
  o.rel_tol = 1e-13;
  o.abs_tol = 1e-15;
  const std::vector<WeiNormanState> ex = linearized_exponents(p, grid, o);
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const WeiNormanState& lo = ex[1 + 3 * k];
    const WeiNormanState& mid = ex[2 + 3 * k];
    const WeiNormanState& hi = ex[3 + 3 * k];
    const double scale = 1.0 + std::abs(mid.mu_plus) * std::abs(mid.mu_plus);
    const Complex dplus = (hi.mu_plus - lo.mu_plus) / (2 * h);
    CHECK(std::abs(dplus - riccati_rhs(p, mid.t, mid.mu_plus)) <= 1e-4 * scale);
    const SubsidiaryRates r = subsidiary_rhs(p, mid.t, mid);
    CHECK(std::abs((hi.mu - lo.mu) / (2 * h) - r.mu_dot) <= 1e-4 * scale);
    CHECK(std::abs((hi.mu_minus - lo.mu_minus) / (2 * h) - r.mu_minus_dot) <= 1e-4 * scale);
  }
}

TEST_CASE("propagate: pure decay without coupling or drive") {
  const ModelParams p{0.0, 0.7, DriveSignal::constant(0.0)};
  const CoherenceVector eta0{2, Eigen::Vector3cd(0.3, Complex(0, -0.2), 0.5), 1.0};
  const WeiNormanTrajectory wn = propagate(p, eta0, uniform_grid(4.0, 9));
  for (const auto& s : wn.samples) {
    CHECK(max_abs(s.eta.entries - std::exp(-0.7 * s.state.t) * eta0.entries) < 1e-13);
  }
}

TEST_CASE("propagate: unitary evolution conserves the coherence norm") {
  const ModelParams p{3.0, 0.0, DriveSignal::cosine(45.0, 1.0)};
  const WeiNormanTrajectory wn = propagate(p, excited(), uniform_grid(5.0, 251));
  for (const auto& s : wn.samples) CHECK(std::abs(s.eta.entries.norm() - 1.0) < 1e-7);
}

TEST_CASE("property: product of exponentials matches direct Bloch integration") {
  // Near a pole the product amplifies exponent errors by about |mu+|^2, so the
  // default path is held to a conditioning-scaled bound; a low guard routes
  // those spans through the pole-free representation instead.
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PropagateOptions low_guard;
  low_guard.pole_guard = 2.0;
  for (int trial = 0; trial < 12; ++trial) {
    const double J = 0.5 + 3.0 * unit(rng);
    const double gamma = 0.5 * unit(rng);
    const double amp = 20.0 * unit(rng);
    const double omega = 0.5 + unit(rng);
    const ModelParams p{J, gamma, DriveSignal::cosine(amp, omega)};
    const CoherenceVector eta0 = rho_to_eta(random_density_matrix(2, 900 + static_cast<std::uint64_t>(trial)));
    const std::vector<double> grid = uniform_grid(4.0, 81);
    const Trajectory ref = bloch_reference(p, eta0, grid);

    const WeiNormanTrajectory wn = propagate(p, eta0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double m = std::abs(wn.samples[i].state.mu_plus);
      CHECK(max_abs(wn.samples[i].eta.entries - ref.records[i].eta.entries) <= 1e-6 * (1.0 + m * m));
    }
    CHECK(max_eta_gap(propagate(p, eta0, grid, low_guard), ref) <= 1e-6);
  }
}

TEST_CASE("closed-form density matrix agrees with the product") {
  const ModelParams p{3.0, 0.35, DriveSignal::cosine(45.0, 1.0)};
  const WeiNormanTrajectory wn = propagate(p, excited(), uniform_grid(3.0, 61));
  for (const auto& s : wn.samples) {
    const ComplexMatrix direct = eta_to_rho(apply_product(p.gamma, s.state, excited()));
    CHECK(max_abs(rho_closed_form(p, s.state) - direct) <= 1e-9);
  }
}

TEST_CASE("linearized representation matches the Riccati path away from poles") {
  const ModelParams p{3.0, 0.35, DriveSignal::cosine(45.0, 1.0)};
  const std::vector<double> grid = uniform_grid(3.0, 31);
  const WeiNormanTrajectory wn = propagate(p, excited(), grid);
  REQUIRE_FALSE(wn.used_linearized);
  const std::vector<WeiNormanState> lin = linearized_exponents(p, grid);
  const std::vector<LinearizedSample> ric = linearized_riccati(p, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const WeiNormanState& a = wn.samples[i].state;
    const double scale = 1.0 + std::abs(a.mu_plus);
    CHECK(std::abs(a.mu_plus - lin[i].mu_plus) <= 1e-8 * scale);
    CHECK(std::abs(a.mu_plus - ric[i].mu_plus) <= 1e-8 * scale);
    CHECK(std::abs(a.mu_minus - lin[i].mu_minus) <= 1e-8 * scale);
    CHECK(std::abs(a.mu - lin[i].mu) <= 1e-8 * scale);
  }
}

TEST_CASE("poles of mu+ are crossed by the linearized fallback") {
  // eps = 0: mu+ = tan(J t) has a pole at J t = pi/2, while rho11 = cos^2(J t).
  const double J = 1.0;
  const ModelParams p{J, 0.0, DriveSignal::constant(0.0)};
  const std::vector<double> grid = uniform_grid(4.0, 41);
  const WeiNormanTrajectory wn = propagate(p, excited(), grid);
  CHECK(wn.used_linearized);
  // First grid time served by the linearized path.
  CHECK(wn.switch_time > kPi / 2);
  CHECK(wn.switch_time <= kPi / 2 + 0.1);
  REQUIRE(wn.samples.size() == grid.size());
  for (const auto& s : wn.samples) {
    CHECK(std::abs(s.eta.entries[2] - std::cos(2 * J * s.state.t)) < 1e-8);
  }

  PropagateOptions strict;
  strict.linearized_fallback = false;
  try {
    propagate(p, excited(), grid, strict);
    FAIL("expected PoleProximity");
  } catch (const PoleProximity& e) {
    CHECK(e.last_good_time() < kPi / 2);
  }

  // A grid point on the pole itself.
  try {
    linearized_riccati(p, {0.0, 1.0, kPi / 2});
    FAIL("expected PoleAtSample");
  } catch (const PoleAtSample& e) {
    CHECK(e.time() == kPi / 2);
  }
}

TEST_CASE("driven pole crossing agrees with direct integration") {
  const ModelParams p{3.0, 0.35, DriveSignal::cosine(45.0, 1.0)};
  PropagateOptions o;
  o.pole_guard = 1.0;  // force the switch on this short run
  const std::vector<double> grid = uniform_grid(6.0, 121);
  const WeiNormanTrajectory wn = propagate(p, excited(), grid, o);
  CHECK(wn.used_linearized);
  CHECK(max_eta_gap(wn, bloch_reference(p, excited(), grid)) <= 1e-6);
}

TEST_CASE("propagate rejects malformed inputs") {
  const ModelParams p{1.0, 0.1, DriveSignal::constant(0.0)};
  CHECK_THROWS_AS(propagate(p, excited(), {0.5, 1.0}), InvalidInput);
  CHECK_THROWS_AS(propagate(p, excited(), {0.0, 1.0, 0.5}), InvalidInput);
  CHECK_THROWS_AS(propagate(p, {3, Eigen::VectorXcd::Zero(8), 1.0}, {0.0, 1.0}), InvalidInput);
  PropagateOptions bad;
  bad.pole_guard = 0.0;
  CHECK_THROWS_AS(propagate(p, excited(), {0.0, 1.0}, bad), InvalidInput);
  CHECK_THROWS_AS(linearized_riccati({0.0, 0.1, DriveSignal::constant(0.0)}, {0.0, 1.0}), InvalidInput);
}

#include <doctest.h>

#include <cmath>
#include <cstring>

#include "lbe/error.hpp"
#include "lbe/observables.hpp"
#include "test_support.hpp"

using namespace lbe;

namespace {

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Two-level populations relaxing from diag(1, 0) toward I/2.
std::vector<TimeSeriesRecord> decaying_records(double gamma, double t_end, std::size_t samples) {
  std::vector<TimeSeriesRecord> out;
  for (double t : uniform_grid(t_end, samples)) {
    const double d = std::exp(-gamma * t);
    const ComplexMatrix rho = mat2(0.5 + 0.5 * d, 0, 0, 0.5 - 0.5 * d);
    out.push_back({t, rho, rho_to_eta(rho)});
  }
  return out;
}

bool rows_identical(const ObservableRow& a, const ObservableRow& b) {
  return std::memcmp(&a, &b, sizeof(ObservableRow)) == 0;
}

}  // namespace

TEST_CASE("purity and entropy: hand-evaluated states") {
  const ComplexMatrix pure = mat2(1, 0, 0, 0);
  CHECK(purity(pure) == 1.0);
  CHECK(entropy(pure) == 0.0);

  const ComplexMatrix mixed = 0.5 * ComplexMatrix::Identity(2, 2);
  CHECK(purity(mixed) == 0.5);
  CHECK(std::abs(entropy(mixed) - std::log(2.0)) < 1e-15);

  const ComplexMatrix partial = mat2(0.9, 0, 0, 0.1);
  CHECK(std::abs(purity(partial) - 0.82) < 1e-15);
  CHECK(entropy(partial) == doctest::Approx(0.325083).epsilon(1e-6));

  // |+> has no diagonal information but is pure.
  const ComplexMatrix plus = mat2(0.5, 0.5, 0.5, 0.5);
  CHECK(std::abs(purity(plus) - 1.0) < 1e-15);
  CHECK(std::abs(entropy(plus)) < 1e-12);

  const ComplexMatrix third = ComplexMatrix::Identity(3, 3) / 3.0;
  CHECK(std::abs(entropy(third) - std::log(3.0)) < 1e-14);
  CHECK(std::abs(purity(third) - 1.0 / 3.0) < 1e-15);
}

TEST_CASE("property: purity and entropy are unitarily invariant and bounded") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 4);
    const ComplexMatrix rho = random_density_matrix(n, 4000 + static_cast<std::uint64_t>(trial));
    const ComplexMatrix u = test::random_unitary(rng, static_cast<Eigen::Index>(n));
    const ComplexMatrix rotated = u * rho * u.adjoint();
    const double p = purity(rho);
    const double s = entropy(rho);
    CHECK(std::abs(purity(rotated) - p) <= 1e-12);
    CHECK(std::abs(entropy(rotated) - s) <= 1e-12);
    CHECK(p <= 1.0 + 1e-12);
    CHECK(p >= 1.0 / static_cast<double>(n) - 1e-12);
    CHECK(s >= 0.0);
    CHECK(s <= std::log(static_cast<double>(n)) + 1e-12);
  }
}

TEST_CASE("purity of a two-level state equals (1 + |eta|^2) / 2") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const ComplexMatrix rho = random_density_matrix(2, seed);
    const double norm = rho_to_eta(rho).entries.norm();
    CHECK(std::abs(purity(rho) - 0.5 * (1.0 + norm * norm)) <= 1e-14);
  }
}

TEST_CASE("entropy clamps tiny negative eigenvalues and rejects larger ones") {
  CHECK(entropy(mat2(1.0 + 5e-8, 0, 0, -5e-8)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(entropy(mat2(1.001, 0, 0, -0.001)), InvalidState);
  CHECK_THROWS_AS(entropy(mat2(0.6, 0, 0, 0.6)), InvalidState);
  CHECK_THROWS_AS(entropy(mat2(0.5, 0.3, 0.1, 0.5)), InvalidState);
  CHECK_THROWS_AS(purity(mat2(0.5, 0.3, 0.1, 0.5)), InvalidState);
  CHECK(min_eigenvalue(mat2(1.001, 0, 0, -0.001)) == doctest::Approx(-0.001));
}

TEST_CASE("observable_row maps matrix entries to named fields") {
  const ComplexMatrix rho = mat2(0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3);
  const ObservableRow row = observable_row(1.5, rho);
  CHECK(row.t == 1.5);
  CHECK(row.rho11 == 0.7);
  CHECK(row.rho22 == 0.3);
  CHECK(row.re_rho12 == 0.1);
  CHECK(row.im_rho12 == 0.2);
  CHECK(row.re_rho21 == 0.1);
  CHECK(row.im_rho21 == -0.2);
  CHECK(row.trace == doctest::Approx(1.0));
  CHECK(row.purity == doctest::Approx(0.49 + 0.09 + 2 * 0.05));
}

TEST_CASE("evaluate_rows matches the serial reference bit for bit") {
  std::vector<TimeSeriesRecord> records;
  for (std::size_t i = 0; i < 500; ++i) {
    const ComplexMatrix rho = random_density_matrix(2 + i % 3, 7000 + i);
    records.push_back({0.01 * static_cast<double>(i), rho, rho_to_eta(rho)});
  }
  const auto parallel = evaluate_rows(records);
  const auto serial = evaluate_rows_serial(records);
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(rows_identical(parallel[i], serial[i]));

  records[123].rho = mat2(0.5, 0.3, 0.1, 0.5);
  CHECK_THROWS_AS(evaluate_rows(records), InvalidState);
  CHECK_THROWS_AS(evaluate_rows_serial(records), InvalidState);
}

TEST_CASE("asymptotics_report: decay to the mixed limit") {
  const auto traj = decaying_records(0.5, 40.0, 401);
  const AsymptoticsSummary s = asymptotics_report(traj, 0.1);
  CHECK(s.tail_samples == 41);
  CHECK(s.reached_mixed_limit);
  CHECK_FALSE(s.non_decaying);
  CHECK(s.max_coherence == 0.0);
  CHECK(s.max_population_gap <= 0.5 * std::exp(-18.0) + 1e-15);
  CHECK(s.purity_law == 3);  // P(0) = 1, so both readings coincide
  CHECK(std::abs(s.final_entropy - std::log(2.0)) < 1e-6);
}

TEST_CASE("asymptotics_report: a frozen pure state is flagged non-decaying") {
  std::vector<TimeSeriesRecord> traj;
  const ComplexMatrix pure = mat2(1, 0, 0, 0);
  for (double t : uniform_grid(10.0, 11)) traj.push_back({t, pure, rho_to_eta(pure)});
  const AsymptoticsSummary s = asymptotics_report(traj, 0.5);
  CHECK(s.non_decaying);
  CHECK_FALSE(s.reached_mixed_limit);
  CHECK(s.purity_law == 0);
  CHECK(s.entropy_gap == doctest::Approx(std::log(2.0)));

  CHECK_THROWS_AS(asymptotics_report({}, 0.5), InvalidInput);
  CHECK_THROWS_AS(asymptotics_report(traj, 0.0), InvalidInput);
  CHECK_THROWS_AS(asymptotics_report(traj, 1.5), InvalidInput);
}

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lbe/embedding.hpp"
#include "lbe/models.hpp"
#include "lbe/observables.hpp"
#include "lbe/scenarios.hpp"
#include "lbe/wei_norman.hpp"

using namespace lbe;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

const std::vector<std::string> kFigures{"fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c"};

void oracle_equivalence() {
  double worst = 0.0, slowest = 0.0;
  for (const char* name : {"fig1a", "fig1b", "fig1c", "fig2b"}) {
    const auto start = std::chrono::steady_clock::now();
    const ComparisonTable t = compare_methods(preset_config(name), {Method::wei_norman, Method::direct_lvnl});
    slowest = std::max(slowest, seconds_since(start));
    worst = std::max(worst, t.overall_max);
  }
  report(1, "oracle equivalence (wei-norman vs master equation)", worst <= 1e-6 && slowest <= 5.0,
         fmt("max |drho| = %.3e (tol 1e-6), slowest preset %.2f s (limit 5 s)", worst, slowest));
}

void internal_consistency() {
  double worst = 0.0;
  const CoherenceVector eta0{2, Eigen::Vector3cd(0, 0, 1), 1.0};
  for (const auto& name : kFigures) {
    const ScenarioConfig c = preset_config(name);
    const ModelParams p = c.params();
    const WeiNormanTrajectory wn = propagate(p, eta0, uniform_grid(c.t_end, c.samples));
    for (const auto& s : wn.samples) {
      worst = std::max(worst, max_abs(rho_closed_form(p, s.state) - eta_to_rho(s.eta)));
    }
  }
  report(2, "closed-form rho vs exponential product", worst <= 1e-9,
         fmt("max |drho| = %.3e (tol 1e-9)", worst));
}

void embedding_correctness() {
  const ModelParams p = preset_config("fig1b").params();
  const BlochGenerator single = build_bloch_generator(single_dephasing_model(p));
  const BlochGenerator sym = build_bloch_generator(symmetric_pauli_model(p));
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double t = 0.4 * k + 0.013 * k * k;
    const double eps = p.epsilon(t);
    ComplexMatrix reference_single(3, 3);
    reference_single << -kI * p.gamma, -eps, 0, -eps, -kI * p.gamma, 2 * p.J, 0, 2 * p.J, 0;
    const ComplexMatrix reference_sym =
        -kI * p.gamma * ComplexMatrix::Identity(3, 3) - eps * bases::a_z() + 2 * p.J * bases::a_x();
    worst = std::max(worst, max_abs(single.matrix_at(t) - reference_single));
    worst = std::max(worst, max_abs(sym.matrix_at(t) - reference_sym));
  }
  report(3, "derived Bloch generators vs closed-form matrices", worst <= 1e-12,
         fmt("max entry error = %.3e over 50 times (tol 1e-12)", worst));
}

void asymptotic_mixed_state() {
  ScenarioConfig c = preset_config("fig1b");
  c.t_end = 50.0 / c.gamma;
  c.samples = 5001;
  const SimulationResult r = simulate(c);
  const ComplexMatrix& rho = r.records.back().rho;
  const double d11 = std::abs(rho(0, 0).real() - 0.5);
  const double d12 = std::abs(rho(0, 1));
  const double dp = std::abs(purity(rho) - 0.5);
  const double ds = std::abs(entropy(rho) - std::log(2.0));
  const bool ok = d11 <= 1e-3 && d12 <= 1e-3 && dp <= 1e-3 && ds <= 1e-3;
  report(4, "asymptotic mixed state at t = 50/Gamma", ok,
         fmt("|rho11-1/2| = %.2e, |rho12| = %.2e, ", d11, d12) +
             fmt("|P-1/2| = %.2e, |S-ln2| = %.2e (tol 1e-3)", dp, ds));
}

void purity_decay_law() {
  double worst = 0.0;
  for (const auto& name : kFigures) {
    for (Method m : {Method::wei_norman, Method::direct_lvnl, Method::direct_bloch}) {
      ScenarioConfig c = preset_config(name);
      c.method = m;
      const SimulationResult r = simulate(c);
      const double p0 = purity(r.records.front().rho);
      for (const auto& rec : r.records) {
        const double law = (p0 - 0.5) * std::exp(-2.0 * c.gamma * rec.t);
        worst = std::max(worst, std::abs((purity(rec.rho) - 0.5) - law));
      }
    }
  }
  report(5, "purity decay law for symmetric operators", worst <= 1e-8,
         fmt("max deviation = %.3e (tol 1e-8)", worst));
}

void conservation() {
  double trace_err = 0.0, min_eig = 1.0;
  std::vector<std::string> names = kFigures;
  names.push_back("three-of-four");
  for (const auto& name : names) {
    for (Method m : {Method::wei_norman, Method::direct_lvnl, Method::direct_bloch}) {
      ScenarioConfig c = preset_config(name);
      if (m == Method::wei_norman && c.model != ModelKind::symmetric_three) continue;
      c.method = m;
      for (const auto& rec : simulate(c).records) {
        trace_err = std::max(trace_err, std::abs(rec.rho.trace() - 1.0));
        min_eig = std::min(min_eig, min_eigenvalue(rec.rho));
      }
    }
  }
  report(6, "trace and positivity on every preset and method", trace_err <= 1e-8 && min_eig >= -1e-7,
         fmt("max |tr-1| = %.3e (tol 1e-8), min eigenvalue = %.3e (floor -1e-7)", trace_err, min_eig));
}

void unitary_limit() {
  double worst = 0.0;
  for (const char* name : {"fig1a", "fig2a"}) {
    for (const auto& row : run_scenario(preset_config(name)).rows) {
      worst = std::max(worst, std::abs(row.purity - 1.0));
    }
  }
  report(7, "unitary limit keeps purity one", worst <= 1e-8, fmt("max |P-1| = %.3e (tol 1e-8)", worst));
}

void inhomogeneous_case() {
  const ScenarioConfig c = preset_config("three-of-four");
  const RunReport r = run_scenario(c);
  const ObservableRow& last = r.rows.back();
  const double d11 = std::abs(last.rho11 - 1.0);
  report(8, "three-of-four operators drive I/2 to (1,0)", d11 <= 1e-3 && last.entropy <= 2e-3,
         fmt("t = %.1f: |rho11-1| = %.2e (tol 1e-3), S = %.2e (tol 2e-3)", last.t, d11, last.entropy));
}

void sum_rule() {
  double worst = 0.0, c_lo = 1e300, c_hi = -1e300;
  for (std::size_t n : {2u, 3u, 4u}) {
    const SumRuleResult r = sum_rule_check(n);
    worst = std::max(worst, r.residual);
    c_lo = std::min(c_lo, r.proportionality);
    c_hi = std::max(c_hi, r.proportionality);
  }
  report(9, "sum rule over a complete basis", worst <= 1e-10,
         fmt("max residual = %.3e (tol 1e-10), proportionality in [%.15g, %.15g]", worst, c_lo, c_hi));
}

void lie_closure_lists() {
  const std::vector<std::vector<std::size_t>> subsets{{1, 2, 3},    {1, 5, 6},       {1, 7, 8},
                                                      {1, 2, 5, 7}, {1, 3, 6, 8},    {1, 2, 4, 5, 7},
                                                      {1, 3, 4, 6, 8}};
  int closed = 0;
  for (const auto& s : subsets) {
    const ClosureReport r = closure_report("su3-octet", s);
    if (r.closed && r.closure_size == s.size()) ++closed;
  }
  const ClosureReport full = closure_report("su3-octet", {1, 2, 3, 4, 5, 6, 7, 8});
  const bool ok = closed == static_cast<int>(subsets.size()) && full.closure_size == 8;
  report(10, "listed octet sub-algebras close", ok,
         fmt("%g of 7 subsets closed, full octet closure size %g (expected 8)", closed,
             static_cast<double>(full.closure_size)));
}

void entropy_monotone() {
  const RunReport r = run_scenario(preset_config("fig2c"));
  double worst_drop = 0.0;
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    worst_drop = std::max(worst_drop, r.rows[i - 1].entropy - r.rows[i].entropy);
  }
  report(11, "entropy increases monotonically on fig2c", worst_drop <= 1e-9,
         fmt("largest step decrease = %.3e (tol 1e-9), S(end) = %.6f", worst_drop, r.rows.back().entropy));
}

void determinism() {
  bool identical = true;
  for (const char* name : {"fig1b", "fig2c"}) {
    std::string first;
    for (int rep = 0; rep < 3; ++rep) {
      std::ostringstream out;
      write_csv(out, run_scenario(preset_config(name)).rows);
      if (rep == 0) first = out.str();
      else identical = identical && out.str() == first;
    }
  }
  report(12, "repeated preset runs give byte-identical CSV", identical,
         identical ? "3 runs each of fig1b and fig2c identical" : "outputs differ");
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{
      oracle_equivalence, internal_consistency, embedding_correctness, asymptotic_mixed_state,
      purity_decay_law,   conservation,         unitary_limit,         inhomogeneous_case,
      sum_rule,           lie_closure_lists,    entropy_monotone,      determinism};
  int id = 1;
  for (const auto& run : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      report(id, "criterion raised", false, e.what());
    }
    ++id;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - g_failures, criteria.size());
  return g_failures == 0 ? 0 : 1;
}

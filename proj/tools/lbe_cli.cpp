// lbe: command-line front end for the Lindblad/Bloch propagators.
//
//   lbe simulate --config run.json --out run.csv
//   lbe preset fig1b --out fig1b.csv
//   lbe compare --config run.json --methods wei-norman,direct-lvnl --out diff.csv
//   lbe closure --basis su3-octet --indices 1,2,3
//   lbe sumrule --n 2
//   lbe sweep --out-dir results a.json b.json ...
//
// Exit codes: 0 success, 2 usage or configuration error, 3 integration failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lbe/embedding.hpp"
#include "lbe/error.hpp"
#include "lbe/scenarios.hpp"

namespace {

constexpr int kUsage = 2;

// "-" writes to stdout. Binary mode keeps '\n' line endings everywhere.
template <typename Writer>
void emit(const std::string& path, Writer&& write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw lbe::ConfigError("cannot open output file '" + path + "'");
  write(out);
  if (!out) throw lbe::ConfigError("failed writing '" + path + "'");
}

void emit_provenance(const std::string& path, const lbe::Provenance& p) {
  if (path.empty()) return;
  emit(path, [&](std::ostream& os) { os << lbe::provenance_json(p) << '\n'; });
}

void note_linearized(const lbe::Provenance& p) {
  if (p.used_linearized) {
    std::cerr << "note: mu+ crossed the pole guard; samples from t = " << lbe::format_double(p.switch_time)
              << " use the linearized representation\n";
  }
}

int run_report(const lbe::ScenarioConfig& config, const std::string& out, const std::string& provenance) {
  const lbe::RunReport report = lbe::run_scenario(config);
  emit(out, [&](std::ostream& os) { lbe::write_csv(os, report.rows); });
  emit_provenance(provenance, report.provenance);
  note_linearized(report.provenance);
  return 0;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<std::size_t> parse_indices(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& part : split_list(s)) {
    if (part.empty() || !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw lbe::ConfigError("indices must be comma-separated positive integers, got '" + s + "'");
    }
    out.push_back(std::stoul(part));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven, damped two-level dynamics via Liouville-Bloch embedding"};
  app.require_subcommand(1);

  std::string config_path, out_path, provenance_path, methods_arg, basis, indices_arg, out_dir, preset_name;
  std::optional<double> t_end_override;
  std::optional<std::size_t> samples_override;
  std::optional<std::string> method_override;
  std::size_t sumrule_n = 2;
  double sumrule_amplitude = 1.0;
  std::vector<std::string> sweep_configs;

  auto* simulate = app.add_subcommand("simulate", "Run one scenario from a JSON config");
  simulate->add_option("--config", config_path, "Scenario config (JSON)")->required();
  simulate->add_option("--out", out_path, "Output CSV path ('-' for stdout)")->required();
  simulate->add_option("--provenance", provenance_path, "Write config echo and solver statistics (JSON)");

  auto* preset = app.add_subcommand("preset", "Run a figure preset");
  preset->add_option("name", preset_name, "fig1a, fig1b, fig1c, fig2a, fig2b, fig2c or three-of-four")
      ->required();
  preset->add_option("--out", out_path, "Output CSV path ('-' for stdout)")->required();
  preset->add_option("--t-end", t_end_override, "Override the end time");
  preset->add_option("--samples", samples_override, "Override the sample count");
  preset->add_option("--method", method_override, "wei-norman, direct-lvnl or direct-bloch");
  preset->add_option("--provenance", provenance_path, "Write config echo and solver statistics (JSON)");

  auto* compare = app.add_subcommand("compare", "Per-time discrepancy between propagation methods");
  compare->add_option("--config", config_path, "Scenario config (JSON)")->required();
  compare->add_option("--methods", methods_arg, "Comma-separated methods, at least two")->required();
  compare->add_option("--out", out_path, "Output CSV path ('-' for stdout)")->required();

  auto* closure = app.add_subcommand("closure", "Lie closure of a subset of a fixed basis");
  closure->add_option("--basis", basis, "su3-octet, angular-momentum or pauli")->required();
  closure->add_option("--indices", indices_arg, "1-based member indices, e.g. 1,2,3")->required();

  auto* sumrule = app.add_subcommand("sumrule", "Dissipator sum over a complete operator basis");
  sumrule->add_option("--n", sumrule_n, "Hilbert-space dimension")->required()->check(CLI::Range(2, 16));
  sumrule->add_option("--amplitude", sumrule_amplitude, "Common operator amplitude");

  auto* sweep = app.add_subcommand("sweep", "Run several configs concurrently");
  sweep->add_option("--out-dir", out_dir, "Directory for <config-stem>.csv files")->required();
  sweep->add_option("configs", sweep_configs, "Scenario configs (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*simulate) return run_report(lbe::load_config(config_path), out_path, provenance_path);

    if (*preset) {
      lbe::ScenarioConfig c = lbe::preset_config(preset_name);
      if (t_end_override) c.t_end = *t_end_override;
      if (samples_override) c.samples = *samples_override;
      if (method_override) c.method = lbe::parse_method(*method_override);
      c.validate();
      return run_report(c, out_path, provenance_path);
    }

    if (*compare) {
      std::vector<lbe::Method> methods;
      for (const auto& m : split_list(methods_arg)) methods.push_back(lbe::parse_method(m));
      const lbe::ComparisonTable table = lbe::compare_methods(lbe::load_config(config_path), methods);
      emit(out_path, [&](std::ostream& os) { lbe::write_comparison_csv(os, table); });
      std::ostream& info = out_path == "-" ? std::cerr : std::cout;
      for (std::size_t i = 0; i < table.pair_labels.size(); ++i) {
        info << table.pair_labels[i] << " max " << lbe::format_double(table.pair_max[i]) << '\n';
      }
      info << "overall max " << lbe::format_double(table.overall_max) << '\n';
      return 0;
    }

    if (*closure) {
      std::cout << lbe::format_closure_report(lbe::closure_report(basis, parse_indices(indices_arg)));
      return 0;
    }

    if (*sumrule) {
      const lbe::SumRuleResult r = lbe::sum_rule_check(sumrule_n, sumrule_amplitude);
      std::cout << "n: " << sumrule_n << '\n'
                << "proportionality: " << lbe::format_double(r.proportionality) << '\n'
                << "residual: " << lbe::format_double(r.residual) << '\n';
      return 0;
    }

    if (*sweep) {
      std::vector<lbe::ScenarioConfig> configs;
      configs.reserve(sweep_configs.size());
      for (const auto& path : sweep_configs) configs.push_back(lbe::load_config(path));
      std::filesystem::create_directories(out_dir);
      const auto entries = lbe::run_sweep(configs);
      int status = 0;
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (!e.report) {
          std::cerr << sweep_configs[i] << ": error: " << e.error << '\n';
          status = std::max(status, e.exit_code);
          continue;
        }
        const auto target = std::filesystem::path(out_dir) /
                            (std::filesystem::path(sweep_configs[i]).stem().string() + ".csv");
        emit(target.string(), [&](std::ostream& os) { lbe::write_csv(os, e.report->rows); });
        std::cout << target.string() << '\n';
      }
      return status;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lbe::exit_code_for(std::current_exception());
  }
  return kUsage;
}

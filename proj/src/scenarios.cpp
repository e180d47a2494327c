#include "lbe/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lbe {

using ordered_json = nlohmann::ordered_json;

namespace {

template <typename Enum, std::size_t N>
Enum parse_named(const std::string& s, const std::pair<const char*, Enum> (&table)[N],
                 const char* what) {
  for (const auto& [name, value] : table) {
    if (s == name) return value;
  }
  std::string allowed;
  for (const auto& entry : table) allowed += std::string(allowed.empty() ? "" : ", ") + entry.first;
  throw ConfigError(std::string("unknown ") + what + " '" + s + "' (expected one of: " + allowed + ")");
}

template <typename Enum, std::size_t N>
std::string name_of(Enum e, const std::pair<const char*, Enum> (&table)[N]) {
  for (const auto& [name, value] : table) {
    if (value == e) return name;
  }
  return "?";
}

const std::pair<const char*, ModelKind> kModels[] = {{"single-z", ModelKind::single_z},
                                                     {"symmetric-three", ModelKind::symmetric_three},
                                                     {"three-of-four", ModelKind::three_of_four},
                                                     {"custom", ModelKind::custom}};
const std::pair<const char*, Method> kMethods[] = {{"wei-norman", Method::wei_norman},
                                                   {"direct-lvnl", Method::direct_lvnl},
                                                   {"direct-bloch", Method::direct_bloch}};
const std::pair<const char*, DriveKind> kDrives[] = {{"constant", DriveKind::constant},
                                                     {"cosine", DriveKind::cosine}};
const std::pair<const char*, InitialState> kInitials[] = {{"pure-1", InitialState::pure_1},
                                                          {"pure-2", InitialState::pure_2},
                                                          {"mixed", InitialState::mixed}};

double number_at(const ordered_json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("config: missing key '" + path + "'");
  if (!it->is_number()) throw ConfigError("config: '" + path + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError("config: '" + path + "' must be finite");
  return v;
}

std::string string_at(const ordered_json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("config: missing key '" + path + "'");
  if (!it->is_string()) throw ConfigError("config: '" + path + "' must be a string");
  return it->get<std::string>();
}

void reject_unknown(const ordered_json& obj, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError("config: unknown key '" + prefix + key + "'");
  }
}

double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

int exit_code_for(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError&) {
    return 2;
  } catch (const InvalidInput&) {
    return 2;
  } catch (const IntegrationFailure&) {
    return 3;
  } catch (const std::exception&) {
    return 3;
  }
}

namespace {

SweepEntry run_entry(const ScenarioConfig& config) {
  SweepEntry entry;
  try {
    entry.report = run_scenario(config);
  } catch (const std::exception& e) {
    entry.error = e.what();
    entry.exit_code = exit_code_for(std::current_exception());
  }
  return entry;
}

}  // namespace

std::string to_string(ModelKind m) { return name_of(m, kModels); }
std::string to_string(Method m) { return name_of(m, kMethods); }
std::string to_string(DriveKind d) { return name_of(d, kDrives); }
std::string to_string(InitialState s) { return name_of(s, kInitials); }
ModelKind parse_model(const std::string& s) { return parse_named(s, kModels, "model"); }
Method parse_method(const std::string& s) { return parse_named(s, kMethods, "method"); }
DriveKind parse_drive_kind(const std::string& s) { return parse_named(s, kDrives, "drive kind"); }
InitialState parse_initial(const std::string& s) { return parse_named(s, kInitials, "initial state"); }

void ScenarioConfig::validate() const {
  for (double v : {J, gamma, A, omega, t_end}) {
    if (!std::isfinite(v)) throw ConfigError("config: parameters must be finite");
  }
  if (samples < 2) throw ConfigError("config: samples must be >= 2");
  if (!(t_end > 0.0)) throw ConfigError("config: t_end must be > 0");
  if (gamma < 0.0) throw ConfigError("config: Gamma must be >= 0");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("config: tolerances must be positive");
  if (method == Method::wei_norman && model != ModelKind::symmetric_three) {
    throw ConfigError("config: method wei-norman requires model symmetric-three");
  }
  if (model == ModelKind::custom && !custom_model) {
    throw ConfigError("config: model custom needs an explicit LindbladModel (library API only)");
  }
}

DriveSignal ScenarioConfig::drive() const {
  return drive_kind == DriveKind::constant ? DriveSignal::constant(A) : DriveSignal::cosine(A, omega);
}

ModelParams ScenarioConfig::params() const { return {J, gamma, drive()}; }

LindbladModel ScenarioConfig::lindblad_model() const {
  switch (model) {
    case ModelKind::single_z:
      return single_dephasing_model(params());
    case ModelKind::symmetric_three:
      return symmetric_pauli_model(params());
    case ModelKind::three_of_four:
      return three_of_four_model(params());
    case ModelKind::custom:
      if (!custom_model) throw ConfigError("config: custom model missing");
      return *custom_model;
  }
  throw ConfigError("config: unhandled model");
}

ComplexMatrix ScenarioConfig::initial_rho() const {
  const std::size_t n = model == ModelKind::custom && custom_model ? custom_model->dim : 2;
  const auto nn = static_cast<Eigen::Index>(n);
  switch (initial) {
    case InitialState::pure_1:
      return bases::matrix_unit(n, 0, 0);
    case InitialState::pure_2:
      return bases::matrix_unit(n, 1, 1);
    case InitialState::mixed:
      return ComplexMatrix::Identity(nn, nn) / static_cast<double>(n);
  }
  throw ConfigError("config: unhandled initial state");
}

ScenarioConfig parse_config(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(doc, {"model", "J", "Gamma", "drive", "t_end", "samples", "method", "initial"}, "");

  ScenarioConfig c;
  c.model = parse_model(string_at(doc, "model", "model"));
  if (c.model == ModelKind::custom) {
    throw ConfigError("config: model custom cannot be described in a config file");
  }
  c.method = parse_method(string_at(doc, "method", "method"));
  c.J = number_at(doc, "J", "J");
  c.gamma = number_at(doc, "Gamma", "Gamma");
  c.t_end = number_at(doc, "t_end", "t_end");

  const auto samples = doc.find("samples");
  if (samples == doc.end()) throw ConfigError("config: missing key 'samples'");
  if (!samples->is_number_integer() || samples->get<long long>() < 2) {
    throw ConfigError("config: 'samples' must be an integer >= 2");
  }
  c.samples = samples->get<std::size_t>();

  const auto drive = doc.find("drive");
  if (drive == doc.end() || !drive->is_object()) {
    throw ConfigError("config: 'drive' must be an object with kind, A, omega");
  }
  reject_unknown(*drive, {"kind", "A", "omega"}, "drive.");
  c.drive_kind = parse_drive_kind(string_at(*drive, "kind", "drive.kind"));
  c.A = number_at(*drive, "A", "drive.A");
  if (c.drive_kind == DriveKind::cosine) {
    c.omega = number_at(*drive, "omega", "drive.omega");
  } else if (drive->contains("omega")) {
    c.omega = number_at(*drive, "omega", "drive.omega");
  }

  if (doc.contains("initial")) c.initial = parse_initial(string_at(doc, "initial", "initial"));
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ScenarioConfig& c) {
  ordered_json doc;
  doc["model"] = to_string(c.model);
  doc["J"] = c.J;
  doc["Gamma"] = c.gamma;
  doc["drive"] = {{"kind", to_string(c.drive_kind)}, {"A", c.A}, {"omega", c.omega}};
  doc["t_end"] = c.t_end;
  doc["samples"] = c.samples;
  doc["method"] = to_string(c.method);
  doc["initial"] = to_string(c.initial);
  return doc.dump(2);
}

std::vector<std::string> preset_names() {
  return {"fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c", "three-of-four"};
}

ScenarioConfig preset_config(const std::string& name) {
  // Driven symmetric model in units of the drive frequency: J/w = 3, A/w = 45.
  ScenarioConfig c;
  c.model = ModelKind::symmetric_three;
  c.J = 3.0;
  c.drive_kind = DriveKind::cosine;
  c.A = 45.0;
  c.omega = 1.0;
  c.initial = InitialState::pure_1;
  c.t_end = 20.0;
  c.samples = 2001;
  c.method = Method::wei_norman;

  if (name == "fig1a" || name == "fig2a") {
    c.gamma = 0.0;
  } else if (name == "fig1b" || name == "fig2b") {
    c.gamma = 0.35;
  } else if (name == "fig1c") {
    c.gamma = 5.0;
  } else if (name == "fig2c") {
    c.gamma = 0.29;
  } else if (name == "three-of-four") {
    c.model = ModelKind::three_of_four;
    c.J = 0.0;
    c.gamma = 0.35;
    c.initial = InitialState::mixed;
    c.t_end = 50.0 / c.gamma;
    c.method = Method::direct_bloch;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

SimulationResult simulate(const ScenarioConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> grid = uniform_grid(config.t_end, config.samples);
  const ComplexMatrix rho0 = config.initial_rho();

  SimulationResult out;
  auto& prov = out.provenance;
  prov.config_json = config_to_json(config);
  prov.method = to_string(config.method);

  IntegratorOptions io;
  io.rel_tol = config.rel_tol;
  io.abs_tol = config.abs_tol;
  io.dense_output_grid = grid;

  switch (config.method) {
    case Method::wei_norman: {
      PropagateOptions po;
      po.rel_tol = config.rel_tol;
      po.abs_tol = config.abs_tol;
      const WeiNormanTrajectory wn = propagate(config.params(), rho_to_eta(rho0), grid, po);
      prov.stats = wn.stats;
      prov.used_linearized = wn.used_linearized;
      prov.switch_time = wn.switch_time;
      out.records.reserve(wn.samples.size());
      for (const auto& s : wn.samples) {
        ComplexMatrix rho = eta_to_rho(s.eta);
        out.records.push_back({s.state.t, std::move(rho), s.eta});
      }
      break;
    }
    case Method::direct_lvnl: {
      Trajectory t = integrate_lindblad(config.lindblad_model(), rho0, io);
      prov.stats = t.stats;
      out.records = std::move(t.records);
      break;
    }
    case Method::direct_bloch: {
      const BlochGenerator gen = build_bloch_generator(config.lindblad_model());
      Trajectory t = integrate_bloch(gen, rho_to_eta(rho0), io);
      prov.stats = t.stats;
      out.records = std::move(t.records);
      break;
    }
  }
  prov.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RunReport run_scenario(const ScenarioConfig& config) {
  SimulationResult sim = simulate(config);
  return {evaluate_rows(sim.records), std::move(sim.provenance)};
}

ComparisonTable compare_methods(const ScenarioConfig& config, const std::vector<Method>& methods) {
  if (methods.size() < 2) throw ConfigError("compare: need at least two methods");
  std::vector<SimulationResult> runs;
  for (Method m : methods) {
    ScenarioConfig c = config;
    c.method = m;
    runs.push_back(simulate(c));
  }

  ComparisonTable table;
  for (std::size_t a = 0; a < methods.size(); ++a) {
    for (std::size_t b = a + 1; b < methods.size(); ++b) {
      table.pair_labels.push_back(to_string(methods[a]) + "_vs_" + to_string(methods[b]));
    }
  }
  table.pair_max.assign(table.pair_labels.size(), 0.0);
  const std::size_t count = runs.front().records.size();
  for (std::size_t i = 0; i < count; ++i) {
    table.times.push_back(runs.front().records[i].t);
    std::vector<double> row;
    for (std::size_t a = 0; a < runs.size(); ++a) {
      for (std::size_t b = a + 1; b < runs.size(); ++b) {
        const double d = max_abs_difference(runs[a].records[i].rho, runs[b].records[i].rho);
        table.pair_max[row.size()] = std::max(table.pair_max[row.size()], d);
        row.push_back(d);
      }
    }
    table.discrepancy.push_back(std::move(row));
  }
  for (double m : table.pair_max) table.overall_max = std::max(table.overall_max, m);
  return table;
}

ClosureReport closure_report(const std::string& basis_name, const std::vector<std::size_t>& indices) {
  OperatorBasis basis;
  if (basis_name == "su3-octet") {
    basis = bases::su3_octet();
  } else if (basis_name == "angular-momentum") {
    basis = bases::angular_momentum();
  } else if (basis_name == "pauli") {
    basis = bases::pauli();
  } else {
    throw ConfigError("closure: unknown basis '" + basis_name +
                      "' (expected su3-octet, angular-momentum or pauli)");
  }
  if (indices.empty()) throw ConfigError("closure: no indices given");

  OperatorBasis seed{basis_name, {}};
  std::set<std::size_t> seen;
  for (std::size_t i : indices) {
    if (i < 1 || i > basis.size()) {
      throw ConfigError("closure: index " + std::to_string(i) + " outside 1.." +
                        std::to_string(basis.size()));
    }
    if (!seen.insert(i).second) throw ConfigError("closure: duplicate index " + std::to_string(i));
    seed.members.push_back(basis.members[i - 1]);
  }

  const auto n = static_cast<std::size_t>(basis.dim());
  const ClosureResult closure = lie_closure(seed, n * n);

  ClosureReport report;
  report.basis = basis_name;
  report.indices = indices;
  report.closed = closure.is_closed_seed;
  report.seed_size = seed.size();
  report.closure_size = closure.closed.size();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (span_coefficients(basis.members[k], closure.closed).residual <= kSpanResidualThreshold) {
      report.spanned_members.push_back(k + 1);
    }
  }
  return report;
}

std::string format_closure_report(const ClosureReport& r) {
  auto join = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  std::ostringstream os;
  os << "basis: " << r.basis << "\n"
     << "subset: (" << join(r.indices) << ")\n"
     << "closed: " << (r.closed ? "yes" : "no") << "\n"
     << "closure size: " << r.closure_size << "\n"
     << "basis members in closure span: (" << join(r.spanned_members) << ")\n";
  return os.str();
}

std::vector<SweepEntry> run_sweep_serial(const std::vector<ScenarioConfig>& configs) {
  std::vector<SweepEntry> out;
  out.reserve(configs.size());
  for (const auto& c : configs) out.push_back(run_entry(c));
  return out;
}

std::vector<SweepEntry> run_sweep(const std::vector<ScenarioConfig>& configs) {
  std::vector<SweepEntry> out(configs.size());
  const auto count = static_cast<std::ptrdiff_t>(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = run_entry(configs[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace lbe

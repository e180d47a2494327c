#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "lbe/scenarios.hpp"

namespace lbe {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<ObservableRow>& rows) {
  out << "t,rho11,rho22,re_rho12,im_rho12,re_rho21,im_rho21,trace,purity,entropy\n";
  for (const auto& r : rows) {
    const double fields[] = {r.t,        r.rho11,    r.rho22, r.re_rho12, r.im_rho12,
                             r.re_rho21, r.im_rho21, r.trace, r.purity,   r.entropy};
    bool first = true;
    for (double f : fields) {
      if (!first) out << ',';
      out << format_double(f);
      first = false;
    }
    out << '\n';
  }
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& table) {
  out << 't';
  for (const auto& label : table.pair_labels) out << ',' << label;
  out << '\n';
  for (std::size_t i = 0; i < table.times.size(); ++i) {
    out << format_double(table.times[i]);
    for (double d : table.discrepancy[i]) out << ',' << format_double(d);
    out << '\n';
  }
}

std::string provenance_json(const Provenance& p) {
  nlohmann::ordered_json doc;
  doc["config"] = nlohmann::ordered_json::parse(p.config_json);
  doc["method"] = p.method;
  doc["accepted_steps"] = p.stats.accepted_steps;
  doc["rejected_steps"] = p.stats.rejected_steps;
  doc["evaluations"] = p.stats.evaluations;
  doc["max_error_estimate"] = p.stats.max_error_estimate;
  doc["used_linearized"] = p.used_linearized;
  if (p.used_linearized) doc["switch_time"] = p.switch_time;
  doc["seconds"] = p.seconds;
  return doc.dump(2);
}

}  // namespace lbe

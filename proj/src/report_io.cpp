#include "eon/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "eon/errors.hpp"

namespace eon {

std::string format_number(double v) {
  char buf[32];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_configs_csv(std::ostream& os, const ProblemInstance& inst, const std::vector<TransponderConfig>& configs) {
  const auto& k = inst.constants;
  os << "request_id,c,b,r,p_mW,m,omega_GHz,osnr_dB,threshold_dB,power_W\n";
  for (std::size_t q = 0; q < configs.size(); ++q) {
    const auto& c = configs[q];
    double psi = 0.0;
    try {
      psi = osnr(q, configs, inst.routing.span_count, inst.routing.shared_spans, k);
    } catch (const std::domain_error&) {
    }
    os << inst.requests[q].id << ',' << format_number(c.c) << ',' << c.b << ',' << format_number(c.r) << ','
       << format_number(c.p * 1e3) << ',' << c.m << ',' << format_number(c.omega * 1e-9) << ','
       << format_number(to_db(psi)) << ',' << format_number(to_db(osnr_threshold(c.c, c.r, k))) << ','
       << format_number(transponder_power(c, k)) << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_field(const std::string& text, const std::string& where) {
  T v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw InputError(where, "malformed value '" + text + "'");
  return v;
}

}  // namespace

std::vector<TransponderConfig> read_configs_csv(std::istream& is, const ProblemInstance& inst) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("configs", "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  std::map<std::string, std::size_t> column;
  for (std::size_t j = 0; j < header.size(); ++j) column[header[j]] = j;
  for (const char* name : {"request_id", "c", "b", "r", "p_mW", "m", "omega_GHz"})
    if (!column.count(name)) throw InputError("configs", std::string("missing column ") + name);

  std::map<std::int64_t, std::size_t> index;
  for (std::size_t q = 0; q < inst.requests.size(); ++q) index[inst.requests[q].id] = q;

  std::vector<TransponderConfig> out(inst.size());
  std::vector<bool> seen(inst.size(), false);
  for (int row = 2; std::getline(is, line); ++row) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    const std::string where = "configs line " + std::to_string(row);
    if (f.size() != header.size()) throw InputError(where, "expected " + std::to_string(header.size()) + " fields");
    const auto id = parse_field<std::int64_t>(f[column["request_id"]], where);
    auto it = index.find(id);
    if (it == index.end()) throw InputError(where, "unknown request " + std::to_string(id));
    if (seen[it->second]) throw InputError(where, "duplicate request " + std::to_string(id));
    seen[it->second] = true;
    auto& c = out[it->second];
    c.c = parse_field<double>(f[column["c"]], where);
    c.b = parse_field<int>(f[column["b"]], where);
    c.r = parse_field<double>(f[column["r"]], where);
    c.p = parse_field<double>(f[column["p_mW"]], where) * 1e-3;
    c.m = parse_field<int>(f[column["m"]], where);
    c.omega = parse_field<double>(f[column["omega_GHz"]], where) * 1e9;
  }
  for (std::size_t q = 0; q < seen.size(); ++q)
    if (!seen[q]) throw InputError("configs", "no row for request " + std::to_string(inst.requests[q].id));
  return out;
}

nlohmann::json report_to_json(const SolveReport& report, const ProblemInstance& inst) {
  using nlohmann::json;
  json configs = json::array();
  for (std::size_t q = 0; q < report.configs.size(); ++q) {
    const auto& c = report.configs[q];
    configs.push_back({{"request", inst.requests[q].id},
                       {"c", c.c},
                       {"b", c.b},
                       {"r", c.r},
                       {"p_W", c.p},
                       {"m", c.m},
                       {"omega_Hz", c.omega}});
  }
  json trace = json::array();
  for (const auto& s : report.rounding_trace)
    trace.push_back({{"epoch", s.epoch},
                     {"request", inst.requests[s.request].id},
                     {"variable", std::string(1, s.variable)},
                     {"relaxed", s.relaxed},
                     {"fixed", s.fixed},
                     {"fallback", s.fallback}});
  json residuals = json::object();
  for (const auto& r : report.residuals) residuals[r.label] = r.violation;
  json distances = json::array();
  for (const auto& d : report.distances)
    distances.push_back({{"left", inst.requests[d.q].id}, {"right", inst.requests[d.i].id}, {"d_Hz", d.d}});

  return {{"power_mode", to_string(report.power_mode)},
          {"objective_power_W", report.objective_power_W},
          {"power_W",
           {{"bias", report.power.bias},
            {"codec", report.power.codec},
            {"fft", report.power.fft},
            {"dsp", report.power.dsp}}},
          {"penalty", report.penalty_value},
          {"relaxed_objective", report.relaxed_objective},
          {"kkt_residual", report.kkt_residual},
          {"epochs", report.epochs},
          {"integer_variables", report.integer_variables},
          {"newton_iterations", report.newton_iterations},
          {"feasible", report.feasibility.pass},
          {"worst_constraint", {{"label", report.feasibility.worst_label},
                                {"violation", report.feasibility.worst_violation}}},
          {"configs", configs},
          {"distances", distances},
          {"rounding_trace", trace},
          {"log_constraints", residuals}};
}

}  // namespace eon

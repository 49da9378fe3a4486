#include "eon/experiments.hpp"

#include <Eigen/Core>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "eon/errors.hpp"
#include "eon/report_io.hpp"

#ifndef EON_VERSION
#define EON_VERSION "0.0.0"
#endif

namespace eon {

using nlohmann::json;
namespace fs = std::filesystem;

SweepAxis parse_sweep_axis(const std::string& s) {
  if (s == "none") return SweepAxis::none;
  if (s == "traffic_tbps") return SweepAxis::traffic_tbps;
  if (s == "modes") return SweepAxis::modes;
  if (s == "coupling") return SweepAxis::coupling;
  throw InputError("sweep.axis", "unknown axis '" + s + "' (none, traffic_tbps, modes, coupling)");
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::none: return "none";
    case SweepAxis::traffic_tbps: return "traffic_tbps";
    case SweepAxis::modes: return "modes";
    case SweepAxis::coupling: return "coupling";
  }
  return "?";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

namespace {

std::string read_file(const fs::path& path, const std::string& field) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(field, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& field) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(field, e.what());
  }
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw InputError(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw InputError(where.empty() ? key : where + "." + key, "unknown field");
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(where.empty() ? key : where + "." + key, "missing or wrong type");
  }
}

double positive(const json& obj, const char* key, const std::string& where) {
  const double v = get<double>(obj, key, where);
  if (!(v > 0.0) || !std::isfinite(v)) throw InputError(where.empty() ? key : where + "." + key, "must be positive");
  return v;
}

std::string value_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  return format_number(v.get<double>());
}

template <typename T, typename Parse>
std::vector<T> one_or_many(const json& v, const std::string& field, Parse parse) {
  std::vector<T> out;
  try {
    if (v.is_array()) {
      for (const auto& e : v) out.push_back(parse(e.get<std::string>()));
    } else {
      out.push_back(parse(v.get<std::string>()));
    }
  } catch (const json::exception&) {
    throw InputError(field, "expected a string or an array of strings");
  } catch (const InputError& e) {
    throw InputError(field, e.what());
  }
  if (out.empty()) throw InputError(field, "empty list");
  return out;
}

void parse_solver(const json& s, Scenario& sc) {
  const std::string w = "solver";
  check_keys(s, {"penalty_K", "int_precision", "grid_precision", "max_epochs", "polish_pairs", "barrier"}, w);
  auto& o = sc.solver;
  if (s.contains("penalty_K")) sc.penalty_K = positive(s, "penalty_K", w);
  if (s.contains("int_precision")) o.int_precision = positive(s, "int_precision", w);
  if (s.contains("grid_precision")) o.grid_precision = positive(s, "grid_precision", w);
  if (s.contains("max_epochs")) o.max_epochs = get<int>(s, "max_epochs", w);
  if (s.contains("polish_pairs")) o.polish_pairs = get<bool>(s, "polish_pairs", w);
  if (s.contains("barrier")) {
    const auto& b = s.at("barrier");
    const std::string wb = "solver.barrier";
    check_keys(b, {"t0", "mu", "gap_tol", "newton_tol", "max_newton"}, wb);
    auto& bo = o.barrier;
    if (b.contains("t0")) bo.t0 = positive(b, "t0", wb);
    if (b.contains("mu")) bo.mu = positive(b, "mu", wb);
    if (b.contains("gap_tol")) bo.gap_tol = positive(b, "gap_tol", wb);
    if (b.contains("newton_tol")) bo.newton_tol = positive(b, "newton_tol", wb);
    if (b.contains("max_newton")) bo.max_newton = get<int>(b, "max_newton", wb);
    if (bo.mu <= 1.0) throw InputError("solver.barrier.mu", "must exceed 1");
  }
}

void parse_discrete(const json& d, Scenario& sc) {
  const std::string w = "discrete";
  check_keys(d, {"c", "r", "b_min", "b_max"}, w);
  if (d.contains("c")) sc.discrete.c = get<std::vector<double>>(d, "c", w);
  if (d.contains("r")) sc.discrete.r = get<std::vector<double>>(d, "r", w);
  if (d.contains("b_min")) sc.discrete.b_min = get<int>(d, "b_min", w);
  if (d.contains("b_max")) sc.discrete.b_max = get<int>(d, "b_max", w);
}

void parse_oracle(const json& g, Scenario& sc) {
  const std::string w = "oracle";
  check_keys(g, {"p_low_W", "p_decades", "p_per_decade", "omega_step_GHz", "cap", "top_k"}, w);
  auto& o = sc.oracle;
  if (g.contains("p_low_W")) o.p_low = positive(g, "p_low_W", w);
  if (g.contains("p_decades")) o.p_decades = get<int>(g, "p_decades", w);
  if (g.contains("p_per_decade")) o.p_per_decade = get<int>(g, "p_per_decade", w);
  if (g.contains("omega_step_GHz")) o.omega_step = positive(g, "omega_step_GHz", w) * 1e9;
  if (g.contains("cap")) o.cap = positive(g, "cap", w);
  if (g.contains("top_k")) o.top_k = get<int>(g, "top_k", w);
  if (o.p_decades < 0 || o.p_per_decade < 1 || o.top_k < 1) throw InputError(w, "grid counts must be positive");
}

}  // namespace

Scenario load_scenario(const fs::path& path, const ScenarioOverrides& ov) {
  Scenario sc;
  sc.source = path;
  const std::string text = read_file(path, "scenario");
  const json doc = parse_json(text, path.string());
  check_keys(doc, {"name", "topology", "traffic", "constants", "coupling", "power_mode", "modes", "discrete",
                   "power_bounds_W", "solver", "ros", "oracle", "sweep", "seed", "workers"},
             "");
  const fs::path dir = path.parent_path();
  std::string hashed = text;

  sc.name = doc.contains("name") ? get<std::string>(doc, "name", "") : path.stem().string();
  if (doc.contains("constants")) {
    try {
      apply_overrides(sc.constants, doc.at("constants"));
    } catch (const InputError& e) {
      throw InputError("constants." + e.field(), e.what());
    }
  }
  sc.constants.validate();

  const fs::path topo_path = dir / get<std::string>(doc, "topology", "");
  const std::string topo_text = read_file(topo_path, "topology");
  hashed += topo_text;
  sc.topology = load_topology(parse_json(topo_text, topo_path.string()), sc.constants.L_spn);

  const json& tr = doc.contains("traffic") ? doc.at("traffic") : throw InputError("traffic", "missing field");
  check_keys(tr, {"file", "requests", "uniform_tbps", "jitter"}, "traffic");
  const int kinds = int(tr.contains("file")) + int(tr.contains("requests")) + int(tr.contains("uniform_tbps"));
  if (kinds != 1) throw InputError("traffic", "give exactly one of file, requests, uniform_tbps");
  if (tr.contains("file")) {
    const fs::path tp = dir / get<std::string>(tr, "file", "traffic");
    const std::string t = read_file(tp, "traffic.file");
    hashed += t;
    sc.traffic.explicit_doc = parse_json(t, tp.string());
  } else if (tr.contains("requests")) {
    sc.traffic.explicit_doc = {{"requests", tr.at("requests")}};
  } else {
    sc.traffic.uniform_tbps = positive(tr, "uniform_tbps", "traffic");
  }
  if (tr.contains("jitter")) {
    sc.traffic.jitter = get<double>(tr, "jitter", "traffic");
    if (sc.traffic.jitter < 0.0 || sc.traffic.jitter >= 1.0) throw InputError("traffic.jitter", "must be in [0, 1)");
  }

  if (doc.contains("coupling"))
    sc.couplings = one_or_many<CouplingModel>(doc.at("coupling"), "coupling", parse_coupling);
  if (doc.contains("power_mode"))
    sc.power_modes = one_or_many<PowerMode>(doc.at("power_mode"), "power_mode", parse_power_mode);
  if (doc.contains("modes")) sc.modes = get<int>(doc, "modes", "");
  if (doc.contains("discrete")) parse_discrete(doc.at("discrete"), sc);
  if (doc.contains("power_bounds_W")) {
    const auto b = get<std::vector<double>>(doc, "power_bounds_W", "");
    if (b.size() != 2 || !(b[0] > 0.0) || !(b[1] > b[0])) throw InputError("power_bounds_W", "expected [min, max], 0 < min < max");
    sc.p_min = b[0];
    sc.p_max = b[1];
  }
  if (doc.contains("solver")) parse_solver(doc.at("solver"), sc);
  if (doc.contains("ros")) {
    const auto& r = doc.at("ros");
    check_keys(r, {"k_paths", "ordering"}, "ros");
    if (r.contains("k_paths")) sc.ros.k_paths = get<int>(r, "k_paths", "ros");
    if (sc.ros.k_paths < 1) throw InputError("ros.k_paths", "must be at least 1");
    if (r.contains("ordering")) {
      try {
        sc.ros.ordering_rule = parse_ordering_rule(get<std::string>(r, "ordering", "ros"));
      } catch (const InputError& e) {
        throw InputError("ros.ordering", e.what());
      }
    }
  }
  if (doc.contains("oracle")) parse_oracle(doc.at("oracle"), sc);
  if (doc.contains("sweep")) {
    const auto& s = doc.at("sweep");
    check_keys(s, {"axis", "values"}, "sweep");
    sc.axis = parse_sweep_axis(get<std::string>(s, "axis", "sweep"));
    if (sc.axis != SweepAxis::none) {
      const json& values = s.contains("values") ? s.at("values") : throw InputError("sweep.values", "missing field");
      if (!values.is_array() || values.empty()) throw InputError("sweep.values", "expected a non-empty array");
      for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& v = values[i];
        const std::string f = "sweep.values[" + std::to_string(i) + "]";
        if (sc.axis == SweepAxis::traffic_tbps && !(v.is_number() && v.get<double>() > 0.0))
          throw InputError(f, "expected a positive number");
        if (sc.axis == SweepAxis::modes && !(v.is_number_integer() && v.get<int>() >= 1))
          throw InputError(f, "expected a positive integer");
        if (sc.axis == SweepAxis::coupling) {
          if (!v.is_string()) throw InputError(f, "expected strong or weak");
          try {
            parse_coupling(v.get<std::string>());
          } catch (const InputError& e) {
            throw InputError(f, e.what());
          }
        }
        sc.sweep_values.push_back(v);
      }
      if (sc.axis == SweepAxis::traffic_tbps && sc.traffic.uniform_tbps == 0.0)
        throw InputError("sweep.axis", "traffic_tbps needs uniform traffic");
    }
  }
  if (doc.contains("seed")) sc.seed = get<std::uint64_t>(doc, "seed", "");
  if (doc.contains("workers")) sc.workers = get<int>(doc, "workers", "");

  if (ov.seed) sc.seed = *ov.seed;
  if (ov.workers) sc.workers = *ov.workers;
  if (ov.modes) sc.modes = *ov.modes;
  if (ov.coupling) sc.couplings = {parse_coupling(*ov.coupling)};
  if (ov.power_mode) sc.power_modes = {parse_power_mode(*ov.power_mode)};
  if (sc.workers < 1) throw InputError("workers", "must be at least 1");
  if (sc.modes < 0) throw InputError("modes", "must be positive");

  // Overrides change the result, the worker count does not.
  hashed += "\nseed=" + std::to_string(sc.seed) + " modes=" + std::to_string(sc.modes);
  for (auto c : sc.couplings) hashed += std::string(" coupling=") + to_string(c);
  for (auto m : sc.power_modes) hashed += std::string(" power_mode=") + to_string(m);
  sc.inputs_sha256 = sha256_hex(hashed);

  // Fail early on anything the first run would reject.
  const auto runs = expand_runs(sc);
  make_instance(sc, runs.front());
  return sc;
}

std::vector<RunSpec> expand_runs(const Scenario& sc) {
  std::vector<RunSpec> out;
  const bool many_modes = sc.power_modes.size() > 1, many_couplings = sc.couplings.size() > 1;
  int series = 0;
  for (auto pm : sc.power_modes)
    for (auto cp : sc.couplings) {
      std::string label = to_string(pm);
      if (many_couplings) label = many_modes ? label + "." + to_string(cp) : to_string(cp);
      RunSpec base;
      base.series = series;
      base.series_label = label;
      base.power_mode = pm;
      base.coupling = cp;
      base.modes = sc.modes > 0 ? sc.modes : sc.topology.modes;
      base.traffic_tbps = sc.traffic.uniform_tbps;
      if (sc.axis == SweepAxis::none) {
        base.sweep_value = "-";
        out.push_back(base);
      }
      for (const auto& v : sc.sweep_values) {
        RunSpec r = base;
        r.sweep_value = value_text(v);
        switch (sc.axis) {
          case SweepAxis::traffic_tbps: r.traffic_tbps = v.get<double>(); break;
          case SweepAxis::modes: r.modes = v.get<int>(); break;
          case SweepAxis::coupling: r.coupling = parse_coupling(v.get<std::string>()); break;
          case SweepAxis::none: break;
        }
        out.push_back(r);
      }
      ++series;
    }
  return out;
}

std::vector<Request> make_requests(const Scenario& sc, const RunSpec& run) {
  if (!sc.traffic.explicit_doc.is_null()) return load_traffic(sc.traffic.explicit_doc, sc.topology);
  const int n = int(sc.topology.nodes.size());
  if (n < 2) throw InputError("topology.nodes", "uniform traffic needs at least two nodes");
  const double each = run.traffic_tbps * 1e12 / double(n * (n - 1));
  std::mt19937_64 rng(sc.seed);
  std::vector<Request> out;
  std::int64_t id = 1;
  for (int s = 0; s < n; ++s)
    for (int d = 0; d < n; ++d) {
      if (s == d) continue;
      // 53 random bits to [-1, 1): same stream on every platform.
      const double u = double(rng() >> 11) * 0x1.0p-52 - 1.0;
      out.push_back({id++, s, d, each * (1.0 + sc.traffic.jitter * u)});
    }
  return out;
}

ProblemInstance make_instance(const Scenario& sc, const RunSpec& run) {
  ProblemInstance inst;
  inst.constants = sc.constants;
  inst.topology = sc.topology;
  inst.topology.modes = run.modes;
  inst.requests = make_requests(sc, run);
  if (inst.requests.empty()) throw InputError("traffic", "no requests");
  inst.routing = solve_ros(inst.topology, inst.requests, sc.ros);
  inst.coupling = run.coupling;
  inst.discrete = sc.discrete;
  inst.penalty_K = sc.penalty_K ? *sc.penalty_K : default_penalty_weight(sc.constants);
  inst.p_min = sc.p_min;
  inst.p_max = sc.p_max;
  inst.validate();
  return inst;
}

bool SweepResult::all_feasible() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.feasible; });
}

SweepResult run_sweep(const Scenario& sc) {
  SweepResult result;
  const auto runs = expand_runs(sc);
  result.rows.resize(runs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < runs.size(); j = next++) {
      auto& row = result.rows[j];
      row.run = runs[j];
      const auto start = std::chrono::steady_clock::now();
      try {
        const auto inst = make_instance(sc, runs[j]);
        row.requests = int(inst.size());
        const auto rep = solve(inst, runs[j].power_mode, sc.solver);
        row.power = rep.power;
        row.total_W = rep.objective_power_W;
        row.penalty_W = rep.penalty_value;
        row.relaxed_W = rep.relaxed_objective;
        row.epochs = rep.epochs;
        row.newton_iterations = rep.newton_iterations;
        row.feasible = rep.feasibility.pass;
        row.configs = rep.configs;
        if (!row.feasible) {
          row.status = "infeasible";
          row.message = rep.feasibility.worst_label;
        }
      } catch (const InfeasibleError& e) {
        row.status = "infeasible";
        row.message = e.what();
      } catch (const std::exception& e) {
        row.status = "error";
        row.message = e.what();
      }
      row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };
  const int threads = std::min<int>(sc.workers, int(runs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::map<int, double> first;
  for (auto& row : result.rows) {
    if (!first.count(row.run.series)) first[row.run.series] = row.feasible ? row.total_W : std::nan("");
    row.normalized = row.feasible ? row.total_W / first[row.run.series] : std::nan("");
  }
  return result;
}

namespace {

std::string num(double v) { return std::isnan(v) ? "nan" : format_number(v); }

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepResult& result, int series) {
  os << "sweep_value,power_mode,coupling,modes,requests,total_W,bias_W,codec_W,fft_W,dsp_W,penalty_W,relaxed_W,"
        "epochs,newton_iterations,feasible,normalized,status\n";
  for (const auto& r : result.rows) {
    if (series >= 0 && r.run.series != series) continue;
    const bool ok = r.feasible;
    auto val = [&](double v) { return ok ? num(v) : std::string("nan"); };
    os << r.run.sweep_value << ',' << to_string(r.run.power_mode) << ',' << to_string(r.run.coupling) << ','
       << r.run.modes << ',' << r.requests << ',' << val(r.total_W) << ',' << val(r.power.bias) << ','
       << val(r.power.codec) << ',' << val(r.power.fft) << ',' << val(r.power.dsp) << ',' << val(r.penalty_W) << ','
       << val(r.relaxed_W) << ',' << r.epochs << ',' << r.newton_iterations << ',' << int(ok) << ','
       << num(r.normalized) << ',' << r.status << '\n';
  }
}

void write_timing_csv(std::ostream& os, const SweepResult& result) {
  os << "sweep_value,power_mode,coupling,wall_time_s\n";
  for (const auto& r : result.rows)
    os << r.run.sweep_value << ',' << to_string(r.run.power_mode) << ',' << to_string(r.run.coupling) << ','
       << format_number(r.wall_time) << '\n';
}

std::vector<TidyRow> emit_plotdata(const SweepResult& result) {
  std::set<int> series;
  for (const auto& r : result.rows) series.insert(r.run.series);
  const bool prefix = series.size() > 1;
  std::vector<TidyRow> out;
  for (const auto& r : result.rows) {
    if (!r.feasible) continue;
    const std::string p = prefix ? r.run.series_label + "." : "";
    out.push_back({r.run.sweep_value, p + "bias", r.power.bias});
    out.push_back({r.run.sweep_value, p + "codec", r.power.codec});
    out.push_back({r.run.sweep_value, p + "fft", r.power.fft});
    out.push_back({r.run.sweep_value, p + "dsp", r.power.dsp});
  }
  return out;
}

void write_plotdata_csv(std::ostream& os, const std::vector<TidyRow>& rows) {
  os << "sweep_value,series,watts\n";
  for (const auto& r : rows) os << r.sweep_value << ',' << r.series << ',' << num(r.watts) << '\n';
}

std::vector<TidyRow> read_plotdata_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "sweep_value,series,watts")
    throw InputError("plotdata", "expected header sweep_value,series,watts");
  std::vector<TidyRow> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto a = line.find(','), b = line.rfind(',');
    if (a == std::string::npos || a == b) throw InputError("plotdata", "malformed line '" + line + "'");
    out.push_back({line.substr(0, a), line.substr(a + 1, b - a - 1), std::strtod(line.c_str() + b + 1, nullptr)});
  }
  return out;
}

std::vector<WideRow> tidy_to_wide(const std::vector<TidyRow>& tidy) {
  std::vector<WideRow> out;
  for (const auto& t : tidy) {
    if (out.empty() || out.back().sweep_value != t.sweep_value) out.push_back({t.sweep_value, {}});
    out.back().series.emplace_back(t.series, t.watts);
  }
  return out;
}

std::vector<TidyRow> wide_to_tidy(const std::vector<WideRow>& wide) {
  std::vector<TidyRow> out;
  for (const auto& w : wide)
    for (const auto& [name, watts] : w.series) out.push_back({w.sweep_value, name, watts});
  return out;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

template <typename F>
std::string to_text(F&& f) {
  std::ostringstream ss;
  f(ss);
  return ss.str();
}

}  // namespace

void write_sweep_outputs(const fs::path& dir, const Scenario& sc, const SweepResult& result) {
  fs::create_directories(dir);
  write_text(dir / "sweep.csv", to_text([&](std::ostream& os) { write_sweep_csv(os, result); }));
  std::map<int, std::string> labels;
  for (const auto& r : result.rows) labels[r.run.series] = r.run.series_label;
  if (labels.size() > 1)
    for (const auto& [series, label] : labels)
      write_text(dir / ("sweep_" + label + ".csv"),
                 to_text([&](std::ostream& os) { write_sweep_csv(os, result, series); }));
  write_text(dir / "plotdata.csv",
             to_text([&](std::ostream& os) { write_plotdata_csv(os, emit_plotdata(result)); }));
  write_text(dir / "timing.csv", to_text([&](std::ostream& os) { write_timing_csv(os, result); }));

  std::ostringstream m;
  m << "scenario: " << sc.source.filename().string() << '\n'
    << "name: " << sc.name << '\n'
    << "inputs_sha256: " << sc.inputs_sha256 << '\n'
    << "seed: " << sc.seed << '\n'
    << "sweep_axis: " << to_string(sc.axis) << '\n'
    << "runs: " << result.rows.size() << '\n'
    << "infeasible_runs: "
    << std::count_if(result.rows.begin(), result.rows.end(), [](const SweepRow& r) { return !r.feasible; }) << '\n'
    << "eon_version: " << EON_VERSION << '\n'
    << "eigen_version: " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION << '\n'
    << "json_version: " << NLOHMANN_JSON_VERSION_MAJOR << '.' << NLOHMANN_JSON_VERSION_MINOR << '.'
    << NLOHMANN_JSON_VERSION_PATCH << '\n';
  for (const auto& r : result.rows)
    if (!r.feasible) m << "note: " << r.run.series_label << " @ " << r.run.sweep_value << ": " << r.message << '\n';
  write_text(dir / "manifest.txt", m.str());
}

std::vector<OracleComparison> compare_oracle(const Scenario& sc) {
  std::vector<OracleComparison> out;
  for (const auto& run : expand_runs(sc)) {
    const auto inst = make_instance(sc, run);
    if (inst.size() > 3) throw InputError("traffic", "oracle comparison supports at most 3 requests");
    OracleComparison c;
    c.run = run;
    c.instance = sc.name + "#" + std::to_string(out.size());
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto rep = solve(inst, run.power_mode, sc.solver);
      c.solver_W = rep.objective_power_W;
      c.solver_feasible = rep.feasibility.pass;
    } catch (const InfeasibleError&) {
      c.solver_W = std::nan("");
    }
    const auto t1 = std::chrono::steady_clock::now();
    c.oracle = brute_force_tcs(inst, sc.oracle);
    const auto t2 = std::chrono::steady_clock::now();
    c.solver_time = std::chrono::duration<double>(t1 - t0).count();
    c.oracle_time = std::chrono::duration<double>(t2 - t1).count();
    c.oracle_feasible = c.oracle.feasible;
    c.oracle_W = c.oracle.feasible ? c.oracle.objective : std::nan("");
    c.gap = (c.solver_W - c.oracle_W) / c.oracle_W;
    out.push_back(std::move(c));
  }
  return out;
}

void write_oracle_csv(std::ostream& os, const std::vector<OracleComparison>& rows) {
  os << "instance,sweep_value,power_mode,coupling,solver_W,oracle_W,gap,solver_feasible,oracle_feasible,solver_s,"
        "oracle_s,speed_ratio\n";
  for (const auto& r : rows)
    os << r.instance << ',' << r.run.sweep_value << ',' << to_string(r.run.power_mode) << ','
       << to_string(r.run.coupling) << ',' << num(r.solver_W) << ',' << num(r.oracle_W) << ',' << num(r.gap) << ','
       << int(r.solver_feasible) << ',' << int(r.oracle_feasible) << ',' << format_number(r.solver_time) << ','
       << format_number(r.oracle_time) << ',' << format_number(r.oracle_time / r.solver_time) << '\n';
}

}  // namespace eon

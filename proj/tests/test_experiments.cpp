#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "eon/errors.hpp"
#include "eon/experiments.hpp"
#include "eon/report_io.hpp"
#include "fixtures.hpp"

using namespace eon;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kData = EON_DATA_DIR;

// Scratch directory removed at scope exit.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("eon_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_scenario(const TempDir& dir, json doc, const std::string& name = "scenario.json") {
  std::ofstream(dir.path / "topo.json") << fixtures::line_topology({400, 400}, 3, 2000).dump();
  if (!doc.contains("topology")) doc["topology"] = "topo.json";
  const auto p = dir.path / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json tiny_sweep() {
  return {{"traffic", {{"uniform_tbps", 0.3}, {"jitter", 0.2}}},
          {"power_mode", {"adaptive", "fixed"}},
          {"sweep", {{"axis", "modes"}, {"values", {1, 2}}}},
          {"seed", 3}};
}

}  // namespace

TEST_CASE("scenario errors name the offending field") {
  TempDir dir("errors");
  auto expect = [&](json doc, const std::string& field) {
    const auto p = write_scenario(dir, doc);
    try {
      load_scenario(p);
      FAIL("expected InputError for " << field);
    } catch (const InputError& e) {
      CHECK(e.field() == field);
    }
  };
  json ok = {{"traffic", {{"requests", json::array({{{"id", 1}, {"src", "A"}, {"dst", "C"}, {"rate_gbps", 100}}})}}}};
  CHECK_NOTHROW(load_scenario(write_scenario(dir, ok)));

  auto bad = ok;
  bad["colour"] = 1;
  expect(bad, "colour");
  bad = ok;
  bad["power_mode"] = "maximal";
  expect(bad, "power_mode");
  bad = ok;
  bad["coupling"] = json::array();
  expect(bad, "coupling");
  bad = ok;
  bad["sweep"] = {{"axis", "modes"}, {"values", {1, 0}}};
  expect(bad, "sweep.values[1]");
  bad = ok;
  bad["sweep"] = {{"axis", "traffic_tbps"}, {"values", {1}}};
  expect(bad, "sweep.axis");
  bad = ok;
  bad["sweep"] = {{"axis", "diagonal"}};
  expect(bad, "sweep.axis");
  bad = ok;
  bad["traffic"]["uniform_tbps"] = 1;
  expect(bad, "traffic");
  bad = ok;
  bad["constants"] = {{"gamma_nl", -1}};
  expect(bad, "constants.gamma_nl");
  bad = ok;
  bad["solver"] = {{"barrier", {{"mu", 1.0}}}};
  expect(bad, "solver.barrier.mu");
  bad = ok;
  bad["power_bounds_W"] = {1, 0.5};
  expect(bad, "power_bounds_W");
  bad = ok;
  bad["topology"] = "missing.json";
  expect(bad, "topology");
  CHECK_THROWS_AS(load_scenario(dir.path / "nope.json"), InputError);
}

TEST_CASE("overrides replace scenario values") {
  TempDir dir("overrides");
  const auto p = write_scenario(dir, tiny_sweep());
  ScenarioOverrides ov;
  ov.power_mode = "fixed";
  ov.coupling = "weak";
  ov.seed = 99;
  const auto sc = load_scenario(p, ov);
  CHECK(sc.power_modes == std::vector<PowerMode>{PowerMode::fixed});
  CHECK(sc.couplings == std::vector<CouplingModel>{CouplingModel::weak});
  CHECK(sc.seed == 99);
  CHECK(sc.inputs_sha256 != load_scenario(p).inputs_sha256);
  ScenarioOverrides workers;
  workers.workers = 4;
  CHECK(load_scenario(p, workers).inputs_sha256 == load_scenario(p).inputs_sha256);
}

TEST_CASE("runs expand series-major") {
  TempDir dir("runs");
  const auto sc = load_scenario(write_scenario(dir, tiny_sweep()));
  const auto runs = expand_runs(sc);
  REQUIRE(runs.size() == 4);
  CHECK(runs[0].series_label == "adaptive");
  CHECK(runs[1].modes == 2);
  CHECK(runs[2].power_mode == PowerMode::fixed);
  CHECK(runs[3].sweep_value == "2");
}

TEST_CASE("uniform traffic covers every ordered pair") {
  TempDir dir("traffic");
  const auto sc = load_scenario(write_scenario(dir, tiny_sweep()));
  const auto run = expand_runs(sc).front();
  const auto reqs = make_requests(sc, run);
  REQUIRE(reqs.size() == 6);
  double total = 0.0;
  for (const auto& r : reqs) {
    total += r.rate;
    CHECK(r.rate >= 0.05e12 * 0.8);
    CHECK(r.rate < 0.05e12 * 1.2);
  }
  CHECK(total == doctest::Approx(0.3e12).epsilon(0.2));
  CHECK(make_requests(sc, run) == reqs);
}

TEST_CASE("sha256 of known strings") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("plot data shapes") {
  SweepResult result;
  for (int k = 0; k < 3; ++k) {
    SweepRow row;
    row.run.sweep_value = std::to_string(k + 1);
    row.run.series_label = "adaptive";
    row.feasible = true;
    row.power = {36.0 * (k + 1), 8.0, 16.384, 1.536};
    row.total_W = row.power.total();
    result.rows.push_back(row);
  }
  const auto tidy = emit_plotdata(result);
  CHECK(tidy.size() == 12);
  CHECK(tidy[4].series == "bias");
  CHECK(tidy[4].watts == 72.0);

  std::stringstream csv;
  write_plotdata_csv(csv, tidy);
  CHECK(read_plotdata_csv(csv) == tidy);

  const auto wide = tidy_to_wide(tidy);
  REQUIRE(wide.size() == 3);
  CHECK(wide[2].series.size() == 4);
  CHECK(wide_to_tidy(wide) == tidy);

  SUBCASE("two series are prefixed") {
    auto two = result;
    two.rows[1].run.series = 1;
    two.rows[1].run.series_label = "fixed";
    const auto t = emit_plotdata(two);
    CHECK(t[4].series == "fixed.bias");
    CHECK(t[0].series == "adaptive.bias");
  }
  SUBCASE("infeasible rows are skipped") {
    auto one = result;
    one.rows[0].feasible = false;
    CHECK(emit_plotdata(one).size() == 8);
  }
  SUBCASE("empty sweep gives a header only") {
    std::stringstream empty;
    write_plotdata_csv(empty, emit_plotdata(SweepResult{}));
    CHECK(empty.str() == "sweep_value,series,watts\n");
    CHECK(read_plotdata_csv(empty).empty());
    std::stringstream sweep;
    write_sweep_csv(sweep, SweepResult{});
    const std::string text = sweep.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  }
  SUBCASE("bad header") {
    std::stringstream bad("a,b,c\n1,x,2\n");
    CHECK_THROWS_AS(read_plotdata_csv(bad), InputError);
  }
}

TEST_CASE("sweep outputs are deterministic across reruns and worker counts") {
  TempDir dir("determinism");
  const auto p = write_scenario(dir, tiny_sweep());
  const auto sc1 = load_scenario(p);
  ScenarioOverrides two;
  two.workers = 2;
  const auto sc2 = load_scenario(p, two);
  const auto a = run_sweep(sc1);
  CHECK(a.all_feasible());
  write_sweep_outputs(dir.path / "a", sc1, a);
  write_sweep_outputs(dir.path / "b", sc1, run_sweep(sc1));
  write_sweep_outputs(dir.path / "c", sc2, run_sweep(sc2));
  for (const char* f : {"sweep.csv", "sweep_adaptive.csv", "sweep_fixed.csv", "plotdata.csv", "manifest.txt"}) {
    CHECK(slurp(dir.path / "a" / f) == slurp(dir.path / "b" / f));
    CHECK(slurp(dir.path / "a" / f) == slurp(dir.path / "c" / f));
  }
  CHECK(fs::exists(dir.path / "a" / "timing.csv"));
  // Adaptive never loses to fixed on the same run.
  for (std::size_t k = 0; k < 2; ++k) CHECK(a.rows[k].total_W <= a.rows[k + 2].total_W + 1e-9);
}

TEST_CASE("configs CSV round trip") {
  const auto inst = fixtures::three_requests();
  const auto rep = solve_tcs(inst);
  std::stringstream csv;
  write_configs_csv(csv, inst, rep.configs);
  const auto back = read_configs_csv(csv, inst);
  REQUIRE(back.size() == rep.configs.size());
  for (std::size_t q = 0; q < back.size(); ++q) {
    CHECK(back[q].b == rep.configs[q].b);
    CHECK(back[q].m == rep.configs[q].m);
    CHECK(back[q].c == rep.configs[q].c);
    CHECK(back[q].r == rep.configs[q].r);
    // Written in mW and GHz: exact up to the unit conversion.
    CHECK(back[q].p == doctest::Approx(rep.configs[q].p).epsilon(1e-15));
    CHECK(back[q].omega == doctest::Approx(rep.configs[q].omega).epsilon(1e-15));
  }
  CHECK(feasibility_check(back, inst).pass);

  std::stringstream missing("request_id,c,b,r,p_mW,m,omega_GHz\n1,4,8,0.8,1,1,100\n");
  CHECK_THROWS_AS(read_configs_csv(missing, inst), InputError);
  std::stringstream garbage("request_id,c,b,r,p_mW,m,omega_GHz\n1,x,8,0.8,1,1,100\n");
  CHECK_THROWS_AS(read_configs_csv(garbage, inst), InputError);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
}

TEST_CASE("oracle comparison on the bundled pair scenario") {
  const auto sc = load_scenario(kData / "scenarios" / "line3_oracle.json");
  const auto rows = compare_oracle(sc);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.oracle_feasible);
    CHECK(r.solver_feasible);
    CHECK(r.gap <= 0.05);
  }
  std::stringstream csv;
  write_oracle_csv(csv, rows);
  const std::string text = csv.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("bundled scenarios load") {
  for (const auto& entry : fs::directory_iterator(kData / "scenarios")) {
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_scenario(entry.path()));
  }
}

#include "eon/constants.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "eon/errors.hpp"

namespace eon {

namespace {

struct Field {
  double PhysicalConstants::*member;
  std::function<double(double)> to_si;
};

const std::map<std::string, Field>& field_table() {
  static const std::map<std::string, Field> table = {
      {"alpha", {&PhysicalConstants::alpha,
                 [](double v) { return PhysicalConstants::db_per_km_to_neper_per_m(v); }}},
      {"beta2_abs", {&PhysicalConstants::beta2_abs, [](double v) { return v * 1e-30; }}},
      {"gamma_nl", {&PhysicalConstants::gamma_nl, [](double v) { return v * 1e-3; }}},
      {"nu", {&PhysicalConstants::nu, [](double v) { return v * 1e12; }}},
      {"n_sp", {&PhysicalConstants::n_sp, [](double v) { return v; }}},
      {"L_spn", {&PhysicalConstants::L_spn, [](double v) { return v * 1e3; }}},
      {"F", {&PhysicalConstants::F, [](double v) { return v * 1e6; }}},
      {"sigma_cd", {&PhysicalConstants::sigma_cd, [](double v) { return v * 1e-15; }}},
      {"rho_mc", {&PhysicalConstants::rho_mc, [](double v) { return v * 1e-12; }}},
      {"mode_exp", {&PhysicalConstants::mode_exp, [](double v) { return v; }}},
      {"G", {&PhysicalConstants::G, [](double v) { return v * 1e9; }}},
      {"kappa1", {&PhysicalConstants::kappa1, [](double v) { return v; }}},
      {"kappa2", {&PhysicalConstants::kappa2, [](double v) { return v; }}},
      {"kappa3", {&PhysicalConstants::kappa3, [](double v) { return v; }}},
      {"kappa4", {&PhysicalConstants::kappa4, [](double v) { return v; }}},
      {"P_trb", {&PhysicalConstants::P_trb, [](double v) { return v; }}},
      {"P_edc", {&PhysicalConstants::P_edc, [](double v) { return v; }}},
      {"P_fft", {&PhysicalConstants::P_fft, [](double v) { return v * 1e-3; }}},
      {"P_dsp", {&PhysicalConstants::P_dsp, [](double v) { return v * 1e-3; }}},
      {"planck_h", {&PhysicalConstants::planck_h, [](double v) { return v; }}},
  };
  return table;
}

}  // namespace

void PhysicalConstants::validate() const {
  // Broadening and transponder power coefficients may be switched off (zero);
  // everything that enters a logarithm or a denominator must be positive.
  const std::pair<const char*, double> positive[] = {
      {"alpha", alpha},   {"beta2_abs", beta2_abs}, {"gamma_nl", gamma_nl},
      {"nu", nu},         {"n_sp", n_sp},           {"L_spn", L_spn},
      {"F", F},           {"mode_exp", mode_exp},   {"G", G},
      {"kappa1", kappa1}, {"kappa2", kappa2},       {"kappa3", kappa3},
      {"kappa4", kappa4}, {"P_trb", P_trb},         {"planck_h", planck_h}};
  for (const auto& [name, value] : positive) {
    if (!(value > 0.0) || !std::isfinite(value))
      throw InputError(name, "must be a finite positive number");
  }
  const std::pair<const char*, double> non_negative[] = {
      {"sigma_cd", sigma_cd}, {"rho_mc", rho_mc}, {"P_edc", P_edc},
      {"P_fft", P_fft},       {"P_dsp", P_dsp}};
  for (const auto& [name, value] : non_negative) {
    if (!(value >= 0.0) || !std::isfinite(value))
      throw InputError(name, "must be a finite non-negative number");
  }
}

void apply_overrides(PhysicalConstants& k, const nlohmann::json& overrides) {
  if (!overrides.is_object()) throw InputError("constants", "expected an object");
  const auto& table = field_table();
  for (const auto& [key, value] : overrides.items()) {
    auto it = table.find(key);
    if (it == table.end()) throw InputError("constants." + key, "unknown constant");
    if (!value.is_number()) throw InputError("constants." + key, "expected a number");
    k.*(it->second.member) = it->second.to_si(value.get<double>());
  }
  k.validate();
}

PhysicalConstants load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, "cannot open constants file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path, e.what());
  }
  PhysicalConstants k;
  apply_overrides(k, doc);
  return k;
}

}  // namespace eon

#include "eon/phy.hpp"

#include <stdexcept>

#include "eon/errors.hpp"

namespace eon {

CouplingModel parse_coupling(const std::string& s) {
  if (s == "strong") return CouplingModel::strong;
  if (s == "weak") return CouplingModel::weak;
  throw InputError("coupling", "expected \"strong\" or \"weak\", got \"" + s + "\"");
}

const char* to_string(CouplingModel c) {
  return c == CouplingModel::strong ? "strong" : "weak";
}

PowerBreakdown transponder_power_breakdown(int m, int b, double r, const PhysicalConstants& k) {
  if (!(r > 0.0)) throw std::invalid_argument("coding rate must be positive");
  const double subcarriers = std::ldexp(1.0, b);
  PowerBreakdown out;
  out.bias = k.P_trb;
  out.codec = 2.0 * k.P_edc * m / r;
  out.fft = 2.0 * m * subcarriers * b * k.P_fft;
  out.dsp = 2.0 * double(m) * m * subcarriers * k.P_dsp;
  return out;
}

double transponder_power_convex(double log_m, double log_r, double b, const PhysicalConstants& k) {
  return k.P_trb + 2.0 * k.P_edc * std::exp(log_m - log_r) +
         5.36 * std::exp(0.82 * b + log_m) * k.P_fft +
         2.0 * std::exp(2.0 * log_m + b * std::numbers::ln2) * k.P_dsp;
}

double rate_capacity(const TransponderConfig& cfg, int span_count, CouplingModel coupling,
                     const PhysicalConstants& k) {
  const double symbol_time = 1.0 / k.F;
  const double subcarriers = std::ldexp(1.0, cfg.b);
  const double overhead = symbol_time + k.sigma_cd * span_count * subcarriers +
                          k.rho_mc * std::pow(double(cfg.m), -k.mode_exp) *
                              coupling_span_factor(span_count, coupling);
  return 2.0 * symbol_time * cfg.m * cfg.r * cfg.c * cfg.delta(k) / overhead;
}

double osnr(std::size_t q, std::span<const TransponderConfig> cfgs,
            const Eigen::VectorXi& span_count, const Eigen::MatrixXi& shared_spans,
            const PhysicalConstants& k) {
  const auto& self = cfgs[q];
  const double x = self.per_mode_power();
  const double ase = derived_zeta(k) * span_count(Index(q)) * self.delta(k);
  double nli_sum = 0.0;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    const int shared = shared_spans(Index(q), Index(i));
    if (i == q || shared == 0) continue;
    const auto& other = cfgs[i];
    const double d = std::abs(self.omega - other.omega);
    if (d == 0.0) throw std::domain_error("coincident carriers on shared spans");
    const double xi = other.per_mode_power();
    nli_sum += other.m * xi * xi * shared / other.delta(k) / d;
  }
  return x / (ase + k.kappa1 * derived_varsigma(k) * x * nli_sum);
}

}  // namespace eon

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include <Eigen/Core>

#include "eon/constants.hpp"
#include "eon/linalg.hpp"

namespace eon {

enum class CouplingModel { strong, weak };

CouplingModel parse_coupling(const std::string& s);
const char* to_string(CouplingModel c);

/// Per-request transponder decision.
struct TransponderConfig {
  double c = 4.0;      // modulation level, bits/symbol
  int b = 8;           // log2 of the subcarrier count
  double r = 0.8;      // coding rate
  double p = 1e-3;     // total transmit optical power, W (p/m per mode and polarization)
  int m = 1;           // active modes
  double omega = 0.0;  // carrier frequency, Hz

  double delta(const PhysicalConstants& k) const { return std::ldexp(k.F, b); }
  double per_mode_power() const { return p / m; }
};

/// The four additive parts of a transmit/receive transponder pair's power.
struct PowerBreakdown {
  double bias = 0.0;
  double codec = 0.0;
  double fft = 0.0;
  double dsp = 0.0;

  double total() const { return bias + codec + fft + dsp; }

  PowerBreakdown& operator+=(const PowerBreakdown& o) {
    bias += o.bias;
    codec += o.codec;
    fft += o.fft;
    dsp += o.dsp;
    return *this;
  }
};

/// P = P_trb + 2 P_edc m / r + 2 m 2^b b P_fft + 2 m^2 2^b P_dsp.
/// Throws std::invalid_argument for r <= 0.
PowerBreakdown transponder_power_breakdown(int m, int b, double r, const PhysicalConstants& k);

inline double transponder_power(const TransponderConfig& cfg, const PhysicalConstants& k) {
  return transponder_power_breakdown(cfg.m, cfg.b, cfg.r, k).total();
}

/// Exact FFT factor 2 m b 2^b, for real m and b.
template <typename T>
T fft_factor_exact(T m, T b) {
  return T(2) * m * b * std::exp2(b);
}

/// Convex surrogate 5.36 e^{0.82 b} m for the FFT factor.
template <typename T>
T fft_factor_surrogate(T m, T b) {
  return T(5.36) * std::exp(T(0.82) * b) * m;
}

/// |ln surrogate - ln exact| / ln exact.
template <typename T>
T fft_surrogate_log_error(T m, T b) {
  using std::abs;
  using std::log;
  const T exact = log(fft_factor_exact(m, b));
  return abs(log(fft_factor_surrogate(m, b)) - exact) / exact;
}

/// Power with the log-domain surrogate, as a function of M = ln m, R = ln r and
/// relaxed b:  P_trb + 2 P_edc e^{M-R} + 5.36 e^{0.82 b + M} P_fft + 2 e^{2M} 2^b P_dsp.
double transponder_power_convex(double log_m, double log_r, double b, const PhysicalConstants& k);

/// OSNR threshold fit r^kappa2 (1 + kappa3 c)^kappa4 (linear units).
template <typename T>
T osnr_threshold(T c, T r, const PhysicalConstants& k) {
  using std::pow;
  return pow(r, T(k.kappa2)) * pow(T(1) + T(k.kappa3) * c, T(k.kappa4));
}

/// Mode-coupling broadening span dependence: sqrt(N) strong, N weak.
inline double coupling_span_factor(int span_count, CouplingModel coupling) {
  return coupling == CouplingModel::strong ? std::sqrt(double(span_count)) : double(span_count);
}

/// Net information rate after cyclic-prefix overhead:
///   2 F^{-1} m r c Delta / (F^{-1} + sigma N 2^b + rho m^{-mode_exp} g(N)).
double rate_capacity(const TransponderConfig& cfg, int span_count, CouplingModel coupling,
                     const PhysicalConstants& k);

/// Linear OSNR of request q given every request's configuration. `span_count`
/// holds N_q per request and `shared_spans` the symmetric N_{q,i} matrix.
/// Throws std::domain_error if q shares spans with a request on the same carrier.
double osnr(std::size_t q, std::span<const TransponderConfig> cfgs,
            const Eigen::VectorXi& span_count, const Eigen::MatrixXi& shared_spans,
            const PhysicalConstants& k);

inline double to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace eon

#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include <json.hpp>

namespace eon {

/// Fiber, amplifier and transponder constants. Everything is stored in SI
/// units; conversion from the customary units happens only at the file
/// boundary (see apply_overrides).
struct PhysicalConstants {
  double alpha = db_per_km_to_neper_per_m(0.22);  // 1/m
  double beta2_abs = 20393e-30;                   // s^2/m
  double gamma_nl = 1.3e-3;                       // 1/(W m)
  double nu = 193.55e12;                          // Hz
  double n_sp = 1.58;
  double L_spn = 80e3;       // m
  double F = 80e6;           // Hz, subcarrier spacing
  double sigma_cd = 14e-15;  // s, chromatic-dispersion broadening per span*subcarrier
  double rho_mc = 113e-12;   // s, mode-coupling broadening coefficient
  double mode_exp = 0.78;
  double G = 20e9;  // Hz, guard band
  double kappa1 = 0.4343;
  double kappa2 = 3.37;
  double kappa3 = 0.21;
  double kappa4 = 5.73;
  double P_trb = 36.0;   // W
  double P_edc = 3.2;    // W
  double P_fft = 4e-3;   // W
  double P_dsp = 3e-3;   // W
  double planck_h = 6.62607015e-34;  // J s

  static constexpr double db_per_km_to_neper_per_m(double db_per_km) {
    return db_per_km / (10.0 * std::numbers::log10e) / 1000.0;
  }

  /// Throws InputError naming the first non-positive field.
  void validate() const;
};

/// ASE noise density per span, zeta = (e^{alpha L_spn} - 1) h nu n_sp  [W/Hz].
template <typename T = double>
T derived_zeta(const PhysicalConstants& k) {
  return std::expm1(T(k.alpha) * T(k.L_spn)) * T(k.planck_h) * T(k.nu) * T(k.n_sp);
}

/// Nonlinear interference coefficient 3 gamma^2 / (2 alpha pi |beta2|)  [Hz^2/W^2].
template <typename T = double>
T derived_varsigma(const PhysicalConstants& k) {
  return T(3) * T(k.gamma_nl) * T(k.gamma_nl) /
         (T(2) * T(k.alpha) * std::numbers::pi_v<T> * T(k.beta2_abs));
}

/// Applies overrides keyed by symbol name, values in customary units:
/// alpha dB/km, beta2_abs fs^2/m, gamma_nl 1/W/km, nu THz, L_spn km, F MHz,
/// sigma_cd fs, rho_mc ps, G GHz, P_trb/P_edc W, P_fft/P_dsp mW, planck_h J s.
/// Unknown keys are rejected.
void apply_overrides(PhysicalConstants& k, const nlohmann::json& overrides);

PhysicalConstants load_constants(const std::string& path);

}  // namespace eon

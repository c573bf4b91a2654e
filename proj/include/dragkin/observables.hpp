#pragma once

// Quantities derived from the stationary and growing photon occupancy:
// isotropic/anisotropic split, renormalized mode mass and energy, mass
// growth past threshold, relaxation-time dilation and Doppler relations.

#include <cmath>
#include <utility>

#include "dragkin/core.hpp"

namespace dragkin {

struct Decomposition {
  double isotropic = 0.0;
  double anisotropic = 0.0;
};

/// Split of N_source/(1 - x) into the even part N_source/(1 - x^2) and the
/// odd part x N_source/(1 - x^2), x = (u/c) cos(alpha).
inline Decomposition decompose(PhotonMode const& mode, double u, double N_source) {
  double const x = drift_parameter(mode, u);
  if (!(std::abs(x) < 1.0)) {
    detail::fail<DivergenceError>("decompose", "|x| = " + detail::num(std::abs(x)) + " >= 1");
  }
  Decomposition d;
  d.isotropic = N_source / ((1.0 - x) * (1.0 + x));
  d.anisotropic = x * d.isotropic;
  return d;
}

/// Energy and mass of one photon mode, in units with c = 1.
struct ModeMassReport {
  double avg_energy = 0.0;       // <eps> = M c^2
  double mode_mass = 0.0;        // M (M_i when heated)
  double per_photon_mass = 0.0;  // m
  double rest_mass = 0.0;        // m0 = T / c^2
  double occupancy = 0.0;        // <N> at T_i, per_photon_mass * occupancy = mode_mass
  bool heated = false;
};

/// Mode mass and energy below threshold.
///
/// `N_mode` is the unheated occupancy <N0(omega, T)>, so M0 c^2 = T <N0>.
/// Heating rescales the occupancy as <N(omega, T_i)> = (T_i/T) <N0>, which
/// makes the per-photon mass m0 (T_i/T)/(1 - u^2) and the mode mass
/// M0 (T_i/T)^2/(1 - u^2) mutually consistent.
inline ModeMassReport renormalized_mass_energy(double T, double T_i, double u, double N_mode) {
  if (!(T > 0.0) || !(T_i > 0.0)) detail::fail("renormalized_mass_energy", "temperatures must be > 0");
  if (!(u >= 0.0) || !(u < 1.0)) {
    detail::fail("renormalized_mass_energy", "u = " + detail::num(u) + " outside [0, c); use supercritical_mass");
  }
  if (!(N_mode > 0.0)) detail::fail("renormalized_mass_energy", "N_mode must be > 0");

  double const lorentz = 1.0 - u * u;
  double const heating = T_i / T;
  double const M0 = T * N_mode;

  ModeMassReport r;
  r.rest_mass = T;
  r.heated = T_i != T;
  r.occupancy = heating * N_mode;
  r.mode_mass = M0 * heating * heating / lorentz;
  r.per_photon_mass = r.rest_mass * heating / lorentz;
  r.avg_energy = r.mode_mass;
  return r;
}

/// Mode mass past threshold (u > c), growing as exp(gamma_q t):
///   M = M0/(u - 1) {[e^{gamma t} - 1] + (T/T_i) e^{gamma t}},
/// which at T_i = T is M0/(u - 1) [2 e^{gamma t} - 1].
inline double supercritical_mass(double M0, double u, double gamma_q, double t, double T, double T_i) {
  if (!(u > 1.0)) detail::fail("supercritical_mass", "requires u > c, got u = " + detail::num(u));
  if (!(gamma_q > 0.0)) detail::fail("supercritical_mass", "gamma_q must be > 0 past threshold");
  if (!(T > 0.0) || !(T_i > 0.0)) detail::fail("supercritical_mass", "temperatures must be > 0");
  double const growth = std::exp(gamma_q * t);
  double const scale = M0 / (u - 1.0);
  if (T_i == T) return scale * (2.0 * growth - 1.0);
  double const rest_over_dressed = T / T_i;  // m0 / m(T_i)
  return scale * ((growth - 1.0) + rest_over_dressed * growth);
}

struct Dilation {
  double tau = 0.0;
  double length = 0.0;
};

/// tau_i = tau0 (1 - u^2)(T/T_i), l_i = u tau_i.
inline Dilation time_dilation(double tau0, double u, double T, double T_i) {
  if (!(u >= 0.0) || !(u < 1.0)) detail::fail("time_dilation", "u = " + detail::num(u) + " outside [0, c)");
  if (!(T > 0.0) || !(T_i > 0.0)) detail::fail("time_dilation", "temperatures must be > 0");
  Dilation d;
  d.tau = tau0 * (1.0 - u * u) * (T / T_i);
  d.length = u * d.tau;
  return d;
}

enum class DopplerDirection { emit_to_obs, obs_to_emit };

/// omega_obs = omega_em / (1 - u cos(alpha)); obs_to_emit is the exact inverse.
/// A positive u cos(alpha) raises the observed frequency.
inline double doppler_shift(double omega, double u, double cos_alpha, DopplerDirection direction) {
  double const factor = 1.0 - u * cos_alpha;
  if (factor == 0.0) detail::fail<DivergenceError>("doppler_shift", "u cos(alpha) = 1 is a pole");
  return direction == DopplerDirection::emit_to_obs ? omega / factor : omega * factor;
}

/// Wavelengths transform reciprocally: lambda_obs = lambda_em (1 - u cos(alpha)).
inline double doppler_wavelength(double lambda, double u, double cos_alpha, DopplerDirection direction) {
  double const factor = 1.0 - u * cos_alpha;
  if (factor == 0.0) detail::fail<DivergenceError>("doppler_wavelength", "u cos(alpha) = 1 is a pole");
  return direction == DopplerDirection::emit_to_obs ? lambda * factor : lambda / factor;
}

}  // namespace dragkin

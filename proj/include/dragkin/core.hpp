#pragma once

// Domain types and occupancy functions shared by every other module.
//
// Units: hbar = c = 1 throughout. Speeds are stored as u/c, photon momenta
// in energy units, so the vacuum dispersion is omega = q.

#include <cmath>
#include <sstream>
#include <string>

#include "dragkin/errors.hpp"

namespace dragkin {

namespace detail {

template <class E = DomainError>
[[noreturn]] inline void fail(std::string const& where, std::string const& msg) {
  throw E(where + ": " + msg);
}

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

/// One electromagnetic mode.
struct PhotonMode {
  double q = 1.0;          // momentum magnitude
  double cos_alpha = 1.0;  // cosine of the angle between drift and momentum
  double omega = 1.0;      // frequency (energy units)
  double occupancy = 0.0;

  /// Mode on the vacuum light cone, omega = q.
  static PhotonMode light_cone(double q, double cos_alpha, double occupancy = 0.0) {
    PhotonMode m{q, cos_alpha, q, occupancy};
    m.validate();
    return m;
  }

  void validate() const {
    if (!(q >= 0.0) || !std::isfinite(q)) detail::fail("PhotonMode", "q must be finite and >= 0");
    if (!(std::abs(cos_alpha) <= 1.0)) detail::fail("PhotonMode", "|cos_alpha| must be <= 1");
    if (!(omega > 0.0) || !std::isfinite(omega)) detail::fail("PhotonMode", "omega must be finite and > 0");
    if (!(occupancy >= 0.0)) detail::fail("PhotonMode", "occupancy must be >= 0");
  }
};

/// Collision frequencies of photons with electrons, positrons, photons and
/// boundaries, together with the temperatures of the corresponding baths.
struct BathConfig {
  double beta_e = 0.0;
  double beta_p = 0.0;
  double beta_ph = 0.0;
  double beta_b = 0.0;
  double T_c = 1.0;
  double T_ph = 1.0;
  double T_b = 1.0;
  double T = 1.0;  // equilibrium temperature before the fields are applied

  double total() const { return beta_e + beta_p + beta_ph + beta_b; }
  double carriers() const { return beta_e + beta_p; }
  double photon_boundary() const { return beta_ph + beta_b; }

  void validate() const {
    for (double b : {beta_e, beta_p, beta_ph, beta_b}) {
      if (!(b >= 0.0) || !std::isfinite(b)) detail::fail("BathConfig", "collision frequencies must be finite and >= 0");
    }
    for (double t : {T_c, T_ph, T_b, T}) {
      if (!(t > 0.0) || !std::isfinite(t)) detail::fail("BathConfig", "temperatures must be finite and > 0");
    }
    if (!(total() > 0.0)) detail::fail("BathConfig", "total collision frequency must be > 0");
  }

  /// Bath with a single total rate carried by photon-photon collisions.
  static BathConfig uniform(double beta, double temperature) {
    BathConfig b;
    b.beta_ph = beta;
    b.T_c = b.T_ph = b.T_b = b.T = temperature;
    return b;
  }
};

enum class DriftMode { constant, cosine };

/// Drift law u(t): constant u, or u cos(omega_drive t).
struct DriftSpec {
  double u = 0.0;
  DriftMode mode = DriftMode::constant;
  double omega_drive = 0.0;
  double E = 0.0;
  double H = 0.0;

  void validate() const {
    if (!(u >= 0.0) || !std::isfinite(u)) detail::fail("DriftSpec", "u must be finite and >= 0");
    if (mode == DriftMode::cosine && !(omega_drive > 0.0)) {
      detail::fail("DriftSpec", "omega_drive must be > 0 for cosine driving");
    }
  }
};

/// Equilibrium Planck occupancy 1/(exp(omega/T) - 1).
inline double planck_occupancy(double omega, double T) {
  if (!(omega > 0.0)) detail::fail("planck_occupancy", "omega must be > 0, got " + detail::num(omega));
  if (!(T > 0.0)) detail::fail("planck_occupancy", "T must be > 0, got " + detail::num(T));
  return 1.0 / std::expm1(omega / T);
}

/// Planck occupancy at the Doppler-shifted energy omega - u0 q cos(alpha).
inline double drifted_planck_occupancy(PhotonMode const& mode, double u0, double T) {
  mode.validate();
  double const shifted = mode.omega - u0 * mode.q * mode.cos_alpha;
  if (!(shifted > 0.0)) {
    detail::fail<DivergenceError>("drifted_planck_occupancy",
                                  "effective energy " + detail::num(shifted) + " <= 0");
  }
  return planck_occupancy(shifted, T);
}

/// Collision-weighted temperature T_i of the mutual drag system.
/// Electrons and positrons share one weight beta_c = beta_e + beta_p.
inline double mixture_temperature(BathConfig const& bath) {
  bath.validate();
  double const beta = bath.total();
  return (bath.carriers() / beta) * bath.T_c + (bath.beta_ph / beta) * bath.T_ph +
         (bath.beta_b / beta) * bath.T_b;
}

/// x = u q cos(alpha) / omega. Damped for x < 1, threshold at 1, amplified above.
inline double drift_parameter(PhotonMode const& mode, double u) {
  mode.validate();
  return u * mode.q * mode.cos_alpha / mode.omega;
}

}  // namespace dragkin

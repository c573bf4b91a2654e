#pragma once

// Carrier-side quantities: heated temperatures, drift velocities, dressed
// mass, cyclotron frequency and resonance linewidth.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>

#include "dragkin/core.hpp"

namespace dragkin {

struct CarrierSpecies {
  int charge_sign = -1;   // +1 positron, -1 electron
  double m_c = 1.0;       // bare mass
  double nu_ph = 1.0;     // carrier-photon collision frequency at T_i
  double nu_energy = 0.0; // energy relaxation frequency
  double n = 0.0;         // concentration
  double charge = 1.0;    // |e|

  void validate() const {
    if (charge_sign != 1 && charge_sign != -1) detail::fail("CarrierSpecies", "charge_sign must be +1 or -1");
    if (!(m_c > 0.0)) detail::fail("CarrierSpecies", "m_c must be > 0");
    if (!(nu_ph >= 0.0) || !(nu_energy >= 0.0)) detail::fail("CarrierSpecies", "frequencies must be >= 0");
    if (!(n >= 0.0)) detail::fail("CarrierSpecies", "n must be >= 0");
    if (!(charge > 0.0)) detail::fail("CarrierSpecies", "charge must be > 0");
  }
};

enum class FieldGeometry { parallel, transverse };

struct FieldConfig {
  double E = 0.0;
  double H = 0.0;
  double omega = 0.0;
  FieldGeometry geometry = FieldGeometry::parallel;

  void validate() const {
    if (!(E >= 0.0) || !(H >= 0.0) || !(omega >= 0.0)) {
      detail::fail("FieldConfig", "E, H and omega must be >= 0");
    }
  }
};

struct ValidityReport {
  bool valid = false;
  double ratio = 0.0;  // omega / nu_energy, +inf when nu_energy = 0
  bool ratio_infinite = false;
};

/// The wave must oscillate much faster than carriers relax their energy:
/// omega > margin * nu_energy.
inline ValidityReport validity_check(FieldConfig const& field, CarrierSpecies const& species,
                                     double margin = 10.0) {
  ValidityReport r;
  if (species.nu_energy == 0.0) {
    r.ratio = std::numeric_limits<double>::infinity();
    r.ratio_infinite = true;
    r.valid = field.omega > 0.0;
    return r;
  }
  r.ratio = field.omega / species.nu_energy;
  r.valid = field.omega > margin * species.nu_energy;
  return r;
}

/// Fermi-type carrier occupancy 1/(1 + exp((eps - zeta)/T_c)).
inline double carrier_occupancy(double epsilon, double zeta, double T_c) {
  if (!(T_c > 0.0)) detail::fail("carrier_occupancy", "T_c must be > 0");
  double const a = (epsilon - zeta) / T_c;
  // Split on sign so exp never overflows.
  if (a >= 0.0) {
    double const e = std::exp(-a);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(a));
}

/// phi_1 - 1 with phi_1 = (1 - u^2)^(-1/2), free of cancellation at small u.
inline double quantizing_heating_excess(double u) {
  if (!(u >= 0.0) || !(u < 1.0)) detail::fail("quantizing_heating_excess", "requires 0 <= u < c");
  double const s = std::sqrt(1.0 - u * u);
  return u * u / (s * (1.0 + s));
}

/// phi_2 - 1 with phi_2 = (1/2u) ln|(1+u)/(1-u)| = atanh(u)/u.
inline double classical_heating_excess(double u) {
  if (!(u >= 0.0) || !(u < 1.0)) detail::fail("classical_heating_excess", "requires 0 <= u < c");
  if (u < 1e-6) return u * u / 3.0;
  if (u < 0.1) {
    // atanh(u)/u - 1 = sum_{k>=1} u^{2k}/(2k+1)
    double const u2 = u * u;
    double term = u2;
    double sum = 0.0;
    for (int k = 1; k < 40; ++k) {
      double const add = term / (2.0 * k + 1.0);
      sum += add;
      if (add < 1e-18 * sum) break;
      term *= u2;
    }
    return sum;
  }
  return std::atanh(u) / u - 1.0;
}

inline double phi1(double u) { return 1.0 + quantizing_heating_excess(u); }
inline double phi2(double u) { return 1.0 + classical_heating_excess(u); }

/// Carrier temperature under a quantizing magnetic field:
/// T_c = T_i {1 + (V/u - 1)^2 (phi_1 - 1)}.
inline double temperature_quantizing(double T_i, double V, double u) {
  if (!(T_i > 0.0)) detail::fail("temperature_quantizing", "T_i must be > 0");
  if (!(u >= 0.0) || !(u < 1.0)) {
    detail::fail("temperature_quantizing", "drift u = " + detail::num(u) + " outside [0, c)");
  }
  if (u == 0.0) {
    if (V != 0.0) detail::fail("temperature_quantizing", "V/u undefined at u = 0 with V != 0");
    return T_i;
  }
  double const d = V / u - 1.0;
  return T_i * (1.0 + d * d * quantizing_heating_excess(u));
}

/// Carrier temperature in the classical strong-field region:
/// T_c = T_i {1 + V^2/3 + (1 - V/u)(phi_2 - 1)}.
inline double temperature_classical(double T_i, double V, double u) {
  if (!(T_i > 0.0)) detail::fail("temperature_classical", "T_i must be > 0");
  if (!(u >= 0.0) || !(u < 1.0)) {
    detail::fail("temperature_classical", "drift u = " + detail::num(u) + " outside [0, c)");
  }
  // (1 - V/u)(phi_2 - 1) = (u - V) (phi_2 - 1)/u, finite as u -> 0.
  double const excess_over_u = u == 0.0 ? 0.0 : classical_heating_excess(u) / u;
  return T_i * (1.0 + V * V / 3.0 + (u - V) * excess_over_u);
}

/// Hall drift c E / H (in units of c).
inline double hall_drift(FieldConfig const& field) {
  field.validate();
  if (!(field.H > 0.0)) detail::fail("hall_drift", "H must be > 0");
  return field.E / field.H;
}

/// nu_ph(T_i) (1 - u/V): collision frequency reduced by the mutual drag.
inline double drag_corrected_collision_frequency(double nu, double u, double V) {
  if (V == 0.0) detail::fail("drag_corrected_collision_frequency", "V must be non-zero");
  double const nu_drag = nu * (1.0 - u / V);
  if (!(nu_drag > 0.0)) {
    detail::fail("drag_corrected_collision_frequency",
                 "full-drag breakdown, nu_ph(1 - u/V) = " + detail::num(nu_drag));
  }
  return nu_drag;
}

struct DragCorrection {
  double u = 0.0;
  double V = 1.0;
};

/// Complex velocity amplitude per unit field, decomposed along h(h.E),
/// along the part of E perpendicular to h, and along h x E.
struct AcVelocity {
  std::complex<double> parallel;
  std::complex<double> perpendicular;
  std::complex<double> hall;
};

struct ResonanceGuard {
  double relative_tolerance = 1e-9;
};

/// Magnetized complex mobility with Omega = omega + i nu, for the field
/// E(t) = Re(E exp(-i omega t)).
///
/// Solving -i Omega v = (q/m) E + w v x h with w = q H/(m c) gives
///   v_par  = i (q/m) E_par / Omega
///   v_perp = i (q/m) Omega E_perp / (Omega^2 - w^2)
///   v_hall = (q/m) w E_perp / (Omega^2 - w^2)
/// At H = 0 every component is i (q/m) E / Omega, and at omega = 0 it is the
/// DC mobility (q/m) E / nu.
///
/// omega_H is the cyclotron frequency magnitude; the species sign sets its
/// sense of rotation. When `drag` is given, nu is replaced by nu (1 - u/V).
inline AcVelocity drift_velocity_ac(CarrierSpecies const& species, FieldConfig const& field,
                                    double omega_H, double nu,
                                    std::optional<DragCorrection> drag = std::nullopt,
                                    ResonanceGuard guard = {}) {
  species.validate();
  field.validate();
  if (!(nu >= 0.0)) detail::fail("drift_velocity_ac", "nu must be >= 0");
  if (!(omega_H >= 0.0)) detail::fail("drift_velocity_ac", "omega_H must be >= 0");
  if (drag) nu = drag_corrected_collision_frequency(nu, drag->u, drag->V);

  using cd = std::complex<double>;
  cd const Omega{field.omega, nu};
  double const q_over_m = species.charge_sign * species.charge / species.m_c;
  double const w = species.charge_sign * omega_H;
  cd const denom = Omega * Omega - w * w;
  if (std::abs(Omega) == 0.0 || std::abs(denom) <= guard.relative_tolerance * w * w) {
    throw ResonanceError("drift_velocity_ac: evaluation at the cyclotron pole, |Omega^2 - omega_H^2| = " +
                             detail::num(std::abs(denom)),
                         std::abs(denom));
  }
  double const E_par = field.geometry == FieldGeometry::parallel ? field.E : 0.0;
  double const E_perp = field.geometry == FieldGeometry::transverse ? field.E : 0.0;
  cd const i{0.0, 1.0};
  AcVelocity v;
  v.parallel = i * q_over_m * E_par / Omega;
  v.perpendicular = i * q_over_m * Omega * E_perp / denom;
  v.hall = q_over_m * w * E_perp / denom;
  return v;
}

/// DC drift of the dressed carrier for E parallel to H (or H = 0):
/// V = e E beta_c / (m_c nu_ph(1 - u/V) beta_{ph,b}), signed by the charge.
inline double drift_velocity_dc(CarrierSpecies const& species, FieldConfig const& field,
                                BathConfig const& bath, double u, double V) {
  species.validate();
  field.validate();
  if (field.geometry != FieldGeometry::parallel && field.H != 0.0) {
    detail::fail("drift_velocity_dc", "requires E parallel to H or H = 0");
  }
  double const beta_phb = bath.photon_boundary();
  if (!(beta_phb > 0.0)) detail::fail("drift_velocity_dc", "beta_ph + beta_b must be > 0");
  double const nu_drag = drag_corrected_collision_frequency(species.nu_ph, u, V);
  return species.charge_sign * species.charge * field.E * bath.carriers() /
         (species.m_c * nu_drag * beta_phb);
}

/// Drift of the mutual drag system, u = (beta_e/beta) V+ + (beta_p/beta) V-.
inline double coupled_drift(BathConfig const& bath, double V_plus, double V_minus) {
  double const beta = bath.total();
  if (!(beta > 0.0)) detail::fail("coupled_drift", "total collision frequency must be > 0");
  return (bath.beta_e / beta) * V_plus + (bath.beta_p / beta) * V_minus;
}

/// Mass of the dressed carrier, m(T_i) = T_i / c^2.
inline double effective_mass(double T_i) {
  if (!(T_i > 0.0)) detail::fail("effective_mass", "T_i must be > 0");
  return T_i;
}

/// omega_H = e H / (m(T_i) c).
inline double cyclotron_frequency(double H, double T_i, double charge = 1.0) {
  if (!(H >= 0.0)) detail::fail("cyclotron_frequency", "H must be >= 0");
  return charge * H / effective_mass(T_i);
}

/// Width of the cyclotron resonance lines, (3/2)[omega^2/beta_c + beta_ph + beta_b].
inline double resonance_linewidth(double omega, BathConfig const& bath) {
  double const beta_c = bath.carriers();
  if (!(beta_c > 0.0)) detail::fail("resonance_linewidth", "beta_e + beta_p must be > 0");
  return 1.5 * (omega * omega / beta_c + bath.photon_boundary());
}

}  // namespace dragkin

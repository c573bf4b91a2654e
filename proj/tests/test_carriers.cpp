#include "dragkin/carriers.hpp"

#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

namespace dragkin {
namespace {

TEST(ValidityCheck, RatioAgainstMargin) {
  CarrierSpecies s;
  s.nu_energy = 1.0;
  FieldConfig f;
  f.omega = 100.0;
  auto r = validity_check(f, s);
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(r.ratio, 100.0);
  f.omega = 5.0;
  r = validity_check(f, s);
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.ratio, 5.0);
}

TEST(ValidityCheck, ZeroRelaxationIsAlwaysValid) {
  CarrierSpecies s;
  s.nu_energy = 0.0;
  FieldConfig f;
  f.omega = 0.01;
  auto const r = validity_check(f, s);
  EXPECT_TRUE(r.valid);
  EXPECT_TRUE(r.ratio_infinite);
  EXPECT_TRUE(std::isinf(r.ratio));
}

TEST(CarrierOccupancy, Examples) {
  EXPECT_EQ(carrier_occupancy(1.3, 1.3, 0.7), 0.5);
  EXPECT_LT(carrier_occupancy(40.0 * 0.7 + 1.3, 1.3, 0.7), 1e-17);
  EXPECT_NEAR(carrier_occupancy(1.3 + 0.7 * std::log(3.0), 1.3, 0.7), 0.25, 1e-15);
  EXPECT_THROW(carrier_occupancy(1.0, 0.0, 0.0), DomainError);
}

TEST(CarrierOccupancy, MonotoneAndBounded) {
  double prev = 1.0;
  for (double eps = -50.0; eps <= 50.0; eps += 0.25) {
    double const f = carrier_occupancy(eps, 0.0, 1.0);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    EXPECT_LE(f, prev);
    prev = f;
  }
  EXPECT_EQ(carrier_occupancy(1e6, 0.0, 1.0), 0.0);
}

TEST(TemperatureQuantizing, NoHeatingWhenHallDriftEqualsDrift) {
  for (double u : {0.0, 0.1, 0.5, 0.95}) EXPECT_EQ(temperature_quantizing(2.5, u, u), 2.5);
}

TEST(TemperatureQuantizing, SixTenthsOfLightSpeed) {
  EXPECT_EQ(phi1(0.6), 1.25);
  EXPECT_NEAR(temperature_quantizing(1.0, 1.2, 0.6), 1.25, 1e-15);
}

TEST(TemperatureQuantizing, SmallDriftTaylorLimit) {
  // phi_1 - 1 ~ u^2/2, so T_c ~ T_i (1 + (V/u - 1)^2 u^2/2).
  double const u = 1e-4, ratio = 3.0;
  double const expected = 1.0 + (ratio - 1.0) * (ratio - 1.0) * (u * u / 2.0 + 3.0 * u * u * u * u / 8.0);
  EXPECT_NEAR(temperature_quantizing(1.0, ratio * u, u), expected, 1e-16);
  EXPECT_NEAR(temperature_quantizing(1.0, ratio * u, u), 1.0, 1e-7);
}

TEST(TemperatureQuantizing, DomainErrors) {
  EXPECT_THROW(temperature_quantizing(1.0, 0.5, 1.0), DomainError);
  EXPECT_THROW(temperature_quantizing(1.0, 0.5, 1.2), DomainError);
  EXPECT_THROW(temperature_quantizing(1.0, 0.5, 0.0), DomainError);
}

TEST(TemperatureQuantizing, NeverBelowMixtureTemperature) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(1e-6, 0.99), v(0.0, 3.0), t(0.01, 50.0);
  for (int i = 0; i < 1000; ++i) {
    double const Ti = t(rng), speed = u(rng);
    EXPECT_GE(temperature_quantizing(Ti, v(rng), speed), Ti);
    EXPECT_EQ(temperature_quantizing(Ti, speed, speed), Ti);
  }
}

TEST(TemperatureClassical, Limits) {
  EXPECT_NEAR(temperature_classical(1.0, 0.0, 0.5), std::log(3.0), 1e-15);
  EXPECT_NEAR(phi2(0.5), 1.0986122886681098, 1e-15);
  EXPECT_EQ(temperature_classical(2.0, 0.0, 0.0), 2.0);
  double const V = 1e-7;
  EXPECT_NEAR(temperature_classical(1.0, V, V), 1.0 + V * V / 3.0, 1e-18);
  EXPECT_NEAR(temperature_classical(1.0, 0.3, 0.0), 1.0 + 0.03, 1e-15);
  EXPECT_THROW(temperature_classical(1.0, 0.0, 1.0), DomainError);
}

TEST(TemperatureClassical, HeatingExcessSeries) {
  for (double u = 1e-4; u <= 1e-2; u *= 1.2) {
    EXPECT_LT(std::abs(classical_heating_excess(u) - u * u / 3.0), std::pow(u, 4)) << u;
  }
  // Both sides of the branch switch against 40-digit reference values.
  EXPECT_NEAR(classical_heating_excess(0.1 - 1e-12), 0.0033534773106883314039, 1e-17);
  EXPECT_NEAR(classical_heating_excess(0.1), 0.0033534773107558067318, 1e-16);
}

TEST(TemperatureClassical, ContinuousAcrossSeriesCutoff) {
  double const below = temperature_classical(1.0, 0.2, 0.999999e-6);
  double const above = temperature_classical(1.0, 0.2, 1.000001e-6);
  EXPECT_NEAR(below, above, 1e-12);
}

TEST(HallDrift, Examples) {
  EXPECT_EQ(hall_drift({3.0, 3.0, 0.0, FieldGeometry::transverse}), 1.0);
  EXPECT_EQ(hall_drift({0.0, 3.0, 0.0, FieldGeometry::transverse}), 0.0);
  EXPECT_EQ(hall_drift({2.0, 4.0, 0.0, FieldGeometry::transverse}), 0.5);
  EXPECT_THROW(hall_drift({2.0, 0.0, 0.0, FieldGeometry::transverse}), DomainError);
}

TEST(DriftVelocityAc, FreeCarrierIsReactive) {
  CarrierSpecies s;
  s.charge_sign = -1;
  s.m_c = 2.0;
  FieldConfig f{3.0, 0.0, 5.0, FieldGeometry::parallel};
  auto const v = drift_velocity_ac(s, f, 0.0, 0.0);
  EXPECT_NEAR(std::abs(v.parallel), 3.0 / (2.0 * 5.0), 1e-15);
  EXPECT_EQ(v.parallel.real(), 0.0);
}

TEST(DriftVelocityAc, DcLimit) {
  CarrierSpecies s;
  s.charge_sign = -1;
  FieldConfig f{2.0, 0.0, 0.0, FieldGeometry::parallel};
  auto const v = drift_velocity_ac(s, f, 0.0, 4.0);
  EXPECT_NEAR(v.parallel.real(), -0.5, 1e-15);
  EXPECT_NEAR(v.parallel.imag(), 0.0, 1e-15);
}

TEST(DriftVelocityAc, TransversePoleScaling) {
  CarrierSpecies s;
  s.charge_sign = +1;
  FieldConfig f{1.0, 1.0, 2.0, FieldGeometry::transverse};
  auto const v = drift_velocity_ac(s, f, 1.0, 0.0);
  EXPECT_NEAR(std::abs(v.perpendicular), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(std::abs(v.hall), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(v.parallel, std::complex<double>(0.0, 0.0));
}

TEST(DriftVelocityAc, ResonanceGuard) {
  CarrierSpecies s;
  FieldConfig f{1.0, 1.0, 2.0, FieldGeometry::transverse};
  try {
    drift_velocity_ac(s, f, 2.0, 0.0);
    FAIL() << "expected ResonanceError";
  } catch (ResonanceError const& e) {
    EXPECT_LE(e.detuning(), 1e-9 * 4.0);
  }
  // A finite linewidth removes the pole.
  EXPECT_NO_THROW(drift_velocity_ac(s, f, 2.0, 0.1));
  FieldConfig dc{1.0, 0.0, 0.0, FieldGeometry::parallel};
  EXPECT_THROW(drift_velocity_ac(s, dc, 0.0, 0.0), ResonanceError);
}

TEST(DriftVelocityAc, DragCorrectionBreakdown) {
  CarrierSpecies s;
  FieldConfig f{1.0, 0.0, 1.0, FieldGeometry::parallel};
  EXPECT_THROW(drift_velocity_ac(s, f, 0.0, 1.0, DragCorrection{1.0, 1.0}), DomainError);
  auto const v = drift_velocity_ac(s, f, 0.0, 1.0, DragCorrection{0.5, 1.0});
  auto const w = drift_velocity_ac(s, f, 0.0, 0.5);
  EXPECT_EQ(v.parallel, w.parallel);
}

// Independent check: integrate m dv/dt = q E cos(wt) + q v x H - m nu v for a
// single carrier with RK4 and compare the late-time motion to
// Re(v_hat exp(-i w t)).
TEST(DriftVelocityAc, MatchesEquationOfMotion) {
  for (int sign : {-1, +1}) {
    CarrierSpecies s;
    s.charge_sign = sign;
    s.m_c = 1.3;
    s.charge = 0.8;
    double const E = 1.1, H = 1.0, omega = 2.0, nu = 0.7, omega_H = 0.9;
    FieldConfig f{E, H, omega, FieldGeometry::transverse};
    auto const v_hat = drift_velocity_ac(s, f, omega_H, nu);

    // h = z, E along x: perpendicular -> x, hall (h x E) -> y.
    double const qm = sign * s.charge / s.m_c;
    double const w = sign * omega_H;
    auto accel = [&](double t, double vx, double vy, double& ax, double& ay) {
      // v x z = (vy, -vx)
      ax = qm * E * std::cos(omega * t) + w * vy - nu * vx;
      ay = -w * vx - nu * vy;
    };
    double vx = 0.0, vy = 0.0, t = 0.0;
    double const h = 1e-3;
    double const t_end = 60.0;  // nu t >> 1: transient gone
    while (t < t_end - 1e-12) {
      double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
      accel(t, vx, vy, k1x, k1y);
      accel(t + h / 2, vx + h / 2 * k1x, vy + h / 2 * k1y, k2x, k2y);
      accel(t + h / 2, vx + h / 2 * k2x, vy + h / 2 * k2y, k3x, k3y);
      accel(t + h, vx + h * k3x, vy + h * k3y, k4x, k4y);
      vx += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
      vy += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
      t += h;
    }
    std::complex<double> const phase = std::polar(1.0, -omega * t);
    EXPECT_NEAR(vx, (v_hat.perpendicular * phase).real(), 1e-9) << "sign " << sign;
    EXPECT_NEAR(vy, (v_hat.hall * phase).real(), 1e-9) << "sign " << sign;
  }
}

TEST(DriftVelocityDc, Examples) {
  CarrierSpecies s;
  s.charge_sign = +1;
  s.m_c = 1.0;
  s.nu_ph = 1.0;
  BathConfig b{0.5, 0.5, 0.5, 0.5, 1, 1, 1, 1};
  FieldConfig f{1.0, 0.0, 0.0, FieldGeometry::parallel};
  EXPECT_EQ(drift_velocity_dc(s, f, b, 0.0, 1.0), 1.0);
  b.beta_e = 1.0;
  b.beta_p = 1.0;
  EXPECT_EQ(drift_velocity_dc(s, f, b, 0.0, 1.0), 2.0);
  f.E = 0.0;
  EXPECT_EQ(drift_velocity_dc(s, f, b, 0.0, 1.0), 0.0);
}

TEST(DriftVelocityDc, Errors) {
  CarrierSpecies s;
  FieldConfig f{1.0, 0.0, 0.0, FieldGeometry::parallel};
  BathConfig no_ph{1.0, 1.0, 0.0, 0.0, 1, 1, 1, 1};
  EXPECT_THROW(drift_velocity_dc(s, f, no_ph, 0.0, 1.0), DomainError);
  BathConfig b{1.0, 1.0, 1.0, 0.0, 1, 1, 1, 1};
  EXPECT_THROW(drift_velocity_dc(s, f, b, 1.0, 1.0), DomainError);
  EXPECT_THROW(drift_velocity_dc(s, f, b, 2.0, 1.0), DomainError);
  FieldConfig crossed{1.0, 1.0, 0.0, FieldGeometry::transverse};
  EXPECT_THROW(drift_velocity_dc(s, crossed, b, 0.0, 1.0), DomainError);
}

TEST(DriftVelocityAc, AgreesWithDcAtZeroFrequency) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> pos(0.1, 5.0), frac(0.0, 0.9);
  for (int i = 0; i < 100; ++i) {
    CarrierSpecies s;
    s.charge_sign = (i % 2) ? 1 : -1;
    s.m_c = pos(rng);
    s.nu_ph = pos(rng);
    s.charge = pos(rng);
    BathConfig b{pos(rng), pos(rng), pos(rng), pos(rng), 1, 1, 1, 1};
    FieldConfig f{pos(rng), 0.0, 0.0, FieldGeometry::parallel};
    double const V = pos(rng);
    double const u = frac(rng) * V;
    double const dc = drift_velocity_dc(s, f, b, u, V);
    // Effective momentum relaxation rate of the dressed carrier.
    double const nu = s.nu_ph * b.photon_boundary() / b.carriers();
    auto const ac = drift_velocity_ac(s, f, 0.0, nu, DragCorrection{u, V});
    EXPECT_NEAR(ac.parallel.real(), dc, 1e-12 * std::abs(dc));
    EXPECT_NEAR(ac.parallel.imag(), 0.0, 1e-12 * std::abs(dc));
  }
}

TEST(CoupledDrift, Examples) {
  BathConfig single{2.0, 0.0, 0.0, 0.0, 1, 1, 1, 1};
  EXPECT_EQ(coupled_drift(single, 0.7, 0.3), 0.7);
  BathConfig sym{1.0, 1.0, 0.0, 0.0, 1, 1, 1, 1};
  EXPECT_EQ(coupled_drift(sym, 0.4, -0.4), 0.0);
  BathConfig w{3.0, 1.0, 0.0, 0.0, 1, 1, 1, 1};
  EXPECT_NEAR(coupled_drift(w, 1.0, 0.2), 0.8, 1e-15);
  EXPECT_THROW(coupled_drift(BathConfig{0, 0, 0, 0, 1, 1, 1, 1}, 1.0, 1.0), DomainError);
}

TEST(EffectiveMass, IdentityInNaturalUnits) {
  EXPECT_EQ(effective_mass(1.0), 1.0);
  EXPECT_EQ(effective_mass(2.0 * 0.3), 2.0 * effective_mass(0.3));
  EXPECT_EQ(effective_mass(0.511), 0.511);
  EXPECT_THROW(effective_mass(0.0), DomainError);
}

TEST(CyclotronFrequency, Examples) {
  EXPECT_EQ(cyclotron_frequency(0.0, 1.0), 0.0);
  EXPECT_EQ(cyclotron_frequency(1.0, 1.0), 1.0);
  EXPECT_EQ(cyclotron_frequency(3.0, 4.0), 2.0 * cyclotron_frequency(3.0, 8.0));
}

TEST(CyclotronFrequency, MassTimesFrequencyIsChargeTimesField) {
  for (double H : {0.0, 0.25, 1.0, 3.0}) {
    for (double T : {0.5, 1.0, 2.0, 4.0}) {
      for (double e : {1.0, 0.5, 2.0}) {
        EXPECT_EQ(cyclotron_frequency(H, T, e) * effective_mass(T), e * H);
      }
    }
  }
}

TEST(ResonanceLinewidth, Examples) {
  BathConfig b{2.0, 2.0, 1.0, 0.5, 1, 1, 1, 1};
  EXPECT_EQ(resonance_linewidth(0.0, b), 1.5 * 1.5);
  EXPECT_NEAR(resonance_linewidth(std::sqrt(4.0 * 1.5), b), 3.0 * 1.5, 1e-14);
  BathConfig c{4.0, 0.0, 1.0, 0.0, 1, 1, 1, 1};
  EXPECT_EQ(resonance_linewidth(2.0, c), 3.0);
  EXPECT_THROW(resonance_linewidth(1.0, BathConfig{0, 0, 1, 0, 1, 1, 1, 1}), DomainError);
}

TEST(Carriers, PureFunctionsAreBitReproducible) {
  CarrierSpecies s;
  FieldConfig f{1.3, 0.7, 1.9, FieldGeometry::transverse};
  auto const a = drift_velocity_ac(s, f, 0.4, 0.3);
  auto const b = drift_velocity_ac(s, f, 0.4, 0.3);
  EXPECT_EQ(a.perpendicular, b.perpendicular);
  EXPECT_EQ(a.hall, b.hall);
  EXPECT_EQ(temperature_classical(1.1, 0.3, 0.4), temperature_classical(1.1, 0.3, 0.4));
}

}  // namespace
}  // namespace dragkin

#pragma once

// Non-stationary photon occupancy N(q,t) of one mode coupled to the drifting
// carrier bath.
//
// The occupancy obeys the rate equation
//   dN/dt = gamma_q(t) N + beta N_source,   gamma_q(t) = beta (x(t) - 1),
// where x is the drift parameter. Constant drift gives the closed form
//   N(t) = [N0 - N_s] exp(gamma_q t) + N_s,   N_s = N_source / (1 - x),
// which is replaced by its second-order series near the threshold x = 1.
// Cosine drift u cos(omega t) is handled by quadrature of the exact
// integrating-factor solution.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dragkin/core.hpp"

namespace dragkin {

enum class Regime { damped, threshold, amplified };

inline char const* to_string(Regime r) {
  switch (r) {
    case Regime::damped: return "damped";
    case Regime::threshold: return "threshold";
    case Regime::amplified: return "amplified";
  }
  return "?";
}

struct KineticsOptions {
  double threshold_band = 1e-6;     // |x - 1| at or below which the series is used
  double quadrature_tolerance = 1e-12;
  double oracle_tolerance = 1e-9;   // step-halving agreement required by ode_oracle
};

struct EvolutionProblem {
  PhotonMode mode;
  BathConfig bath;
  DriftSpec drift;
  double N0 = 0.0;
  double N_source = 0.0;
  std::vector<double> t_grid;

  void validate() const {
    mode.validate();
    bath.validate();
    drift.validate();
    if (!(N0 >= 0.0) || !std::isfinite(N0)) detail::fail("EvolutionProblem", "N0 must be finite and >= 0");
    if (!(N_source >= 0.0) || !std::isfinite(N_source)) {
      detail::fail("EvolutionProblem", "N_source must be finite and >= 0");
    }
    if (t_grid.empty()) detail::fail("EvolutionProblem", "t_grid is empty");
    if (!(t_grid.front() >= 0.0)) detail::fail("EvolutionProblem", "t_grid must start at t >= 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
      if (!(t_grid[i] > t_grid[i - 1])) detail::fail("EvolutionProblem", "t_grid must be strictly increasing");
    }
  }
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<double> occupancies;
  Regime regime = Regime::damped;
  double gamma_q = 0.0;
};

inline Regime classify(double x, KineticsOptions const& opt = {}) {
  if (std::abs(x - 1.0) <= opt.threshold_band) return Regime::threshold;
  return x < 1.0 ? Regime::damped : Regime::amplified;
}

/// gamma_q = beta (x - 1).
inline double growth_increment(PhotonMode const& mode, BathConfig const& bath, double u) {
  double const beta = bath.total();
  if (!(beta > 0.0)) detail::fail("growth_increment", "total collision frequency must be > 0");
  return beta * (drift_parameter(mode, u) - 1.0);
}

/// Spatial gain of a photon stream, Gamma_q = gamma_q / c.
inline double amplification_coefficient(double gamma_q) { return gamma_q; }

/// Stationary occupancy N_source / (1 - x), reached only below threshold.
inline double stationary_limit(PhotonMode const& mode, double u, double N_source) {
  double const x = drift_parameter(mode, u);
  if (!(x < 1.0)) {
    detail::fail<DivergenceError>("stationary_limit",
                                  "no stationary state for x = " + detail::num(x) + " >= 1, N grows without bound");
  }
  return N_source / (1.0 - x);
}

namespace detail {

inline void check_non_negative(std::vector<double> const& n, char const* where) {
  for (double v : n) {
    if (!(v >= 0.0)) throw InternalError(std::string(where) + ": negative occupancy " + num(v));
  }
}

// Closed form in the drift parameter x, or the threshold series when
// |x - 1| <= band.
inline double constant_field_occupancy(double x, double beta, double N0, double N_source, double t,
                                       double band) {
  double const gamma = beta * (x - 1.0);
  if (std::abs(x - 1.0) <= band) {
    double const g = gamma * t;
    return N0 * (1.0 + g + 0.5 * g * g) + N_source * beta * t * (1.0 + 0.5 * g);
  }
  double const Ns = N_source / (1.0 - x);
  return (N0 - Ns) * std::exp(gamma * t) + Ns;
}

// Exponent beta [t - x sin(omega t)/omega] of the cosine-drift solution.
inline double ac_phase(double beta, double x, double omega, double t) {
  return beta * (t - x * std::sin(omega * t) / omega);
}

}  // namespace detail

/// Damping exponent beta [t - x sin(omega t)/omega] for cosine driving.
inline double ac_damping_exponent(double beta, double x, double omega, double t) {
  return detail::ac_phase(beta, x, omega, t);
}

/// Occupancy under a constant drift.
inline EvolutionResult evolve_constant_field(EvolutionProblem const& p, KineticsOptions const& opt = {}) {
  p.validate();
  if (p.drift.mode != DriftMode::constant) detail::fail("evolve_constant_field", "drift must be constant");
  double const beta = p.bath.total();
  double const x = drift_parameter(p.mode, p.drift.u);

  EvolutionResult r;
  r.times = p.t_grid;
  r.gamma_q = beta * (x - 1.0);
  r.regime = classify(x, opt);
  r.occupancies.reserve(p.t_grid.size());
  for (double t : p.t_grid) {
    r.occupancies.push_back(
        detail::constant_field_occupancy(x, beta, p.N0, p.N_source, t, opt.threshold_band));
  }
  detail::check_non_negative(r.occupancies, "evolve_constant_field");
  return r;
}

/// Occupancy of a photon stream whose initial value is the drifted Planck
/// occupancy N_init_drifted; otherwise identical to the constant-field case.
inline EvolutionResult evolve_stream(EvolutionProblem p, double N_init_drifted,
                                     KineticsOptions const& opt = {}) {
  p.N0 = N_init_drifted;
  return evolve_constant_field(p, opt);
}

/// Occupancy under cosine drift u cos(omega t):
///   N(t) = N0 e^{-Phi(t)} + beta N_source int_0^t e^{Phi(tau) - Phi(t)} dtau,
///   Phi(t) = beta [t - x sin(omega t)/omega],
/// with x evaluated at the peak drift u.
inline EvolutionResult evolve_ac_field(EvolutionProblem const& p, KineticsOptions const& opt = {}) {
  p.validate();
  if (p.drift.mode != DriftMode::cosine) detail::fail("evolve_ac_field", "drift must be cosine");
  double const beta = p.bath.total();
  double const omega = p.drift.omega_drive;
  double const x = drift_parameter(p.mode, p.drift.u);

  EvolutionResult r;
  r.times = p.t_grid;
  r.gamma_q = beta * (x - 1.0);
  r.regime = classify(x, opt);
  r.occupancies.reserve(p.t_grid.size());

  // Panels no longer than half a drive period or one relaxation time keep
  // each Gauss-Kronrod call smooth.
  double const panel = std::min(std::numbers::pi / omega, 1.0 / beta);
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;

  for (double t : p.t_grid) {
    double const phi_t = detail::ac_phase(beta, x, omega, t);
    auto integrand = [&](double tau) { return std::exp(detail::ac_phase(beta, x, omega, tau) - phi_t); };
    double integral = 0.0;
    double err_total = 0.0;
    double a = 0.0;
    while (a < t) {
      double const b = std::min(t, a + panel);
      double err = 0.0;
      double const v = Quad::integrate(integrand, a, b, 15, opt.quadrature_tolerance, &err);
      integral += v;
      err_total += err;
      a = b;
    }
    if (err_total > 1e3 * opt.quadrature_tolerance * std::max(1.0, std::abs(integral))) {
      throw NumericError("evolve_ac_field: quadrature did not converge at t = " + detail::num(t), err_total);
    }
    r.occupancies.push_back(p.N0 * std::exp(-phi_t) + beta * p.N_source * integral);
  }
  detail::check_non_negative(r.occupancies, "evolve_ac_field");
  return r;
}

namespace detail {

// Classic RK4 on dN/dt = gamma(t) N + beta N_source, sampled on the grid.
template <class Gamma>
std::vector<double> rk4_rate_equation(Gamma&& gamma, double beta, double N_source, double N0,
                                      std::span<double const> grid, double step) {
  std::vector<double> out;
  out.reserve(grid.size());
  auto rhs = [&](double t, double n) { return gamma(t) * n + beta * N_source; };
  double t = 0.0;
  double n = N0;
  for (double target : grid) {
    double const span = target - t;
    if (span > 0.0) {
      auto const steps = static_cast<long>(std::ceil(span / step));
      double const h = span / static_cast<double>(steps);
      for (long k = 0; k < steps; ++k) {
        double const t0 = t + static_cast<double>(k) * h;
        double const k1 = rhs(t0, n);
        double const k2 = rhs(t0 + 0.5 * h, n + 0.5 * h * k1);
        double const k3 = rhs(t0 + 0.5 * h, n + 0.5 * h * k2);
        double const k4 = rhs(t0 + h, n + h * k3);
        n += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      t = target;
    }
    out.push_back(n);
  }
  return out;
}

}  // namespace detail

/// Brute-force fourth-order integration of the underlying rate equation,
/// used as ground truth for the closed forms. Integrates with `step` and
/// `step/2` and fails unless the two agree to the oracle tolerance.
inline EvolutionResult ode_oracle(EvolutionProblem const& p, double step, KineticsOptions const& opt = {}) {
  p.validate();
  if (!(step > 0.0)) detail::fail("ode_oracle", "step must be > 0");
  double const beta = p.bath.total();
  double const x = drift_parameter(p.mode, p.drift.u);
  double const omega = p.drift.omega_drive;
  bool const ac = p.drift.mode == DriftMode::cosine;
  auto gamma = [&](double t) { return ac ? beta * (x * std::cos(omega * t) - 1.0) : beta * (x - 1.0); };

  auto const coarse = detail::rk4_rate_equation(gamma, beta, p.N_source, p.N0, p.t_grid, step);
  auto const fine = detail::rk4_rate_equation(gamma, beta, p.N_source, p.N0, p.t_grid, 0.5 * step);
  double worst = 0.0;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    double const scale = std::max(1.0, std::abs(fine[i]));
    worst = std::max(worst, std::abs(fine[i] - coarse[i]) / scale);
  }
  if (worst > opt.oracle_tolerance) {
    throw NumericError("ode_oracle: step halving changed the result by " + detail::num(worst), worst);
  }

  EvolutionResult r;
  r.times = p.t_grid;
  r.occupancies = fine;
  r.gamma_q = beta * (x - 1.0);
  r.regime = classify(x, opt);
  return r;
}

}  // namespace dragkin

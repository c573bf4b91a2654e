#pragma once

// Spectral model of a light pulse crossing an absorbing barrier or an
// amplifying medium.
//
// A pulse is a set of spectral amplitudes A_k on a uniform frequency grid.
// Its complex envelope relative to the carrier omega_bar is
//   e(t) = sum_k A_k exp(-i (omega_k - omega_bar) t),
// periodic with period 2 pi / d_omega. A barrier of length L multiplies each
// amplitude by |H(omega)| exp(i omega L), so an all-pass barrier delays the
// envelope by exactly L (c = 1).
//
// The per-mode gain is g(omega) = beta (omega/omega_ref - 1): modes above
// omega_ref grow in an amplifier and pass freely through an absorber, modes
// below it are attenuated.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "dragkin/core.hpp"

namespace dragkin {

struct PulseSpec {
  std::vector<double> omega_grid;
  std::vector<std::complex<double>> amplitudes;
  double omega_bar = 0.0;
  double duration = 0.0;

  std::size_t size() const { return omega_grid.size(); }

  double power() const {
    double p = 0.0;
    for (auto const& a : amplitudes) p += std::norm(a);
    return p;
  }

  /// Mean spacing of the frequency grid.
  double spacing() const {
    return (omega_grid.back() - omega_grid.front()) / static_cast<double>(omega_grid.size() - 1);
  }

  /// Period of the synthesized envelope.
  double period() const { return 2.0 * std::numbers::pi / spacing(); }

  void validate() const {
    if (omega_grid.size() != amplitudes.size()) detail::fail("PulseSpec", "grid and amplitudes differ in length");
    if (omega_grid.size() < 16) detail::fail("PulseSpec", "at least 16 spectral samples are required");
    for (std::size_t i = 1; i < omega_grid.size(); ++i) {
      if (!(omega_grid[i] > omega_grid[i - 1])) detail::fail("PulseSpec", "omega_grid must be strictly increasing");
    }
    if (!(omega_bar >= omega_grid.front() && omega_bar <= omega_grid.back())) {
      detail::fail("PulseSpec", "omega_bar outside the grid");
    }
    if (!(power() > 0.0)) detail::fail("PulseSpec", "total spectral power must be > 0");
    if (!(duration > 0.0)) detail::fail("PulseSpec", "duration must be > 0");
  }
};

enum class BarrierKind { absorber, amplifier };

struct BarrierSpec {
  double length = 0.0;
  double beta = 0.0;
  BarrierKind kind = BarrierKind::absorber;
  double omega_ref = 1.0;

  /// g(omega) = beta (omega/omega_ref - 1), per unit length.
  double gain(double omega) const { return beta * (omega / omega_ref - 1.0); }

  void validate() const {
    if (!(length >= 0.0)) detail::fail("BarrierSpec", "length must be >= 0");
    if (!(beta >= 0.0)) detail::fail("BarrierSpec", "beta must be >= 0");
    if (!(omega_ref > 0.0)) detail::fail("BarrierSpec", "omega_ref must be > 0");
  }
};

/// Gaussian spectral envelope exp(-(omega - omega_bar)^2 / (2 width^2)) on n
/// uniform samples spanning +-5 widths, normalized to unit power. A non-zero
/// `chirp` adds the spectral phase chirp (omega - omega_bar)^2 / 2, which
/// spreads the frequencies in time: for chirp < 0 the leading edge carries
/// the higher frequencies.
inline PulseSpec build_pulse_spectrum(double omega_bar, double width, std::size_t n, double chirp = 0.0) {
  if (!(width > 0.0)) detail::fail("build_pulse_spectrum", "width must be > 0");
  if (n < 16) detail::fail("build_pulse_spectrum", "n must be >= 16");
  if (!(omega_bar > 3.0 * width)) detail::fail("build_pulse_spectrum", "omega_bar must exceed 3 widths");
  double const lo = omega_bar - 5.0 * width;
  if (!(lo > 0.0)) {
    detail::fail("build_pulse_spectrum", "grid would reach omega = " + detail::num(lo) + " <= 0");
  }
  PulseSpec p;
  p.omega_bar = omega_bar;
  p.duration = std::sqrt(1.0 / (width * width) + chirp * chirp * width * width);
  p.omega_grid.resize(n);
  p.amplitudes.resize(n);
  double const step = 10.0 * width / static_cast<double>(n - 1);
  double norm = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double const omega = lo + step * static_cast<double>(k);
    double const d = omega - omega_bar;
    p.omega_grid[k] = omega;
    p.amplitudes[k] = std::polar(std::exp(-d * d / (2.0 * width * width)), 0.5 * chirp * d * d);
    norm += std::norm(p.amplitudes[k]);
  }
  double const scale = 1.0 / std::sqrt(norm);
  for (auto& a : p.amplitudes) a *= scale;
  return p;
}

/// Complex transfer of the barrier at one frequency, gain times phase advance omega L.
inline std::complex<double> barrier_response(BarrierSpec const& barrier, double omega) {
  double const gL = barrier.gain(omega) * barrier.length;
  double magnitude = 1.0;
  if (barrier.kind == BarrierKind::amplifier) {
    magnitude = std::exp(gL);
  } else if (omega < barrier.omega_ref) {
    magnitude = std::exp(-std::abs(gL));
  }
  return std::polar(magnitude, omega * barrier.length);
}

inline PulseSpec barrier_transfer(PulseSpec const& pulse, BarrierSpec const& barrier) {
  pulse.validate();
  barrier.validate();
  PulseSpec out = pulse;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.amplitudes[k] *= barrier_response(barrier, out.omega_grid[k]);
  }
  return out;
}

/// Complex envelope e(t) at the requested times.
inline std::vector<std::complex<double>> synthesize_envelope(PulseSpec const& pulse, std::span<double const> times) {
  std::vector<std::complex<double>> e(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    std::complex<double> sum{};
    for (std::size_t k = 0; k < pulse.size(); ++k) {
      sum += pulse.amplitudes[k] * std::polar(1.0, -(pulse.omega_grid[k] - pulse.omega_bar) * times[j]);
    }
    e[j] = sum;
  }
  return e;
}

/// |e(t)|^2 sampled on a uniform time grid.
struct Envelope {
  std::vector<double> times;
  std::vector<double> intensity;
};

inline Envelope sample_envelope(PulseSpec const& pulse, double t_start, double t_span, std::size_t samples) {
  Envelope env;
  env.times.resize(samples);
  double const dt = t_span / static_cast<double>(samples);
  for (std::size_t j = 0; j < samples; ++j) env.times[j] = t_start + dt * static_cast<double>(j);
  auto const e = synthesize_envelope(pulse, env.times);
  env.intensity.resize(samples);
  for (std::size_t j = 0; j < samples; ++j) env.intensity[j] = std::norm(e[j]);
  return env;
}

/// Time of the maximum of |e|^2, refined by a parabola through the discrete
/// maximum and its neighbours.
inline double peak_time(Envelope const& env) {
  auto const& y = env.intensity;
  if (y.size() < 3) throw NumericError("peak_time: need at least 3 samples", static_cast<double>(y.size()));
  auto const [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
  double const hi = *hi_it;
  if (!(hi > 0.0) || hi - *lo_it <= 1e-12 * hi) {
    throw NumericError("peak_time: envelope is flat, no resolvable peak", hi - *lo_it);
  }
  auto const i = static_cast<std::size_t>(hi_it - y.begin());
  double const dt = env.times[1] - env.times[0];
  if (i == 0 || i + 1 == y.size()) return env.times[i];
  double const ym = y[i - 1], y0 = y[i], yp = y[i + 1];
  double const curvature = ym - 2.0 * y0 + yp;
  double shift = curvature < 0.0 ? 0.5 * (ym - yp) / curvature : 0.0;
  return env.times[i] + std::clamp(shift, -0.5, 0.5) * dt;
}

struct PropagateOptions {
  double samples_per_duration = 16.0;
};

struct Propagation {
  PulseSpec output;
  Envelope input_envelope;   // one period centred on t = 0
  Envelope output_envelope;  // one period centred on the vacuum arrival t = L
  double t_peak_in = 0.0;
  double t_peak_out = 0.0;
};

/// Sends a pulse through the barrier and locates the envelope peaks before
/// and after. Deterministic for a fixed spectral grid.
inline Propagation propagate(PulseSpec const& pulse, BarrierSpec const& barrier, PropagateOptions opt = {}) {
  pulse.validate();
  barrier.validate();
  Propagation r;
  r.output = barrier_transfer(pulse, barrier);
  double const window = pulse.period();
  auto const samples = std::max<std::size_t>(
      2 * pulse.size(), static_cast<std::size_t>(std::ceil(opt.samples_per_duration * window / pulse.duration)));
  r.input_envelope = sample_envelope(pulse, -0.5 * window, window, samples);
  r.output_envelope = sample_envelope(r.output, barrier.length - 0.5 * window, window, samples);
  r.t_peak_in = peak_time(r.input_envelope);
  r.t_peak_out = peak_time(r.output_envelope);
  return r;
}

struct ApparentVelocity {
  double value = 0.0;     // in units of c
  bool infinite = false;  // zero transit time
  bool negative = false;  // output peak leaves before the input peak arrives
};

inline ApparentVelocity apparent_velocity(double t_peak_in, double t_peak_out, double length) {
  ApparentVelocity v;
  double const transit = t_peak_out - t_peak_in;
  if (transit == 0.0) {
    v.infinite = true;
    v.value = std::numeric_limits<double>::infinity();
    return v;
  }
  v.value = length / transit;
  v.negative = v.value < 0.0;
  return v;
}

enum class AmplifierRegime { shape_preserving, reshaping };

inline char const* to_string(AmplifierRegime r) {
  return r == AmplifierRegime::shape_preserving ? "shape_preserving" : "reshaping";
}

/// The pulse keeps its form only if photons re-thermalize between two gain
/// events, delta_t > tau_phph; the boundary counts as reshaping.
inline AmplifierRegime amplifier_regime(double delta_t, double tau_phph) {
  if (!(delta_t > 0.0) || !(tau_phph > 0.0)) detail::fail("amplifier_regime", "times must be > 0");
  return delta_t > tau_phph ? AmplifierRegime::shape_preserving : AmplifierRegime::reshaping;
}

/// Shape similarity of two equally sampled periodic envelopes: the largest
/// normalized circular cross-correlation over all lags.
inline double envelope_correlation(std::span<double const> a, std::span<double const> b) {
  if (a.size() != b.size() || a.empty()) detail::fail("envelope_correlation", "envelopes must have equal non-zero length");
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) detail::fail("envelope_correlation", "envelope has zero norm");
  std::size_t const n = a.size();
  double best = -1.0;
  for (std::size_t lag = 0; lag < n; ++lag) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[(i + lag) % n];
    best = std::max(best, s);
  }
  return best / std::sqrt(na * nb);
}

/// RMS width of |e|^2 about its centroid.
inline double rms_duration(Envelope const& env) {
  double w = 0.0, m1 = 0.0;
  for (std::size_t j = 0; j < env.times.size(); ++j) {
    w += env.intensity[j];
    m1 += env.intensity[j] * env.times[j];
  }
  double const mean = m1 / w;
  double m2 = 0.0;
  for (std::size_t j = 0; j < env.times.size(); ++j) {
    double const d = env.times[j] - mean;
    m2 += env.intensity[j] * d * d;
  }
  return std::sqrt(m2 / w);
}

/// RMS width of the spectral power |A|^2 about its centroid.
inline double rms_bandwidth(PulseSpec const& pulse) {
  double w = 0.0, m1 = 0.0;
  for (std::size_t k = 0; k < pulse.size(); ++k) {
    w += std::norm(pulse.amplitudes[k]);
    m1 += std::norm(pulse.amplitudes[k]) * pulse.omega_grid[k];
  }
  double const mean = m1 / w;
  double m2 = 0.0;
  for (std::size_t k = 0; k < pulse.size(); ++k) {
    double const d = pulse.omega_grid[k] - mean;
    m2 += std::norm(pulse.amplitudes[k]) * d * d;
  }
  return std::sqrt(m2 / w);
}

}  // namespace dragkin

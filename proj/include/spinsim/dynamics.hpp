#pragma once

// NMR experiment simulation on deviation density matrices: preparation with
// gradient crushing, pulse/delay propagation, FID acquisition and spectrum
// synthesis.
//
// Detection: s(t) = Tr(rho(t) (sigma_x + i sigma_y)^obs) / 2^n, demodulated
// into the rotating frame of the observed spin, so a unit sigma_x term gives
// a unit constant signal and its line sits at 0 Hz.

#include "spinsim/compiler.hpp"
#include "spinsim/pauli.hpp"
#include "spinsim/pulse_sequence.hpp"
#include "spinsim/spin_system.hpp"

#include <unsupported/Eigen/FFT>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace spinsim {

/// Hermitian traceless operator (deviation density matrix), dense-backed.
/// The Pauli-sum view is available through terms().
struct DeviationState {
  int n = 0;
  Matrix rho;

  static DeviationState zero(int n) {
    detail::check_dense_size(n);
    const std::int64_t dim = std::int64_t{1} << n;
    return DeviationState{n, Matrix::Zero(dim, dim)};
  }

  static DeviationState from_term(const PauliTerm& t) {
    return DeviationState{t.n(), to_dense(t)};
  }

  static DeviationState from_sum(const OperatorSum& s) {
    return DeviationState{s.n(), to_dense(s)};
  }

  double hermiticity_error() const { return (rho - rho.adjoint()).norm(); }
  double trace_error() const { return std::abs(rho.trace()); }
  double norm() const { return rho.norm(); }

  /// Pauli-sum decomposition (coefficient of P is Tr(rho P)/2^n);
  /// coefficients below `tol` are dropped.
  OperatorSum terms(double tol = 1e-12) const {
    OperatorSum out(n);
    const std::uint32_t strings = 1u << (2 * n);
    for (std::uint32_t code = 0; code < strings; ++code) {
      PauliTerm probe(n);
      for (int i = 1; i <= n; ++i)
        probe.set_axis(i, static_cast<Axis>(code >> (2 * (i - 1)) & 3u));
      Complex c = trace_with(probe);
      if (std::abs(c) > tol) {
        probe.set_coeff(c);
        out.add(probe);
      }
    }
    return out;
  }

  /// Tr(rho P)/2^n as a complex number (P with unit coefficient).
  Complex trace_with(const PauliTerm& p) const {
    const std::int64_t dim = std::int64_t{1} << n;
    std::uint32_t flip = p.transverse_mask();
    Complex tr = 0.0;
    for (std::int64_t r = 0; r < dim; ++r) {
      std::int64_t c = r ^ flip;
      Complex v = p.coeff();
      for (int i = 1; i <= n; ++i)
        v *= detail::pauli_entry(p.axis(i), static_cast<int>(r >> (i - 1) & 1));
      tr += rho(c, r) * v;
    }
    return tr / static_cast<double>(dim);
  }
};

inline double expectation(const DeviationState& state, const PauliTerm& p) {
  if (state.n != p.n())
    throw std::invalid_argument("expectation: spin count mismatch");
  return expectation(state.rho, p);
}

/// Ideal z-gradient: dephases every component with net coherence order != 0.
/// The order of matrix element |r><c| is popcount(c) - popcount(r), so the
/// filter is exact and idempotent; zero-quantum terms survive.
inline DeviationState gradient_crush(const DeviationState& state) {
  DeviationState out = state;
  const std::int64_t dim = std::int64_t{1} << state.n;
  for (std::int64_t r = 0; r < dim; ++r)
    for (std::int64_t c = 0; c < dim; ++c)
      if (std::popcount(static_cast<std::uint64_t>(r)) !=
          std::popcount(static_cast<std::uint64_t>(c)))
        out.rho(r, c) = 0.0;
  return out;
}

/// rho -> U rho U^dag with U the exact rotation of the pulse.
inline DeviationState apply_pulse(const DeviationState& state, const Pulse& pulse) {
  detail::validate_pulse(pulse, state.n);
  Axis base = (pulse.axis == RotationAxis::PlusX || pulse.axis == RotationAxis::MinusX)
                  ? Axis::X
                  : (pulse.axis == RotationAxis::PlusY || pulse.axis == RotationAxis::MinusY)
                        ? Axis::Y
                        : Axis::Z;
  const double theta = axis_sign(pulse.axis) * pulse.angle / 2.0;
  DeviationState out = state;
  for (int s : pulse.spins) {
    Matrix u = exp_pauli(PauliTerm::single(state.n, s, base), theta).u;
    out.rho = u * out.rho * u.adjoint();
  }
  return out;
}

namespace detail {

inline DeviationState evolve_diagonal(const DeviationState& state,
                                      const Eigen::VectorXd& diag, double t) {
  const std::int64_t dim = std::int64_t{1} << state.n;
  Eigen::VectorXcd phases(dim);
  for (std::int64_t r = 0; r < dim; ++r)
    phases(r) = std::exp(Complex{0.0, -diag(r) * t});
  DeviationState out = state;
  out.rho = phases.asDiagonal() * out.rho * phases.conjugate().asDiagonal();
  return out;
}

}  // namespace detail

/// Free evolution under the named coupling term only.
inline DeviationState evolve(const DeviationState& state, const SpinSystem& sys,
                             double t, int i, int j) {
  if (t < 0.0) throw std::invalid_argument("evolve: negative time");
  return detail::evolve_diagonal(state, coupling_diagonal(sys, i, j), t);
}

/// Free evolution under the full internal Hamiltonian (offsets + couplings).
inline DeviationState evolve(const DeviationState& state, const SpinSystem& sys,
                             double t) {
  if (t < 0.0) throw std::invalid_argument("evolve: negative time");
  return detail::evolve_diagonal(state, internal_diagonal(sys), t);
}

/// Folds pulses, delays and gradients over the state in event order.
inline DeviationState apply_sequence(const DeviationState& state,
                                     const PulseSequence& seq, const SpinSystem& sys,
                                     EvolutionMode mode) {
  if (state.n != seq.n || seq.n != sys.n())
    throw std::invalid_argument("apply_sequence: spin count mismatch");
  DeviationState cur = state;
  for (const auto& e : seq.events) {
    if (const auto* p = std::get_if<Pulse>(&e)) {
      cur = apply_pulse(cur, *p);
    } else if (const auto* d = std::get_if<Delay>(&e)) {
      detail::validate_delay(*d, seq.n);
      if (!d->full_internal && sys.j(d->i, d->j) == 0.0)
        throw std::invalid_argument("delay references an uncoupled edge (" +
                                    std::to_string(d->i) + "," + std::to_string(d->j) +
                                    ")");
      if (d->full_internal || mode == EvolutionMode::Realistic)
        cur = evolve(cur, sys, d->seconds);
      else
        cur = evolve(cur, sys, d->seconds, d->i, d->j);
    } else {
      cur = gradient_crush(cur);
    }
  }
  return cur;
}

/// Thermal-equilibrium preparation: from sum_i sigma_z^i, excite every spin
/// except `keep` with a [pi/2]_y pulse, then crush. The result is
/// sigma_z^keep exactly.
inline DeviationState prepare_initial(const SpinSystem& sys, int keep) {
  if (keep < 1 || keep > sys.n())
    throw std::invalid_argument("prepare_initial: spin out of range");
  OperatorSum eq(sys.n());
  for (int i = 1; i <= sys.n(); ++i)
    eq.add(PauliTerm::single(sys.n(), i, Axis::Z));
  DeviationState state = DeviationState::from_sum(eq);
  std::vector<int> others;
  for (int i = 1; i <= sys.n(); ++i)
    if (i != keep) others.push_back(i);
  if (!others.empty()) {
    state = apply_pulse(
        state, detail::make_pulse(others, RotationAxis::PlusY, detail::kHalfPi));
  }
  return gradient_crush(state);
}

/// Complex time series of the detected transverse magnetization.
struct FidSignal {
  double dwell_s = 0.0;
  std::vector<Complex> samples;
  std::vector<int> observed;  // observed spin set
};

struct Spectrum {
  std::vector<double> freq_hz;  // ascending, observed spin's offset at 0
  std::vector<Complex> amp;     // real = absorptive under the chosen phasing
};

struct AcquisitionConfig {
  int npoints = 4096;
  double dwell_s = 1e-3;
  double linewidth_hz = 1.0;  // exponential apodization; 0 disables
};

/// Samples s(t_m) = Tr(rho(t_m) sigma_+^obs) scaled so a unit sigma_x^obs
/// gives 1; rho evolves under the full internal Hamiltonian between samples
/// and the receiver demodulates at the observed spin's offset. Since the
/// internal Hamiltonian is diagonal, each detected matrix element evolves
/// with a fixed phase velocity and is sampled in closed form.
inline FidSignal acquire_fid(const DeviationState& state, const SpinSystem& sys,
                             int observe, const AcquisitionConfig& cfg = {}) {
  if (state.n != sys.n())
    throw std::invalid_argument("acquire_fid: spin count mismatch");
  if (observe < 1 || observe > sys.n())
    throw std::invalid_argument("acquire_fid: observed spin out of range");
  if (cfg.npoints < 2 || (cfg.npoints & (cfg.npoints - 1)) != 0)
    throw std::invalid_argument("acquire_fid: npoints must be a power of two");
  if (!(cfg.dwell_s > 0.0)) throw std::invalid_argument("acquire_fid: dwell must be > 0");

  const std::int64_t dim = std::int64_t{1} << state.n;
  const std::int64_t obs_bit = std::int64_t{1} << (observe - 1);
  const Eigen::VectorXd diag = internal_diagonal(sys);
  const double demod = sys.offset_rad(observe);
  const double decay = std::numbers::pi * cfg.linewidth_hz;

  // Detected elements: rows with the observed bit set, columns = row with the
  // bit cleared. Tr(rho D) with D = 2 |0><1| on the observed spin.
  struct Element {
    Complex amp;
    double omega;  // rad/s in the receiver frame
  };
  std::vector<Element> elements;
  for (std::int64_t r = 0; r < dim; ++r) {
    if (!(r & obs_bit)) continue;
    std::int64_t c = r & ~obs_bit;
    Complex a = 2.0 * state.rho(r, c) / static_cast<double>(dim);
    if (a == Complex{0.0, 0.0}) continue;
    elements.push_back({a, -(diag(r) - diag(c)) - demod});
  }

  FidSignal fid;
  fid.dwell_s = cfg.dwell_s;
  fid.observed = {observe};
  fid.samples.resize(static_cast<std::size_t>(cfg.npoints));
  for (int m = 0; m < cfg.npoints; ++m) {
    const double t = m * cfg.dwell_s;
    Complex s = 0.0;
    for (const auto& el : elements) s += el.amp * std::exp(Complex{0.0, el.omega * t});
    fid.samples[static_cast<std::size_t>(m)] = s * std::exp(-decay * t);
  }
  return fid;
}

/// Discrete Fourier transform of the FID, frequency axis in Hz ascending
/// (fftshift order), deterministic.
inline Spectrum spectrum(const FidSignal& fid) {
  const int npts = static_cast<int>(fid.samples.size());
  if (npts < 2 || (npts & (npts - 1)) != 0)
    throw std::invalid_argument("spectrum: FID length must be a power of two");
  Eigen::FFT<double> fft;
  std::vector<Complex> out(fid.samples.size());
  fft.fwd(out, fid.samples);
  Spectrum spec;
  spec.freq_hz.resize(fid.samples.size());
  spec.amp.resize(fid.samples.size());
  const double df = 1.0 / (npts * fid.dwell_s);
  for (int k = 0; k < npts; ++k) {
    int shifted = (k + npts / 2) % npts;  // place -Nyquist first
    spec.freq_hz[static_cast<std::size_t>(k)] = (k - npts / 2) * df;
    spec.amp[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(shifted)];
  }
  return spec;
}

/// Sum of amplitudes over bins within `halfwidth_hz` of `center_hz`, times
/// the bin width. Line integrals are apodization-independent measures.
inline Complex line_integral(const Spectrum& spec, double center_hz,
                             double halfwidth_hz) {
  Complex s = 0.0;
  double df = spec.freq_hz.size() > 1 ? spec.freq_hz[1] - spec.freq_hz[0] : 0.0;
  for (std::size_t k = 0; k < spec.freq_hz.size(); ++k)
    if (std::abs(spec.freq_hz[k] - center_hz) <= halfwidth_hz) s += spec.amp[k];
  return s * df;
}

/// The three-body experiment harness: for each theta, prepare sigma_z^2,
/// excite it, apply the compiled three-body sequence with pi J_eff T = theta,
/// acquire on spin 2 and transform. Requires a 3-spin system with coupling
/// edges (1,2) and (2,3).
inline std::vector<Spectrum> run_theta_series(const SpinSystem& sys,
                                              const std::vector<double>& thetas,
                                              const AcquisitionConfig& cfg = {}) {
  if (sys.n() != 3)
    throw std::invalid_argument("run_theta_series: needs the 3-spin experiment system");
  std::vector<Spectrum> out;
  out.reserve(thetas.size());
  const double j_eff = 10.0;  // simulated coupling; only theta matters in ideal mode
  for (double theta : thetas) {
    DeviationState state = prepare_initial(sys, 2);
    state = apply_pulse(state,
                        detail::make_pulse({2}, RotationAxis::PlusY, detail::kHalfPi));
    const double sim_time = theta / (std::numbers::pi * j_eff);
    PulseSequence seq = compile_zzz3(sys, 1, 2, 3, j_eff, sim_time);
    state = apply_sequence(state, seq, sys, EvolutionMode::Ideal);
    out.push_back(spectrum(acquire_fid(state, sys, 2, cfg)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV export: "freq_hz,real,imag" / "t_s,real,imag", 12 significant digits.

inline std::string to_csv(const Spectrum& spec) {
  std::ostringstream out;
  out << "freq_hz,real,imag\n";
  for (std::size_t k = 0; k < spec.freq_hz.size(); ++k)
    out << format_g12(spec.freq_hz[k]) << "," << format_g12(spec.amp[k].real()) << ","
        << format_g12(spec.amp[k].imag()) << "\n";
  return out.str();
}

inline std::string to_csv(const FidSignal& fid) {
  std::ostringstream out;
  out << "t_s,real,imag\n";
  for (std::size_t m = 0; m < fid.samples.size(); ++m)
    out << format_g12(static_cast<double>(m) * fid.dwell_s) << ","
        << format_g12(fid.samples[m].real()) << "," << format_g12(fid.samples[m].imag())
        << "\n";
  return out.str();
}

}  // namespace spinsim

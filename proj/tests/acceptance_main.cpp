// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include "spinsim/spinsim.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace spinsim;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int num, const std::string& name, bool pass, const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("[%s] %2d  %-58s %s\n", pass ? "PASS" : "FAIL", num, name.c_str(),
              detail.c_str());
}

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

SpinSystem alanine() {
  SpinSystem sys(3);
  sys.set_offset_hz(1, 12580.0);
  sys.set_offset_hz(3, -3443.0);
  sys.set_j(1, 2, 54.2);
  sys.set_j(2, 3, 35.1);
  sys.set_j(1, 3, 1.2);
  return sys;
}

SpinSystem chain(int n, double j = 50.0) {
  SpinSystem sys(n);
  for (int i = 1; i < n; ++i) sys.set_j(i, i + 1, j);
  return sys;
}

TargetHamiltonian three_body(double j_eff, double sim_time) {
  TargetHamiltonian t;
  t.n = 3;
  t.terms = {{0b111u, j_eff}};
  t.sim_time_s = sim_time;
  return t;
}

DeviationState state_after_theta(const SpinSystem& sys, double theta) {
  const double j_eff = 10.0;
  DeviationState s = prepare_initial(sys, 2);
  Pulse excite;
  excite.spins = {2};
  excite.axis = RotationAxis::PlusY;
  excite.angle = std::numbers::pi / 2;
  s = apply_pulse(s, excite);
  PulseSequence seq =
      compile_zzz3(sys, 1, 2, 3, j_eff, theta / (std::numbers::pi * j_eff));
  return apply_sequence(s, seq, sys, EvolutionMode::Ideal);
}

// --------------------------------------------------------------------------

void criterion_1_hadamard_identity() {
  Timer timer;
  bool pass = true;
  for (int n = 1; n <= 8 && pass; ++n) {
    HadamardMatrixM m = build_M(n);
    const std::int64_t dim = m.dim();
    for (std::int64_t k = 0; k < dim && pass; ++k) {
      for (std::int64_t l = 0; l < dim && pass; ++l) {
        std::int64_t dot = 0;
        for (std::int64_t j = 0; j < dim; ++j)
          dot += static_cast<std::int64_t>(m.at(k, j)) * m.at(l, j);
        pass = dot == (k == l ? dim : 0);
      }
    }
  }
  double elapsed = timer.seconds();
  pass = pass && elapsed < 1.0;
  report(1, "Hadamard identity M M^T = 2^n 1, integer exact, n=1..8",
         pass, fmt("(%.3f s, limit 1 s)", elapsed));
}

void criterion_2_round_trip() {
  std::mt19937 rng(20260810);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double max_err = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 1 + static_cast<int>(rng() % 6);
    const std::size_t dim = std::size_t{1} << n;
    CoefficientVector a;
    a.n = n;
    a.alpha.resize(dim);
    for (auto& x : a.alpha) x = u(rng);
    CoefficientVector around = alpha_from_xi(xi_from_alpha(a));
    EnergyVector e;
    e.n = n;
    e.xi.resize(dim);
    for (auto& x : e.xi) x = u(rng);
    EnergyVector earound = xi_from_alpha(alpha_from_xi(e));
    for (std::size_t k = 0; k < dim; ++k) {
      max_err = std::max(max_err, std::abs(around.alpha[k] - a.alpha[k]));
      max_err = std::max(max_err, std::abs(earound.xi[k] - e.xi[k]));
    }
  }
  report(2, "alpha<->xi round trip, 1000 random vectors n<=6",
         max_err <= 1e-12, fmt("(max err %.2e, tol 1e-12)", max_err));
}

void criterion_3_eigen123() {
  const double c = 0.5 * std::numbers::pi * 10.0;
  CoefficientVector a;
  a.n = 3;
  a.alpha.assign(8, 0.0);
  a.alpha[7] = c;
  EnergyVector e = xi_from_alpha(a);
  const std::vector<double> signs{1, -1, -1, 1, -1, 1, 1, -1};
  bool pass = true;
  for (int k = 0; k < 8; ++k) pass = pass && e.xi[static_cast<std::size_t>(k)] == c * signs[static_cast<std::size_t>(k)];
  CoefficientVector back = alpha_from_xi(e);
  pass = pass && std::abs(back.alpha[7] - c) <= 1e-14;
  double residue = 0.0;
  for (int k = 0; k < 7; ++k) residue = std::max(residue, std::abs(back.alpha[static_cast<std::size_t>(k)]));
  pass = pass && residue <= 1e-14;
  report(3, "three-body pattern: alpha_7 -> xi signs (+--+-++-) and back",
         pass, fmt("(residue %.2e, tol 1e-14)", residue));
}

void criterion_4_two_spin_M() {
  HadamardMatrixM m = build_M(2);
  const int expect[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
  bool pass = true;
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j) pass = pass && m.at(k, j) == expect[k][j];
  report(4, "two-spin M matrix matches the printed matrix entrywise", pass, "");
}

void criterion_5_compilation() {
  Timer timer;
  SpinSystem sys = alanine();
  const double j_eff = 10.0;
  double worst = 0.0;
  for (double theta : {std::numbers::pi / 4, std::numbers::pi / 2, std::numbers::pi,
                       3 * std::numbers::pi / 2, 2 * std::numbers::pi}) {
    const double sim_time = theta / (std::numbers::pi * j_eff);
    PulseSequence seq = compile_zzz3(sys, 1, 2, 3, j_eff, sim_time);
    worst = std::max(worst, verify_compilation(seq, sys, three_body(j_eff, sim_time)));
  }
  double elapsed = timer.seconds();
  bool pass = worst <= 1e-10 && elapsed < 1.0;
  report(5, "three-body compilation on alanine, 5 thetas, ideal mode",
         pass, fmt("(max dist %.2e, tol 1e-10; %.3f s)", worst, elapsed));
}

void criterion_6_evolution_law() {
  SpinSystem sys = alanine();
  double worst = 0.0;
  for (int g = 0; g < 32; ++g) {
    const double theta = 2 * std::numbers::pi * g / 32.0;
    DeviationState out = state_after_theta(sys, theta);
    worst = std::max(worst, std::abs(expectation(out, PauliTerm::from_string("IXI")) -
                                     std::cos(theta)));
    worst = std::max(worst, std::abs(expectation(out, PauliTerm::from_string("ZYZ")) -
                                     std::sin(theta)));
    for (std::uint32_t code = 1; code < 64; ++code) {
      PauliTerm probe(3);
      for (int i = 1; i <= 3; ++i)
        probe.set_axis(i, static_cast<Axis>(code >> (2 * (i - 1)) & 3u));
      if (probe.factor_code() == PauliTerm::from_string("IXI").factor_code() ||
          probe.factor_code() == PauliTerm::from_string("ZYZ").factor_code())
        continue;
      worst = std::max(worst, std::abs(expectation(out, probe)));
    }
  }
  report(6, "evolution law: <X2>=cos, <Z1Y2Z3>=sin, rest 0, 32 thetas",
         worst <= 1e-9, fmt("(max err %.2e, tol 1e-9)", worst));
}

void criterion_7_figure_cycle() {
  SpinSystem sys = alanine();
  const std::vector<double> centers{-44.65, -9.55, 9.55, 44.65};
  const std::vector<int> frozen_signs{+1, -1, -1, +1};
  auto spectra = run_theta_series(
      sys, {0.0, std::numbers::pi / 2, std::numbers::pi, 2 * std::numbers::pi});
  bool pass = true;
  std::string why;

  double ref_integral = 0.0;
  for (double c : centers) {
    double line = line_integral(spectra[0], c, 5.0).real();
    ref_integral += line;
    if (line <= 0.0) pass = false;
  }
  if (!pass) why = "(theta=0 line not positive)";

  double net = std::abs(line_integral(spectra[1], 0.0, 1e9).real());
  if (net > 1e-6 * std::abs(ref_integral)) {
    pass = false;
    why = fmt("(theta=pi/2 net real %.2e)", net);
  }
  for (std::size_t k = 0; k < centers.size(); ++k)
    if (line_integral(spectra[1], centers[k], 5.0).imag() * frozen_signs[k] <= 0.0) {
      pass = false;
      why = "(theta=pi/2 sign pattern)";
    }

  for (double c : centers)
    if (line_integral(spectra[2], c, 5.0).real() >= 0.0) {
      pass = false;
      why = "(theta=pi line not negative)";
    }

  double rms = 0.0;
  for (std::size_t k = 0; k < spectra[0].amp.size(); ++k)
    rms += std::norm(spectra[3].amp[k] - spectra[0].amp[k]);
  rms = std::sqrt(rms / static_cast<double>(spectra[0].amp.size()));
  if (rms > 1e-6) {
    pass = false;
    why = fmt("(theta=2pi rms %.2e)", rms);
  }
  if (pass) why = fmt("(net %.1e, rms %.1e)", net, rms);
  report(7, "spectrum cycle: positive / antiphase(+--+) / negative / return",
         pass, why);
}

void criterion_8_periodicity() {
  SpinSystem sys = alanine();
  const double j_eff = 10.0;
  const double t0 = 0.0375;
  Matrix u1 = sequence_unitary(compile_zzz3(sys, 1, 2, 3, j_eff, t0), sys,
                               EvolutionMode::Ideal)
                  .u;
  Matrix u2 = sequence_unitary(compile_zzz3(sys, 1, 2, 3, j_eff, t0 + 2.0 / j_eff), sys,
                               EvolutionMode::Ideal)
                  .u;
  double unitary_gap = global_phase_distance(u1, u2);

  const double theta = std::numbers::pi * j_eff * t0;
  double state_gap =
      (state_after_theta(sys, theta).rho -
       state_after_theta(sys, theta + 2 * std::numbers::pi).rho)
          .norm();
  bool pass = unitary_gap <= 1e-9 && state_gap <= 1e-9;
  report(8, "periodicity at T and T + 2/J_eff, unitary and state level",
         pass, fmt("(unitary %.2e, state %.2e, tol 1e-9)", unitary_gap, state_gap));
}

void criterion_9_linear_scaling() {
  bool pass = true;
  for (int m = 2; m <= 8; ++m) {
    SpinSystem sys = chain(m);
    std::vector<int> spins(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) spins[static_cast<std::size_t>(i)] = i + 1;
    PulseSequence seq = compile_zchain(sys, spins, 10.0, 0.01);
    if (seq.delay_count() != static_cast<std::size_t>(2 * m - 3)) pass = false;
  }

  // relay overhead: constant number of extra delays per hop
  SpinSystem three = chain(3);
  TargetHamiltonian direct;
  direct.n = 3;
  direct.terms = {{0b011u, 6.0}};
  direct.sim_time_s = 0.004;
  TargetHamiltonian hop1;
  hop1.n = 3;
  hop1.terms = {{0b101u, 6.0}};
  hop1.sim_time_s = 0.004;
  SpinSystem four = chain(4);
  TargetHamiltonian hop2;
  hop2.n = 4;
  hop2.terms = {{0b1001u, 6.0}};
  hop2.sim_time_s = 0.004;
  std::size_t base = compile_hamiltonian(three, direct).delay_count();
  std::size_t d1 = compile_hamiltonian(three, hop1).delay_count();
  std::size_t d2 = compile_hamiltonian(four, hop2).delay_count();
  pass = pass && base == 1 && d1 == base + 4 && d2 == base + 8;
  report(9, "delay count 2m-3 for m=2..8; relay adds 4 delays per hop",
         pass, fmt("(hops: %g -> %g delays)", static_cast<double>(d1),
                   static_cast<double>(d2)));
}

void criterion_10_exp_oracle() {
  std::mt19937 rng(424243);
  std::uniform_int_distribution<int> axis(0, 3);
  std::uniform_real_distribution<double> angle(-6.0, 6.0);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    int n = 1 + static_cast<int>(rng() % 6);
    PauliTerm p(n);
    for (int i = 1; i <= n; ++i) p.set_axis(i, static_cast<Axis>(axis(rng)));
    double theta = angle(rng);
    Matrix pade = (Complex(0, -theta) * to_dense(p)).exp();
    worst = std::max(worst, (exp_pauli(p, theta).u - pade).cwiseAbs().maxCoeff());
  }
  report(10, "exp_pauli vs general matrix exponential, 500 strings n<=6",
         worst <= 1e-10, fmt("(max dist %.2e, tol 1e-10)", worst));
}

void criterion_11_line_positions() {
  SpinSystem sys = alanine();
  DeviationState x2 = DeviationState::from_term(PauliTerm::from_string("IXI"));
  Spectrum spec = spectrum(acquire_fid(x2, sys, 2, AcquisitionConfig{}));
  const double df = 1.0 / (4096 * 1e-3);
  bool pass = true;
  double worst = 0.0;
  for (double center : {-44.65, -9.55, 9.55, 44.65}) {
    std::size_t peak = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < spec.amp.size(); ++k) {
      if (std::abs(spec.freq_hz[k] - center) > 5.0) continue;
      if (std::abs(spec.amp[k]) > best) {
        best = std::abs(spec.amp[k]);
        peak = k;
      }
    }
    double off = std::abs(spec.freq_hz[peak] - center);
    worst = std::max(worst, off);
    if (off > df) pass = false;
  }
  report(11, "quartet lines at +-J12/2 +- J23/2 within one FFT bin",
         pass, fmt("(max offset %.3f Hz, bin %.3f Hz)", worst, df));
}

}  // namespace

int main() {
  std::printf("spinsim acceptance suite\n");
  criterion_1_hadamard_identity();
  criterion_2_round_trip();
  criterion_3_eigen123();
  criterion_4_two_spin_M();
  criterion_5_compilation();
  criterion_6_evolution_law();
  criterion_7_figure_cycle();
  criterion_8_periodicity();
  criterion_9_linear_scaling();
  criterion_10_exp_oracle();
  criterion_11_line_positions();
  if (g_failures == 0) std::printf("ACCEPTANCE: 11/11 criteria passed\n");
  else std::printf("ACCEPTANCE: %d criteria FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}

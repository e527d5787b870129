#pragma once

// Command-line front end: convert, compile, verify, simulate. Exit codes:
//   0  success
//   2  parse error (malformed input file or bad flags)
//   3  verification above tolerance
//   4  routing failure
//
// Output files are written atomically (temp + rename) and are byte-identical
// across runs for identical inputs.

#include "spinsim/spinsim.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace spinsim::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitVerify = 3;
inline constexpr int kExitRouting = 4;

namespace detail {

inline EvolutionMode parse_mode(const std::string& mode) {
  if (mode == "ideal") return EvolutionMode::Ideal;
  if (mode == "realistic") return EvolutionMode::Realistic;
  throw std::runtime_error("mode must be 'ideal' or 'realistic', got '" + mode + "'");
}

inline SpinSystem load_spin_system(const fs::path& path, double j_threshold_hz) {
  std::istringstream in(read_file(path));
  try {
    SpinSystem sys = parse_spin_system(in);
    sys.set_routing_threshold_hz(j_threshold_hz);
    return sys;
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

inline TargetHamiltonian load_target(const fs::path& path) {
  std::istringstream in(read_file(path));
  try {
    return parse_target(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

inline PulseSequence load_sequence(const fs::path& path) {
  std::istringstream in(read_file(path));
  try {
    return parse_pulse_sequence(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

inline std::vector<double> parse_theta_list(const std::string& list) {
  std::vector<double> out;
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(parse_double(item, 1));
  if (out.empty()) throw std::runtime_error("empty theta list");
  return out;
}

// --- exact decimal pipeline for `convert` -------------------------------
// xi = M alpha and alpha = 2^-n M^T xi are integer-linear up to a power of
// two, so transcoding decimal files in scaled-integer arithmetic makes
// convert -> convert byte-identical on the tool's own output. Values are
// held as mantissa * 10^exp10; dividing by 2^n multiplies the mantissa by
// 5^n and lowers the exponent.

struct ExactValue {
  __int128 mantissa = 0;
  int exp10 = 0;
};

inline ExactValue parse_exact(const std::string& tok, int line) {
  ExactValue v;
  std::size_t pos = 0;
  bool negative = false;
  if (pos < tok.size() && (tok[pos] == '+' || tok[pos] == '-'))
    negative = tok[pos++] == '-';
  int digits = 0, frac = 0;
  bool any = false;
  for (; pos < tok.size() && tok[pos] >= '0' && tok[pos] <= '9'; ++pos) {
    v.mantissa = v.mantissa * 10 + (tok[pos] - '0');
    ++digits;
    any = true;
  }
  if (pos < tok.size() && tok[pos] == '.') {
    ++pos;
    for (; pos < tok.size() && tok[pos] >= '0' && tok[pos] <= '9'; ++pos) {
      v.mantissa = v.mantissa * 10 + (tok[pos] - '0');
      ++digits;
      ++frac;
      any = true;
    }
  }
  if (!any || digits > 30) throw ParseError(line, "expected a number, got '" + tok + "'");
  int exp = 0;
  if (pos < tok.size() && (tok[pos] == 'e' || tok[pos] == 'E')) {
    std::size_t used = 0;
    try {
      exp = std::stoi(tok.substr(pos + 1), &used);
    } catch (const std::exception&) {
      throw ParseError(line, "bad exponent in '" + tok + "'");
    }
    if (used != tok.size() - pos - 1 || exp > 30 || exp < -30)
      throw ParseError(line, "bad exponent in '" + tok + "'");
    pos = tok.size();
  }
  if (pos != tok.size())
    throw ParseError(line, "trailing characters in number '" + tok + "'");
  if (negative) v.mantissa = -v.mantissa;
  v.exp10 = exp - frac;
  return v;
}

inline std::string format_exact(__int128 m, int e) {
  if (m == 0) return "0";
  bool negative = m < 0;
  if (negative) m = -m;
  while (m % 10 == 0) {
    m /= 10;
    ++e;
  }
  std::string digits;
  for (__int128 x = m; x > 0; x /= 10)
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(x % 10)));
  const int len = static_cast<int>(digits.size());
  const int point = len + e;  // value = 0.digits * 10^point
  // fixed/scientific switch follows %g with 12 significant digits
  std::string out;
  if (point > -4 && point <= 12) {
    if (point <= 0) out = "0." + std::string(static_cast<std::size_t>(-point), '0') + digits;
    else if (point >= len) out = digits + std::string(static_cast<std::size_t>(point - len), '0');
    else out = digits.substr(0, static_cast<std::size_t>(point)) + "." +
               digits.substr(static_cast<std::size_t>(point));
  } else {
    out = digits.substr(0, 1);
    if (len > 1) out += "." + digits.substr(1);
    int sci = point - 1;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "e%+03d", sci);
    out += buf;
  }
  return negative ? "-" + out : out;
}

inline std::string convert_exact(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError(1, "empty input");
  auto toks = split_ws(header);
  if (toks.size() != 2) throw ParseError(1, "expected header 'n=<spins> kind=<xi|alpha>'");
  int n = static_cast<int>(parse_int(expect_kv(toks[0], "n", 1), 1));
  std::string kind = expect_kv(toks[1], "kind", 1);
  if (kind != "xi" && kind != "alpha")
    throw ParseError(1, "kind must be xi or alpha, got '" + kind + "'");
  if (n < 1 || n > kMaxDenseSpins) throw ParseError(1, "spin count out of range");
  const std::size_t dim = std::size_t{1} << n;

  std::vector<ExactValue> values;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    auto parts = split_ws(line);
    if (parts.empty()) continue;
    if (parts.size() != 1) throw ParseError(lineno, "expected one value per line");
    if (values.size() == dim) throw ParseError(lineno, "more than 2^n values");
    values.push_back(parse_exact(parts[0], lineno));
  }
  if (values.size() != dim)
    throw ParseError(lineno, "expected " + std::to_string(dim) + " values, got " +
                                 std::to_string(values.size()));

  int common = 0;
  bool first = true;
  for (const auto& v : values)
    if (v.mantissa != 0) {
      common = first ? v.exp10 : std::min(common, v.exp10);
      first = false;
    }
  constexpr __int128 kScaleCap = __int128(1000000000000000000LL) * 1000000;  // 1e24
  for (auto& v : values) {
    if (v.mantissa == 0) {
      v.exp10 = common;
      continue;
    }
    while (v.exp10 > common) {
      v.mantissa *= 10;
      --v.exp10;
      if (v.mantissa > kScaleCap || v.mantissa < -kScaleCap)
        throw ParseError(1, "values span too many decades for exact conversion");
    }
  }

  HadamardMatrixM m = build_M(n);
  std::vector<__int128> out(dim, 0);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t j = 0; j < dim; ++j) {
      // forward uses M, inverse uses M^T; M is symmetric here but keep the
      // transpose explicit
      std::int32_t entry = kind == "alpha" ? m.at(static_cast<std::int64_t>(k),
                                                  static_cast<std::int64_t>(j))
                                           : m.at(static_cast<std::int64_t>(j),
                                                  static_cast<std::int64_t>(k));
      out[k] += entry * values[j].mantissa;
    }
  int out_exp = common;
  if (kind == "xi") {  // divide by 2^n: multiply by 5^n, shift the exponent
    __int128 five_n = 1;
    for (int i = 0; i < n; ++i) five_n *= 5;
    for (auto& x : out) x *= five_n;
    out_exp -= n;
  }

  std::ostringstream text;
  text << "n=" << n << " kind=" << (kind == "xi" ? "alpha" : "xi") << "\n";
  for (const auto& x : out) text << format_exact(x, out_exp) << "\n";
  return text.str();
}

inline std::string compile_report(const PulseSequence& seq, EvolutionMode mode,
                                  double distance, double tol) {
  std::ostringstream out;
  out << "n=" << seq.n << "\n"
      << "mode=" << (mode == EvolutionMode::Ideal ? "ideal" : "realistic") << "\n"
      << "events=" << seq.events.size() << "\n"
      << "pulses=" << seq.pulse_count() << "\n"
      << "delays=" << seq.delay_count() << "\n"
      << "gradients=" << seq.gradient_count() << "\n"
      << "total_delay_s=" << format_g12(seq.total_delay_seconds()) << "\n"
      << "distance=" << format_g12(distance) << "\n"
      << "tolerance=" << format_g12(tol) << "\n"
      << "status=" << (distance <= tol ? "ok" : "above-tolerance") << "\n";
  return out.str();
}

}  // namespace detail

inline int cmd_convert(const fs::path& in_path, const fs::path& out_path) {
  std::istringstream in(read_file(in_path));
  std::string out;
  try {
    out = detail::convert_exact(in);
  } catch (const ParseError& err) {
    throw ParseError(err.line(), in_path.string() + ": " + err.what());
  }
  atomic_write(out_path, out);
  return kExitOk;
}

inline int cmd_compile(const fs::path& sys_path, const fs::path& target_path,
                       const std::string& mode_str, const fs::path& out_path,
                       const fs::path& report_path, double tol, double j_threshold) {
  EvolutionMode mode = detail::parse_mode(mode_str);
  SpinSystem sys = detail::load_spin_system(sys_path, j_threshold);
  TargetHamiltonian target = detail::load_target(target_path);
  PulseSequence seq = compile_hamiltonian(sys, target, mode);
  double distance = verify_compilation(seq, sys, target, mode);
  atomic_write(out_path, to_text(seq));
  std::string report = detail::compile_report(seq, mode, distance, tol);
  if (!report_path.empty()) atomic_write(report_path, report);
  std::cout << report;
  return distance <= tol ? kExitOk : kExitVerify;
}

inline int cmd_verify(const fs::path& sys_path, const fs::path& target_path,
                      const fs::path& seq_path, const std::string& mode_str, double tol,
                      double j_threshold) {
  EvolutionMode mode = detail::parse_mode(mode_str);
  SpinSystem sys = detail::load_spin_system(sys_path, j_threshold);
  TargetHamiltonian target = detail::load_target(target_path);
  PulseSequence seq = detail::load_sequence(seq_path);
  double distance = verify_compilation(seq, sys, target, mode);
  std::cout << detail::compile_report(seq, mode, distance, tol);
  return distance <= tol ? kExitOk : kExitVerify;
}

/// Parsed and validated run options for `simulate`.
struct RunConfig {
  fs::path sys_path;
  fs::path seq_path;            // apply an existing sequence instead of thetas
  std::string mode = "ideal";
  std::vector<double> thetas;   // evolution angles, possibly from a T list
  fs::path out_dir;
  int observe = 2;
  double j_threshold_hz = 0.0;
  AcquisitionConfig acquisition;
  // the simulated coupling behind a theta: theta = pi * j_eff * T
  double j_eff_hz = 10.0;
};

inline int cmd_simulate(const RunConfig& run) {
  EvolutionMode mode = detail::parse_mode(run.mode);
  SpinSystem sys = detail::load_spin_system(run.sys_path, run.j_threshold_hz);
  if (run.observe < 1 || run.observe > sys.n())
    throw std::runtime_error("observed spin out of range");
  fs::create_directories(run.out_dir);

  Pulse excite;
  excite.spins = {run.observe};
  excite.axis = RotationAxis::PlusY;
  excite.angle = std::numbers::pi / 2.0;

  if (!run.seq_path.empty()) {
    PulseSequence seq = detail::load_sequence(run.seq_path);
    DeviationState state = prepare_initial(sys, run.observe);
    state = apply_pulse(state, excite);
    state = apply_sequence(state, seq, sys, mode);
    FidSignal fid = acquire_fid(state, sys, run.observe, run.acquisition);
    atomic_write(run.out_dir / "fid.csv", to_csv(fid));
    atomic_write(run.out_dir / "spectrum.csv", to_csv(spectrum(fid)));
    return kExitOk;
  }

  std::ostringstream index;
  index << "index,theta_rad\n";
  for (std::size_t k = 0; k < run.thetas.size(); ++k) {
    const double theta = run.thetas[k];
    DeviationState state = prepare_initial(sys, run.observe);
    state = apply_pulse(state, excite);
    PulseSequence seq = compile_zzz3(sys, 1, 2, 3, run.j_eff_hz,
                                     theta / (std::numbers::pi * run.j_eff_hz), mode);
    state = apply_sequence(state, seq, sys, mode);
    FidSignal fid = acquire_fid(state, sys, run.observe, run.acquisition);
    char stem[32];
    std::snprintf(stem, sizeof(stem), "%03zu", k);
    atomic_write(run.out_dir / ("fid_" + std::string(stem) + ".csv"), to_csv(fid));
    atomic_write(run.out_dir / ("spectrum_" + std::string(stem) + ".csv"),
                 to_csv(spectrum(fid)));
    index << k << "," << format_g12(theta) << "\n";
  }
  atomic_write(run.out_dir / "series.csv", index.str());
  return kExitOk;
}

/// Full argument-parsing entry point; returns the process exit code.
inline int run(int argc, const char* const* argv) {
  CLI::App app{"spinsim: compile diagonal spin Hamiltonians into NMR pulse "
               "sequences and simulate the resulting spectra"};
  app.require_subcommand(1);

  std::string in_path, out_path, sys_path, target_path, seq_path, report_path;
  std::string mode = "ideal", theta_list, time_list;
  double tol = 1e-8, j_threshold = 0.0;
  RunConfig run;

  auto* convert = app.add_subcommand("convert", "transcode xi <-> alpha vector files");
  convert->add_option("--in", in_path, "input vector file")->required();
  convert->add_option("--out", out_path, "output vector file")->required();

  auto* compile = app.add_subcommand("compile", "compile a target Hamiltonian");
  compile->add_option("--sys", sys_path, "spin system file")->required();
  compile->add_option("--target", target_path, "target Hamiltonian file")->required();
  compile->add_option("--mode", mode, "ideal|realistic");
  compile->add_option("--out", out_path, "output sequence file")->required();
  compile->add_option("--report", report_path, "also write the report here");
  compile->add_option("--tol", tol, "verification tolerance");
  compile->add_option("--j-threshold", j_threshold, "coupling-graph threshold (Hz)");

  auto* verify = app.add_subcommand("verify", "verify a sequence against a target");
  verify->add_option("--sys", sys_path, "spin system file")->required();
  verify->add_option("--target", target_path, "target Hamiltonian file")->required();
  verify->add_option("--seq", seq_path, "sequence file")->required();
  verify->add_option("--mode", mode, "ideal|realistic");
  verify->add_option("--tol", tol, "verification tolerance");
  verify->add_option("--j-threshold", j_threshold, "coupling-graph threshold (Hz)");

  auto* simulate = app.add_subcommand("simulate", "simulate spectra");
  simulate->add_option("--sys", sys_path, "spin system file")->required();
  simulate->add_option("--theta", theta_list, "comma-separated theta list (rad)");
  simulate->add_option("--T", time_list,
                       "comma-separated simulated-time list (s); theta = pi J_eff T");
  simulate->add_option("--j-eff", run.j_eff_hz, "simulated coupling J_eff (Hz)");
  simulate->add_option("--seq", seq_path, "apply this sequence instead");
  simulate->add_option("--mode", mode, "ideal|realistic");
  simulate->add_option("--out", out_path, "output directory")->required();
  simulate->add_option("--observe", run.observe, "observed spin (default 2)");
  simulate->add_option("--npoints", run.acquisition.npoints, "FID points (power of two)");
  simulate->add_option("--dwell", run.acquisition.dwell_s, "dwell time (s)");
  simulate->add_option("--linewidth", run.acquisition.linewidth_hz,
                       "apodization linewidth (Hz)");
  simulate->add_option("--j-threshold", j_threshold, "coupling-graph threshold (Hz)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (convert->parsed()) return cmd_convert(in_path, out_path);
    if (compile->parsed())
      return cmd_compile(sys_path, target_path, mode, out_path, report_path, tol,
                         j_threshold);
    if (verify->parsed())
      return cmd_verify(sys_path, target_path, seq_path, mode, tol, j_threshold);
    if (simulate->parsed()) {
      int sources = !theta_list.empty() + !time_list.empty() + !seq_path.empty();
      if (sources != 1) {
        std::cerr << "error: simulate needs exactly one of --theta, --T, --seq\n";
        return kExitParse;
      }
      run.sys_path = sys_path;
      run.seq_path = seq_path;
      run.mode = mode;
      run.out_dir = out_path;
      run.j_threshold_hz = j_threshold;
      if (!theta_list.empty()) run.thetas = detail::parse_theta_list(theta_list);
      if (!time_list.empty()) {
        for (double t : detail::parse_theta_list(time_list))
          run.thetas.push_back(std::numbers::pi * run.j_eff_hz * t);
      }
      return cmd_simulate(run);
    }
  } catch (const RoutingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRouting;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitOk;
}

}  // namespace spinsim::cli

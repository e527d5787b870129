#pragma once

// The compiler's output IR: an ordered list of pulse / delay / gradient
// events. Conventions:
//   - Pulse(spins, axis a, angle b) applies exp(-i (b/2) sigma_a) per spin
//   - a Delay of t seconds on edge (i,j) applies exp(-i (pi J_ij t / 2) Z_i Z_j)
//     in ideal mode (t = 1/(2J) is a pi/4 rotation parameter)
//   - events compose right-to-left in time order
//
// Text format, one event per line after a "n=<spins>" header:
//   P <spin-list> <axis> <angle-rad>      spin-list comma separated, ascending
//   D <seconds> <i> <j>                   ideal-coupling delay on edge (i,j)
//   D <seconds> FULL                      full-internal-Hamiltonian delay
//   G                                     gradient (crushes nonzero coherence)

#include "spinsim/pauli.hpp"
#include "spinsim/text.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace spinsim {

enum class RotationAxis { PlusX, MinusX, PlusY, MinusY, PlusZ, MinusZ };

inline const char* axis_token(RotationAxis a) {
  switch (a) {
    case RotationAxis::PlusX: return "x";
    case RotationAxis::MinusX: return "-x";
    case RotationAxis::PlusY: return "y";
    case RotationAxis::MinusY: return "-y";
    case RotationAxis::PlusZ: return "z";
    default: return "-z";
  }
}

inline bool axis_from_token(const std::string& tok, RotationAxis& out) {
  if (tok == "x") out = RotationAxis::PlusX;
  else if (tok == "-x") out = RotationAxis::MinusX;
  else if (tok == "y") out = RotationAxis::PlusY;
  else if (tok == "-y") out = RotationAxis::MinusY;
  else if (tok == "z") out = RotationAxis::PlusZ;
  else if (tok == "-z") out = RotationAxis::MinusZ;
  else return false;
  return true;
}

/// +1/-1 sign and the base axis letter of a rotation axis.
inline int axis_sign(RotationAxis a) {
  return (a == RotationAxis::MinusX || a == RotationAxis::MinusY ||
          a == RotationAxis::MinusZ)
             ? -1
             : +1;
}

struct Pulse {
  std::vector<int> spins;  // ascending, unique
  RotationAxis axis = RotationAxis::PlusX;
  double angle = 0.0;  // rad, in (-2 pi, 2 pi]
};

struct Delay {
  double seconds = 0.0;
  int i = 0, j = 0;           // coupling edge, 1-based; unused when full
  bool full_internal = false;
};

struct Gradient {};

using Event = std::variant<Pulse, Delay, Gradient>;

struct PulseSequence {
  int n = 0;
  std::vector<Event> events;

  std::size_t pulse_count() const { return count<Pulse>(); }
  std::size_t delay_count() const { return count<Delay>(); }
  std::size_t gradient_count() const { return count<Gradient>(); }

  double total_delay_seconds() const {
    double t = 0.0;
    for (const auto& e : events)
      if (const auto* d = std::get_if<Delay>(&e)) t += d->seconds;
    return t;
  }

 private:
  template <typename T>
  std::size_t count() const {
    std::size_t c = 0;
    for (const auto& e : events)
      if (std::holds_alternative<T>(e)) ++c;
    return c;
  }
};

namespace detail {

inline void validate_pulse(const Pulse& p, int n, int line = 0) {
  auto fail = [&](const std::string& msg) {
    if (line) throw ParseError(line, msg);
    throw std::invalid_argument(msg);
  };
  if (p.spins.empty()) fail("pulse with no spins");
  for (std::size_t k = 0; k < p.spins.size(); ++k) {
    if (p.spins[k] < 1 || p.spins[k] > n) fail("pulse spin out of range");
    if (k && p.spins[k] <= p.spins[k - 1]) fail("pulse spins must be ascending and unique");
  }
  if (!(p.angle > -2.0 * std::numbers::pi) || p.angle > 2.0 * std::numbers::pi + 1e-15)
    fail("pulse angle outside (-2 pi, 2 pi]");
}

inline void validate_delay(const Delay& d, int n, int line = 0) {
  auto fail = [&](const std::string& msg) {
    if (line) throw ParseError(line, msg);
    throw std::invalid_argument(msg);
  };
  if (!(d.seconds >= 0.0)) fail("delay duration must be nonnegative");
  if (!d.full_internal) {
    if (d.i < 1 || d.i > n || d.j < 1 || d.j > n || d.i == d.j)
      fail("delay references an invalid coupling edge");
  }
}

}  // namespace detail

inline std::string to_text(const PulseSequence& seq) {
  std::ostringstream out;
  out << "n=" << seq.n << "\n";
  for (const auto& e : seq.events) {
    if (const auto* p = std::get_if<Pulse>(&e)) {
      out << "P ";
      for (std::size_t k = 0; k < p->spins.size(); ++k)
        out << (k ? "," : "") << p->spins[k];
      out << " " << axis_token(p->axis) << " " << format_g12(p->angle) << "\n";
    } else if (const auto* d = std::get_if<Delay>(&e)) {
      out << "D " << format_g12(d->seconds);
      if (d->full_internal) out << " FULL\n";
      else out << " " << d->i << " " << d->j << "\n";
    } else {
      out << "G\n";
    }
  }
  return out.str();
}

inline PulseSequence parse_pulse_sequence(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "empty input");
  auto head = split_ws(line);
  if (head.size() != 1) throw ParseError(1, "expected header 'n=<spins>'");
  int n = static_cast<int>(parse_int(expect_kv(head[0], "n", 1), 1));
  if (n < 1 || n > kMaxSpins) throw ParseError(1, "spin count out of range");
  PulseSequence seq;
  seq.n = n;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "P") {
      if (toks.size() != 4) throw ParseError(lineno, "expected 'P <spins> <axis> <angle>'");
      Pulse p;
      std::string item;
      std::istringstream list(toks[1]);
      while (std::getline(list, item, ','))
        p.spins.push_back(static_cast<int>(parse_int(item, lineno)));
      if (!axis_from_token(toks[2], p.axis))
        throw ParseError(lineno, "unknown axis '" + toks[2] + "'");
      p.angle = parse_double(toks[3], lineno);
      detail::validate_pulse(p, n, lineno);
      seq.events.emplace_back(std::move(p));
    } else if (toks[0] == "D") {
      Delay d;
      if (toks.size() == 3 && toks[2] == "FULL") {
        d.full_internal = true;
        d.seconds = parse_double(toks[1], lineno);
      } else if (toks.size() == 4) {
        d.seconds = parse_double(toks[1], lineno);
        d.i = static_cast<int>(parse_int(toks[2], lineno));
        d.j = static_cast<int>(parse_int(toks[3], lineno));
      } else {
        throw ParseError(lineno, "expected 'D <seconds> <i> <j>' or 'D <seconds> FULL'");
      }
      detail::validate_delay(d, n, lineno);
      seq.events.emplace_back(d);
    } else if (toks[0] == "G") {
      if (toks.size() != 1) throw ParseError(lineno, "gradient takes no arguments");
      seq.events.emplace_back(Gradient{});
    } else {
      throw ParseError(lineno, "unknown event '" + toks[0] + "'");
    }
  }
  return seq;
}

}  // namespace spinsim

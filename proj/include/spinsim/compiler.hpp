#pragma once

// Compiles diagonal Z-product target Hamiltonians into pulse sequences of
// single-spin rotations and two-body coupling delays, and verifies the
// compiled unitary against the ideal target exponential.
//
// A target term (mask, J_eff) contributes (pi/2) J_eff Z-mask to the average
// Hamiltonian (rad/s), so over the simulated time T it realizes
// exp(-i (theta/2) Z-mask) with theta = pi J_eff T. theta is reduced mod
// 2 pi, which changes at most a global phase.
//
// An m-spin Z-chain is built as a conjugation ladder around one central
// coupling delay:
//
//   exp(-i th/2 Z_v Z_w R) = C^dag exp(-i th/2 Z_w R) C,
//   C = exp(-i pi/4 Z_v X_w) exp(+i pi/4 X_w)            (absorb, spin v)
//
// and an uncoupled spin is reached by replacing the left end of the string
// through a relay spin:
//
//   exp(-i th/2 Z_v R) = V exp(-i th/2 Z_w R) V^dag,
//   V = exp(-i pi/4 Y_v Y_w) exp(-i pi/4 X_v X_w)         (transfer)
//
// Every two-spin rotation above is one 1/(2J) delay dressed with pi/2
// pulses. Sign table (time order; [a] = pi/2 pulse about axis a):
//
//   exp(-i pi/4 Z_v X_w) : [-x]_w [-y]_w D [y]_w   ... and its adjoint
//   exp(-i pi/4 X_v X_w) : [-y]_vw D [y]_vw
//   exp(+i pi/4 X_v X_w) : [-y]_v [y]_w D [y]_v [-y]_w
//   exp(-i pi/4 Y_v Y_w) : [x]_vw D [-x]_vw
//   exp(+i pi/4 Y_v Y_w) : [x]_v [-x]_w D [-x]_v [x]_w

#include "spinsim/eigenmap.hpp"
#include "spinsim/pauli.hpp"
#include "spinsim/pulse_sequence.hpp"
#include "spinsim/spin_system.hpp"
#include "spinsim/text.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace spinsim {

enum class EvolutionMode { Ideal, Realistic };

/// A set of commuting Z-product terms plus the simulated time T. T is a
/// parameter: physical delay lengths are functions of it.
struct TargetTerm {
  std::uint32_t mask = 0;   // bit i-1 set <-> sigma_z on spin i
  double j_eff_hz = 0.0;
};

struct TargetHamiltonian {
  int n = 0;
  std::vector<TargetTerm> terms;
  double sim_time_s = 0.0;
};

namespace detail {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

inline double reduce_angle_2pi(double theta) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  return t;
}

inline Pulse make_pulse(std::vector<int> spins, RotationAxis axis, double angle) {
  Pulse p;
  p.spins = std::move(spins);
  std::sort(p.spins.begin(), p.spins.end());
  p.axis = axis;
  p.angle = angle;
  return p;
}

inline void require_edge(const SpinSystem& sys, int i, int j) {
  if (!sys.coupled(i, j))
    throw RoutingError("no usable coupling between spins " + std::to_string(i) +
                       " and " + std::to_string(j) + " (J=" +
                       std::to_string(sys.j(i, j)) + " Hz)");
}

// Delay on (i,j) realizing exp(-i phi Z_i Z_j) up to a multiple of 2 pi in
// the rotation parameter; the evolution parameter is pi J t / 2, so negative
// couplings take the 2 pi complement.
inline Delay delay_for_angle(const SpinSystem& sys, int i, int j, double phi) {
  const double jij = sys.j(i, j);
  Delay d;
  d.seconds = 2.0 * reduce_angle_2pi(jij > 0.0 ? phi : -phi) / (kPi * std::abs(jij));
  d.i = std::min(i, j);
  d.j = std::max(i, j);
  return d;
}

// One 1/(2J) coupling delay on (i,j): rotation parameter pi/4.
inline Delay half_j_delay(const SpinSystem& sys, int i, int j) {
  return delay_for_angle(sys, i, j, kPi / 4.0);
}

// Dressed two-spin rotations; see the sign table in the file header.
inline void emit_zx_minus(const SpinSystem& sys, std::vector<Event>& ev, int v, int w) {
  ev.push_back(make_pulse({w}, RotationAxis::MinusX, kHalfPi));
  ev.push_back(make_pulse({w}, RotationAxis::MinusY, kHalfPi));
  ev.push_back(half_j_delay(sys, v, w));
  ev.push_back(make_pulse({w}, RotationAxis::PlusY, kHalfPi));
}

inline void emit_zx_minus_adjoint(const SpinSystem& sys, std::vector<Event>& ev, int v,
                                  int w) {
  ev.push_back(make_pulse({w}, RotationAxis::PlusY, kHalfPi));
  ev.push_back(half_j_delay(sys, v, w));
  ev.push_back(make_pulse({w}, RotationAxis::MinusY, kHalfPi));
  ev.push_back(make_pulse({w}, RotationAxis::PlusX, kHalfPi));
}

inline void emit_xx(const SpinSystem& sys, std::vector<Event>& ev, int v, int w,
                    int sign) {
  if (sign < 0) {
    ev.push_back(make_pulse({v, w}, RotationAxis::MinusY, kHalfPi));
    ev.push_back(half_j_delay(sys, v, w));
    ev.push_back(make_pulse({v, w}, RotationAxis::PlusY, kHalfPi));
  } else {
    ev.push_back(make_pulse({v}, RotationAxis::MinusY, kHalfPi));
    ev.push_back(make_pulse({w}, RotationAxis::PlusY, kHalfPi));
    ev.push_back(half_j_delay(sys, v, w));
    ev.push_back(make_pulse({v}, RotationAxis::PlusY, kHalfPi));
    ev.push_back(make_pulse({w}, RotationAxis::MinusY, kHalfPi));
  }
}

inline void emit_yy(const SpinSystem& sys, std::vector<Event>& ev, int v, int w,
                    int sign) {
  if (sign < 0) {
    ev.push_back(make_pulse({v, w}, RotationAxis::PlusX, kHalfPi));
    ev.push_back(half_j_delay(sys, v, w));
    ev.push_back(make_pulse({v, w}, RotationAxis::MinusX, kHalfPi));
  } else {
    ev.push_back(make_pulse({v}, RotationAxis::PlusX, kHalfPi));
    ev.push_back(make_pulse({w}, RotationAxis::MinusX, kHalfPi));
    ev.push_back(half_j_delay(sys, v, w));
    ev.push_back(make_pulse({v}, RotationAxis::MinusX, kHalfPi));
    ev.push_back(make_pulse({w}, RotationAxis::PlusX, kHalfPi));
  }
}

// Absorb: pre side is C (acts first), post side is C^dag.
inline void emit_absorb_pre(const SpinSystem& sys, std::vector<Event>& ev, int v, int w) {
  emit_zx_minus(sys, ev, v, w);
}
inline void emit_absorb_post(const SpinSystem& sys, std::vector<Event>& ev, int v, int w) {
  emit_zx_minus_adjoint(sys, ev, v, w);
}

// Transfer: pre side is V^dag = exp(+i pi/4 XX) exp(+i pi/4 YY) (the YY
// factor acts first in time), post side is V.
inline void emit_transfer_pre(const SpinSystem& sys, std::vector<Event>& ev, int v, int w) {
  emit_yy(sys, ev, v, w, +1);
  emit_xx(sys, ev, v, w, +1);
}
inline void emit_transfer_post(const SpinSystem& sys, std::vector<Event>& ev, int v, int w) {
  emit_xx(sys, ev, v, w, -1);
  emit_yy(sys, ev, v, w, -1);
}

// One conjugation layer of a ladder. Absorb adds Z on `fresh`, keeping the
// anchor's Z (pulses on the anchor, one delay pair on edge (fresh, anchor)).
// Transfer moves the anchor's Z onto `fresh` (two delay pairs on the edge).
struct LadderOp {
  int fresh = 0;
  int anchor = 0;
  bool absorb = true;
};

// Base coupling pair plus conjugation layers, innermost first.
struct LadderPlan {
  int base_a = 0, base_b = 0;
  std::vector<LadderOp> ops;
};

// Multi-source BFS to the nearest goal; within a BFS layer, stronger
// couplings claim parents first so the strongest pathway wins among
// shortest routes. Returns the path source..goal.
inline std::optional<std::vector<int>> route_to_nearest(const SpinSystem& sys,
                                                        const std::set<int>& sources,
                                                        const std::set<int>& goals) {
  std::vector<int> parent(sys.n() + 1, 0);
  std::vector<int> frontier(sources.begin(), sources.end());
  for (int s : frontier) parent[s] = s;
  while (!frontier.empty()) {
    struct Edge {
      double strength;
      int from, to;
    };
    std::vector<Edge> edges;
    for (int cur : frontier)
      for (int nb : sys.neighbors(cur))
        if (parent[nb] == 0) edges.push_back({std::abs(sys.j(cur, nb)), cur, nb});
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      if (a.strength != b.strength) return a.strength > b.strength;
      if (a.from != b.from) return a.from < b.from;
      return a.to < b.to;
    });
    std::vector<int> next;
    for (const auto& e : edges) {
      if (parent[e.to] != 0) continue;
      parent[e.to] = e.from;
      next.push_back(e.to);
    }
    for (int reached : next) {
      if (!goals.count(reached)) continue;
      std::vector<int> path{reached};
      while (parent[path.back()] != path.back()) path.push_back(parent[path.back()]);
      std::reverse(path.begin(), path.end());
      return path;
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

// Plan a ladder realizing the Z-product over `targets`. The base pair is the
// strongest directly-coupled target pair; failing that, the closest target
// pair with relay transfers along the connecting path. Every remaining
// target is then absorbed through a shortest path from the accumulated set,
// relaying across non-target spins.
inline std::optional<LadderPlan> plan_set(const SpinSystem& sys,
                                          const std::set<int>& targets) {
  LadderPlan plan;
  std::set<int> acc, covered;

  double best_j = 0.0;
  for (int a : targets)
    for (int b : targets)
      if (a < b && sys.coupled(a, b) && std::abs(sys.j(a, b)) > best_j) {
        best_j = std::abs(sys.j(a, b));
        plan.base_a = a;
        plan.base_b = b;
      }
  if (best_j > 0.0) {
    acc = {plan.base_a, plan.base_b};
    covered = acc;
  } else {
    // closest pair of targets, connected through relay spins
    std::vector<int> best_path;
    for (int a : targets) {
      std::set<int> rest(targets.begin(), targets.end());
      rest.erase(a);
      auto path = route_to_nearest(sys, {a}, rest);
      if (path && (best_path.empty() || path->size() < best_path.size()))
        best_path = *path;
    }
    if (best_path.empty()) return std::nullopt;
    const std::size_t k = best_path.size() - 1;
    plan.base_a = best_path[k - 1];
    plan.base_b = best_path[k];
    acc = {plan.base_a, plan.base_b};
    for (std::size_t i = k - 1; i >= 1; --i) {
      plan.ops.push_back({best_path[i - 1], best_path[i], false});
      acc.erase(best_path[i]);
      acc.insert(best_path[i - 1]);
    }
    covered = {best_path.front(), best_path.back()};
  }

  while (covered.size() < targets.size()) {
    std::set<int> remaining;
    for (int t : targets)
      if (!covered.count(t)) remaining.insert(t);
    auto path = route_to_nearest(sys, acc, remaining);
    if (!path) return std::nullopt;
    const std::vector<int>& q = *path;
    plan.ops.push_back({q[1], q[0], true});
    acc.insert(q[1]);
    for (std::size_t j = 2; j < q.size(); ++j) {
      plan.ops.push_back({q[j], q[j - 1], false});
      acc.erase(q[j - 1]);
      acc.insert(q[j]);
    }
    covered.insert(q.back());
  }
  return plan;
}

// Ladder for an explicitly ordered all-target chain: base on the last pair,
// then absorb leftward, each spin anchored at its right neighbor. Delay
// count is 1 + 2(m-2) = 2m-3.
inline LadderPlan plan_chain(const std::vector<int>& spins) {
  LadderPlan plan;
  const std::size_t m = spins.size();
  plan.base_a = spins[m - 2];
  plan.base_b = spins[m - 1];
  for (std::size_t k = m - 2; k >= 1; --k)
    plan.ops.push_back({spins[k - 1], spins[k], true});
  return plan;
}

// Events of a planned ladder realizing exp(-i theta/2 Z-product). Pre sides
// run outermost first, the central delay carries theta, post sides unwind
// innermost first.
inline void emit_ladder(const SpinSystem& sys, std::vector<Event>& ev,
                        const LadderPlan& plan, double theta) {
  for (std::size_t k = plan.ops.size(); k-- > 0;) {
    const auto& op = plan.ops[k];
    if (op.absorb) emit_absorb_pre(sys, ev, op.fresh, op.anchor);
    else emit_transfer_pre(sys, ev, op.fresh, op.anchor);
  }
  ev.push_back(delay_for_angle(sys, plan.base_a, plan.base_b, theta / 2.0));
  for (const auto& op : plan.ops) {
    if (op.absorb) emit_absorb_post(sys, ev, op.fresh, op.anchor);
    else emit_transfer_post(sys, ev, op.fresh, op.anchor);
  }
}

// Echo dressing for realistic mode: split a coupling delay into quarters with
// pi pulses on all spins / on the active pair. Offsets and couplings to
// spectators cancel interval-by-interval; the (i,j) coupling survives at full
// strength. Couplings within the spectator set are not suppressed.
inline void emit_echoed_delay(const SpinSystem& sys, std::vector<Event>& ev,
                              const Delay& d) {
  std::vector<int> all(static_cast<std::size_t>(sys.n()));
  for (int i = 1; i <= sys.n(); ++i) all[static_cast<std::size_t>(i - 1)] = i;
  Delay quarter = d;
  quarter.seconds = d.seconds / 4.0;
  for (int seg = 0; seg < 4; ++seg) {
    ev.push_back(quarter);
    ev.push_back(make_pulse(seg % 2 == 0 ? all : std::vector<int>{d.i, d.j},
                            RotationAxis::PlusX, kPi));
  }
}

inline PulseSequence finalize(const SpinSystem& sys, std::vector<Event> ev,
                              EvolutionMode mode) {
  PulseSequence seq;
  seq.n = sys.n();
  if (mode == EvolutionMode::Ideal) {
    seq.events = std::move(ev);
    return seq;
  }
  for (auto& e : ev) {
    const auto* d = std::get_if<Delay>(&e);
    if (d && !d->full_internal && d->seconds > 0.0)
      emit_echoed_delay(sys, seq.events, *d);
    else
      seq.events.push_back(std::move(e));
  }
  return seq;
}

}  // namespace detail

/// Compiles exp(-i (theta/2) Z...Z) over an ordered chain of m spins whose
/// consecutive entries are coupling-graph adjacent, theta = pi J_eff T.
/// Ideal-mode delay count is exactly 2m - 3.
inline PulseSequence compile_zchain(const SpinSystem& sys, const std::vector<int>& spins,
                                    double j_eff_hz, double sim_time_s,
                                    EvolutionMode mode = EvolutionMode::Ideal) {
  if (spins.size() < 2)
    throw std::invalid_argument("compile_zchain: need at least two spins");
  std::set<int> uniq(spins.begin(), spins.end());
  if (uniq.size() != spins.size())
    throw std::invalid_argument("compile_zchain: repeated spin in chain");
  for (std::size_t k = 0; k + 1 < spins.size(); ++k)
    if (!sys.coupled(spins[k], spins[k + 1]))
      throw RoutingError("chain spins " + std::to_string(spins[k]) + " and " +
                         std::to_string(spins[k + 1]) +
                         " are not adjacent in the coupling graph");

  std::vector<Event> ev;
  const double theta = detail::kPi * j_eff_hz * sim_time_s;
  detail::emit_ladder(sys, ev, detail::plan_chain(spins), theta);
  return detail::finalize(sys, std::move(ev), mode);
}

/// The three-body sequence: pulses on the middle spin j, one T-dependent
/// delay on (j,k) flanked by 1/(2 J_ij) delays on (i,j).
inline PulseSequence compile_zzz3(const SpinSystem& sys, int i, int j, int k,
                                  double j_eff_hz, double sim_time_s,
                                  EvolutionMode mode = EvolutionMode::Ideal) {
  detail::require_edge(sys, i, j);
  detail::require_edge(sys, j, k);
  return compile_zchain(sys, {i, j, k}, j_eff_hz, sim_time_s, mode);
}

/// Compiles a full diagonal target: terms commute, so the concatenation of
/// per-term sequences is exact (no Trotter error). Single-spin terms become
/// ideal z-rotations; multi-spin terms are routed through the coupling graph,
/// inserting relay transfers where a term's spins are not directly coupled.
inline PulseSequence compile_hamiltonian(const SpinSystem& sys,
                                         const TargetHamiltonian& target,
                                         EvolutionMode mode = EvolutionMode::Ideal) {
  if (target.n != sys.n())
    throw std::invalid_argument("target and spin system disagree on spin count");
  std::vector<Event> ev;
  std::map<std::uint32_t, double> merged;  // canonical: one coefficient per mask
  for (const auto& term : target.terms) {
    if (term.mask >> sys.n())
      throw std::invalid_argument("target term names spins beyond n");
    merged[term.mask] += term.j_eff_hz;
  }
  for (const auto& [mask, j_eff] : merged) {
    TargetTerm term{mask, j_eff};
    if (term.mask == 0) continue;  // identity term: global phase only
    const double theta =
        detail::reduce_angle_2pi(detail::kPi * term.j_eff_hz * target.sim_time_s);
    std::set<int> spins;
    for (int s = 1; s <= sys.n(); ++s)
      if (term.mask >> (s - 1) & 1u) spins.insert(s);
    if (spins.size() == 1) {
      if (theta != 0.0)
        ev.push_back(detail::make_pulse({*spins.begin()}, RotationAxis::PlusZ, theta));
      continue;
    }
    auto plan = detail::plan_set(sys, spins);
    if (!plan)
      throw RoutingError("cannot route target term over spins {" + [&] {
        std::string s;
        for (int x : spins) s += (s.empty() ? "" : ",") + std::to_string(x);
        return s;
      }() + "}");
    detail::emit_ladder(sys, ev, *plan, theta);
  }
  return detail::finalize(sys, std::move(ev), mode);
}

/// Dense unitary of a sequence. Ideal mode: delays evolve only the named
/// coupling term; realistic mode: delays evolve the full internal Hamiltonian
/// (offsets plus all couplings). Pulses are exact rotations in both modes.
/// Gradients are non-unitary and rejected here; use apply_sequence for state
/// evolution with gradients.
inline DenseUnitary sequence_unitary(const PulseSequence& seq, const SpinSystem& sys,
                                     EvolutionMode mode) {
  if (seq.n != sys.n())
    throw std::invalid_argument("sequence and spin system disagree on spin count");
  detail::check_dense_size(seq.n);
  const std::int64_t dim = std::int64_t{1} << seq.n;
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& e : seq.events) {
    if (const auto* p = std::get_if<Pulse>(&e)) {
      detail::validate_pulse(*p, seq.n);
      Axis base = (p->axis == RotationAxis::PlusX || p->axis == RotationAxis::MinusX)
                      ? Axis::X
                      : (p->axis == RotationAxis::PlusY || p->axis == RotationAxis::MinusY)
                            ? Axis::Y
                            : Axis::Z;
      const double theta = axis_sign(p->axis) * p->angle / 2.0;
      for (int s : p->spins)
        u = exp_pauli(PauliTerm::single(seq.n, s, base), theta).u * u;
    } else if (const auto* d = std::get_if<Delay>(&e)) {
      detail::validate_delay(*d, seq.n);
      if (!d->full_internal && sys.j(d->i, d->j) == 0.0)
        throw std::invalid_argument("delay references an uncoupled edge (" +
                                    std::to_string(d->i) + "," + std::to_string(d->j) +
                                    ")");
      Eigen::VectorXd diag =
          (d->full_internal || mode == EvolutionMode::Realistic)
              ? internal_diagonal(sys)
              : coupling_diagonal(sys, d->i, d->j);
      Eigen::VectorXcd phases(dim);
      for (std::int64_t r = 0; r < dim; ++r)
        phases(r) = std::exp(Complex{0.0, -diag(r) * d->seconds});
      u = phases.asDiagonal() * u;
    } else {
      throw std::invalid_argument(
          "sequence_unitary: gradient events have no unitary representation");
    }
  }
  return DenseUnitary{seq.n, std::move(u)};
}

/// Ideal target propagator exp(-i H T): diagonal with phases from the
/// eigenenergy vector xi = M alpha of the target coefficients.
inline DenseUnitary target_unitary(const TargetHamiltonian& target) {
  detail::check_dense_size(target.n);
  CoefficientVector alpha;
  alpha.n = target.n;
  alpha.alpha.assign(std::size_t{1} << target.n, 0.0);
  for (const auto& t : target.terms) {
    if (t.mask >> target.n)
      throw std::invalid_argument("target term names spins beyond n");
    alpha.alpha[t.mask] += 0.5 * detail::kPi * t.j_eff_hz;
  }
  EnergyVector xi = xi_from_alpha(alpha);
  const std::int64_t dim = std::int64_t{1} << target.n;
  Matrix u = Matrix::Zero(dim, dim);
  for (std::int64_t r = 0; r < dim; ++r)
    u(r, r) = std::exp(Complex{0.0, -xi.xi[static_cast<std::size_t>(r)] * target.sim_time_s});
  return DenseUnitary{target.n, std::move(u)};
}

/// Global-phase Frobenius distance between the sequence unitary and the ideal
/// target exponential, normalized by 2^{n/2}.
inline double verify_compilation(const PulseSequence& seq, const SpinSystem& sys,
                                 const TargetHamiltonian& target,
                                 EvolutionMode mode = EvolutionMode::Ideal) {
  return global_phase_distance(sequence_unitary(seq, sys, mode).u,
                               target_unitary(target).u);
}

// ---------------------------------------------------------------------------
// Target text format: header "n=<spins> T=<seconds>", then term lines
//   term <spin> <spin> ... <j_eff_hz>
// An empty spin list is not representable; identity contributions are global
// phases and belong in no file.

inline TargetHamiltonian parse_target(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::vector<std::string> head;
  while (std::getline(in, line)) {  // header: first non-comment line
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    head = split_ws(line);
    if (!head.empty()) break;
  }
  if (head.empty()) throw ParseError(lineno ? lineno : 1, "empty input");
  if (head.size() != 2)
    throw ParseError(lineno, "expected header 'n=<spins> T=<seconds>'");
  TargetHamiltonian t;
  t.n = static_cast<int>(parse_int(expect_kv(head[0], "n", lineno), lineno));
  if (t.n < 1 || t.n > kMaxSpins) throw ParseError(lineno, "spin count out of range");
  t.sim_time_s = parse_double(expect_kv(head[1], "T", lineno), lineno);
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] != "term") throw ParseError(lineno, "unknown directive '" + toks[0] + "'");
    if (toks.size() < 3) throw ParseError(lineno, "expected 'term <spins...> <j_eff_hz>'");
    TargetTerm term;
    for (std::size_t k = 1; k + 1 < toks.size(); ++k) {
      long s = parse_int(toks[k], lineno);
      if (s < 1 || s > t.n) throw ParseError(lineno, "term spin out of range");
      if (term.mask >> (s - 1) & 1u) throw ParseError(lineno, "repeated spin in term");
      term.mask |= 1u << (s - 1);
    }
    term.j_eff_hz = parse_double(toks.back(), lineno);
    t.terms.push_back(term);
  }
  return t;
}

inline std::string to_text(const TargetHamiltonian& t) {
  std::ostringstream out;
  out << "n=" << t.n << " T=" << format_g12(t.sim_time_s) << "\n";
  for (const auto& term : t.terms) {
    out << "term";
    for (int s = 1; s <= t.n; ++s)
      if (term.mask >> (s - 1) & 1u) out << " " << s;
    out << " " << format_g12(term.j_eff_hz) << "\n";
  }
  return out.str();
}

}  // namespace spinsim

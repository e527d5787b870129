#pragma once

// The physical spin system: rotating-frame offsets, scalar couplings, and the
// coupling graph. Weak-coupling internal Hamiltonian (hbar = 1, rad/s):
//
//   H_int = (1/2) [ sum_i w_i sigma_z^i + sum_{i<j} pi J_ij sigma_z^i sigma_z^j ]
//
// File format (line oriented, '#' comments):
//   spin <i> <name> <offset_hz>
//   J <i> <j> <hz>

#include "spinsim/pauli.hpp"
#include "spinsim/text.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace spinsim {

class SpinSystem {
 public:
  explicit SpinSystem(int n) : n_(n), offsets_rad_(n, 0.0), names_(n), j_hz_(n * n, 0.0) {
    detail::check_spin_count(n);
    for (int i = 1; i <= n; ++i) names_[i - 1] = "s" + std::to_string(i);
  }

  int n() const { return n_; }

  double offset_rad(int i) const { return offsets_rad_[index(i)]; }
  void set_offset_hz(int i, double hz) {
    offsets_rad_[index(i)] = 2.0 * std::numbers::pi * hz;
  }
  double offset_hz(int i) const {
    return offsets_rad_[index(i)] / (2.0 * std::numbers::pi);
  }

  const std::string& name(int i) const { return names_[index(i)]; }
  void set_name(int i, std::string name) { names_[index(i)] = std::move(name); }

  double j(int i, int jj) const { return j_hz_[index(i) * n_ + index(jj)]; }
  void set_j(int i, int jj, double hz) {
    if (i == jj) throw std::invalid_argument("self coupling J(i,i)");
    j_hz_[index(i) * n_ + index(jj)] = hz;
    j_hz_[index(jj) * n_ + index(i)] = hz;
  }

  double routing_threshold_hz() const { return routing_threshold_hz_; }
  void set_routing_threshold_hz(double hz) { routing_threshold_hz_ = hz; }

  /// Edge (i,j) exists iff |J_ij| > threshold (default 0).
  bool coupled(int i, int jj) const {
    return i != jj && std::abs(j(i, jj)) > routing_threshold_hz_;
  }

  std::vector<int> neighbors(int i) const {
    std::vector<int> out;
    for (int k = 1; k <= n_; ++k)
      if (coupled(i, k)) out.push_back(k);
    return out;
  }

 private:
  int index(int spin) const {
    if (spin < 1 || spin > n_)
      throw std::invalid_argument("spin index out of range: " + std::to_string(spin));
    return spin - 1;
  }

  int n_;
  std::vector<double> offsets_rad_;
  std::vector<std::string> names_;
  std::vector<double> j_hz_;  // symmetric, Hz
  double routing_threshold_hz_ = 0.0;
};

/// H_int as a Pauli sum (rad/s).
inline OperatorSum internal_hamiltonian(const SpinSystem& sys) {
  OperatorSum h(sys.n());
  for (int i = 1; i <= sys.n(); ++i)
    if (sys.offset_rad(i) != 0.0)
      h.add(PauliTerm::single(sys.n(), i, Axis::Z, 0.5 * sys.offset_rad(i)));
  for (int i = 1; i <= sys.n(); ++i)
    for (int jj = i + 1; jj <= sys.n(); ++jj)
      if (sys.j(i, jj) != 0.0) {
        PauliTerm t(sys.n(), 0.5 * std::numbers::pi * sys.j(i, jj));
        t.set_axis(i, Axis::Z);
        t.set_axis(jj, Axis::Z);
        h.add(t);
      }
  return h;
}

/// Diagonal of H_int (rad/s), entry per basis state k.
inline Eigen::VectorXd internal_diagonal(const SpinSystem& sys) {
  const std::int64_t dim = std::int64_t{1} << sys.n();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
  for (std::int64_t k = 0; k < dim; ++k) {
    double v = 0.0;
    for (int i = 1; i <= sys.n(); ++i) {
      double ei = (k >> (i - 1) & 1) ? -1.0 : 1.0;
      v += 0.5 * sys.offset_rad(i) * ei;
      for (int jj = i + 1; jj <= sys.n(); ++jj) {
        double ej = (k >> (jj - 1) & 1) ? -1.0 : 1.0;
        v += 0.5 * std::numbers::pi * sys.j(i, jj) * ei * ej;
      }
    }
    d(k) = v;
  }
  return d;
}

/// Diagonal of the bare coupling term (pi J_ij / 2) Z_i Z_j (rad/s).
inline Eigen::VectorXd coupling_diagonal(const SpinSystem& sys, int i, int jj) {
  const std::int64_t dim = std::int64_t{1} << sys.n();
  const double c = 0.5 * std::numbers::pi * sys.j(i, jj);
  Eigen::VectorXd d(dim);
  for (std::int64_t k = 0; k < dim; ++k) {
    double ei = (k >> (i - 1) & 1) ? -1.0 : 1.0;
    double ej = (k >> (jj - 1) & 1) ? -1.0 : 1.0;
    d(k) = c * ei * ej;
  }
  return d;
}

/// Shortest coupling path from i to j (BFS, smaller spin index wins ties).
inline std::vector<int> relay_route(const SpinSystem& sys, int from, int to) {
  if (from == to) throw std::invalid_argument("relay_route: identical endpoints");
  std::vector<int> parent(sys.n() + 1, 0);
  std::deque<int> queue{from};
  parent[from] = from;
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    if (cur == to) break;
    for (int nb : sys.neighbors(cur)) {
      if (parent[nb] == 0) {
        parent[nb] = cur;
        queue.push_back(nb);
      }
    }
  }
  if (parent[to] == 0)
    throw RoutingError("spins " + std::to_string(from) + " and " + std::to_string(to) +
                       " are not connected in the coupling graph");
  std::vector<int> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

// ---------------------------------------------------------------------------
// Text format

inline SpinSystem parse_spin_system(std::istream& in) {
  struct SpinLine {
    std::string name;
    double offset_hz;
  };
  std::map<int, SpinLine> spins;
  std::vector<std::tuple<int, int, double>> js;
  std::string line;
  int lineno = 0;
  int max_spin = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "spin") {
      if (toks.size() != 4) throw ParseError(lineno, "expected 'spin <i> <name> <offset_hz>'");
      int i = static_cast<int>(parse_int(toks[1], lineno));
      if (i < 1 || i > kMaxSpins) throw ParseError(lineno, "spin index out of range");
      if (spins.count(i)) throw ParseError(lineno, "spin " + std::to_string(i) + " declared twice");
      spins[i] = {toks[2], parse_double(toks[3], lineno)};
      max_spin = std::max(max_spin, i);
    } else if (toks[0] == "J") {
      if (toks.size() != 4) throw ParseError(lineno, "expected 'J <i> <j> <hz>'");
      int i = static_cast<int>(parse_int(toks[1], lineno));
      int jj = static_cast<int>(parse_int(toks[2], lineno));
      if (i == jj) throw ParseError(lineno, "self coupling J(i,i)");
      js.emplace_back(i, jj, parse_double(toks[3], lineno));
    } else {
      throw ParseError(lineno, "unknown directive '" + toks[0] + "'");
    }
  }
  if (max_spin == 0) throw ParseError(lineno ? lineno : 1, "no spins declared");
  for (int i = 1; i <= max_spin; ++i)
    if (!spins.count(i))
      throw ParseError(lineno, "spin " + std::to_string(i) + " missing: spins must be 1..n");
  SpinSystem sys(max_spin);
  for (const auto& [i, s] : spins) {
    sys.set_name(i, s.name);
    sys.set_offset_hz(i, s.offset_hz);
  }
  for (const auto& [i, jj, hz] : js) {
    if (i > max_spin || jj > max_spin)
      throw ParseError(lineno, "J references undeclared spin");
    sys.set_j(i, jj, hz);
  }
  return sys;
}

inline std::string to_text(const SpinSystem& sys) {
  std::ostringstream out;
  for (int i = 1; i <= sys.n(); ++i)
    out << "spin " << i << " " << sys.name(i) << " " << format_g12(sys.offset_hz(i))
        << "\n";
  for (int i = 1; i <= sys.n(); ++i)
    for (int jj = i + 1; jj <= sys.n(); ++jj)
      if (sys.j(i, jj) != 0.0)
        out << "J " << i << " " << jj << " " << format_g12(sys.j(i, jj)) << "\n";
  return out.str();
}

}  // namespace spinsim

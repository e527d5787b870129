#pragma once

// Bidirectional transcoding between a diagonal Hamiltonian's eigenenergy
// vector xi (indexed by basis state k) and its Z-product coefficient vector
// alpha (indexed by the Z-mask), through the 2^n x 2^n +-1 Hadamard matrix
//
//   M_kj = (eps_1^k)^{eta_1^j} ... (eps_n^k)^{eta_n^j},   xi = M alpha,
//   alpha = 2^{-n} M^T xi,   M M^T = 2^n 1 (exact in integers),
//
// with eps_i = 1 - 2 eta_i and k = sum_i eta_i 2^{i-1}. The basis map is
// fixed: simulated eigenstate k corresponds to the Zeeman state |k>.

#include "spinsim/pauli.hpp"
#include "spinsim/text.hpp"

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace spinsim {

namespace detail {
inline void check_map_size(int n) {
  if (n < 1 || n > kMaxDenseSpins)
    throw std::invalid_argument("eigenmap limited to " +
                                std::to_string(kMaxDenseSpins) + " spins, got " +
                                std::to_string(n));
}
}  // namespace detail

/// Eigenenergies xi_k (rad/s), one per basis state k.
struct EnergyVector {
  int n = 0;
  std::vector<double> xi;
};

/// Z-product coefficients alpha_k (rad/s); mask bit i-1 set means sigma_z on
/// spin i participates. alpha[0] is the identity (trace) component.
struct CoefficientVector {
  int n = 0;
  std::vector<double> alpha;
};

/// eps_i = +1 when bit i-1 of k is clear, -1 when set; i = 1..n.
inline std::vector<int> eps_of(std::uint32_t k, int n) {
  detail::check_map_size(n);
  if (k >= (1u << n))
    throw std::invalid_argument("basis index out of range: " + std::to_string(k));
  std::vector<int> eps(n);
  for (int i = 1; i <= n; ++i) eps[i - 1] = (k >> (i - 1) & 1u) ? -1 : +1;
  return eps;
}

/// Integer-valued +-1 matrix with M M^T = 2^n 1 exactly.
struct HadamardMatrixM {
  int n = 0;
  std::vector<std::int32_t> entries;  // row-major, 2^n x 2^n

  std::int64_t dim() const { return std::int64_t{1} << n; }
  std::int32_t at(std::int64_t k, std::int64_t j) const {
    return entries[static_cast<std::size_t>(k * dim() + j)];
  }
};

inline HadamardMatrixM build_M(int n) {
  detail::check_map_size(n);
  HadamardMatrixM m;
  m.n = n;
  const std::int64_t dim = m.dim();
  m.entries.resize(static_cast<std::size_t>(dim * dim));
  for (std::int64_t k = 0; k < dim; ++k) {
    std::vector<int> eps = eps_of(static_cast<std::uint32_t>(k), n);
    for (std::int64_t j = 0; j < dim; ++j) {
      std::int32_t e = 1;
      for (int i = 1; i <= n; ++i)
        if (j >> (i - 1) & 1) e *= eps[i - 1];
      m.entries[static_cast<std::size_t>(k * dim + j)] = e;
    }
  }
  return m;
}

/// xi = M alpha. The result equals the dense diagonal of
/// sum_k alpha_k Z-mask_k entrywise.
inline EnergyVector xi_from_alpha(const CoefficientVector& a) {
  detail::check_map_size(a.n);
  const std::size_t dim = std::size_t{1} << a.n;
  if (a.alpha.size() != dim)
    throw std::invalid_argument("coefficient vector length != 2^n");
  HadamardMatrixM m = build_M(a.n);
  EnergyVector e;
  e.n = a.n;
  e.xi.assign(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j)
      s += m.at(static_cast<std::int64_t>(k), static_cast<std::int64_t>(j)) * a.alpha[j];
    e.xi[k] = s;
  }
  return e;
}

/// alpha = 2^{-n} M^T xi; exact inverse of xi_from_alpha up to roundoff.
inline CoefficientVector alpha_from_xi(const EnergyVector& e) {
  detail::check_map_size(e.n);
  const std::size_t dim = std::size_t{1} << e.n;
  if (e.xi.size() != dim)
    throw std::invalid_argument("energy vector length != 2^n");
  HadamardMatrixM m = build_M(e.n);
  CoefficientVector a;
  a.n = e.n;
  a.alpha.assign(dim, 0.0);
  const double scale = 1.0 / static_cast<double>(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j)
      s += m.at(static_cast<std::int64_t>(j), static_cast<std::int64_t>(k)) * e.xi[j];
    a.alpha[k] = s * scale;
  }
  return a;
}

/// Diagonal idempotent E_k = E_{eps_n}^n ... E_{eps_1}^1 with
/// E_+-^i = (1 +- sigma_z^i)/2, expanded as a Pauli sum. Its dense form is
/// the basis projector |k><k|.
inline OperatorSum projector_Ek(std::uint32_t k, int n) {
  detail::check_map_size(n);
  if (k >= (1u << n))
    throw std::invalid_argument("basis index out of range: " + std::to_string(k));
  OperatorSum sum(n);
  const std::uint32_t dim = 1u << n;
  const double scale = 1.0 / static_cast<double>(dim);
  for (std::uint32_t mask = 0; mask < dim; ++mask) {
    int sign = (std::popcount(mask & k) % 2 == 0) ? +1 : -1;
    sum.add(PauliTerm::z_mask(n, mask, sign * scale));
  }
  return sum;
}

/// sum_k alpha_k Z-mask_k as an operator; the Hamiltonian form of alpha.
inline OperatorSum zproduct_operator(const CoefficientVector& a) {
  const std::size_t dim = std::size_t{1} << a.n;
  if (a.alpha.size() != dim)
    throw std::invalid_argument("coefficient vector length != 2^n");
  OperatorSum sum(a.n);
  for (std::size_t mask = 0; mask < dim; ++mask)
    if (a.alpha[mask] != 0.0)
      sum.add(PauliTerm::z_mask(a.n, static_cast<std::uint32_t>(mask), a.alpha[mask]));
  return sum;
}

// ---------------------------------------------------------------------------
// Text format: header "n=<spins> kind=<xi|alpha>", then one value per line in
// index order.

namespace detail {

inline std::pair<int, std::string> parse_vector_header(const std::string& line) {
  auto toks = split_ws(line);
  if (toks.size() != 2) throw ParseError(1, "expected header 'n=<spins> kind=<xi|alpha>'");
  int n = static_cast<int>(parse_int(expect_kv(toks[0], "n", 1), 1));
  std::string kind = expect_kv(toks[1], "kind", 1);
  if (kind != "xi" && kind != "alpha")
    throw ParseError(1, "kind must be xi or alpha, got '" + kind + "'");
  if (n < 1 || n > kMaxDenseSpins) throw ParseError(1, "spin count out of range");
  return {n, kind};
}

inline std::vector<double> parse_vector_body(std::istream& in, int n) {
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> values;
  values.reserve(dim);
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 1) throw ParseError(lineno, "expected one value per line");
    if (values.size() == dim) throw ParseError(lineno, "more than 2^n values");
    values.push_back(parse_double(toks[0], lineno));
  }
  if (values.size() != dim)
    throw ParseError(lineno, "expected " + std::to_string(dim) + " values, got " +
                                 std::to_string(values.size()));
  return values;
}

}  // namespace detail

/// Parses either vector kind; returns the kind read.
inline std::string read_vector_file(std::istream& in, EnergyVector& e,
                                    CoefficientVector& a) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError(1, "empty input");
  auto [n, kind] = detail::parse_vector_header(header);
  auto values = detail::parse_vector_body(in, n);
  if (kind == "xi") {
    e.n = n;
    e.xi = std::move(values);
  } else {
    a.n = n;
    a.alpha = std::move(values);
  }
  return kind;
}

inline std::string write_vector_text(int n, const std::string& kind,
                                     const std::vector<double>& values) {
  std::ostringstream out;
  out << "n=" << n << " kind=" << kind << "\n";
  for (double v : values) out << format_g12(v) << "\n";
  return out.str();
}

inline std::string to_text(const EnergyVector& e) {
  return write_vector_text(e.n, "xi", e.xi);
}

inline std::string to_text(const CoefficientVector& a) {
  return write_vector_text(a.n, "alpha", a.alpha);
}

}  // namespace spinsim

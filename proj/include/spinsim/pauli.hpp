#pragma once

// Exact algebra of n-spin Pauli product operators and their dense matrix
// realizations. Conventions used throughout the library:
//   - spins are numbered 1..n; spin i occupies bit i-1 of the basis index
//   - basis bit 0 is the sigma_z = +1 state, bit 1 the -1 state
//   - hbar = 1; Hamiltonian coefficients are angular frequencies (rad/s)

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr int kMaxSpins = 20;       // symbolic algebra cap
inline constexpr int kMaxDenseSpins = 10;  // dense realization cap

enum class Axis : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char axis_char(Axis a) { return "IXYZ"[static_cast<int>(a)]; }

namespace detail {

// i^g phase of the single-spin product sigma_a * sigma_b = i^g * sigma_c.
inline constexpr int kMulPhase[4][4] = {
    // I  X  Y  Z
    {0, 0, 0, 0},  // I *
    {0, 0, 1, 3},  // X *   (XY = iZ, XZ = -iY)
    {0, 3, 0, 1},  // Y *   (YX = -iZ, YZ = iX)
    {0, 1, 3, 0},  // Z *   (ZX = iY, ZY = -iX)
};

inline constexpr int kMulAxis[4][4] = {
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
};

inline Complex i_power(int g) {
  switch (((g % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

inline void check_spin_count(int n) {
  if (n < 1 || n > kMaxSpins)
    throw std::invalid_argument("spin count out of range: " + std::to_string(n));
}

}  // namespace detail

/// A scalar coefficient times a tensor product of single-spin Pauli factors.
/// The factor string is packed two bits per spin; the coefficient multiplies
/// the literal product of I/X/Y/Z matrices.
class PauliTerm {
 public:
  explicit PauliTerm(int n, Complex coeff = 1.0)
      : n_(n), code_(0), coeff_(coeff) {
    detail::check_spin_count(n);
  }

  static PauliTerm identity(int n) { return PauliTerm(n); }

  static PauliTerm single(int n, int spin, Axis a, Complex coeff = 1.0) {
    PauliTerm t(n, coeff);
    t.set_axis(spin, a);
    return t;
  }

  /// Builds a term from a factor string, spin 1 first: "ZYZ" = Z1 Y2 Z3.
  static PauliTerm from_string(const std::string& factors, Complex coeff = 1.0) {
    PauliTerm t(static_cast<int>(factors.size()), coeff);
    for (int i = 1; i <= t.n_; ++i) {
      switch (factors[i - 1]) {
        case 'I': break;
        case 'X': t.set_axis(i, Axis::X); break;
        case 'Y': t.set_axis(i, Axis::Y); break;
        case 'Z': t.set_axis(i, Axis::Z); break;
        default:
          throw std::invalid_argument("bad Pauli factor character");
      }
    }
    return t;
  }

  /// Z-product over the spins named by `mask` (bit i-1 <-> sigma_z on spin i).
  static PauliTerm z_mask(int n, std::uint32_t mask, Complex coeff = 1.0) {
    PauliTerm t(n, coeff);
    for (int i = 1; i <= n; ++i)
      if (mask >> (i - 1) & 1u) t.set_axis(i, Axis::Z);
    if (mask >> n) throw std::invalid_argument("mask names spins beyond n");
    return t;
  }

  int n() const { return n_; }
  Complex coeff() const { return coeff_; }
  void set_coeff(Complex c) { coeff_ = c; }

  Axis axis(int spin) const {
    check_spin(spin);
    return static_cast<Axis>(code_ >> (2 * (spin - 1)) & 3u);
  }

  void set_axis(int spin, Axis a) {
    check_spin(spin);
    code_ &= ~(std::uint64_t{3} << (2 * (spin - 1)));
    code_ |= std::uint64_t{static_cast<std::uint8_t>(a)} << (2 * (spin - 1));
  }

  /// Packed factor string; identical for equal factor strings of the same n.
  std::uint64_t factor_code() const { return code_; }

  bool is_identity_string() const { return code_ == 0; }

  /// Number of non-identity factors.
  int weight() const {
    int w = 0;
    for (int i = 1; i <= n_; ++i)
      if (axis(i) != Axis::I) ++w;
    return w;
  }

  /// Bitmask of spins carrying an X or Y factor.
  std::uint32_t transverse_mask() const {
    std::uint32_t m = 0;
    for (int i = 1; i <= n_; ++i) {
      Axis a = axis(i);
      if (a == Axis::X || a == Axis::Y) m |= 1u << (i - 1);
    }
    return m;
  }

  bool is_hermitian() const { return std::abs(coeff_.imag()) == 0.0; }

  std::string to_string() const {
    std::string s;
    bool any = false;
    for (int i = 1; i <= n_; ++i) {
      Axis a = axis(i);
      if (a == Axis::I) continue;
      s += axis_char(a);
      s += std::to_string(i);
      any = true;
    }
    if (!any) s = "1";
    return s;
  }

 private:
  void check_spin(int spin) const {
    if (spin < 1 || spin > n_)
      throw std::invalid_argument("spin index out of range: " + std::to_string(spin));
  }

  int n_;
  std::uint64_t code_;
  Complex coeff_;
};

/// Product of two Pauli terms. Closure is exact: the result is a single term
/// whose phase is tracked as an integer power of i.
inline PauliTerm pauli_multiply(const PauliTerm& a, const PauliTerm& b) {
  if (a.n() != b.n())
    throw std::invalid_argument("pauli_multiply: spin count mismatch");
  PauliTerm c(a.n());
  int g = 0;
  for (int i = 1; i <= a.n(); ++i) {
    int ai = static_cast<int>(a.axis(i));
    int bi = static_cast<int>(b.axis(i));
    g += detail::kMulPhase[ai][bi];
    c.set_axis(i, static_cast<Axis>(detail::kMulAxis[ai][bi]));
  }
  c.set_coeff(a.coeff() * b.coeff() * detail::i_power(g));
  return c;
}

/// Canonical, merged sum of Pauli terms over a shared spin count. No two
/// entries share a factor string; zero terms are pruned on insertion.
class OperatorSum {
 public:
  explicit OperatorSum(int n) : n_(n) { detail::check_spin_count(n); }

  int n() const { return n_; }

  void add(const PauliTerm& t) {
    if (t.n() != n_) throw std::invalid_argument("OperatorSum: spin count mismatch");
    Complex& c = terms_[t.factor_code()];
    c += t.coeff();
    if (c == Complex{0.0, 0.0}) terms_.erase(t.factor_code());
  }

  OperatorSum& operator+=(const PauliTerm& t) {
    add(t);
    return *this;
  }

  OperatorSum& operator+=(const OperatorSum& o) {
    for (const auto& t : o.terms()) add(t);
    return *this;
  }

  void scale(Complex s) {
    for (auto& [code, c] : terms_) c *= s;
  }

  std::size_t size() const { return terms_.size(); }

  std::vector<PauliTerm> terms() const {
    std::vector<PauliTerm> out;
    out.reserve(terms_.size());
    for (const auto& [code, c] : terms_) {
      PauliTerm t(n_, c);
      for (int i = 1; i <= n_; ++i)
        t.set_axis(i, static_cast<Axis>(code >> (2 * (i - 1)) & 3u));
      out.push_back(t);
    }
    return out;
  }

  Complex coefficient(const PauliTerm& probe) const {
    auto it = terms_.find(probe.factor_code());
    return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
  }

  /// All factor strings are Hermitian, so the sum is Hermitian iff every
  /// coefficient is real.
  bool is_hermitian(double tol = 0.0) const {
    for (const auto& [code, c] : terms_)
      if (std::abs(c.imag()) > tol) return false;
    return true;
  }

 private:
  int n_;
  std::map<std::uint64_t, Complex> terms_;
};

namespace detail {

inline void check_dense_size(int n) {
  if (n < 1 || n > kMaxDenseSpins)
    throw std::invalid_argument("dense realization limited to " +
                                std::to_string(kMaxDenseSpins) + " spins, got " +
                                std::to_string(n));
}

// <r|sigma_a|c> for a single spin; c = r ^ (a in {X,Y}).
inline Complex pauli_entry(Axis a, int row_bit) {
  switch (a) {
    case Axis::I: return {1.0, 0.0};
    case Axis::X: return {1.0, 0.0};
    case Axis::Y: return row_bit ? Complex{0.0, 1.0} : Complex{0.0, -1.0};
    default: return row_bit ? Complex{-1.0, 0.0} : Complex{1.0, 0.0};
  }
}

}  // namespace detail

/// Dense matrix of a Pauli term under the bit convention above. Each row has
/// exactly one nonzero column, so the fill is O(2^n * n).
inline Matrix to_dense(const PauliTerm& t) {
  detail::check_dense_size(t.n());
  const std::int64_t dim = std::int64_t{1} << t.n();
  std::uint32_t flip = t.transverse_mask();
  Matrix m = Matrix::Zero(dim, dim);
  for (std::int64_t r = 0; r < dim; ++r) {
    std::int64_t c = r ^ flip;
    Complex v = t.coeff();
    for (int i = 1; i <= t.n(); ++i)
      v *= detail::pauli_entry(t.axis(i), static_cast<int>(r >> (i - 1) & 1));
    m(r, c) = v;
  }
  return m;
}

inline Matrix to_dense(const OperatorSum& s) {
  detail::check_dense_size(s.n());
  const std::int64_t dim = std::int64_t{1} << s.n();
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& t : s.terms()) m += to_dense(t);
  return m;
}

/// A 2^n x 2^n unitary; unitarity is a contract of the producing operation,
/// checked explicitly where tests require it.
struct DenseUnitary {
  int n = 0;
  Matrix u;

  /// Frobenius norm of U^dag U - 1.
  double unitarity_error() const {
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
  }
};

/// exp(-i theta P) for an involutory P (Pauli string with coefficient +/-1):
/// cos(theta) 1 - i sin(theta) P.
inline DenseUnitary exp_pauli(const PauliTerm& p, double theta) {
  if (std::abs(p.coeff().imag()) > 1e-14 ||
      std::abs(std::abs(p.coeff().real()) - 1.0) > 1e-14)
    throw std::invalid_argument("exp_pauli: term does not square to identity");
  detail::check_dense_size(p.n());
  const std::int64_t dim = std::int64_t{1} << p.n();
  Matrix m = to_dense(p);
  m *= Complex{0.0, -std::sin(theta)};
  m += std::cos(theta) * Matrix::Identity(dim, dim);
  return DenseUnitary{p.n(), std::move(m)};
}

/// Net coherence-order spectrum of a term. Every X/Y factor is split into
/// raising/lowering parts with sigma_+- = (X +- iY)/2, i.e. X = s+ + s-,
/// Y = -i(s+ - s-); Z and I factors are order 0. One entry per raising/
/// lowering combination, enumerated with the lowest transverse spin as the
/// fastest-varying choice and sigma_+ first.
inline std::vector<std::pair<int, Complex>> coherence_orders(const PauliTerm& p) {
  std::vector<int> tspins;
  for (int i = 1; i <= p.n(); ++i)
    if (p.axis(i) == Axis::X || p.axis(i) == Axis::Y) tspins.push_back(i);
  const std::size_t w = tspins.size();
  std::vector<std::pair<int, Complex>> out;
  out.reserve(std::size_t{1} << w);
  for (std::uint32_t combo = 0; combo < (1u << w); ++combo) {
    int order = 0;
    Complex weight = p.coeff();
    for (std::size_t t = 0; t < w; ++t) {
      bool lowering = combo >> t & 1u;
      order += lowering ? -1 : +1;
      if (p.axis(tspins[t]) == Axis::Y)
        weight *= lowering ? Complex{0.0, 1.0} : Complex{0.0, -1.0};
    }
    out.emplace_back(order, weight);
  }
  return out;
}

/// Tr(rho P) / 2^n, so a state equal to the probe itself yields 1. The probe
/// must be Hermitian (real coefficient). Uses the monomial structure of P.
inline double expectation(const Matrix& rho, const PauliTerm& p) {
  if (!p.is_hermitian())
    throw std::invalid_argument("expectation: probe is not Hermitian");
  const std::int64_t dim = std::int64_t{1} << p.n();
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("expectation: dimension mismatch");
  std::uint32_t flip = p.transverse_mask();
  Complex tr = 0.0;
  for (std::int64_t r = 0; r < dim; ++r) {
    std::int64_t c = r ^ flip;
    Complex v = p.coeff();
    for (int i = 1; i <= p.n(); ++i)
      v *= detail::pauli_entry(p.axis(i), static_cast<int>(r >> (i - 1) & 1));
    tr += rho(c, r) * v;
  }
  return (tr / static_cast<double>(dim)).real();
}

/// min over global phase phi of ||A - e^{i phi} B||_F / 2^{n/2}, with
/// phi = arg Tr(B^dag A). Zero for matrices equal up to a unit scalar.
inline double global_phase_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("global_phase_distance: shape mismatch");
  Complex tr = (b.adjoint() * a).trace();
  Complex phase{1.0, 0.0};
  if (std::abs(tr) > 0.0) phase = tr / std::abs(tr);
  return (a - phase * b).norm() / std::sqrt(static_cast<double>(a.rows()));
}

inline double global_phase_distance(const DenseUnitary& a, const DenseUnitary& b) {
  return global_phase_distance(a.u, b.u);
}

}  // namespace spinsim

// Copyright 2026 The cdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Symbolic algebra over N-qubit Pauli strings.
 *
 * Conventions used throughout the library:
 *  - Qubit 0 is the leftmost letter of a string and the leftmost Kronecker
 *    factor, i.e. the most significant bit of a computational-basis index.
 *    "XZ" is X (x) Z and the label "01" is basis index 1.
 *  - Coefficients are complex; Hamiltonians carry real coefficients and
 *    commutators of them carry imaginary ones.
 */

#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cdsim/error.hpp"
#include "cdsim/format.hpp"

namespace cdsim {

struct PauliProduct;

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char to_char(Pauli p) {
  constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  return kLetters[static_cast<int>(p)];
}

/**
 * Tensor product of single-qubit Paulis, stored as two bitmasks over the
 * computational-basis index bits: `flip` marks X/Y letters, `phase` marks
 * Y/Z letters. Qubit q lives at bit (n - 1 - q).
 */
class PauliString {
 public:
  static constexpr std::size_t kMaxQubits = 62;

  PauliString() = default;

  /// Identity on `n_qubits` qubits.
  explicit PauliString(std::size_t n_qubits) : n_(n_qubits) {
    if (n_qubits > kMaxQubits) {
      throw DimensionError("PauliString supports at most " + std::to_string(kMaxQubits) +
                           " qubits, got " + std::to_string(n_qubits));
    }
  }

  static PauliString from_letters(std::string_view letters) {
    PauliString p(letters.size());
    for (std::size_t q = 0; q < letters.size(); ++q) {
      switch (letters[q]) {
        case 'I': break;
        case 'X': p.x_ |= p.bit(q); break;
        case 'Y': p.x_ |= p.bit(q); p.z_ |= p.bit(q); break;
        case 'Z': p.z_ |= p.bit(q); break;
        default:
          throw DomainError("invalid Pauli letter '" + std::string(1, letters[q]) + "' in \"" +
                            std::string(letters) + "\"");
      }
    }
    return p;
  }

  static PauliString single(std::size_t n_qubits, std::size_t qubit, Pauli p) {
    return PauliString(n_qubits).with(qubit, p);
  }

  static PauliString pair(std::size_t n_qubits, std::size_t q1, Pauli p1, std::size_t q2,
                          Pauli p2) {
    if (q1 == q2) throw DomainError("PauliString::pair needs two distinct qubits");
    return PauliString(n_qubits).with(q1, p1).with(q2, p2);
  }

  std::size_t size() const noexcept { return n_; }

  Pauli operator[](std::size_t qubit) const {
    check_qubit(qubit);
    const bool x = (x_ & bit(qubit)) != 0;
    const bool z = (z_ & bit(qubit)) != 0;
    if (x) return z ? Pauli::Y : Pauli::X;
    return z ? Pauli::Z : Pauli::I;
  }

  /// Copy with the letter on `qubit` replaced.
  PauliString with(std::size_t qubit, Pauli p) const {
    check_qubit(qubit);
    PauliString out = *this;
    const auto b = bit(qubit);
    out.x_ &= ~b;
    out.z_ &= ~b;
    if (p == Pauli::X || p == Pauli::Y) out.x_ |= b;
    if (p == Pauli::Z || p == Pauli::Y) out.z_ |= b;
    return out;
  }

  std::size_t weight() const noexcept { return std::popcount(x_ | z_); }
  bool is_identity() const noexcept { return (x_ | z_) == 0; }

  /// Qubits carrying a non-identity letter, ascending.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < n_; ++q) {
      if ((x_ | z_) & bit(q)) out.push_back(q);
    }
    return out;
  }

  std::string letters() const {
    std::string out(n_, 'I');
    for (std::size_t q = 0; q < n_; ++q) out[q] = to_char((*this)[q]);
    return out;
  }

  /// Basis-index bits flipped by this string (X and Y letters).
  std::uint64_t flip_mask() const noexcept { return x_; }
  /// Basis-index bits contributing a (-1) sign (Y and Z letters).
  std::uint64_t phase_mask() const noexcept { return z_; }
  std::size_t y_count() const noexcept { return std::popcount(x_ & z_); }

  /// P|index> = phase * |index ^ flip_mask()>.
  Complex basis_phase(std::uint64_t index) const noexcept {
    static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    int power = static_cast<int>(y_count() & 3U);
    if (std::popcount(index & z_) & 1) power += 2;
    return kIPow[power & 3];
  }

  bool commutes_with(const PauliString& other) const {
    check_same_size(other);
    return (std::popcount((x_ & other.z_) ^ (z_ & other.x_)) & 1) == 0;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

  /// Lexicographic on letters with I < X < Y < Z, qubit 0 most significant.
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    const std::uint64_t diff = (a.x_ ^ b.x_) | (a.z_ ^ b.z_);
    if (diff == 0) return std::strong_ordering::equal;
    const std::uint64_t top = std::uint64_t{1} << (63 - std::countl_zero(diff));
    return code(a, top) <=> code(b, top);
  }

  void check_same_size(const PauliString& other) const {
    if (other.n_ != n_) {
      throw DimensionError("Pauli string length mismatch: " + std::to_string(n_) + " vs " +
                           std::to_string(other.n_));
    }
  }

 private:
  friend PauliProduct multiply(const PauliString& p, const PauliString& q);

  std::uint64_t bit(std::size_t qubit) const noexcept {
    return std::uint64_t{1} << (n_ - 1 - qubit);
  }

  void check_qubit(std::size_t qubit) const {
    if (qubit >= n_) {
      throw DimensionError("qubit " + std::to_string(qubit) + " out of range for " +
                           std::to_string(n_) + "-qubit string");
    }
  }

  static int code(const PauliString& p, std::uint64_t b) {
    const bool x = (p.x_ & b) != 0;
    const bool z = (p.z_ & b) != 0;
    return x ? (z ? 2 : 1) : (z ? 3 : 0);
  }

  std::size_t n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

struct PauliProduct {
  Complex phase;
  PauliString string;
};

/// p * q = phase * r with phase in {+1, -1, +i, -i}.
inline PauliProduct multiply(const PauliString& p, const PauliString& q) {
  p.check_same_size(q);
  // Write each string as i^{|x&z|} X^x Z^z; moving Z^{z_p} past X^{x_q}
  // contributes (-1)^{|z_p & x_q|}.
  PauliString r(p.n_);
  r.x_ = p.x_ ^ q.x_;
  r.z_ = p.z_ ^ q.z_;
  int power = std::popcount(p.x_ & p.z_) + std::popcount(q.x_ & q.z_) -
              std::popcount(r.x_ & r.z_) + 2 * std::popcount(p.z_ & q.x_);
  power = ((power % 4) + 4) % 4;
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return {kIPow[power], r};
}

/**
 * Weighted sum of Pauli strings on a fixed register. Terms are kept in
 * lexicographic order; any coefficient whose magnitude drops below the
 * pruning epsilon after an arithmetic operation is removed.
 */
class PauliSum {
 public:
  using Coefficient = Complex;
  using TermMap = std::map<PauliString, Coefficient>;
  static constexpr double kDefaultPruneEpsilon = 1e-14;

  explicit PauliSum(std::size_t n_qubits = 0, double prune_epsilon = kDefaultPruneEpsilon)
      : n_(n_qubits), eps_(prune_epsilon) {}

  /// PauliSum(2, {{"XZ", 1.0}, {"YY", -0.5}})
  PauliSum(std::size_t n_qubits,
           std::initializer_list<std::pair<std::string_view, Coefficient>> terms,
           double prune_epsilon = kDefaultPruneEpsilon)
      : n_(n_qubits), eps_(prune_epsilon) {
    for (const auto& [letters, c] : terms) add(PauliString::from_letters(letters), c);
  }

  static PauliSum from_term(const PauliString& p, Coefficient c = 1.0) {
    PauliSum s(p.size());
    s.add(p, c);
    return s;
  }

  std::size_t n_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  double prune_epsilon() const noexcept { return eps_; }
  const TermMap& terms() const noexcept { return terms_; }
  TermMap::const_iterator begin() const { return terms_.begin(); }
  TermMap::const_iterator end() const { return terms_.end(); }

  Coefficient coefficient(const PauliString& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? Coefficient{} : it->second;
  }

  Coefficient coefficient(std::string_view letters) const {
    return coefficient(PauliString::from_letters(letters));
  }

  PauliSum& add(const PauliString& p, Coefficient c) {
    check_string(p);
    auto [it, inserted] = terms_.try_emplace(p, c);
    if (!inserted) it->second += c;
    if (std::abs(it->second) < eps_) terms_.erase(it);
    return *this;
  }

  PauliSum& operator+=(const PauliSum& other) {
    check_same_size(other);
    for (const auto& [p, c] : other.terms_) add(p, c);
    return *this;
  }

  PauliSum& operator-=(const PauliSum& other) {
    check_same_size(other);
    for (const auto& [p, c] : other.terms_) add(p, -c);
    return *this;
  }

  PauliSum& operator*=(Coefficient s) {
    for (auto& [p, c] : terms_) c *= s;
    prune();
    return *this;
  }

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator-(PauliSum a) { return a *= -1.0; }
  friend PauliSum operator*(PauliSum a, Coefficient s) { return a *= s; }
  friend PauliSum operator*(Coefficient s, PauliSum a) { return a *= s; }
  friend PauliSum operator*(PauliSum a, double s) { return a *= Coefficient(s); }
  friend PauliSum operator*(double s, PauliSum a) { return a *= Coefficient(s); }

  /// Operator product a * b.
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b) {
    a.check_same_size(b);
    PauliSum out(a.n_, a.eps_);
    for (const auto& [p, cp] : a.terms_) {
      for (const auto& [q, cq] : b.terms_) {
        auto [phase, r] = multiply(p, q);
        out.accumulate(r, phase * cp * cq);
      }
    }
    out.prune();
    return out;
  }

  /// True when every coefficient is real to within `tol`.
  bool is_hermitian(double tol = 1e-12) const {
    for (const auto& [p, c] : terms_) {
      if (std::abs(c.imag()) > tol) return false;
    }
    return true;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [p, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  friend bool operator==(const PauliSum& a, const PauliSum& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  void check_same_size(const PauliSum& other) const {
    if (other.n_ != n_) {
      throw DimensionError("register size mismatch: " + std::to_string(n_) + " vs " +
                           std::to_string(other.n_) + " qubits");
    }
  }

 private:
  friend PauliSum commutator(const PauliSum& a, const PauliSum& b);

  void check_string(const PauliString& p) const {
    if (p.size() != n_) {
      throw DimensionError("term " + p.letters() + " does not fit a " + std::to_string(n_) +
                           "-qubit sum");
    }
  }

  void accumulate(const PauliString& p, Coefficient c) {
    auto [it, inserted] = terms_.try_emplace(p, c);
    if (!inserted) it->second += c;
  }

  void prune() {
    std::erase_if(terms_, [this](const auto& kv) { return std::abs(kv.second) < eps_; });
  }

  std::size_t n_ = 0;
  double eps_ = kDefaultPruneEpsilon;
  TermMap terms_;
};

/// [a, b] = ab - ba. Only anticommuting string pairs contribute, each as 2pq.
inline PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  a.check_same_size(b);
  PauliSum out(a.n_, a.eps_);
  for (const auto& [p, cp] : a.terms_) {
    for (const auto& [q, cq] : b.terms_) {
      if (p.commutes_with(q)) continue;
      auto [phase, r] = multiply(p, q);
      out.accumulate(r, 2.0 * phase * cp * cq);
    }
  }
  out.prune();
  return out;
}

/// Left-nested bracket [h, [h, ... [h, dh]]] with `depth` copies of h.
inline PauliSum nested_commutator(const PauliSum& h, const PauliSum& dh, int depth) {
  if (depth < 1) throw DomainError("nested_commutator depth must be >= 1");
  PauliSum c = commutator(h, dh);
  for (int d = 1; d < depth; ++d) c = commutator(h, c);
  return c;
}

/// Tr[a^dagger b] / 2^N, i.e. sum over shared strings of conj(a_P) b_P.
inline Complex normalized_trace_inner_product(const PauliSum& a, const PauliSum& b) {
  a.check_same_size(b);
  Complex sum{};
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  const bool swapped = &small != &a;
  for (const auto& [p, c] : small) {
    const Complex other = large.coefficient(p);
    if (other == Complex{}) continue;
    sum += swapped ? std::conj(other) * c : std::conj(c) * other;
  }
  return sum;
}

/// Hilbert-Schmidt pairing Tr[a^dagger b].
inline Complex trace_inner_product(const PauliSum& a, const PauliSum& b) {
  return std::ldexp(1.0, static_cast<int>(a.n_qubits())) * normalized_trace_inner_product(a, b);
}

/// Dense 2^N x 2^N matrix of the sum. Guarded because memory grows as 4^N.
inline DenseMatrix to_dense(const PauliSum& a, std::size_t max_qubits = 12) {
  const std::size_t n = a.n_qubits();
  if (n > max_qubits) {
    throw DimensionError("dense export of a " + std::to_string(n) + "-qubit operator exceeds the " +
                         std::to_string(max_qubits) + "-qubit limit");
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [p, c] : a) {
    for (std::uint64_t col = 0; col < dim; ++col) {
      const std::uint64_t row = col ^ p.flip_mask();
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += c * p.basis_phase(col);
    }
  }
  return m;
}

/// One term per line: "<re> <im> <letters>".
inline std::string to_text(const PauliSum& a) {
  std::string out;
  for (const auto& [p, c] : a) {
    out += format_number(c.real());
    out += ' ';
    out += format_number(c.imag());
    out += ' ';
    out += p.letters();
    out += '\n';
  }
  return out;
}

/// Inverse of to_text. `n_qubits` fixes the register when the text is empty.
inline PauliSum parse_pauli_sum(std::string_view text, std::size_t n_qubits = 0) {
  PauliSum out(n_qubits);
  bool sized = n_qubits != 0;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string re, im, letters;
    if (!(fields >> re >> im >> letters)) {
      throw DomainError("line " + std::to_string(line_no) + ": expected '<re> <im> <letters>'");
    }
    auto r = parse_number(re);
    auto i = parse_number(im);
    if (!r || !i) throw DomainError("line " + std::to_string(line_no) + ": bad coefficient");
    if (!sized) {
      out = PauliSum(letters.size());
      sized = true;
    }
    out.add(PauliString::from_letters(letters), Complex(*r, *i));
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const PauliString& p) { return os << p.letters(); }
inline std::ostream& operator<<(std::ostream& os, const PauliSum& s) { return os << to_text(s); }

}  // namespace cdsim

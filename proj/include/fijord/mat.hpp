#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fijord/ring.hpp"

namespace fijord {

/// Dense matrix over Z/nZ. Immutable-style API: operations return new
/// values. Shapes are part of the value; mixing rings raises
/// ModulusMismatch, mixing shapes std::invalid_argument.
class MatZn {
 public:
  MatZn(RingZn ring, std::size_t rows, std::size_t cols);
  static MatZn identity(RingZn ring, std::size_t k);

  const RingZn& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Residue at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, Residue v) { a_[i * cols_ + j] = v % ring_.modulus(); }

  MatZn operator+(const MatZn& o) const;
  MatZn operator-(const MatZn& o) const;
  MatZn operator*(const MatZn& o) const;
  MatZn scaled(Residue k) const;
  MatZn transposed() const;

  bool is_zero() const;

  /// Matrix-vector product (this * x).
  std::vector<Residue> apply(const std::vector<Residue>& x) const;

  friend bool operator==(const MatZn& a, const MatZn& b) {
    return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  void require_same_ring(const MatZn& o) const;

  RingZn ring_;
  std::size_t rows_, cols_;
  std::vector<Residue> a_;
};

/// Two-sided inverse of a square matrix over Z/nZ, or nullopt when none
/// exists (equivalently: when det is not a unit mod n). Composite moduli
/// are split into prime-power components, each inverted by Gaussian
/// elimination on unit pivots, and the results recombined.
std::optional<MatZn> mat_inverse(const MatZn& m);

}  // namespace fijord

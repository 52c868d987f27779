#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace fijord {

using Residue = std::uint32_t;

struct PrimePower {
  std::uint32_t prime = 0;
  std::uint32_t exponent = 0;
  std::uint32_t value = 0;  // prime^exponent
};

/// Arithmetic in Z/nZ with canonical representatives in [0, n).
/// Moduli are capped at 2^16 so that products fit comfortably in 64-bit
/// intermediates.
class RingZn {
 public:
  explicit RingZn(std::uint32_t modulus);

  std::uint32_t modulus() const { return n_; }

  Residue canon(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(n_);
    if (r < 0) r += n_;
    return static_cast<Residue>(r);
  }

  Residue add(Residue a, Residue b) const { return (a + b) % n_; }
  Residue sub(Residue a, Residue b) const { return (a + n_ - b) % n_; }
  Residue neg(Residue a) const { return a == 0 ? 0 : n_ - a; }
  Residue mul(Residue a, Residue b) const {
    return static_cast<Residue>((static_cast<std::uint64_t>(a) * b) % n_);
  }

  bool is_unit(Residue a) const;
  std::optional<Residue> inverse(Residue a) const;

  /// All e with e*e = e, ascending. Their number is 2^k where k is the
  /// number of distinct prime divisors of the modulus.
  std::vector<Residue> idempotents() const;
  std::vector<Residue> units() const;

  const std::vector<PrimePower>& prime_powers() const { return factors_; }

  friend bool operator==(const RingZn& a, const RingZn& b) { return a.n_ == b.n_; }
  friend bool operator!=(const RingZn& a, const RingZn& b) { return a.n_ != b.n_; }

 private:
  std::uint32_t n_;
  std::vector<PrimePower> factors_;
};

/// A residue tagged with its modulus, for scalar arithmetic between values
/// whose rings are not statically known to agree.
struct ZnElem {
  std::uint32_t modulus;
  Residue value;
};

ZnElem zn_add(ZnElem a, ZnElem b);
ZnElem zn_mul(ZnElem a, ZnElem b);
ZnElem zn_neg(ZnElem a);

}  // namespace fijord

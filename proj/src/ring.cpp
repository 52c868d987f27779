#include "fijord/ring.hpp"

#include <numeric>
#include <stdexcept>

#include "fijord/errors.hpp"

namespace fijord {

RingZn::RingZn(std::uint32_t modulus) : n_(modulus) {
  if (modulus < 2 || modulus > 65536) {
    throw std::invalid_argument("RingZn: modulus must be in [2, 65536], got " +
                                std::to_string(modulus));
  }
  std::uint32_t m = modulus;
  for (std::uint32_t p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      PrimePower pp{p, 0, 1};
      while (m % p == 0) {
        m /= p;
        ++pp.exponent;
        pp.value *= p;
      }
      factors_.push_back(pp);
    }
  }
  if (m > 1) factors_.push_back(PrimePower{m, 1, m});
}

bool RingZn::is_unit(Residue a) const {
  return std::gcd(a % n_, n_) == 1;
}

std::optional<Residue> RingZn::inverse(Residue a) const {
  a %= n_;
  // extended Euclid on (a, n)
  std::int64_t r0 = a, r1 = n_, s0 = 1, s1 = 0;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    std::int64_t s2 = s0 - q * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) return std::nullopt;
  return canon(s0);
}

std::vector<Residue> RingZn::idempotents() const {
  std::vector<Residue> out;
  for (Residue e = 0; e < n_; ++e) {
    if (mul(e, e) == e) out.push_back(e);
  }
  return out;
}

std::vector<Residue> RingZn::units() const {
  std::vector<Residue> out;
  for (Residue a = 0; a < n_; ++a) {
    if (is_unit(a)) out.push_back(a);
  }
  return out;
}

namespace {
void require_same_modulus(ZnElem a, ZnElem b) {
  if (a.modulus != b.modulus) {
    throw ModulusMismatch("scalar arithmetic across Z/" + std::to_string(a.modulus) +
                          " and Z/" + std::to_string(b.modulus));
  }
}
}  // namespace

ZnElem zn_add(ZnElem a, ZnElem b) {
  require_same_modulus(a, b);
  return {a.modulus, (a.value + b.value) % a.modulus};
}

ZnElem zn_mul(ZnElem a, ZnElem b) {
  require_same_modulus(a, b);
  return {a.modulus,
          static_cast<Residue>((static_cast<std::uint64_t>(a.value) * b.value) % a.modulus)};
}

ZnElem zn_neg(ZnElem a) {
  return {a.modulus, a.value % a.modulus == 0 ? 0u : a.modulus - a.value % a.modulus};
}

}  // namespace fijord

#include "fijord/mat.hpp"

#include <stdexcept>
#include <string>

#include "fijord/errors.hpp"

namespace fijord {

MatZn::MatZn(RingZn ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

MatZn MatZn::identity(RingZn ring, std::size_t k) {
  MatZn m(ring, k, k);
  for (std::size_t i = 0; i < k; ++i) m.set(i, i, 1);
  return m;
}

void MatZn::require_same_ring(const MatZn& o) const {
  if (ring_ != o.ring_) {
    throw ModulusMismatch("matrix arithmetic across Z/" + std::to_string(ring_.modulus()) +
                          " and Z/" + std::to_string(o.ring_.modulus()));
  }
}

MatZn MatZn::operator+(const MatZn& o) const {
  require_same_ring(o);
  if (rows_ != o.rows_ || cols_ != o.cols_) {
    throw std::invalid_argument("matrix addition with mismatched shapes");
  }
  MatZn r(ring_, rows_, cols_);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = ring_.add(a_[k], o.a_[k]);
  return r;
}

MatZn MatZn::operator-(const MatZn& o) const {
  require_same_ring(o);
  if (rows_ != o.rows_ || cols_ != o.cols_) {
    throw std::invalid_argument("matrix subtraction with mismatched shapes");
  }
  MatZn r(ring_, rows_, cols_);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = ring_.sub(a_[k], o.a_[k]);
  return r;
}

MatZn MatZn::operator*(const MatZn& o) const {
  require_same_ring(o);
  if (cols_ != o.rows_) {
    throw std::invalid_argument("matrix product with mismatched shapes");
  }
  MatZn r(ring_, rows_, o.cols_);
  const std::uint64_t n = ring_.modulus();
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::uint64_t aik = a_[i * cols_ + k];
      if (aik == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        std::uint64_t v = r.a_[i * o.cols_ + j] + aik * o.a_[k * o.cols_ + j];
        r.a_[i * o.cols_ + j] = static_cast<Residue>(v % n);
      }
    }
  }
  return r;
}

MatZn MatZn::scaled(Residue k) const {
  MatZn r(ring_, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = ring_.mul(a_[i], k);
  return r;
}

MatZn MatZn::transposed() const {
  MatZn r(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
  return r;
}

bool MatZn::is_zero() const {
  for (Residue v : a_)
    if (v != 0) return false;
  return true;
}

std::vector<Residue> MatZn::apply(const std::vector<Residue>& x) const {
  if (x.size() != cols_) throw std::invalid_argument("matrix-vector shape mismatch");
  std::vector<Residue> y(rows_, 0);
  const std::uint64_t n = ring_.modulus();
  for (std::size_t j = 0; j < cols_; ++j) {
    const std::uint64_t xj = x[j];
    if (xj == 0) continue;
    for (std::size_t i = 0; i < rows_; ++i) {
      y[i] = static_cast<Residue>((y[i] + a_[i * cols_ + j] * xj) % n);
    }
  }
  return y;
}

namespace {

// Inverse of x modulo q (q a prime power); x must be coprime to q.
Residue unit_inverse(std::uint32_t x, std::uint32_t q) {
  std::int64_t r0 = x % q, r1 = q, s0 = 1, s1 = 0;
  while (r1 != 0) {
    std::int64_t t = r0 / r1;
    std::int64_t r2 = r0 - t * r1, s2 = s0 - t * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  std::int64_t s = s0 % static_cast<std::int64_t>(q);
  if (s < 0) s += q;
  return static_cast<Residue>(s);
}

// Gauss-Jordan over Z/qZ, q = p^e. Z/qZ is local: a square matrix is
// invertible iff every elimination step finds a pivot not divisible by p.
std::optional<std::vector<Residue>> invert_mod_prime_power(std::vector<std::uint64_t> a,
                                                           std::size_t k, std::uint32_t q,
                                                           std::uint32_t p) {
  std::vector<std::uint64_t> inv(k * k, 0);
  for (std::size_t i = 0; i < k; ++i) inv[i * k + i] = 1;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = k;
    for (std::size_t r = col; r < k; ++r) {
      if (a[r * k + col] % p != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == k) return std::nullopt;
    if (pivot != col) {
      for (std::size_t j = 0; j < k; ++j) {
        std::swap(a[pivot * k + j], a[col * k + j]);
        std::swap(inv[pivot * k + j], inv[col * k + j]);
      }
    }
    const std::uint64_t s = unit_inverse(static_cast<std::uint32_t>(a[col * k + col]), q);
    for (std::size_t j = 0; j < k; ++j) {
      a[col * k + j] = a[col * k + j] * s % q;
      inv[col * k + j] = inv[col * k + j] * s % q;
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const std::uint64_t f = a[r * k + col];
      if (f == 0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        a[r * k + j] = (a[r * k + j] + (q - f % q) * a[col * k + j]) % q;
        inv[r * k + j] = (inv[r * k + j] + (q - f % q) * inv[col * k + j]) % q;
      }
    }
  }
  std::vector<Residue> out(k * k);
  for (std::size_t i = 0; i < k * k; ++i) out[i] = static_cast<Residue>(inv[i]);
  return out;
}

}  // namespace

std::optional<MatZn> mat_inverse(const MatZn& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("mat_inverse of non-square matrix");
  const std::size_t k = m.rows();
  const RingZn& ring = m.ring();
  const std::uint32_t n = ring.modulus();
  const auto& factors = ring.prime_powers();

  // one elimination per prime-power component
  std::vector<std::vector<Residue>> parts;
  parts.reserve(factors.size());
  for (const PrimePower& f : factors) {
    std::vector<std::uint64_t> a(k * k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) a[i * k + j] = m.at(i, j) % f.value;
    auto inv = invert_mod_prime_power(std::move(a), k, f.value, f.prime);
    if (!inv) return std::nullopt;
    parts.push_back(std::move(*inv));
  }

  // Chinese-remainder recombination of entries
  MatZn out(ring, k, k);
  std::vector<std::uint64_t> crt_coeff(factors.size());
  for (std::size_t t = 0; t < factors.size(); ++t) {
    const std::uint32_t q = factors[t].value;
    const std::uint32_t big = n / q;
    crt_coeff[t] = static_cast<std::uint64_t>(big) * unit_inverse(big % q, q) % n;
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      std::uint64_t v = 0;
      for (std::size_t t = 0; t < factors.size(); ++t) {
        v = (v + crt_coeff[t] * parts[t][i * k + j]) % n;
      }
      out.set(i, j, static_cast<Residue>(v));
    }
  }
  return out;
}

}  // namespace fijord

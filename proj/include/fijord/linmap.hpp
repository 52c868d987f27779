#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "fijord/fialg.hpp"
#include "fijord/mat.hpp"
#include "fijord/target.hpp"

namespace fijord {

/// Z/nZ-linear map from a finitary incidence ring (by coordinates) into a
/// target algebra, stored as its matrix in the canonical bases.  This is the
/// common carrier for the additive maps the library studies and for the
/// homomorphism / anti-homomorphism components extracted from them.
class LinearMap {
 public:
  LinearMap(FiContextPtr src, TargetPtr dst, MatZn matrix);

  static LinearMap zero(FiContextPtr src, TargetPtr dst);
  static LinearMap identity_on(FiContextPtr ctx);

  const FiContextPtr& source() const { return src_; }
  const TargetPtr& target() const { return dst_; }
  const MatZn& matrix() const { return mat_; }

  std::vector<Residue> apply(const std::vector<Residue>& coords) const;
  /// Image of the k-th basis element, as target coordinates.
  std::vector<Residue> column(std::size_t k) const;
  void set_column(std::size_t k, const std::vector<Residue>& value);

  LinearMap plus(const LinearMap& other) const;
  LinearMap scaled(Residue c) const;
  /// Composition this ∘ other (other feeds into this). Requires the inner
  /// map to land in the carrier the outer map consumes.
  LinearMap after(const LinearMap& other) const;
  bool operator==(const LinearMap& other) const;

 private:
  FiContextPtr src_;
  TargetPtr dst_;
  MatZn mat_;  // dst_->dim() rows by src_->dim() columns
};

/// A bijective additive (Z/nZ-linear) map between incidence rings, with the
/// inverse computed once and cached.  Construction fails with NotInvertible
/// when the matrix has no two-sided inverse over Z/nZ.
class AdditiveMap {
 public:
  AdditiveMap(FiContextPtr src, TargetPtr dst, MatZn matrix);

  const FiContextPtr& source() const { return src_; }
  const TargetPtr& target() const { return dst_; }
  const MatZn& matrix() const { return mat_; }
  const MatZn& inverse_matrix() const { return inv_; }

  std::vector<Residue> apply(const std::vector<Residue>& coords) const;
  std::vector<Residue> apply_inv(const std::vector<Residue>& coords) const;

  LinearMap as_linear() const { return LinearMap(src_, dst_, mat_); }

  /// Composition this ∘ other (other feeds into this).  Requires the inner
  /// map to land in the carrier the outer map consumes.
  AdditiveMap after(const AdditiveMap& other) const;

 private:
  FiContextPtr src_;
  TargetPtr dst_;
  MatZn mat_;
  MatZn inv_;
};

}  // namespace fijord

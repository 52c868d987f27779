#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fijord/fialg.hpp"

namespace fijord {

/// The codomain of the maps under study: a unital Z/nZ-algebra presented
/// by multiplication on basis pairs plus the coordinates of its identity.
/// Instantiated as a finitary incidence ring (a full matrix algebra is the
/// one-class case), which keeps the structure constants 0/1 and single-
/// target; all checks go through this interface so that the carrier stays
/// opaque to the decomposition code.
class TargetAlgebra {
 public:
  static std::shared_ptr<const TargetAlgebra> from_context(FiContextPtr ctx);
  static std::shared_ptr<const TargetAlgebra> matrix_algebra(const RingZn& ring, std::size_t k);

  std::size_t dim() const { return ctx_->dim(); }
  const RingZn& ring() const { return ctx_->ring(); }
  const std::vector<Residue>& one() const { return one_; }
  const FiContextPtr& context() const { return ctx_; }

  void mul_into(const std::vector<Residue>& a, const std::vector<Residue>& b,
                std::vector<Residue>& out) const {
    ctx_->convolve_into(a, b, out);
  }
  std::vector<Residue> mul(const std::vector<Residue>& a, const std::vector<Residue>& b) const {
    return ctx_->convolve_coords(a, b);
  }

  std::string basis_label(std::size_t k) const { return ctx_->basis_label(k); }
  bool same(const TargetAlgebra& o) const { return ctx_->same(*o.ctx_); }

 private:
  explicit TargetAlgebra(FiContextPtr ctx);
  FiContextPtr ctx_;
  std::vector<Residue> one_;
};

using TargetPtr = std::shared_ptr<const TargetAlgebra>;

}  // namespace fijord

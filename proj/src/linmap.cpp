#include "fijord/linmap.hpp"

#include <stdexcept>

#include "fijord/errors.hpp"

namespace fijord {

LinearMap::LinearMap(FiContextPtr src, TargetPtr dst, MatZn matrix)
    : src_(std::move(src)), dst_(std::move(dst)), mat_(std::move(matrix)) {
  if (!src_ || !dst_) throw PreconditionFailed("linear map needs source and target");
  if (!(src_->ring() == dst_->ring()))
    throw ModulusMismatch("linear map source and target moduli differ");
  if (mat_.rows() != dst_->dim() || mat_.cols() != src_->dim())
    throw std::invalid_argument("linear map matrix shape does not match spaces");
}

LinearMap LinearMap::zero(FiContextPtr src, TargetPtr dst) {
  if (!src || !dst) throw PreconditionFailed("linear map needs source and target");
  MatZn m(src->ring(), dst->dim(), src->dim());
  return LinearMap(std::move(src), std::move(dst), std::move(m));
}

LinearMap LinearMap::identity_on(FiContextPtr ctx) {
  if (!ctx) throw PreconditionFailed("identity map needs a context");
  TargetPtr dst = TargetAlgebra::from_context(ctx);
  MatZn m = MatZn::identity(ctx->ring(), ctx->dim());
  return LinearMap(std::move(ctx), std::move(dst), std::move(m));
}

std::vector<Residue> LinearMap::apply(const std::vector<Residue>& coords) const {
  return mat_.apply(coords);
}

std::vector<Residue> LinearMap::column(std::size_t k) const {
  std::vector<Residue> out(mat_.rows());
  for (std::size_t r = 0; r < mat_.rows(); ++r) out[r] = mat_.at(r, k);
  return out;
}

void LinearMap::set_column(std::size_t k, const std::vector<Residue>& value) {
  if (value.size() != mat_.rows())
    throw std::invalid_argument("column length does not match target dimension");
  for (std::size_t r = 0; r < mat_.rows(); ++r) mat_.set(r, k, value[r]);
}

LinearMap LinearMap::plus(const LinearMap& other) const {
  if (!src_->same(*other.src_) || !dst_->same(*other.dst_))
    throw ContextMismatch("adding linear maps between different spaces");
  return LinearMap(src_, dst_, mat_ + other.mat_);
}

LinearMap LinearMap::scaled(Residue c) const { return LinearMap(src_, dst_, mat_.scaled(c)); }

LinearMap LinearMap::after(const LinearMap& other) const {
  if (!other.dst_->context()->same(*src_))
    throw ContextMismatch("composing maps whose middle spaces differ");
  return LinearMap(other.src_, dst_, mat_ * other.mat_);
}

bool LinearMap::operator==(const LinearMap& other) const {
  return src_->same(*other.src_) && dst_->same(*other.dst_) && mat_ == other.mat_;
}

AdditiveMap::AdditiveMap(FiContextPtr src, TargetPtr dst, MatZn matrix)
    : src_(std::move(src)),
      dst_(std::move(dst)),
      mat_(std::move(matrix)),
      inv_(mat_.ring(), 0, 0) {
  if (!src_ || !dst_) throw PreconditionFailed("additive map needs source and target");
  if (!(src_->ring() == dst_->ring()))
    throw ModulusMismatch("additive map source and target moduli differ");
  if (mat_.rows() != dst_->dim() || mat_.cols() != src_->dim())
    throw std::invalid_argument("additive map matrix shape does not match spaces");
  if (mat_.rows() != mat_.cols())
    throw NotInvertible("additive map between spaces of different dimension");
  std::optional<MatZn> inv = mat_inverse(mat_);
  if (!inv) throw NotInvertible("additive map matrix is not invertible over Z/nZ");
  inv_ = std::move(*inv);
}

std::vector<Residue> AdditiveMap::apply(const std::vector<Residue>& coords) const {
  return mat_.apply(coords);
}

std::vector<Residue> AdditiveMap::apply_inv(const std::vector<Residue>& coords) const {
  return inv_.apply(coords);
}

AdditiveMap AdditiveMap::after(const AdditiveMap& other) const {
  if (!other.dst_->context()->same(*src_))
    throw ContextMismatch("composing maps whose middle spaces differ");
  return AdditiveMap(other.src_, dst_, mat_ * other.mat_);
}

}  // namespace fijord

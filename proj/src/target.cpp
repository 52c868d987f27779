#include "fijord/target.hpp"

#include "fijord/errors.hpp"

namespace fijord {

TargetAlgebra::TargetAlgebra(FiContextPtr ctx) : ctx_(std::move(ctx)) {
  one_ = ctx_->delta_coords();
}

std::shared_ptr<const TargetAlgebra> TargetAlgebra::from_context(FiContextPtr ctx) {
  if (!ctx) throw PreconditionFailed("target algebra requires a context");
  return std::shared_ptr<const TargetAlgebra>(new TargetAlgebra(std::move(ctx)));
}

std::shared_ptr<const TargetAlgebra> TargetAlgebra::matrix_algebra(const RingZn& ring,
                                                                   std::size_t k) {
  if (k == 0) throw PreconditionFailed("matrix algebra needs k >= 1");
  // A k-by-k matrix algebra is the incidence construction over a single
  // equivalence class of k mutually comparable points.
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, std::string>> pairs;
  labels.reserve(k);
  for (std::size_t i = 0; i < k; ++i) labels.push_back("p" + std::to_string(i + 1));
  for (std::size_t i = 0; i + 1 < k; ++i) {
    pairs.emplace_back(labels[i], labels[i + 1]);
    pairs.emplace_back(labels[i + 1], labels[i]);
  }
  Preorder pre = Preorder::build(labels, pairs);
  QuotientPoset poset = QuotientPoset::quotient(pre);
  return from_context(FiContext::make(std::move(poset), ring));
}

}  // namespace fijord

#include "fijord/fialg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "fijord/errors.hpp"

namespace fijord {

FiContext::FiContext(QuotientPoset poset, RingZn ring)
    : poset_(std::move(poset)), ring_(ring) {
  const std::size_t c = poset_.class_count();
  if (c == 0) throw std::invalid_argument("incidence context over an empty order");

  pair_idx_.assign(c * c, -1);
  for (std::uint32_t ci = 0; ci < c; ++ci) {
    for (std::uint32_t cj = 0; cj < c; ++cj) {
      if (poset_.leq(ci, cj)) {
        pair_idx_[ci * c + cj] = static_cast<std::int32_t>(pairs_.size());
        pairs_.emplace_back(ci, cj);
      }
    }
  }

  basis_.pair_offset_.resize(pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    basis_.pair_offset_[p] = basis_.entries_.size();
    const std::size_t rows = poset_.class_size(pairs_[p].first);
    const std::size_t cols = poset_.class_size(pairs_[p].second);
    for (std::uint16_t r = 0; r < rows; ++r) {
      for (std::uint16_t col = 0; col < cols; ++col) {
        basis_.entries_.push_back(BasisTriple{static_cast<std::uint32_t>(p), r, col});
      }
    }
  }

  const std::size_t d = basis_.entries_.size();
  if (d > 4096) {
    throw TooLarge("incidence context dimension " + std::to_string(d) + " exceeds 4096");
  }

  diag_mask_.assign(d, 0);
  for (std::size_t k = 0; k < d; ++k) {
    if (pair_is_diagonal(basis_.entries_[k].pair)) {
      diag_mask_[k] = 1;
      diag_basis_.push_back(k);
    } else {
      strict_basis_.push_back(k);
    }
  }

  // structure constants of convolution on basis elements
  product_.assign(d * d, -1);
  for (std::size_t i = 0; i < d; ++i) {
    const BasisTriple& bi = basis_.entries_[i];
    const auto [xi, yi] = pairs_[bi.pair];
    for (std::size_t j = 0; j < d; ++j) {
      const BasisTriple& bj = basis_.entries_[j];
      const auto [xj, yj] = pairs_[bj.pair];
      if (yi != xj || bi.col != bj.row) continue;
      // the product block exists by transitivity
      product_[i * d + j] = static_cast<std::int32_t>(coord_of(xi, yj, bi.row, bj.col));
    }
  }

  // topological order of classes, smallest canonical index first
  std::vector<std::uint8_t> done(c, 0);
  for (std::size_t step = 0; step < c; ++step) {
    for (std::uint32_t ci = 0; ci < c; ++ci) {
      if (done[ci]) continue;
      bool ready = true;
      for (std::uint32_t cj = 0; cj < c; ++cj) {
        if (cj != ci && !done[cj] && poset_.leq(cj, ci)) {
          ready = false;
          break;
        }
      }
      if (ready) {
        linext_.push_back(ci);
        done[ci] = 1;
        break;
      }
    }
  }
}

FiContextPtr FiContext::make(QuotientPoset poset, RingZn ring) {
  return FiContextPtr(new FiContext(std::move(poset), ring));
}

std::size_t FiContext::coord_of(std::uint32_t ci, std::uint32_t cj, std::uint16_t row,
                                std::uint16_t col) const {
  const std::int32_t p = pair_index(ci, cj);
  if (p < 0) throw BadLabel("classes '" + poset_.class_labels()[ci] + "' and '" +
                            poset_.class_labels()[cj] + "' are not comparable");
  const std::size_t cols = poset_.class_size(cj);
  return basis_.pair_offset_[p] + row * cols + col;
}

std::vector<Residue> FiContext::delta_coords() const {
  std::vector<std::uint32_t> all(poset_.class_count());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  return idempotent_coords(all);
}

std::vector<Residue> FiContext::idempotent_coords(
    const std::vector<std::uint32_t>& class_set) const {
  std::vector<Residue> out(dim(), 0);
  for (std::uint32_t ci : class_set) {
    if (ci >= poset_.class_count()) throw BadLabel("class index out of range");
    for (std::uint16_t k = 0; k < poset_.class_size(ci); ++k) {
      out[coord_of(ci, ci, k, k)] = 1;
    }
  }
  return out;
}

void FiContext::convolve_into(const std::vector<Residue>& a, const std::vector<Residue>& b,
                              std::vector<Residue>& out) const {
  const std::size_t d = dim();
  if (a.size() != d || b.size() != d) throw std::invalid_argument("coordinate size mismatch");
  out.assign(d, 0);
  const std::uint64_t n = ring_.modulus();
  for (std::size_t i = 0; i < d; ++i) {
    const std::uint64_t ai = a[i];
    if (ai == 0) continue;
    const std::int32_t* row = product_.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) {
      const std::int32_t k = row[j];
      if (k < 0 || b[j] == 0) continue;
      out[k] = static_cast<Residue>((out[k] + ai * b[j]) % n);
    }
  }
}

std::vector<Residue> FiContext::convolve_coords(const std::vector<Residue>& a,
                                                const std::vector<Residue>& b) const {
  std::vector<Residue> out;
  convolve_into(a, b, out);
  return out;
}

std::vector<Residue> FiContext::restrict_coords(const std::vector<Residue>& a,
                                                const std::vector<std::uint32_t>& X,
                                                const std::vector<std::uint32_t>& Y) const {
  const std::size_t c = poset_.class_count();
  std::vector<std::uint8_t> in_x(c, 0), in_y(c, 0);
  for (std::uint32_t ci : X) {
    if (ci >= c) throw BadLabel("class index out of range");
    in_x[ci] = 1;
  }
  for (std::uint32_t cj : Y) {
    if (cj >= c) throw BadLabel("class index out of range");
    in_y[cj] = 1;
  }
  std::vector<Residue> out(dim(), 0);
  for (std::size_t k = 0; k < dim(); ++k) {
    const auto [ci, cj] = pairs_[basis_.entries_[k].pair];
    if (in_x[ci] && in_y[cj]) out[k] = a[k];
  }
  return out;
}

std::pair<std::vector<Residue>, std::vector<Residue>> FiContext::split_coords(
    const std::vector<Residue>& a) const {
  std::vector<Residue> d(dim(), 0), z(dim(), 0);
  for (std::size_t k = 0; k < dim(); ++k) {
    (diag_mask_[k] ? d[k] : z[k]) = a[k];
  }
  return {std::move(d), std::move(z)};
}

std::vector<Residue> FiContext::add_coords(const std::vector<Residue>& a,
                                           const std::vector<Residue>& b) const {
  std::vector<Residue> out(dim());
  for (std::size_t k = 0; k < dim(); ++k) out[k] = ring_.add(a[k], b[k]);
  return out;
}

std::vector<Residue> FiContext::scale_coords(Residue k, const std::vector<Residue>& a) const {
  std::vector<Residue> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = ring_.mul(k, a[i]);
  return out;
}

std::vector<Residue> FiContext::random_coords(SplitMix64& rng) const {
  std::vector<Residue> out(dim());
  for (auto& v : out) v = rng.below(ring_.modulus());
  return out;
}

std::string FiContext::basis_label(std::size_t k) const {
  const BasisTriple& b = basis_.entries_[k];
  const auto [ci, cj] = pairs_[b.pair];
  std::ostringstream os;
  os << "E(" << poset_.class_labels()[ci] << "," << poset_.class_labels()[cj] << ")[" << b.row
     << "," << b.col << "]";
  return os.str();
}

std::string FiContext::describe() const {
  std::ostringstream os;
  os << "modulus=" << ring_.modulus() << " classes=" << poset_.class_count()
     << " dim=" << dim();
  return os.str();
}

bool FiContext::same(const FiContext& other) const {
  if (this == &other) return true;
  if (ring_ != other.ring_) return false;
  if (poset_.class_count() != other.poset_.class_count()) return false;
  for (std::size_t c = 0; c < poset_.class_count(); ++c) {
    if (poset_.class_size(c) != other.poset_.class_size(c)) return false;
    if (poset_.class_labels()[c] != other.poset_.class_labels()[c]) return false;
  }
  const std::size_t cc = poset_.class_count();
  for (std::size_t i = 0; i < cc; ++i)
    for (std::size_t j = 0; j < cc; ++j)
      if (poset_.leq(i, j) != other.poset_.leq(i, j)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// FinSeries

FinSeries::FinSeries(FiContextPtr ctx) : ctx_(std::move(ctx)) {
  if (!ctx_) throw std::invalid_argument("series without context");
}

FinSeries FinSeries::delta(FiContextPtr ctx) {
  return from_coords(ctx, ctx->delta_coords());
}

FinSeries FinSeries::idempotent(FiContextPtr ctx, const std::vector<std::uint32_t>& class_set) {
  return from_coords(ctx, ctx->idempotent_coords(class_set));
}

FinSeries FinSeries::unit(FiContextPtr ctx, std::uint32_t ci, std::uint32_t cj, std::uint16_t row,
                          std::uint16_t col, Residue value) {
  auto coords = ctx->zero_coords();
  coords[ctx->coord_of(ci, cj, row, col)] = value % ctx->ring().modulus();
  return from_coords(ctx, coords);
}

FinSeries FinSeries::basis_element(FiContextPtr ctx, std::size_t k) {
  auto coords = ctx->zero_coords();
  coords[k] = 1;
  return from_coords(ctx, coords);
}

FinSeries FinSeries::from_coords(FiContextPtr ctx, const std::vector<Residue>& coords) {
  if (coords.size() != ctx->dim()) throw std::invalid_argument("coordinate size mismatch");
  FinSeries s(ctx);
  for (std::size_t p = 0; p < ctx->pair_count(); ++p) {
    const auto [ci, cj] = ctx->pair_classes(p);
    const std::size_t rows = ctx->poset().class_size(ci);
    const std::size_t cols = ctx->poset().class_size(cj);
    MatZn m(ctx->ring(), rows, cols);
    bool nonzero = false;
    const std::size_t off = ctx->basis().pair_offset(p);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const Residue v = coords[off + r * cols + c];
        if (v != 0) {
          m.set(r, c, v);
          nonzero = true;
        }
      }
    }
    if (nonzero) s.blocks_.emplace(std::make_pair(ci, cj), std::move(m));
  }
  return s;
}

std::vector<Residue> FinSeries::coords() const {
  auto out = ctx_->zero_coords();
  for (const auto& [key, m] : blocks_) {
    const std::size_t off =
        ctx_->basis().pair_offset(ctx_->pair_index(key.first, key.second));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) out[off + r * m.cols() + c] = m.at(r, c);
  }
  return out;
}

const MatZn* FinSeries::block(std::uint32_t ci, std::uint32_t cj) const {
  auto it = blocks_.find({ci, cj});
  return it == blocks_.end() ? nullptr : &it->second;
}

void FinSeries::set_block(std::uint32_t ci, std::uint32_t cj, MatZn m) {
  const std::int32_t p = ctx_->pair_index(ci, cj);
  if (p < 0) throw BadLabel("block position is not a comparable class pair");
  if (m.rows() != ctx_->poset().class_size(ci) || m.cols() != ctx_->poset().class_size(cj)) {
    throw std::invalid_argument("block shape mismatch");
  }
  if (m.ring() != ctx_->ring()) throw ModulusMismatch("block over the wrong scalar ring");
  if (m.is_zero()) {
    blocks_.erase({ci, cj});
  } else {
    blocks_.insert_or_assign({ci, cj}, std::move(m));
  }
}

void FinSeries::require_same_context(const FinSeries& o) const {
  if (!ctx_->same(*o.ctx_)) {
    throw ContextMismatch("series over different incidence contexts: " + ctx_->describe() +
                          " vs " + o.ctx_->describe());
  }
}

FinSeries FinSeries::operator+(const FinSeries& o) const {
  require_same_context(o);
  FinSeries out = *this;
  for (const auto& [key, m] : o.blocks_) {
    auto it = out.blocks_.find(key);
    if (it == out.blocks_.end()) {
      out.blocks_.emplace(key, m);
    } else {
      MatZn sum = it->second + m;
      if (sum.is_zero()) {
        out.blocks_.erase(it);
      } else {
        it->second = std::move(sum);
      }
    }
  }
  return out;
}

FinSeries FinSeries::operator-(const FinSeries& o) const {
  return *this + o.scaled(ctx_->ring().neg(1));
}

FinSeries FinSeries::scaled(Residue k) const {
  FinSeries out(ctx_);
  for (const auto& [key, m] : blocks_) {
    MatZn s = m.scaled(k);
    if (!s.is_zero()) out.blocks_.emplace(key, std::move(s));
  }
  return out;
}

std::pair<FinSeries, FinSeries> FinSeries::split_dz() const {
  FinSeries d(ctx_), z(ctx_);
  for (const auto& [key, m] : blocks_) {
    (key.first == key.second ? d : z).blocks_.emplace(key, m);
  }
  return {std::move(d), std::move(z)};
}

FinSeries FinSeries::restricted(const std::vector<std::uint32_t>& X,
                                const std::vector<std::uint32_t>& Y) const {
  const std::size_t c = ctx_->poset().class_count();
  std::vector<std::uint8_t> in_x(c, 0), in_y(c, 0);
  for (std::uint32_t ci : X) {
    if (ci >= c) throw BadLabel("class index out of range");
    in_x[ci] = 1;
  }
  for (std::uint32_t cj : Y) {
    if (cj >= c) throw BadLabel("class index out of range");
    in_y[cj] = 1;
  }
  FinSeries out(ctx_);
  for (const auto& [key, m] : blocks_) {
    if (in_x[key.first] && in_y[key.second]) out.blocks_.emplace(key, m);
  }
  return out;
}

FinSeries FinSeries::restricted_source(const std::vector<std::uint32_t>& X) const {
  std::vector<std::uint32_t> all(ctx_->poset().class_count());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  return restricted(X, all);
}

FinSeries FinSeries::restricted_target(const std::vector<std::uint32_t>& Y) const {
  std::vector<std::uint32_t> all(ctx_->poset().class_count());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  return restricted(all, Y);
}

bool FinSeries::is_finitary() const {
  // literal quantifier: for all u < v, the set of comparable (x,y) with
  // u <= x, y <= v and a nonzero block is finite; over a finite order the
  // scan below always terminates and the answer is yes.
  const auto& q = ctx_->poset();
  for (std::uint32_t u = 0; u < q.class_count(); ++u) {
    for (std::uint32_t v = 0; v < q.class_count(); ++v) {
      if (u == v || !q.leq(u, v)) continue;
      std::size_t inside = 0;
      for (const auto& [key, m] : blocks_) {
        if (q.leq(u, key.first) && q.leq(key.second, v)) ++inside;
      }
      if (inside > blocks_.size()) return false;  // cannot happen
    }
  }
  return true;
}

std::string FinSeries::to_text() const {
  std::ostringstream os;
  if (blocks_.empty()) {
    os << "0";
    return os.str();
  }
  bool first = true;
  for (std::size_t p = 0; p < ctx_->pair_count(); ++p) {
    const auto [ci, cj] = ctx_->pair_classes(p);
    const MatZn* m = block(ci, cj);
    if (!m) continue;
    if (!first) os << "\n";
    first = false;
    os << "(" << ctx_->poset().class_labels()[ci] << "," << ctx_->poset().class_labels()[cj]
       << "):";
    for (std::size_t r = 0; r < m->rows(); ++r)
      for (std::size_t c = 0; c < m->cols(); ++c) os << " " << m->at(r, c);
  }
  return os.str();
}

bool operator==(const FinSeries& a, const FinSeries& b) {
  a.require_same_context(b);
  return a.blocks_ == b.blocks_;
}

FinSeries convolve(const FinSeries& a, const FinSeries& b) {
  if (!a.context()->same(*b.context())) {
    throw ContextMismatch("convolution of series over different incidence contexts");
  }
  const FiContextPtr& ctx = a.context();
  FinSeries out(ctx);
  for (const auto& [ka, ma] : a.blocks()) {
    for (const auto& [kb, mb] : b.blocks()) {
      if (ka.second != kb.first) continue;
      // transitivity guarantees the product block exists
      MatZn prod = ma * mb;
      const MatZn* cur = out.block(ka.first, kb.second);
      out.set_block(ka.first, kb.second, cur ? *cur + prod : std::move(prod));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t element_count(const FiContext& ctx, std::uint64_t cap) {
  const std::uint64_t m = ctx.ring().modulus();
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < ctx.dim(); ++i) {
    if (count > cap / m) {
      throw TooLarge("element enumeration of size " + std::to_string(m) + "^" +
                     std::to_string(ctx.dim()) + " exceeds cap " + std::to_string(cap));
    }
    count *= m;
  }
  return count;
}

ElementEnumerator::ElementEnumerator(FiContextPtr ctx, std::uint64_t cap)
    : ctx_(std::move(ctx)), count_(element_count(*ctx_, cap)) {
  cur_.assign(ctx_->dim(), 0);
}

bool ElementEnumerator::next(std::vector<Residue>& coords) {
  if (!started_) {
    started_ = true;
    coords = cur_;
    return true;
  }
  const Residue top = ctx_->ring().modulus() - 1;
  std::size_t k = 0;
  while (k < cur_.size() && cur_[k] == top) {
    cur_[k] = 0;
    ++k;
  }
  if (k == cur_.size()) return false;
  ++cur_[k];
  coords = cur_;
  return true;
}

}  // namespace fijord

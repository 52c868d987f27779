#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fijord/mat.hpp"
#include "fijord/order.hpp"
#include "fijord/prng.hpp"
#include "fijord/ring.hpp"

namespace fijord {

/// One coordinate of the finitary incidence ring: the (row, col) matrix
/// unit of the block attached to a comparable class pair.
struct BasisTriple {
  std::uint32_t pair;
  std::uint16_t row;
  std::uint16_t col;
};

/// Canonical additive basis: blocks enumerated by (class i, class j) with
/// i-bar <= j-bar in canonical class order, entries row-major inside each
/// block. This fixes the bijection between series and coordinate vectors
/// used everywhere downstream (maps, reports, witnesses).
class BasisIndex {
 public:
  std::size_t size() const { return entries_.size(); }
  const BasisTriple& at(std::size_t k) const { return entries_[k]; }
  std::size_t pair_offset(std::size_t pair) const { return pair_offset_[pair]; }

 private:
  friend class FiContext;
  std::vector<BasisTriple> entries_;
  std::vector<std::size_t> pair_offset_;
};

class FiContext;
using FiContextPtr = std::shared_ptr<const FiContext>;

/// The finitary incidence ring FI of a quotient poset over Z/nZ, in
/// coordinate form: block layout, structure constants of convolution,
/// diagonal/strict splitting masks, and the canonical idempotents.
///
/// Every series is a vector of dim() residues; basis products are either
/// zero or a single basis element with coefficient one, so convolution of
/// coordinate vectors is a double loop over the structure table.
class FiContext {
 public:
  static FiContextPtr make(QuotientPoset poset, RingZn ring);

  const RingZn& ring() const { return ring_; }
  const QuotientPoset& poset() const { return poset_; }

  std::size_t pair_count() const { return pairs_.size(); }
  std::pair<std::uint32_t, std::uint32_t> pair_classes(std::size_t p) const { return pairs_[p]; }
  /// Index of the block for classes (ci, cj), or -1 when ci-bar <= cj-bar
  /// does not hold.
  std::int32_t pair_index(std::uint32_t ci, std::uint32_t cj) const {
    return pair_idx_[ci * poset_.class_count() + cj];
  }
  bool pair_is_diagonal(std::size_t p) const { return pairs_[p].first == pairs_[p].second; }

  std::size_t dim() const { return basis_.size(); }
  const BasisIndex& basis() const { return basis_; }
  std::size_t coord_of(std::uint32_t ci, std::uint32_t cj, std::uint16_t row,
                       std::uint16_t col) const;

  /// Structure constants: index of basis(i)*basis(j), or -1 when the
  /// product vanishes.
  std::int32_t basis_product(std::size_t i, std::size_t j) const {
    return product_[i * basis_.size() + j];
  }

  bool basis_is_diagonal(std::size_t k) const { return diag_mask_[k] != 0; }
  const std::vector<std::size_t>& diagonal_basis() const { return diag_basis_; }
  const std::vector<std::size_t>& strict_basis() const { return strict_basis_; }

  /// Classes in a topological order of the induced poset (used by series
  /// inversion); canonical-index tie-break keeps it deterministic.
  const std::vector<std::uint32_t>& linear_extension() const { return linext_; }

  std::vector<Residue> zero_coords() const { return std::vector<Residue>(dim(), 0); }
  std::vector<Residue> delta_coords() const;
  /// e_X for a set of class indices: identity blocks on the selected
  /// diagonal positions.
  std::vector<Residue> idempotent_coords(const std::vector<std::uint32_t>& class_set) const;

  void convolve_into(const std::vector<Residue>& a, const std::vector<Residue>& b,
                     std::vector<Residue>& out) const;
  std::vector<Residue> convolve_coords(const std::vector<Residue>& a,
                                       const std::vector<Residue>& b) const;

  /// Keep only blocks whose source class lies in X and target class in Y.
  std::vector<Residue> restrict_coords(const std::vector<Residue>& a,
                                       const std::vector<std::uint32_t>& X,
                                       const std::vector<std::uint32_t>& Y) const;

  std::pair<std::vector<Residue>, std::vector<Residue>> split_coords(
      const std::vector<Residue>& a) const;

  std::vector<Residue> add_coords(const std::vector<Residue>& a,
                                  const std::vector<Residue>& b) const;
  std::vector<Residue> scale_coords(Residue k, const std::vector<Residue>& a) const;

  std::vector<Residue> random_coords(SplitMix64& rng) const;

  std::string basis_label(std::size_t k) const;
  std::string describe() const;

  bool same(const FiContext& other) const;

 private:
  FiContext(QuotientPoset poset, RingZn ring);

  QuotientPoset poset_;
  RingZn ring_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
  std::vector<std::int32_t> pair_idx_;
  BasisIndex basis_;
  std::vector<std::int32_t> product_;
  std::vector<std::uint8_t> diag_mask_;
  std::vector<std::size_t> diag_basis_, strict_basis_;
  std::vector<std::uint32_t> linext_;
};

/// A finitary series in block form: sparse map from comparable class
/// pairs to coefficient matrices; absent blocks are zero. Kept normalized
/// (no stored zero blocks), so equality is block-map equality and agrees
/// with coordinate equality.
class FinSeries {
 public:
  explicit FinSeries(FiContextPtr ctx);
  static FinSeries delta(FiContextPtr ctx);
  static FinSeries idempotent(FiContextPtr ctx, const std::vector<std::uint32_t>& class_set);
  /// value * (matrix unit at (row,col) of block (ci,cj)); BadLabel when the
  /// pair is not comparable.
  static FinSeries unit(FiContextPtr ctx, std::uint32_t ci, std::uint32_t cj, std::uint16_t row,
                        std::uint16_t col, Residue value);
  static FinSeries basis_element(FiContextPtr ctx, std::size_t k);
  static FinSeries from_coords(FiContextPtr ctx, const std::vector<Residue>& coords);

  const FiContextPtr& context() const { return ctx_; }
  std::vector<Residue> coords() const;

  const MatZn* block(std::uint32_t ci, std::uint32_t cj) const;
  void set_block(std::uint32_t ci, std::uint32_t cj, MatZn m);
  const std::map<std::pair<std::uint32_t, std::uint32_t>, MatZn>& blocks() const {
    return blocks_;
  }

  FinSeries operator+(const FinSeries& o) const;
  FinSeries operator-(const FinSeries& o) const;
  FinSeries scaled(Residue k) const;
  bool is_zero() const { return blocks_.empty(); }

  std::pair<FinSeries, FinSeries> split_dz() const;
  FinSeries restricted(const std::vector<std::uint32_t>& X,
                       const std::vector<std::uint32_t>& Y) const;
  FinSeries restricted_source(const std::vector<std::uint32_t>& X) const;
  FinSeries restricted_target(const std::vector<std::uint32_t>& Y) const;

  /// For every u < v, only finitely many comparable (x,y) inside [u,v]
  /// carry a nonzero coefficient. A literal check of that quantifier;
  /// trivially true over a finite order.
  bool is_finitary() const;

  /// Deterministic text form: one line per nonzero block, row-major
  /// entries, blocks in canonical pair order.
  std::string to_text() const;

  friend bool operator==(const FinSeries& a, const FinSeries& b);

 private:
  void require_same_context(const FinSeries& o) const;
  FiContextPtr ctx_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, MatZn> blocks_;
};

/// Block-level convolution; an independent implementation from
/// FiContext::convolve_coords (the two are cross-checked in tests).
FinSeries convolve(const FinSeries& a, const FinSeries& b);

/// Odometer over all coordinate vectors of the context; TooLarge when
/// the ring size to the dim-th power exceeds cap.
class ElementEnumerator {
 public:
  ElementEnumerator(FiContextPtr ctx, std::uint64_t cap);
  std::uint64_t count() const { return count_; }
  bool next(std::vector<Residue>& coords);

 private:
  FiContextPtr ctx_;
  std::vector<Residue> cur_;
  bool started_ = false;
  std::uint64_t count_;
};

/// n^dim when it does not exceed cap.
std::uint64_t element_count(const FiContext& ctx, std::uint64_t cap);

}  // namespace fijord

// Shared builders for the test binaries: small contexts with known
// structure, plus conveniences for naming classes and coordinates.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "fijord/fialg.hpp"
#include "fijord/jordan.hpp"
#include "fijord/linmap.hpp"
#include "fijord/order.hpp"
#include "fijord/ring.hpp"
#include "fijord/target.hpp"

namespace fijord::testutil {

inline FiContextPtr make_context(std::uint32_t modulus, std::vector<std::string> elements,
                                 std::vector<std::pair<std::string, std::string>> pairs) {
  Preorder pre = Preorder::build(std::move(elements), pairs);
  return FiContext::make(QuotientPoset::quotient(pre), RingZn(modulus));
}

/// Chain x1 < x2 < ... over Z_n, all classes singletons.
inline FiContextPtr chain(std::uint32_t modulus, std::vector<std::string> elements) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i + 1 < elements.size(); ++i)
    pairs.emplace_back(elements[i], elements[i + 1]);
  return make_context(modulus, std::move(elements), std::move(pairs));
}

/// One class {p, q} of size two: the full 2x2 matrix algebra over Z_n.
inline FiContextPtr matrix2(std::uint32_t modulus) {
  return make_context(modulus, {"p", "q"}, {{"p", "q"}, {"q", "p"}});
}

/// Two classes of two elements each, a-class below b-class.
inline FiContextPtr two_blocks(std::uint32_t modulus) {
  return make_context(modulus, {"a1", "a2", "b1", "b2"},
                      {{"a1", "a2"}, {"a2", "a1"}, {"b1", "b2"}, {"b2", "b1"}, {"a1", "b1"}});
}

/// Diamond a < b, a < c, b < d, c < d with b and c incomparable.
inline FiContextPtr diamond(std::uint32_t modulus) {
  return make_context(modulus, {"a", "b", "c", "d"},
                      {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
}

inline std::uint32_t cls(const FiContextPtr& ctx, const std::string& label) {
  return static_cast<std::uint32_t>(ctx->poset().class_index_of(label));
}

inline std::vector<std::uint32_t> class_set(const FiContextPtr& ctx,
                                            std::initializer_list<const char*> labels) {
  std::vector<std::uint32_t> out;
  for (const char* l : labels) out.push_back(cls(ctx, l));
  return out;
}

/// Coordinate index of the basis element E(ci,cj)[row,col] by class labels.
inline std::size_t coord(const FiContextPtr& ctx, const std::string& ci, const std::string& cj,
                         std::uint16_t row = 0, std::uint16_t col = 0) {
  return ctx->coord_of(cls(ctx, ci), cls(ctx, cj), row, col);
}

/// Coordinate vector with a single entry v at the basis element named by
/// class labels and block position.
inline std::vector<Residue> unit(const FiContextPtr& ctx, const std::string& ci,
                                 const std::string& cj, std::uint16_t row = 0,
                                 std::uint16_t col = 0, Residue v = 1) {
  std::vector<Residue> out(ctx->dim(), 0);
  out[coord(ctx, ci, cj, row, col)] = ctx->ring().canon(v);
  return out;
}

inline bool all_passed(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

inline std::string first_failure(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks)
    if (!c.passed) return c.name + " witness: " + c.witness;
  return "";
}

inline const CheckResult& find_check(const std::vector<CheckResult>& checks,
                                     const std::string& name) {
  for (const CheckResult& c : checks)
    if (c.name == name) return c;
  static CheckResult missing{"<missing>", false, "check not present"};
  return missing;
}

}  // namespace fijord::testutil

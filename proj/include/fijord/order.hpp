#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace fijord {

/// A finite quasiorder on labelled elements: the reflexive-transitive
/// closure of user-supplied generating pairs.
class Preorder {
 public:
  static Preorder build(std::vector<std::string> elements,
                        const std::vector<std::pair<std::string, std::string>>& generating_pairs);

  std::size_t size() const { return elements_.size(); }
  const std::vector<std::string>& elements() const { return elements_; }
  std::size_t index_of(const std::string& label) const;  // BadLabel
  bool leq(std::size_t x, std::size_t y) const { return leq_[x * elements_.size() + y] != 0; }

 private:
  Preorder() = default;
  std::vector<std::string> elements_;
  std::vector<std::uint8_t> leq_;
};

/// The poset of equivalence classes x~y iff x<=y<=x. Classes are listed
/// in canonical order (ascending smallest member label); members of each
/// class are sorted by label. The induced order is verified antisymmetric
/// at construction.
class QuotientPoset {
 public:
  static QuotientPoset quotient(const Preorder& p);

  std::size_t class_count() const { return classes_.size(); }
  const std::vector<std::vector<std::size_t>>& classes() const { return classes_; }
  const std::vector<std::string>& class_labels() const { return labels_; }
  std::size_t class_of(std::size_t element) const { return class_of_[element]; }
  std::size_t class_size(std::size_t c) const { return classes_[c].size(); }
  bool leq(std::size_t c1, std::size_t c2) const { return leq_[c1 * classes_.size() + c2] != 0; }
  const Preorder& preorder() const { return pre_; }
  std::size_t class_index_of(const std::string& label) const;  // BadLabel

 private:
  explicit QuotientPoset(Preorder p) : pre_(std::move(p)) {}
  Preorder pre_;
  std::vector<std::vector<std::size_t>> classes_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> class_of_;
  std::vector<std::uint8_t> leq_;
};

enum class ClassSizeKind { AllSingleton, AllNontrivialFinite, Mixed };

ClassSizeKind check_class_size_hypothesis(const QuotientPoset& q);
const char* to_string(ClassSizeKind k);

}  // namespace fijord

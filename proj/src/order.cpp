#include "fijord/order.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "fijord/errors.hpp"

namespace fijord {

Preorder Preorder::build(std::vector<std::string> elements,
                         const std::vector<std::pair<std::string, std::string>>& generating_pairs) {
  Preorder p;
  const std::size_t n = elements.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (!index.emplace(elements[i], i).second) {
      throw BadLabel("duplicate element label '" + elements[i] + "'");
    }
  }
  p.elements_ = std::move(elements);
  p.leq_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) p.leq_[i * n + i] = 1;
  for (const auto& [from, to] : generating_pairs) {
    auto a = index.find(from);
    auto b = index.find(to);
    if (a == index.end()) throw BadLabel("unknown element label '" + from + "'");
    if (b == index.end()) throw BadLabel("unknown element label '" + to + "'");
    p.leq_[a->second * n + b->second] = 1;
  }
  // Warshall transitive closure
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!p.leq_[i * n + k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (p.leq_[k * n + j]) p.leq_[i * n + j] = 1;
      }
    }
  }
  return p;
}

std::size_t Preorder::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i] == label) return i;
  }
  throw BadLabel("unknown element label '" + label + "'");
}

QuotientPoset QuotientPoset::quotient(const Preorder& p) {
  QuotientPoset q(p);
  const std::size_t n = p.size();

  // group mutually comparable elements
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < n; ++i) {
    bool placed = false;
    for (auto& cls : classes) {
      const std::size_t r = cls.front();
      if (p.leq(i, r) && p.leq(r, i)) {
        cls.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({i});
  }

  // canonical form: members by label, classes by smallest member label
  auto label_less = [&](std::size_t a, std::size_t b) { return p.elements()[a] < p.elements()[b]; };
  for (auto& cls : classes) std::sort(cls.begin(), cls.end(), label_less);
  std::sort(classes.begin(), classes.end(), [&](const auto& a, const auto& b) {
    return p.elements()[a.front()] < p.elements()[b.front()];
  });

  const std::size_t c = classes.size();
  q.classes_ = std::move(classes);
  q.labels_.reserve(c);
  q.class_of_.assign(n, 0);
  for (std::size_t ci = 0; ci < c; ++ci) {
    q.labels_.push_back(p.elements()[q.classes_[ci].front()]);
    for (std::size_t e : q.classes_[ci]) q.class_of_[e] = ci;
  }
  q.leq_.assign(c * c, 0);
  for (std::size_t ci = 0; ci < c; ++ci) {
    for (std::size_t cj = 0; cj < c; ++cj) {
      q.leq_[ci * c + cj] = p.leq(q.classes_[ci].front(), q.classes_[cj].front()) ? 1 : 0;
    }
  }
  // the induced order must be antisymmetric by construction
  for (std::size_t ci = 0; ci < c; ++ci) {
    for (std::size_t cj = ci + 1; cj < c; ++cj) {
      if (q.leq_[ci * c + cj] && q.leq_[cj * c + ci]) {
        throw std::logic_error("quotient order is not antisymmetric");
      }
    }
  }
  return q;
}

std::size_t QuotientPoset::class_index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  // Fall back to member labels so a class can be named by any of its
  // elements, not only the canonical (least) one.
  for (std::size_t e = 0; e < pre_.size(); ++e) {
    if (pre_.elements()[e] == label) return class_of_[e];
  }
  throw BadLabel("unknown class label '" + label + "'");
}

ClassSizeKind check_class_size_hypothesis(const QuotientPoset& q) {
  bool any_singleton = false, any_bigger = false;
  for (std::size_t c = 0; c < q.class_count(); ++c) {
    (q.class_size(c) == 1 ? any_singleton : any_bigger) = true;
  }
  if (any_singleton && !any_bigger) return ClassSizeKind::AllSingleton;
  if (!any_singleton && any_bigger) return ClassSizeKind::AllNontrivialFinite;
  return ClassSizeKind::Mixed;
}

const char* to_string(ClassSizeKind k) {
  switch (k) {
    case ClassSizeKind::AllSingleton: return "all_singleton";
    case ClassSizeKind::AllNontrivialFinite: return "all_nontrivial_finite";
    case ClassSizeKind::Mixed: return "mixed";
  }
  return "?";
}

}  // namespace fijord

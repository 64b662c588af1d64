#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "confpred/example.hpp"
#include "confpred/rational.hpp"

namespace confpred {

// unordered multiset of examples; two construction orders of the same contents compare equal
class Bag {
 public:
  Bag() = default;
  explicit Bag(std::vector<Example> items) : items_(std::move(items)) { canonicalize(); }

  void add(const Example& z) {
    auto it = std::lower_bound(items_.begin(), items_.end(), z, example_less);
    items_.insert(it, z);
  }

  void remove(const Example& z) {
    auto it = std::lower_bound(items_.begin(), items_.end(), z, example_less);
    if (it == items_.end() || !(*it == z)) throw std::invalid_argument("Bag::remove: element absent");
    items_.erase(it);
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  long long count(const Example& z) const {
    auto range = std::equal_range(items_.begin(), items_.end(), z, example_less);
    return static_cast<long long>(std::distance(range.first, range.second));
  }

  // canonical (sorted) view of the contents
  const std::vector<Example>& items() const { return items_; }

  friend bool operator==(const Bag& a, const Bag& b) { return a.items_ == b.items_; }
  friend bool operator!=(const Bag& a, const Bag& b) { return !(a == b); }

 private:
  void canonicalize() { std::stable_sort(items_.begin(), items_.end(), example_less); }
  std::vector<Example> items_;
};

// probability that the last element of a random ordering of the bag equals z:
// multiplicity over bag size, exact
inline Rational bag_draw_probability(const Bag& bag, const Example& z) {
  if (bag.empty()) throw std::invalid_argument("bag_draw_probability: empty bag");
  return Rational(bag.count(z), static_cast<std::int64_t>(bag.size()));
}

// probability of one particular ordering of the bag's contents:
// product of multiplicity factorials over n!, exact; 0 if contents differ
inline Rational bag_ordering_probability(const Bag& bag, const std::vector<Example>& ordering) {
  if (ordering.size() != bag.size())
    throw std::invalid_argument("bag_ordering_probability: length mismatch");
  if (Bag(ordering) != bag) return Rational(0);
  Rational p(1);
  // multiply multiplicity! stepwise, divide by n! stepwise to keep components small
  const auto& items = bag.items();
  std::size_t i = 0;
  while (i < items.size()) {
    std::size_t j = i;
    while (j < items.size() && items[j] == items[i]) ++j;
    for (std::size_t k = 2; k <= j - i; ++k) p = p * Rational(static_cast<std::int64_t>(k));
    i = j;
  }
  for (std::size_t k = 2; k <= bag.size(); ++k)
    p = p / Rational(static_cast<std::int64_t>(k));
  return p;
}

}  // namespace confpred

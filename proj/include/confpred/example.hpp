#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "confpred/errors.hpp"

namespace confpred {

// a label is either a categorical symbol or a real number
using Label = std::variant<std::string, double>;

// one example: an object (feature tuple, possibly empty) plus an optional label
struct Example {
  std::vector<double> x;
  std::optional<Label> y;

  // bare real value acting as its own label (no object part)
  static Example value(double v) { return Example{{}, Label(v)}; }
  static Example with_cat(std::vector<double> obj, std::string lab) {
    return Example{std::move(obj), Label(std::move(lab))};
  }
  static Example with_real(std::vector<double> obj, double lab) {
    return Example{std::move(obj), Label(lab)};
  }

  bool has_label() const { return y.has_value(); }
  bool has_real() const { return y && std::holds_alternative<double>(*y); }
  bool has_cat() const { return y && std::holds_alternative<std::string>(*y); }

  double real() const {
    if (!has_real()) throw MeasureError("example has no real label");
    return std::get<double>(*y);
  }
  const std::string& cat() const {
    if (!has_cat()) throw MeasureError("example has no categorical label");
    return std::get<std::string>(*y);
  }
};

inline bool operator==(const Example& a, const Example& b) {
  return a.x == b.x && a.y == b.y;
}

// strict total order used only for canonical multiset storage
inline bool example_less(const Example& a, const Example& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y.has_value() != b.y.has_value()) return !a.y.has_value();
  if (!a.y) return false;
  if (a.y->index() != b.y->index()) return a.y->index() < b.y->index();
  return *a.y < *b.y;
}

// Euclidean distance between two feature tuples
inline double object_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw MeasureError("feature arity mismatch");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace confpred

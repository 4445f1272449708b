#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "topokit/core/types.hpp"

namespace topokit {

/// Scalar values plus injective integer offsets. Ties in value are broken by
/// offset, which makes the vertex order total (simulation of simplicity).
class OrderField {
 public:
  OrderField() = default;

  // Offsets default to the vertex index.
  explicit OrderField(std::vector<double> values) : values_(std::move(values)) {
    offsets_.resize(values_.size());
    std::iota(offsets_.begin(), offsets_.end(), std::int64_t{0});
    finish();
  }

  OrderField(std::vector<double> values, std::vector<std::int64_t> offsets)
      : values_(std::move(values)), offsets_(std::move(offsets)) {
    if (offsets_.size() != values_.size())
      throw DataError("order field: " + std::to_string(offsets_.size()) + " offsets for " +
                      std::to_string(values_.size()) + " values");
    finish();
  }

  SimplexId size() const { return static_cast<SimplexId>(values_.size()); }
  double value(SimplexId v) const { return values_[static_cast<std::size_t>(v)]; }
  std::int64_t offset(SimplexId v) const { return offsets_[static_cast<std::size_t>(v)]; }
  // Position of v in the total order, 0 = lowest.
  SimplexId rank(SimplexId v) const { return rank_[static_cast<std::size_t>(v)]; }
  // Vertex at a given rank.
  SimplexId vertex_at(SimplexId r) const { return order_[static_cast<std::size_t>(r)]; }

  const std::vector<double>& values() const { return values_; }
  const std::vector<std::int64_t>& offsets() const { return offsets_; }
  const std::vector<SimplexId>& ranks() const { return rank_; }
  // Vertices in ascending order.
  const std::vector<SimplexId>& order() const { return order_; }

  bool vertex_less(SimplexId u, SimplexId v) const { return rank(u) < rank(v); }

  // Strict order straight from (value, offset), without the rank cache.
  bool raw_less(SimplexId u, SimplexId v) const {
    const double fu = value(u), fv = value(v);
    if (fu != fv) return fu < fv;
    return offset(u) < offset(v);
  }

  // -f with negated offsets: reverses the order exactly.
  OrderField negated() const {
    std::vector<double> nv(values_.size());
    std::vector<std::int64_t> no(offsets_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
      nv[i] = -values_[i];
      no[i] = -offsets_[i];
    }
    return {std::move(nv), std::move(no)};
  }

  friend bool operator==(const OrderField& a, const OrderField& b) {
    return a.values_ == b.values_ && a.offsets_ == b.offsets_;
  }

 private:
  void finish() {
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (std::isnan(values_[i])) throw DataError("order field: NaN value at vertex " + std::to_string(i));
    order_.resize(values_.size());
    std::iota(order_.begin(), order_.end(), SimplexId{0});
    std::sort(order_.begin(), order_.end(), [this](SimplexId a, SimplexId b) { return raw_less(a, b); });
    rank_.resize(values_.size());
    for (std::size_t r = 0; r < order_.size(); ++r) {
      if (r > 0) {
        const SimplexId a = order_[r - 1], b = order_[r];
        if (value(a) == value(b) && offset(a) == offset(b))
          throw DataError("order field: vertices " + std::to_string(a) + " and " + std::to_string(b) +
                          " share value and offset; offsets must be injective");
      }
      rank_[static_cast<std::size_t>(order_[r])] = static_cast<SimplexId>(r);
    }
    // Offsets must be injective outright, not just among equal values.
    std::vector<std::int64_t> sorted = offsets_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw DataError("order field: offsets are not injective");
  }

  std::vector<double> values_;
  std::vector<std::int64_t> offsets_;
  std::vector<SimplexId> rank_;
  std::vector<SimplexId> order_;
};

}  // namespace topokit

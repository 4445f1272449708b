#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "topokit/core/types.hpp"

namespace topokit {

// Compressed row storage: row r holds data[offsets[r] .. offsets[r+1]).
class JaggedArray {
 public:
  JaggedArray() = default;

  // Two-pass fill: count(row) for every entry, then finalize(), then push(row, value).
  void begin_count(std::size_t rows) {
    offsets_.assign(rows + 1, 0);
    cursor_.clear();
    data_.clear();
  }
  void count(std::size_t row) { ++offsets_[row + 1]; }
  void finalize_counts() {
    for (std::size_t r = 1; r < offsets_.size(); ++r) offsets_[r] += offsets_[r - 1];
    data_.assign(static_cast<std::size_t>(offsets_.back()), kNoSimplex);
    cursor_.assign(offsets_.begin(), offsets_.end() - 1);
  }
  void push(std::size_t row, SimplexId value) { data_[static_cast<std::size_t>(cursor_[row]++)] = value; }
  void end_fill() {
    cursor_.clear();
    cursor_.shrink_to_fit();
  }

  std::size_t rows() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const SimplexId> operator[](std::size_t row) const {
    return {data_.data() + offsets_[row], static_cast<std::size_t>(offsets_[row + 1] - offsets_[row])};
  }
  std::span<SimplexId> mutable_row(std::size_t row) {
    return {data_.data() + offsets_[row], static_cast<std::size_t>(offsets_[row + 1] - offsets_[row])};
  }
  bool empty() const { return offsets_.empty(); }
  std::size_t memory_bytes() const {
    return offsets_.capacity() * sizeof(std::int64_t) + data_.capacity() * sizeof(SimplexId);
  }

 private:
  std::vector<std::int64_t> offsets_;
  std::vector<std::int64_t> cursor_;
  std::vector<SimplexId> data_;
};

}  // namespace topokit

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace topokit {

using SimplexId = std::int64_t;
inline constexpr SimplexId kNoSimplex = -1;

struct SimplexRef {
  int dim = 0;
  SimplexId id = kNoSimplex;

  friend constexpr bool operator==(const SimplexRef&, const SimplexRef&) = default;
  friend constexpr auto operator<=>(const SimplexRef&, const SimplexRef&) = default;
};

// Vertex ids of a simplex (at most 4 in 3D). Not sorted by scalar order.
struct SimplexVertices {
  std::array<SimplexId, 4> v{kNoSimplex, kNoSimplex, kNoSimplex, kNoSimplex};
  int size = 0;

  SimplexId operator[](int i) const { return v[i]; }
  const SimplexId* begin() const { return v.data(); }
  const SimplexId* end() const { return v.data() + size; }
  bool contains(SimplexId x) const {
    for (int i = 0; i < size; ++i)
      if (v[i] == x) return true;
    return false;
  }
};

struct Point3 {
  double x = 0, y = 0, z = 0;
};

/// Raised when an explicit triangulation is queried for a table that was
/// never requested through precondition().
class NotPreconditioned : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed input data: bad mesh, mismatched field length, duplicate offsets.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A guaranteed property of an algorithm did not hold.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace topokit

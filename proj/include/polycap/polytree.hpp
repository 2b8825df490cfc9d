#pragma once

// Finite truncation of the d-fold product of rooted dyadic trees.
//
// An axis vertex (level, index) is the dyadic interval
// [index*2^-level, (index+1)*2^-level); a vertex of the product tree is a
// d-tuple of axis vertices, i.e. a dyadic rectangle. The order is
// coordinatewise ancestry: alpha <= beta means beta contains alpha on every
// axis, so the root tuple is the largest element. The distinguished boundary
// is modeled at desk scale as the grid of leaf cells (one cell per tuple of
// deepest-level intervals); a cell behaves exactly like its leaf vertex for
// meets, metric and counting purposes.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace polycap {

struct AxisVertex {
  std::uint32_t level = 0;  // root = 0
  std::uint64_t index = 0;  // in [0, 2^level)

  friend bool operator==(const AxisVertex&, const AxisVertex&) = default;
};

struct Vertex {
  std::vector<AxisVertex> coords;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// One distinguished-boundary cell: a tuple of leaf indices, one per axis.
struct BoundaryCell {
  std::vector<std::uint64_t> cell;

  friend bool operator==(const BoundaryCell&, const BoundaryCell&) = default;
};

// Truncated product tree. depths[j] = n_j >= 1; leaves of axis j sit at
// level n_j - 1, so a leaf (and its cell) has d_T = n_j.
class TreeSpec {
 public:
  static constexpr std::uint64_t kDefaultVertexBudget = 1ull << 22;

  TreeSpec() = default;
  explicit TreeSpec(std::vector<std::uint32_t> depths,
                    std::uint64_t vertex_budget = kDefaultVertexBudget);

  int dim() const { return static_cast<int>(depths_.size()); }
  std::uint32_t depth(int axis) const { return depths_[axis]; }
  std::uint32_t leaf_level(int axis) const { return depths_[axis] - 1; }
  const std::vector<std::uint32_t>& depths() const { return depths_; }

  std::uint64_t axis_vertex_count(int axis) const {
    return (1ull << depths_[axis]) - 1;
  }
  std::uint64_t axis_cell_count(int axis) const {
    return 1ull << (depths_[axis] - 1);
  }
  std::uint64_t vertex_count() const { return vertex_count_; }
  std::uint64_t cell_count() const { return cell_count_; }

  // Mixed-radix strides; axis 0 is the most significant, which makes linear
  // ids agree with the canonical order (lexicographic by axis, then level,
  // then index).
  std::uint64_t vertex_stride(int axis) const { return vstride_[axis]; }
  std::uint64_t cell_stride(int axis) const { return cstride_[axis]; }

  // Per-axis linearization: a = 2^level - 1 + index, ordered root first.
  static std::uint64_t axis_linear(AxisVertex v) {
    return (1ull << v.level) - 1 + v.index;
  }
  static AxisVertex axis_from_linear(std::uint64_t a);
  // Parent within one axis; the root (a = 0) has no parent.
  static std::uint64_t axis_parent(std::uint64_t a) { return ((a + 1) >> 1) - 1; }

  std::uint64_t vertex_id(const Vertex& v) const;
  Vertex vertex_from_id(std::uint64_t id) const;
  std::uint64_t cell_id(const BoundaryCell& c) const;
  BoundaryCell cell_from_id(std::uint64_t id) const;

  // The leaf vertex a cell is identified with at finite truncation.
  std::uint64_t leaf_vertex_of_cell(std::uint64_t cell_id) const;
  Vertex cell_leaf_vertex(const BoundaryCell& c) const;

  // Throw std::invalid_argument with a field-level message on violation.
  void validate(const Vertex& v) const;
  void validate(const BoundaryCell& c) const;

  friend bool operator==(const TreeSpec&, const TreeSpec&) = default;

 private:
  std::vector<std::uint32_t> depths_;
  std::vector<std::uint64_t> vstride_, cstride_;
  std::uint64_t vertex_count_ = 0, cell_count_ = 0;
};

// true iff beta is a coordinatewise ancestor-or-equal of alpha, i.e.
// alpha <= beta in the product order (beta's rectangle contains alpha's).
bool leq(const TreeSpec& t, const Vertex& alpha, const Vertex& beta);

// Least common ancestor: the deepest gamma with gamma >= alpha, gamma >= beta.
Vertex meet(const TreeSpec& t, const Vertex& alpha, const Vertex& beta);
AxisVertex axis_meet(AxisVertex a, AxisVertex b);

// Number of common ancestors, prod_j (level_j + 1).
std::uint64_t ancestor_count(const Vertex& v);

// Boundary metric, sum over axes of
//   2^-d_T(meet) - (2^-d_T(a) + 2^-d_T(b)) / 2.
// Cells enter through their leaf vertices (d_T = n_j).
double delta(const TreeSpec& t, const Vertex& a, const Vertex& b);
double delta(const TreeSpec& t, const BoundaryCell& a, const BoundaryCell& b);
double delta(const TreeSpec& t, const Vertex& a, const BoundaryCell& b);
double delta(const TreeSpec& t, const BoundaryCell& a, const Vertex& b);

// Text form "level:index" per axis joined by U+00D7, e.g. "2:1×3:5".
std::string to_string(const Vertex& v);
Vertex parse_vertex(const std::string& s);

// A finite union of boundary boxes, kept in canonical form: no box dominated
// by another, sorted by vertex id.
class RectangularSet {
 public:
  RectangularSet() = default;
  RectangularSet(const TreeSpec& t, std::vector<Vertex> boxes);

  const TreeSpec& tree() const { return tree_; }
  const std::vector<Vertex>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }

  bool contains(const BoundaryCell& c) const;
  bool contains_cell_id(std::uint64_t cell_id) const;

  // Exact set of leaf cells dominated by some box, no duplicates, sorted.
  std::vector<std::uint64_t> cell_ids() const;
  std::vector<std::uint8_t> cell_bitmap() const;  // size = tree.cell_count()
  std::uint64_t covered_cell_count() const;

  friend bool operator==(const RectangularSet&, const RectangularSet&) = default;

 private:
  TreeSpec tree_;
  std::vector<Vertex> boxes_;
};

// S_b(E): union of the boundary shadows of the vertices of E.
RectangularSet boundary_shadow(const TreeSpec& t, const std::vector<Vertex>& vertices);

// Deterministic test families of rectangular sets.
//   "single-boxes"  params: max-level
//   "random-unions" params: k, count, seed
struct FamilySpec {
  std::string name;
  std::map<std::string, std::string> params;

  static FamilySpec parse(const std::string& text);
  std::string str() const;
  long param_int(const std::string& key, long fallback) const;
  bool has(const std::string& key) const { return params.count(key) > 0; }
};

std::vector<RectangularSet> rect_family(const TreeSpec& t, const FamilySpec& family);

}  // namespace polycap

#include "polycap/polytree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "polycap/rng.hpp"

namespace polycap {

TreeSpec::TreeSpec(std::vector<std::uint32_t> depths, std::uint64_t vertex_budget)
    : depths_(std::move(depths)) {
  if (depths_.empty()) throw std::invalid_argument("tree: d must be >= 1");
  for (auto n : depths_) {
    if (n < 1 || n > 62) throw std::invalid_argument("tree: depth n must be in [1, 62]");
  }
  vertex_count_ = 1;
  cell_count_ = 1;
  for (int j = 0; j < dim(); ++j) {
    const std::uint64_t av = axis_vertex_count(j);
    if (vertex_count_ > vertex_budget / av) {
      throw std::invalid_argument("tree: vertex count exceeds memory budget");
    }
    vertex_count_ *= av;
    cell_count_ *= axis_cell_count(j);
  }
  vstride_.assign(dim(), 1);
  cstride_.assign(dim(), 1);
  for (int j = dim() - 2; j >= 0; --j) {
    vstride_[j] = vstride_[j + 1] * axis_vertex_count(j + 1);
    cstride_[j] = cstride_[j + 1] * axis_cell_count(j + 1);
  }
}

AxisVertex TreeSpec::axis_from_linear(std::uint64_t a) {
  const std::uint32_t level = static_cast<std::uint32_t>(std::bit_width(a + 1) - 1);
  return AxisVertex{level, a + 1 - (1ull << level)};
}

std::uint64_t TreeSpec::vertex_id(const Vertex& v) const {
  validate(v);
  std::uint64_t id = 0;
  for (int j = 0; j < dim(); ++j) id += axis_linear(v.coords[j]) * vstride_[j];
  return id;
}

Vertex TreeSpec::vertex_from_id(std::uint64_t id) const {
  Vertex v;
  v.coords.resize(dim());
  for (int j = 0; j < dim(); ++j) {
    v.coords[j] = axis_from_linear((id / vstride_[j]) % axis_vertex_count(j));
  }
  return v;
}

std::uint64_t TreeSpec::cell_id(const BoundaryCell& c) const {
  validate(c);
  std::uint64_t id = 0;
  for (int j = 0; j < dim(); ++j) id += c.cell[j] * cstride_[j];
  return id;
}

BoundaryCell TreeSpec::cell_from_id(std::uint64_t id) const {
  BoundaryCell c;
  c.cell.resize(dim());
  for (int j = 0; j < dim(); ++j) c.cell[j] = (id / cstride_[j]) % axis_cell_count(j);
  return c;
}

std::uint64_t TreeSpec::leaf_vertex_of_cell(std::uint64_t cell_id) const {
  std::uint64_t vid = 0;
  for (int j = 0; j < dim(); ++j) {
    const std::uint64_t k = (cell_id / cstride_[j]) % axis_cell_count(j);
    vid += ((1ull << leaf_level(j)) - 1 + k) * vstride_[j];
  }
  return vid;
}

Vertex TreeSpec::cell_leaf_vertex(const BoundaryCell& c) const {
  validate(c);
  Vertex v;
  v.coords.resize(dim());
  for (int j = 0; j < dim(); ++j) v.coords[j] = AxisVertex{leaf_level(j), c.cell[j]};
  return v;
}

void TreeSpec::validate(const Vertex& v) const {
  if (static_cast<int>(v.coords.size()) != dim()) {
    throw std::invalid_argument("vertex: coordinate count does not match tree dimension");
  }
  for (int j = 0; j < dim(); ++j) {
    const auto& a = v.coords[j];
    if (a.level > leaf_level(j)) throw std::invalid_argument("vertex: level exceeds leaf level");
    if (a.index >= (1ull << a.level)) throw std::invalid_argument("vertex: index out of range for level");
  }
}

void TreeSpec::validate(const BoundaryCell& c) const {
  if (static_cast<int>(c.cell.size()) != dim()) {
    throw std::invalid_argument("cell: coordinate count does not match tree dimension");
  }
  for (int j = 0; j < dim(); ++j) {
    if (c.cell[j] >= axis_cell_count(j)) throw std::invalid_argument("cell: index out of range");
  }
}

namespace {

bool axis_leq(AxisVertex a, AxisVertex b) {
  // b ancestor-or-equal of a.
  return b.level <= a.level && (a.index >> (a.level - b.level)) == b.index;
}

}  // namespace

bool leq(const TreeSpec& t, const Vertex& alpha, const Vertex& beta) {
  t.validate(alpha);
  t.validate(beta);
  for (int j = 0; j < t.dim(); ++j) {
    if (!axis_leq(alpha.coords[j], beta.coords[j])) return false;
  }
  return true;
}

AxisVertex axis_meet(AxisVertex a, AxisVertex b) {
  std::uint32_t lev = std::min(a.level, b.level);
  std::uint64_t ia = a.index >> (a.level - lev);
  std::uint64_t ib = b.index >> (b.level - lev);
  const std::uint32_t shift = static_cast<std::uint32_t>(std::bit_width(ia ^ ib));
  return AxisVertex{lev - shift, ia >> shift};
}

Vertex meet(const TreeSpec& t, const Vertex& alpha, const Vertex& beta) {
  t.validate(alpha);
  t.validate(beta);
  Vertex g;
  g.coords.resize(t.dim());
  for (int j = 0; j < t.dim(); ++j) g.coords[j] = axis_meet(alpha.coords[j], beta.coords[j]);
  return g;
}

std::uint64_t ancestor_count(const Vertex& v) {
  std::uint64_t n = 1;
  for (const auto& a : v.coords) n *= a.level + 1;
  return n;
}

namespace {

double delta_impl(const Vertex& a, const Vertex& b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.coords.size(); ++j) {
    const AxisVertex m = axis_meet(a.coords[j], b.coords[j]);
    sum += std::ldexp(1.0, -static_cast<int>(m.level + 1)) -
           0.5 * (std::ldexp(1.0, -static_cast<int>(a.coords[j].level + 1)) +
                  std::ldexp(1.0, -static_cast<int>(b.coords[j].level + 1)));
  }
  return sum;
}

}  // namespace

double delta(const TreeSpec& t, const Vertex& a, const Vertex& b) {
  t.validate(a);
  t.validate(b);
  return delta_impl(a, b);
}

double delta(const TreeSpec& t, const BoundaryCell& a, const BoundaryCell& b) {
  return delta_impl(t.cell_leaf_vertex(a), t.cell_leaf_vertex(b));
}

double delta(const TreeSpec& t, const Vertex& a, const BoundaryCell& b) {
  t.validate(a);
  return delta_impl(a, t.cell_leaf_vertex(b));
}

double delta(const TreeSpec& t, const BoundaryCell& a, const Vertex& b) {
  return delta(t, b, a);
}

std::string to_string(const Vertex& v) {
  std::string out;
  for (std::size_t j = 0; j < v.coords.size(); ++j) {
    if (j) out += "×";
    out += std::to_string(v.coords[j].level);
    out += ':';
    out += std::to_string(v.coords[j].index);
  }
  return out;
}

Vertex parse_vertex(const std::string& s) {
  Vertex v;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t sep = s.find("×", pos);
    if (sep == std::string::npos) sep = s.find('x', pos);
    const std::string part = s.substr(pos, (sep == std::string::npos ? s.size() : sep) - pos);
    const std::size_t colon = part.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= part.size()) {
      throw std::invalid_argument("vertex: expected \"level:index\" pairs, got \"" + s + "\"");
    }
    AxisVertex a;
    try {
      a.level = static_cast<std::uint32_t>(std::stoul(part.substr(0, colon)));
      a.index = std::stoull(part.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("vertex: malformed number in \"" + s + "\"");
    }
    v.coords.push_back(a);
    if (sep == std::string::npos) break;
    pos = sep + (s.compare(sep, 2, "×") == 0 ? 2 : 1);
  }
  if (v.coords.empty()) throw std::invalid_argument("vertex: empty text form");
  return v;
}

RectangularSet::RectangularSet(const TreeSpec& t, std::vector<Vertex> boxes) : tree_(t) {
  for (const auto& b : boxes) t.validate(b);
  // Drop any box dominated by another member; ties collapse to one copy.
  std::vector<std::uint64_t> ids;
  ids.reserve(boxes.size());
  for (const auto& b : boxes) ids.push_back(t.vertex_id(b));
  std::vector<char> drop(boxes.size(), 0);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t k = 0; k < boxes.size(); ++k) {
      if (i == k || drop[i]) continue;
      if (ids[i] == ids[k]) {
        if (i > k) drop[i] = 1;
        continue;
      }
      if (leq(t, boxes[i], boxes[k])) drop[i] = 1;  // box i inside box k
    }
  }
  std::vector<std::pair<std::uint64_t, Vertex>> keep;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!drop[i]) keep.emplace_back(ids[i], boxes[i]);
  }
  std::sort(keep.begin(), keep.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  boxes_.reserve(keep.size());
  for (auto& [id, b] : keep) boxes_.push_back(std::move(b));
}

bool RectangularSet::contains(const BoundaryCell& c) const {
  tree_.validate(c);
  for (const auto& b : boxes_) {
    bool inside = true;
    for (int j = 0; j < tree_.dim(); ++j) {
      const auto& a = b.coords[j];
      if ((c.cell[j] >> (tree_.leaf_level(j) - a.level)) != a.index) {
        inside = false;
        break;
      }
    }
    if (inside) return true;
  }
  return false;
}

bool RectangularSet::contains_cell_id(std::uint64_t cell_id) const {
  return contains(tree_.cell_from_id(cell_id));
}

std::vector<std::uint8_t> RectangularSet::cell_bitmap() const {
  std::vector<std::uint8_t> bits(tree_.cell_count(), 0);
  const int d = tree_.dim();
  std::vector<std::uint64_t> lo(d), hi(d), cur(d);
  for (const auto& b : boxes_) {
    for (int j = 0; j < d; ++j) {
      const std::uint32_t shift = tree_.leaf_level(j) - b.coords[j].level;
      lo[j] = b.coords[j].index << shift;
      hi[j] = (b.coords[j].index + 1) << shift;
      cur[j] = lo[j];
    }
    // Odometer over the cell ranges of this box.
    while (true) {
      std::uint64_t id = 0;
      for (int j = 0; j < d; ++j) id += cur[j] * tree_.cell_stride(j);
      bits[id] = 1;
      int j = d - 1;
      while (j >= 0 && ++cur[j] == hi[j]) {
        cur[j] = lo[j];
        --j;
      }
      if (j < 0) break;
    }
  }
  return bits;
}

std::vector<std::uint64_t> RectangularSet::cell_ids() const {
  const auto bits = cell_bitmap();
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out.push_back(i);
  }
  return out;
}

std::uint64_t RectangularSet::covered_cell_count() const {
  const auto bits = cell_bitmap();
  std::uint64_t n = 0;
  for (auto b : bits) n += b;
  return n;
}

RectangularSet boundary_shadow(const TreeSpec& t, const std::vector<Vertex>& vertices) {
  return RectangularSet(t, vertices);
}

FamilySpec FamilySpec::parse(const std::string& text) {
  FamilySpec f;
  std::size_t pos = 0;
  bool first = true;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, (comma == std::string::npos ? text.size() : comma) - pos);
    // Trim spaces.
    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
    while (!tok.empty() && tok.back() == ' ') tok.pop_back();
    if (!tok.empty()) {
      if (first) {
        f.name = tok;
        first = false;
      } else {
        const std::size_t eq = tok.find('=');
        if (eq == std::string::npos) {
          throw std::invalid_argument("family: expected key=value, got \"" + tok + "\"");
        }
        f.params[tok.substr(0, eq)] = tok.substr(eq + 1);
      }
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (f.name.empty()) throw std::invalid_argument("family: empty descriptor");
  return f;
}

std::string FamilySpec::str() const {
  std::string out = name;
  for (const auto& [k, v] : params) {
    out += ',';
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

long FamilySpec::param_int(const std::string& key, long fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    return std::stol(it->second);
  } catch (const std::exception&) {
    throw std::invalid_argument("family: parameter " + key + " is not an integer");
  }
}

std::vector<RectangularSet> rect_family(const TreeSpec& t, const FamilySpec& family) {
  std::vector<RectangularSet> out;
  if (family.name == "single-boxes") {
    const long max_level = family.param_int("max-level", 1);
    if (max_level < 0) throw std::invalid_argument("family: max-level must be >= 0");
    for (std::uint64_t id = 0; id < t.vertex_count(); ++id) {
      const Vertex v = t.vertex_from_id(id);
      bool ok = true;
      for (const auto& a : v.coords) ok = ok && a.level <= static_cast<std::uint32_t>(max_level);
      if (ok) out.emplace_back(t, std::vector<Vertex>{v});
    }
    return out;
  }
  if (family.name == "random-unions") {
    const long k = family.param_int("k", 2);
    const long count = family.param_int("count", 0);
    if (!family.has("seed")) throw std::invalid_argument("family: random-unions requires seed");
    if (k < 1) throw std::invalid_argument("family: k must be >= 1");
    Rng rng(static_cast<std::uint64_t>(family.param_int("seed", 0)));
    for (long c = 0; c < count; ++c) {
      std::vector<Vertex> boxes;
      for (long i = 0; i < k; ++i) {
        boxes.push_back(t.vertex_from_id(rng.next_below(t.vertex_count())));
      }
      out.emplace_back(t, std::move(boxes));
    }
    return out;
  }
  throw std::invalid_argument("family: unknown generator \"" + family.name + "\"");
}

}  // namespace polycap

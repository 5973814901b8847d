#include "cubetopo/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <sstream>

namespace cubetopo {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw InvalidArgument("malformed " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Side parse_side(std::string_view text) {
  text = trim(text);
  Side side;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash), "side numerator");
    auto den = parse_int(text.substr(slash + 1), "side denominator");
    if (den == 0) throw InvalidArgument("side has zero denominator");
    side = Side(num, den);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    // Terminating decimals are represented exactly.
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if (frac.size() > 15) throw InvalidArgument("side has too many decimal digits");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t w = whole.empty() ? 0 : parse_int(whole, "side");
    std::int64_t f = frac.empty() ? 0 : parse_int(frac, "side");
    side = Side(w * scale + f, scale);
  } else {
    side = Side(parse_int(text, "side"));
  }
  if (side <= 0) throw InvalidArgument("side must be positive");
  return side;
}

std::string format_side(const Side& side) {
  return std::to_string(side.numerator()) + "/" + std::to_string(side.denominator());
}

CubeId::CubeId(std::vector<Coord> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidArgument("cube dimension must be at least 1");
}

CubeId CubeId::translated(std::span<const Coord> offset) const {
  if (offset.size() != dim()) throw InvalidArgument("translation dimension mismatch");
  std::vector<Coord> out(coords_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += offset[i];
  return CubeId(std::move(out));
}

std::string CubeId::label() const {
  std::string out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(coords_[i]);
  }
  return out;
}

CubeId CubeId::parse_label(std::string_view label) {
  std::vector<Coord> coords;
  for (auto part : split(label, ',')) coords.push_back(parse_int(trim(part), "cube label"));
  return CubeId(std::move(coords));
}

bool cubes_intersect(const CubeId& a, const CubeId& b) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument("cubes_intersect: dimension mismatch (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
  }
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (std::abs(a[i] - b[i]) > 1) return false;
  }
  return true;
}

bool LatticeBox::contains(const CubeId& cube) const {
  if (cube.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (cube[i] < lo[i] || cube[i] > hi[i]) return false;
  }
  return true;
}

bool LatticeBox::contains(const LatticeBox& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (other.lo[i] < lo[i] || other.hi[i] > hi[i]) return false;
  }
  return true;
}

std::size_t LatticeBox::cube_count() const {
  std::size_t count = 1;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (hi[i] < lo[i]) return 0;
    count *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
  }
  return count;
}

LatticeBox LatticeBox::parse(std::string_view text) {
  auto halves = split(trim(text), ':');
  if (halves.size() != 2) throw InvalidArgument("bounds must look like 'lo1,lo2:hi1,hi2'");
  LatticeBox box;
  for (auto p : split(halves[0], ',')) box.lo.push_back(parse_int(trim(p), "bounds"));
  for (auto p : split(halves[1], ',')) box.hi.push_back(parse_int(trim(p), "bounds"));
  if (box.lo.size() != box.hi.size()) throw InvalidArgument("bounds corners differ in dimension");
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (box.lo[i] > box.hi[i]) throw InvalidArgument("bounds have lo > hi");
  }
  return box;
}

std::string LatticeBox::format() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < lo.size(); ++i) os << (i ? "," : "") << lo[i];
  os << ':';
  for (std::size_t i = 0; i < hi.size(); ++i) os << (i ? "," : "") << hi[i];
  return os.str();
}

CubicalSpace::CubicalSpace(std::size_t n, Side side) : n_(n), side_(side) {
  if (n_ == 0) throw InvalidArgument("cubical space dimension must be at least 1");
  if (side_ <= 0) throw InvalidArgument("side must be positive");
}

CubicalSpace::CubicalSpace(std::size_t n, Side side, std::span<const CubeId> cubes)
    : CubicalSpace(n, side) {
  for (const auto& c : cubes) insert(c);
}

void CubicalSpace::check_dim(const CubeId& cube) const {
  if (cube.dim() != n_) {
    throw InvalidArgument("cube " + cube.label() + " has dimension " + std::to_string(cube.dim()) +
                          ", space has " + std::to_string(n_));
  }
}

bool CubicalSpace::insert(const CubeId& cube) {
  check_dim(cube);
  return cubes_.insert(cube).second;
}

bool CubicalSpace::erase(const CubeId& cube) { return cubes_.erase(cube) != 0; }

CubicalSpace CubicalSpace::without(const CubeId& cube) const {
  CubicalSpace out(*this);
  out.erase(cube);
  return out;
}

bool CubicalSpace::operator==(const CubicalSpace& other) const {
  return n_ == other.n_ && side_ == other.side_ && cubes_ == other.cubes_;
}

std::vector<std::vector<Coord>> neighbor_offsets(std::size_t n) {
  std::vector<std::vector<Coord>> out;
  std::vector<Coord> off(n, -1);
  while (true) {
    if (std::any_of(off.begin(), off.end(), [](Coord c) { return c != 0; })) out.push_back(off);
    std::size_t i = 0;
    while (i < n && off[i] == 1) off[i++] = -1;
    if (i == n) break;
    ++off[i];
  }
  return out;
}

CubicalSpace rim(const CubicalSpace& space, const CubeId& cube) {
  if (!space.contains(cube)) throw InvalidArgument("rim: cube " + cube.label() + " not in space");
  CubicalSpace out(space.dim(), space.side());
  // Scan whichever is smaller: the space or the 3^n - 1 neighbor slots.
  std::size_t slots = 1;
  for (std::size_t i = 0; i < space.dim() && slots <= space.size(); ++i) slots *= 3;
  if (slots <= space.size()) {
    for (const auto& off : neighbor_offsets(space.dim())) {
      auto other = cube.translated(off);
      if (space.contains(other)) out.insert(other);
    }
  } else {
    for (const auto& other : space) {
      if (other != cube && cubes_intersect(cube, other)) out.insert(other);
    }
  }
  return out;
}

CubicalSpace ball(const CubicalSpace& space, const CubeId& cube) {
  auto out = rim(space, cube);
  out.insert(cube);
  return out;
}

std::size_t Face::dim() const { return static_cast<std::size_t>(__builtin_popcount(axes)); }

std::vector<Face> cube_faces(const CubeId& cube) {
  const std::size_t n = cube.dim();
  if (n > 20) throw TooLarge("cube_faces: dimension too large");
  std::vector<Face> faces;
  // choice per axis: 0 -> fixed at c, 1 -> fixed at c+1, 2 -> extruded from c
  std::vector<int> choice(n, 0);
  while (true) {
    Face f;
    f.anchor.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      f.anchor[i] = cube[i] + (choice[i] == 1 ? 1 : 0);
      if (choice[i] == 2) f.axes |= (1u << i);
    }
    faces.push_back(std::move(f));
    std::size_t i = 0;
    while (i < n && choice[i] == 2) choice[i++] = 0;
    if (i == n) break;
    ++choice[i];
  }
  return faces;
}

std::map<std::size_t, std::size_t> image_faces(const CubicalSpace& space) {
  std::set<Face> faces;
  for (const auto& cube : space) {
    for (auto& f : cube_faces(cube)) faces.insert(std::move(f));
  }
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t d = 0; d <= space.dim(); ++d) counts[d] = 0;
  for (const auto& f : faces) ++counts[f.dim()];
  if (space.empty()) counts.clear();
  return counts;
}

}  // namespace cubetopo

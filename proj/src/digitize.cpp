#include "cubetopo/digitize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

namespace cubetopo {

namespace {

using boost::multiprecision::cpp_int;

cpp_int parse_integer(std::string_view text, std::string_view what) {
  if (text.empty()) throw InvalidArgument("empty " + std::string(what));
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw InvalidArgument("malformed " + std::string(what) + ": " + std::string(text));
  cpp_int value = 0;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw InvalidArgument("malformed " + std::string(what) + ": " + std::string(text));
    }
    value = value * 10 + (text[i] - '0');
  }
  return negative ? cpp_int(-value) : value;
}

cpp_int pow10(long e) {
  cpp_int p = 1;
  for (long k = 0; k < e; ++k) p *= 10;
  return p;
}

cpp_int floor_div(const Exact& x) {
  cpp_int num = boost::multiprecision::numerator(x);
  cpp_int den = boost::multiprecision::denominator(x);
  cpp_int q = num / den;
  if (num % den != 0 && num < 0) q -= 1;
  return q;
}

cpp_int ceil_div(const Exact& x) { return -floor_div(-x); }

Coord to_coord(const cpp_int& v) {
  if (v > std::numeric_limits<Coord>::max() / 4 || v < std::numeric_limits<Coord>::min() / 4) {
    throw TooLarge("lattice coordinate out of range");
  }
  return static_cast<Coord>(v);
}

Exact square(const Exact& x) { return x * x; }

}  // namespace

Exact parse_exact(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto den = parse_integer(text.substr(slash + 1), "denominator");
    if (den == 0) throw InvalidArgument("zero denominator: " + std::string(text));
    return Exact(parse_integer(text.substr(0, slash), "numerator"), den);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_text = text.substr(e + 1);
    auto ev = parse_integer(exp_text, "exponent");
    if (ev > 400 || ev < -400) throw InvalidArgument("exponent out of range: " + std::string(text));
    exponent = static_cast<long>(ev);
    text = text.substr(0, e);
  }
  bool negative = !text.empty() && text[0] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false;
  for (std::size_t i = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0; i < text.size(); ++i) {
    if (text[i] == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      digits.push_back(text[i]);
      if (seen_dot) ++frac_digits;
    }
  }
  cpp_int mantissa = parse_integer(digits, "number");
  if (negative) mantissa = -mantissa;
  long shift = exponent - frac_digits;
  if (shift >= 0) return Exact(mantissa * pow10(shift));
  return Exact(mantissa, pow10(-shift));
}

Exact exact_from_double(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("non-finite number");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return parse_exact(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

std::string format_exact(const Exact& x) {
  auto den = boost::multiprecision::denominator(x);
  if (den == 1) return boost::multiprecision::numerator(x).str();
  return boost::multiprecision::numerator(x).str() + "/" + den.str();
}

double to_double(const Exact& x) { return x.convert_to<double>(); }

Exact to_exact(const Side& side) { return Exact(cpp_int(side.numerator()), cpp_int(side.denominator())); }

// ---- voxel masks ----------------------------------------------------------

void VoxelMask::validate() const {
  if (dims.empty()) throw InvalidArgument("voxel mask needs at least one axis");
  if (origin.size() != dims.size()) throw InvalidArgument("voxel mask origin/dims length mismatch");
  if (!(voxel_size > 0)) throw InvalidArgument("voxel size must be positive");
  std::size_t total = 1;
  for (auto d : dims) {
    if (d == 0) throw InvalidArgument("voxel mask has an empty axis");
    total *= d;
  }
  if (data.size() != total) {
    throw InvalidArgument("voxel mask holds " + std::to_string(data.size()) + " values, expected " +
                          std::to_string(total));
  }
}

bool VoxelMask::inside(const std::vector<double>& point) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    double t = (point[i] - origin[i]) / voxel_size;
    if (t < 0 || t > static_cast<double>(dims[i])) return false;
    auto k = static_cast<std::size_t>(std::floor(t));
    if (k == dims[i]) k = dims[i] - 1;  // closed far face
    flat = flat * dims[i] + k;
  }
  return data[flat] != 0;
}

std::optional<std::pair<std::vector<double>, std::vector<double>>> VoxelMask::occupied_bounds() const {
  const std::size_t n = dims.size();
  std::vector<std::size_t> lo(n, SIZE_MAX), hi(n, 0);
  bool any = false;
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t flat = 0; flat < data.size(); ++flat) {
    if (data[flat]) {
      any = true;
      for (std::size_t i = 0; i < n; ++i) {
        lo[i] = std::min(lo[i], idx[i]);
        hi[i] = std::max(hi[i], idx[i]);
      }
    }
    for (std::size_t i = n; i-- > 0;) {
      if (++idx[i] < dims[i]) break;
      idx[i] = 0;
    }
  }
  if (!any) return std::nullopt;
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = origin[i] + voxel_size * static_cast<double>(lo[i]);
    b[i] = origin[i] + voxel_size * static_cast<double>(hi[i] + 1);
  }
  return std::make_pair(a, b);
}

// ---- object specs ---------------------------------------------------------

ObjectSpec ObjectSpec::ball(std::vector<Exact> center, Exact radius) {
  ObjectSpec s;
  s.n = center.size();
  s.kind = Kind::Ball;
  s.center = std::move(center);
  s.radius = std::move(radius);
  s.validate();
  return s;
}

ObjectSpec ObjectSpec::sphere_shell(std::vector<Exact> center, Exact inner, Exact outer) {
  ObjectSpec s;
  s.n = center.size();
  s.kind = Kind::SphereShell;
  s.center = std::move(center);
  s.inner_radius = std::move(inner);
  s.outer_radius = std::move(outer);
  s.validate();
  return s;
}

ObjectSpec ObjectSpec::box(std::vector<Exact> min_corner, std::vector<Exact> max_corner) {
  ObjectSpec s;
  s.n = min_corner.size();
  s.kind = Kind::Box;
  s.min_corner = std::move(min_corner);
  s.max_corner = std::move(max_corner);
  s.validate();
  return s;
}

ObjectSpec ObjectSpec::sampled(VoxelMask mask, std::size_t samples_per_axis) {
  ObjectSpec s;
  s.n = mask.dim();
  s.kind = Kind::Sampled;
  s.mask = std::make_shared<const VoxelMask>(std::move(mask));
  s.samples_per_axis = samples_per_axis;
  s.validate();
  return s;
}

void ObjectSpec::validate() const {
  if (n == 0) throw InvalidArgument("object dimension must be at least 1");
  switch (kind) {
    case Kind::Ball:
      if (center.size() != n) throw InvalidArgument("ball center has wrong dimension");
      if (radius <= 0) throw InvalidArgument("ball radius must be positive");
      break;
    case Kind::SphereShell:
      if (center.size() != n) throw InvalidArgument("shell center has wrong dimension");
      if (inner_radius <= 0 || outer_radius <= 0) throw InvalidArgument("shell radii must be positive");
      if (inner_radius >= outer_radius) throw InvalidArgument("shell inner radius must be below the outer radius");
      break;
    case Kind::Box:
      if (min_corner.size() != n || max_corner.size() != n) throw InvalidArgument("box corners have wrong dimension");
      for (std::size_t i = 0; i < n; ++i) {
        if (!(min_corner[i] < max_corner[i])) throw InvalidArgument("box min corner must be below max corner");
      }
      break;
    case Kind::Sampled:
      if (!mask) throw InvalidArgument("sampled object has no voxel mask");
      mask->validate();
      if (mask->dim() != n) throw InvalidArgument("voxel mask has wrong dimension");
      if (samples_per_axis < 2) throw InvalidArgument("samples_per_axis must be at least 2");
      break;
  }
}

std::string_view to_string(ObjectSpec::Kind kind) {
  switch (kind) {
    case ObjectSpec::Kind::Ball: return "ball";
    case ObjectSpec::Kind::SphereShell: return "sphere_shell";
    case ObjectSpec::Kind::Box: return "box";
    case ObjectSpec::Kind::Sampled: return "sampled";
  }
  return "?";
}

ObjectSpec::Kind parse_object_kind(std::string_view text) {
  if (text == "ball") return ObjectSpec::Kind::Ball;
  if (text == "sphere_shell") return ObjectSpec::Kind::SphereShell;
  if (text == "box") return ObjectSpec::Kind::Box;
  if (text == "sampled") return ObjectSpec::Kind::Sampled;
  throw InvalidArgument("unknown object kind: " + std::string(text));
}

// ---- digitization ---------------------------------------------------------

bool cube_intersects_object(const ObjectSpec& spec, const Side& side, const CubeId& cube) {
  if (cube.dim() != spec.n) {
    throw InvalidArgument("cube dimension " + std::to_string(cube.dim()) + " does not match object dimension " +
                          std::to_string(spec.n));
  }
  const Exact l = to_exact(side);
  const std::size_t n = spec.n;
  switch (spec.kind) {
    case ObjectSpec::Kind::Ball:
    case ObjectSpec::Kind::SphereShell: {
      Exact near = 0, far = 0;
      for (std::size_t i = 0; i < n; ++i) {
        Exact lo = l * cube[i];
        Exact hi = lo + l;
        const Exact& c = spec.center[i];
        Exact clamped = c < lo ? lo : (c > hi ? hi : c);
        near += square(c - clamped);
        far += std::max(square(c - lo), square(c - hi));
      }
      if (spec.kind == ObjectSpec::Kind::Ball) return near <= square(spec.radius);
      return near <= square(spec.outer_radius) && far >= square(spec.inner_radius);
    }
    case ObjectSpec::Kind::Box: {
      for (std::size_t i = 0; i < n; ++i) {
        Exact lo = l * cube[i];
        Exact hi = lo + l;
        if (hi < spec.min_corner[i] || spec.max_corner[i] < lo) return false;
      }
      return true;
    }
    case ObjectSpec::Kind::Sampled: {
      const double ld = to_double(l);
      const std::size_t s = spec.samples_per_axis;
      std::vector<std::size_t> k(n, 0);
      std::vector<double> p(n);
      while (true) {
        for (std::size_t i = 0; i < n; ++i) {
          p[i] = ld * (static_cast<double>(cube[i]) + static_cast<double>(k[i]) / static_cast<double>(s - 1));
        }
        if (spec.mask->inside(p)) return true;
        std::size_t i = 0;
        while (i < n && k[i] == s - 1) k[i++] = 0;
        if (i == n) return false;
        ++k[i];
      }
    }
  }
  return false;
}

LatticeBox required_bounds(const ObjectSpec& spec, const Side& side) {
  spec.validate();
  const std::size_t n = spec.n;
  std::vector<Exact> lo(n), hi(n);
  switch (spec.kind) {
    case ObjectSpec::Kind::Ball:
    case ObjectSpec::Kind::SphereShell: {
      const Exact& r = spec.kind == ObjectSpec::Kind::Ball ? spec.radius : spec.outer_radius;
      for (std::size_t i = 0; i < n; ++i) {
        lo[i] = spec.center[i] - r;
        hi[i] = spec.center[i] + r;
      }
      break;
    }
    case ObjectSpec::Kind::Box:
      lo = spec.min_corner;
      hi = spec.max_corner;
      break;
    case ObjectSpec::Kind::Sampled: {
      auto occupied = spec.mask->occupied_bounds();
      if (!occupied) throw InvalidArgument("voxel mask is empty");
      for (std::size_t i = 0; i < n; ++i) {
        lo[i] = exact_from_double(occupied->first[i]);
        hi[i] = exact_from_double(occupied->second[i]);
      }
      break;
    }
  }
  // Cube c spans [cL, (c+1)L]; it can meet [lo, hi] only when
  // ceil(lo/L) - 1 <= c <= floor(hi/L).
  const Exact l = to_exact(side);
  LatticeBox box;
  for (std::size_t i = 0; i < n; ++i) {
    box.lo.push_back(to_coord(ceil_div(lo[i] / l) - 1));
    box.hi.push_back(to_coord(floor_div(hi[i] / l)));
  }
  return box;
}

CubicalSpace build_cubical_model(const ObjectSpec& spec, const Side& side, const std::optional<LatticeBox>& bounds) {
  if (side <= 0) throw InvalidArgument("side must be positive");
  auto required = required_bounds(spec, side);
  LatticeBox box = required;
  if (bounds) {
    if (bounds->dim() != spec.n) throw InvalidArgument("bounds dimension does not match object dimension");
    if (!bounds->contains(required)) {
      throw InvalidArgument("object escapes bounds: needs " + required.format() + ", given " + bounds->format());
    }
    box = *bounds;
  }
  if (box.cube_count() > 50'000'000) throw TooLarge("bounds hold more than 50000000 cubes");

  CubicalSpace out(spec.n, side);
  std::vector<Coord> c = box.lo;
  while (true) {
    CubeId cube(c);
    if (cube_intersects_object(spec, side, cube)) out.insert(cube);
    std::size_t i = spec.n;
    while (i-- > 0) {
      if (c[i] < box.hi[i]) {
        ++c[i];
        break;
      }
      c[i] = box.lo[i];
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  if (out.empty()) throw Error("cubical model is empty");
  return out;
}

ResolutionLadder refine_sequence(const ObjectSpec& spec, const Side& l0, std::size_t levels,
                                 const std::optional<LatticeBox>& bounds) {
  if (levels == 0) throw InvalidArgument("levels must be at least 1");
  if (levels > 30) throw InvalidArgument("levels must be at most 30");
  ResolutionLadder ladder;
  ladder.approximate = spec.approximate();
  Side side = l0;
  for (std::size_t k = 0; k < levels; ++k) {
    std::optional<LatticeBox> scaled;
    if (bounds) {
      const Coord f = Coord{1} << k;
      LatticeBox b;
      for (std::size_t i = 0; i < bounds->dim(); ++i) {
        b.lo.push_back(bounds->lo[i] * f);
        b.hi.push_back((bounds->hi[i] + 1) * f - 1);
      }
      scaled = std::move(b);
    }
    ladder.levels.push_back({side, build_cubical_model(spec, side, scaled)});
    side /= 2;
  }
  return ladder;
}

std::optional<std::size_t> stability_index(const std::vector<InvariantReport>& fingerprints) {
  const std::size_t k = fingerprints.size();
  if (k == 0) throw InvalidArgument("stability scan needs at least one level");
  if (k == 1) return 0;
  std::size_t s = k - 1;
  while (s > 0 && same_invariants(fingerprints[s - 1], fingerprints[k - 1])) --s;
  if (k - s < 2) return std::nullopt;
  return s;
}

StabilityResult stability_scan(const ResolutionLadder& ladder) {
  StabilityResult result;
  for (const auto& level : ladder.levels) result.fingerprints.push_back(fingerprint(level.model, ladder.approximate));
  result.stable_index = stability_index(result.fingerprints);
  return result;
}

// ---- sampling checks ------------------------------------------------------

bool point_in_object(const ObjectSpec& spec, const std::vector<double>& p) {
  if (p.size() != spec.n) throw InvalidArgument("point dimension does not match object dimension");
  switch (spec.kind) {
    case ObjectSpec::Kind::Ball:
    case ObjectSpec::Kind::SphereShell: {
      double d2 = 0;
      for (std::size_t i = 0; i < spec.n; ++i) {
        double t = p[i] - to_double(spec.center[i]);
        d2 += t * t;
      }
      if (spec.kind == ObjectSpec::Kind::Ball) return d2 <= std::pow(to_double(spec.radius), 2);
      return d2 <= std::pow(to_double(spec.outer_radius), 2) && d2 >= std::pow(to_double(spec.inner_radius), 2);
    }
    case ObjectSpec::Kind::Box:
      for (std::size_t i = 0; i < spec.n; ++i) {
        if (p[i] < to_double(spec.min_corner[i]) || p[i] > to_double(spec.max_corner[i])) return false;
      }
      return true;
    case ObjectSpec::Kind::Sampled:
      return spec.mask->inside(p);
  }
  return false;
}

namespace {

// Whether some cube of the model contains the point; points on cube
// boundaries may belong to a lower neighbor as well.
bool covered(const CubicalSpace& model, const std::vector<double>& p) {
  const std::size_t n = model.dim();
  const double l = boost::rational_cast<double>(model.side());
  std::vector<std::vector<Coord>> choices(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = p[i] / l;
    auto c = static_cast<Coord>(std::floor(t));
    choices[i].push_back(c);
    if (static_cast<double>(c) == t) choices[i].push_back(c - 1);
  }
  std::vector<std::size_t> k(n, 0);
  while (true) {
    std::vector<Coord> coords(n);
    for (std::size_t i = 0; i < n; ++i) coords[i] = choices[i][k[i]];
    if (model.contains(CubeId(std::move(coords)))) return true;
    std::size_t i = 0;
    while (i < n && k[i] + 1 == choices[i].size()) k[i++] = 0;
    if (i == n) return false;
    ++k[i];
  }
}

}  // namespace

std::size_t uncovered_samples(const ObjectSpec& spec, const CubicalSpace& model, std::size_t samples,
                              std::uint64_t seed) {
  if (model.dim() != spec.n) throw InvalidArgument("model dimension does not match object dimension");
  auto box = required_bounds(spec, model.side());
  const double l = boost::rational_cast<double>(model.side());
  std::mt19937_64 rng(seed);
  std::vector<std::uniform_real_distribution<double>> axis;
  for (std::size_t i = 0; i < spec.n; ++i) {
    axis.emplace_back(l * static_cast<double>(box.lo[i]), l * static_cast<double>(box.hi[i] + 1));
  }
  std::size_t drawn = 0, missed = 0, attempts = 0;
  std::vector<double> p(spec.n);
  while (drawn < samples && attempts < samples * 1000) {
    ++attempts;
    for (std::size_t i = 0; i < spec.n; ++i) p[i] = axis[i](rng);
    if (!point_in_object(spec, p)) continue;
    ++drawn;
    if (!covered(model, p)) ++missed;
  }
  return missed;
}

}  // namespace cubetopo

#pragma once

// Cubical models of continuous objects: every lattice cube of side L that
// meets the object. Primitive objects are tested exactly in rational
// arithmetic; sampled voxel masks are tested by grid sampling.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cubetopo/invariants.hpp"
#include "cubetopo/lattice.hpp"

namespace cubetopo {

using Exact = boost::multiprecision::cpp_rational;

/// "p/q", an integer, or a decimal with optional exponent, read exactly.
Exact parse_exact(std::string_view text);
/// The shortest decimal that round-trips `x`, read exactly.
Exact exact_from_double(double x);
std::string format_exact(const Exact& x);
double to_double(const Exact& x);
Exact to_exact(const Side& side);

/// Dense boolean voxel grid. Voxel (i_1..i_n) covers
/// [origin + i*size, origin + (i+1)*size] per axis; the last axis varies
/// fastest in `data`.
struct VoxelMask {
  std::vector<double> origin;
  double voxel_size = 1.0;
  std::vector<std::size_t> dims;
  std::vector<std::uint8_t> data;

  std::size_t dim() const { return dims.size(); }
  bool inside(const std::vector<double>& point) const;
  /// Bounding box of the set voxels, or nullopt when the mask is empty.
  std::optional<std::pair<std::vector<double>, std::vector<double>>> occupied_bounds() const;
  void validate() const;
};

struct ObjectSpec {
  enum class Kind { Ball, SphereShell, Box, Sampled };

  std::size_t n = 0;
  Kind kind = Kind::Ball;
  std::vector<Exact> center;
  Exact radius;
  Exact inner_radius;
  Exact outer_radius;
  std::vector<Exact> min_corner;
  std::vector<Exact> max_corner;
  std::shared_ptr<const VoxelMask> mask;
  std::size_t samples_per_axis = 4;

  static ObjectSpec ball(std::vector<Exact> center, Exact radius);
  static ObjectSpec sphere_shell(std::vector<Exact> center, Exact inner, Exact outer);
  static ObjectSpec box(std::vector<Exact> min_corner, std::vector<Exact> max_corner);
  static ObjectSpec sampled(VoxelMask mask, std::size_t samples_per_axis);

  /// Throws InvalidArgument when a field invariant does not hold.
  void validate() const;
  bool approximate() const { return kind == Kind::Sampled; }
};

std::string_view to_string(ObjectSpec::Kind kind);
ObjectSpec::Kind parse_object_kind(std::string_view text);

/// Whether the closed cube meets the object. Exact for primitive kinds.
bool cube_intersects_object(const ObjectSpec& spec, const Side& side, const CubeId& cube);

/// Point membership in floating point, used for sampling checks.
bool point_in_object(const ObjectSpec& spec, const std::vector<double>& point);

/// Draws `samples` points of the object (rejection sampling in its bounding
/// box, seeded) and returns how many fall outside the image of `model`.
std::size_t uncovered_samples(const ObjectSpec& spec, const CubicalSpace& model, std::size_t samples,
                              std::uint64_t seed);

/// The smallest lattice box holding every cube that can meet the object.
LatticeBox required_bounds(const ObjectSpec& spec, const Side& side);

/// All cubes of `bounds` meeting the object. Without bounds the required
/// box is used. Throws when the object escapes the given bounds or when no
/// cube meets it.
CubicalSpace build_cubical_model(const ObjectSpec& spec, const Side& side,
                                 const std::optional<LatticeBox>& bounds = std::nullopt);

struct ResolutionLevel {
  Side side;
  CubicalSpace model;
};

struct ResolutionLadder {
  std::vector<ResolutionLevel> levels;
  bool approximate = false;
};

/// Models at L0, L0/2, ..., L0/2^(k-1); bounds are rescaled at each level so
/// they cover the same region of space.
ResolutionLadder refine_sequence(const ObjectSpec& spec, const Side& l0, std::size_t levels,
                                 const std::optional<LatticeBox>& bounds = std::nullopt);

struct StabilityResult {
  /// Zero-based index of the first level of the stable tail.
  std::optional<std::size_t> stable_index;
  std::vector<InvariantReport> fingerprints;
};

/// Smallest s such that levels s, s+1, ... all have equal fingerprints. A
/// tail must hold at least two levels unless the ladder has only one.
StabilityResult stability_scan(const ResolutionLadder& ladder);
std::optional<std::size_t> stability_index(const std::vector<InvariantReport>& fingerprints);

}  // namespace cubetopo

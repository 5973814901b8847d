#pragma once

// Contractible graphs, simple points/edges/cubes, compression, and
// homotopy-equivalence decisions through contractible transformations.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cubetopo/canonical.hpp"
#include "cubetopo/graph.hpp"
#include "cubetopo/lattice.hpp"

namespace cubetopo {

/// Memoized contractibility oracle over unlabeled graphs.
///
/// A graph is contractible when it is K_1, or when it has a vertex whose rim
/// is contractible and whose deletion leaves a contractible graph. Results
/// for graphs up to kCanonicalSizeCap vertices are cached by canonical form;
/// the cache is shared by every query made through one engine and is safe to
/// use from several threads.
class ContractibilityEngine {
 public:
  /// `max_states` bounds the deletion states visited by one query on a
  /// graph above the canonical size cap.
  explicit ContractibilityEngine(std::size_t max_states = 2'000'000);

  bool contractible(const AdjacencyList& g);
  bool simple_point(const AdjacencyList& g, std::uint32_t v);

  /// A deletion order of simple points ending at a single vertex (the order
  /// lists every deleted vertex; the survivor is not included), or nullopt.
  std::optional<std::vector<std::uint32_t>> deletion_sequence(const AdjacencyList& g);

  std::size_t cache_size() const;
  std::size_t cache_hits() const { return hits_; }
  void clear_cache();

 private:
  bool small_contractible(const MaskRows& rows);
  bool small_simple(const MaskRows& rows, unsigned v);
  std::optional<std::vector<std::uint32_t>> small_sequence(MaskRows rows);
  std::optional<std::vector<std::uint32_t>> large_sequence(const AdjacencyList& g);

  std::size_t max_states_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, bool> memo_;
  std::size_t hits_ = 0;
};

/// The engine shared by the free functions below.
ContractibilityEngine& shared_engine();

struct ContractibilityVerdict {
  bool contractible = false;
  /// Labels in deletion order when contractible; each is simple at its turn.
  std::vector<std::string> deletion_order;
  /// Compressed remainder (default policy) when not contractible.
  Graph remainder;
};

ContractibilityVerdict is_contractible(const Graph& g);
bool is_simple_point(const Graph& g, std::string_view v);
/// An edge is simple when the common neighborhood of its ends induces a
/// contractible graph (an empty common neighborhood is not contractible).
bool is_simple_edge(const Graph& g, std::string_view a, std::string_view b);

enum class StepOp { DeletePoint, AttachPoint, DeleteEdge, AttachEdge };

std::string_view to_string(StepOp op);
StepOp parse_step_op(std::string_view text);

/// One contractible transformation. `element` holds one label for point
/// steps and two for edge steps; `rim` is the certificate (the rim of the
/// point, or the common neighborhood of the edge).
struct TraceStep {
  StepOp op = StepOp::DeletePoint;
  std::vector<std::string> element;
  std::vector<std::string> rim;

  bool operator==(const TraceStep&) const = default;
};

struct TransformationTrace {
  std::vector<TraceStep> steps;
  /// Optional final renaming (label after replay -> target label).
  std::map<std::string, std::string> relabel;

  bool operator==(const TransformationTrace&) const = default;
};

/// Order in which compression looks for the next simple element.
struct CompressionPolicy {
  enum class Kind { MinDegree, MaxDegree, LabelOrder, Priority };

  Kind kind = Kind::MinDegree;
  /// For Kind::Priority: labels tried first, in this order; the rest follow
  /// in label order.
  std::vector<std::string> priority;
  /// Labels considered only after every other candidate (any kind).
  std::vector<std::string> deferred;

  /// "min-degree", "max-degree", "label-order", or "priority:a;b;c".
  static CompressionPolicy parse(std::string_view text);
  std::string name() const;
};

/// Deletes simple points chosen by the policy until none is left.
std::pair<Graph, TransformationTrace> compress_graph(const Graph& g, const CompressionPolicy& policy = {});

/// Applies one step after re-validating its certificate against `g`.
/// Throws CertificateError (with the offending rim) when it does not hold.
Graph apply_step(const Graph& g, const TraceStep& step);
/// Replays every step, then applies the trace's relabel map.
Graph replay(const Graph& g, const TransformationTrace& trace);

Graph delete_point(const Graph& g, std::string_view v);
Graph attach_point(const Graph& g, const std::string& v, const std::vector<std::string>& rim);
Graph delete_edge(const Graph& g, std::string_view a, std::string_view b);
Graph attach_edge(const Graph& g, std::string_view a, std::string_view b);

/// Inverse transformations in reverse order.
TransformationTrace reversed(const TransformationTrace& trace);

// ---- cubical spaces -------------------------------------------------------

bool is_simple_cube(const CubicalSpace& space, const CubeId& cube);

struct SpaceVerdict {
  bool contractible = false;
  std::vector<CubeId> deletion_order;
  CubicalSpace remainder;
};

/// Decided on the intersection graph; the witness is expressed as cubes.
SpaceVerdict is_contractible_space(const CubicalSpace& space);

/// Independent recursion carried out on cubical spaces themselves, keyed by
/// translation-normalized cube sets. Throws BudgetExceeded past `max_states`.
bool is_contractible_space_strict(const CubicalSpace& space, std::size_t max_states = 200'000);

std::pair<CubicalSpace, TransformationTrace> compress_space(const CubicalSpace& space,
                                                            const CompressionPolicy& policy = {});

/// Replays point steps whose elements are cube labels.
CubicalSpace replay_space(const CubicalSpace& space, const TransformationTrace& trace);

// ---- equivalence ----------------------------------------------------------

enum class Equivalence { Yes, No, Unknown };

std::string_view to_string(Equivalence e);

struct EquivalenceResult {
  Equivalence verdict = Equivalence::Unknown;
  /// For Yes: replaying on the first graph and applying `relabel` yields the second.
  TransformationTrace trace;
  /// For No: the differing invariant. For Unknown: why the search stopped.
  std::string witness;
  std::size_t states_explored = 0;
};

/// Invariant refutation, then compression to isomorphic compressed forms,
/// then a bounded bidirectional search over contractible transformations.
EquivalenceResult homotopy_equivalent(const Graph& g, const Graph& h, std::size_t budget = 100'000);

}  // namespace cubetopo

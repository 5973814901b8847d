// cubetopo: digitize objects, compress cubical models, and check topology.
//
// Exit codes: 0 success or "yes", 1 "no" or a domain failure, 2 "unknown"
// or an exhausted budget, 3 compress found nothing to delete.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "cubetopo/digitize.hpp"
#include "cubetopo/error.hpp"
#include "cubetopo/graph.hpp"
#include "cubetopo/homotopy.hpp"
#include "cubetopo/invariants.hpp"
#include "cubetopo/io.hpp"

namespace fs = std::filesystem;
using namespace cubetopo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNo = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitAlreadyCompressed = 3;

// A model file holds either a cubical space or a graph.
struct LoadedModel {
  std::optional<CubicalSpace> space;
  Graph graph;
  std::string hash;
};

LoadedModel load_model(const std::string& path) {
  auto text = read_text_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("malformed JSON in " + path + ": " + e.what());
  }
  LoadedModel m;
  m.hash = fnv1a64_hex(text);
  if (j.is_object() && j.contains("cubes")) {
    m.space = space_from_json(j);
    m.graph = intersection_graph(*m.space).graph;
  } else {
    m.graph = graph_from_json(j);
  }
  return m;
}

CubicalSpace load_space(const std::string& path) {
  auto m = load_model(path);
  if (!m.space) throw InvalidArgument(path + " is not a cubical space file");
  return *m.space;
}

void print_report(const InvariantReport& r) {
  std::cout << "euler_graph: " << r.euler_graph << "\n";
  if (r.euler_image) std::cout << "euler_image: " << *r.euler_image << "\n";
  std::cout << "betti:";
  for (auto b : r.betti) std::cout << " " << b;
  std::cout << "\n";
  if (r.has_torsion()) std::cout << "torsion: yes\n";
  if (r.truncated) std::cout << "homology truncated at the ambient dimension\n";
  if (r.approximate) std::cout << "approximate: sampled object\n";
}

std::optional<LatticeBox> parse_bounds(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return LatticeBox::parse(text);
}

ObjectSpec load_object(const std::string& path) {
  return object_spec_from_json(read_json_file(path), fs::path(path).parent_path());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubical models of continuous objects and their digital topology"};
  app.require_subcommand(1);
  std::uint64_t seed = 20240501;
  app.add_option("--seed", seed, "Seed for sampling checks");

  // digitize
  std::string object_path, side_text, bounds_text, out_path, off_path;
  std::size_t check_samples = 2000;
  auto* digitize = app.add_subcommand("digitize", "Build the cubical model of an object");
  digitize->add_option("--object", object_path, "Object spec file")->required();
  digitize->add_option("--side", side_text, "Cube side L, as p/q or decimal")->required();
  digitize->add_option("--bounds", bounds_text, "Lattice bounds lo1,lo2:hi1,hi2");
  digitize->add_option("--out", out_path, "Output model file")->required();
  digitize->add_option("--off", off_path, "Also write the image boundary as OFF");
  digitize->add_option("--check-samples", check_samples, "Points sampled for the coverage check");

  // compress
  std::string model_path, policy_text = "min-degree", trace_path;
  bool strict = false;
  auto* compress = app.add_subcommand("compress", "Delete simple cubes until none is left");
  compress->add_option("model", model_path, "Cubical space file")->required();
  compress->add_option("--policy", policy_text, "min-degree | max-degree | label-order | priority:a;b;c");
  compress->add_option("--out", out_path, "Compressed model file");
  compress->add_option("--trace", trace_path, "Trace file");
  compress->add_flag("--strict", strict, "Cross-check contractibility natively on cubes");

  // graph
  std::string dot_path;
  auto* graph = app.add_subcommand("graph", "Intersection graph of a cubical space");
  graph->add_option("model", model_path, "Cubical space file")->required();
  graph->add_option("--out", out_path, "Graph file");
  graph->add_option("--dot", dot_path, "Also write Graphviz DOT");

  // invariants
  auto* invariants = app.add_subcommand("invariants", "Euler characteristics and homology");
  invariants->add_option("model", model_path, "Cubical space or graph file")->required();
  invariants->add_option("--out", out_path, "Report file");
  invariants->add_option("--policy", policy_text, "Recorded in the report provenance");
  invariants->add_flag("--strict", strict, "Also decide contractibility natively on cubes");

  // equiv
  std::string other_path;
  std::size_t budget = 100000;
  auto* equiv = app.add_subcommand("equiv", "Homotopy equivalence of two models");
  equiv->add_option("first", model_path, "Graph or cubical space file")->required();
  equiv->add_option("second", other_path, "Graph or cubical space file")->required();
  equiv->add_option("--budget", budget, "Search state budget");
  equiv->add_option("--out", out_path, "Trace file for a yes verdict");

  // refine
  std::size_t levels = 3;
  auto* refine = app.add_subcommand("refine", "Resolution ladder L, L/2, ... with stability scan");
  refine->add_option("--object", object_path, "Object spec file")->required();
  refine->add_option("--side", side_text, "Initial side L0")->required();
  refine->add_option("--levels", levels, "Number of levels")->check(CLI::Range(1, 30));
  refine->add_option("--bounds", bounds_text, "Lattice bounds at L0");
  refine->add_option("--out", out_path, "Ladder report file");

  // replay
  std::string target_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-validate a trace against a model");
  replay_cmd->add_option("model", model_path, "Graph or cubical space file")->required();
  replay_cmd->add_option("trace", trace_path, "Trace file")->required();
  replay_cmd->add_option("--target", target_path, "Expected result file");
  replay_cmd->add_option("--out", out_path, "Write the replayed result");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*digitize) {
      auto spec = load_object(object_path);
      auto side = parse_side(side_text);
      auto model = build_cubical_model(spec, side, parse_bounds(bounds_text));
      write_json_file(out_path, space_to_json(model));
      if (!off_path.empty()) write_text_file(off_path, to_off(model));
      std::cout << "cubes: " << model.size() << "\n";
      auto missed = uncovered_samples(spec, model, check_samples, seed);
      std::cout << "coverage check: " << check_samples << " sampled points, " << missed << " outside the image\n";
      if (spec.approximate()) std::cout << "approximate: sampled object\n";
      return missed == 0 ? kExitOk : kExitNo;
    }

    if (*compress) {
      auto space = load_space(model_path);
      auto policy = CompressionPolicy::parse(policy_text);
      auto [compressed, trace] = compress_space(space, policy);
      if (!out_path.empty()) write_json_file(out_path, space_to_json(compressed));
      if (!trace_path.empty()) write_json_file(trace_path, trace_to_json(trace));
      std::cout << "cubes: " << space.size() << " -> " << compressed.size() << "\n";
      std::cout << "deleted: " << trace.steps.size() << "\n";
      if (strict) {
        bool graph_verdict = compressed.size() == 1 || is_contractible_space(space).contractible;
        bool cube_verdict = is_contractible_space_strict(space);
        std::cout << "contractible: " << (graph_verdict ? "yes" : "no") << " (strict: " << (cube_verdict ? "yes" : "no") << ")\n";
        if (graph_verdict != cube_verdict) {
          std::cerr << "strict mode disagrees with the graph recursion\n";
          return kExitNo;
        }
      }
      return trace.steps.empty() ? kExitAlreadyCompressed : kExitOk;
    }

    if (*graph) {
      auto space = load_space(model_path);
      if (space.empty()) throw InvalidArgument("model is empty");
      auto g = intersection_graph(space).graph;
      if (!out_path.empty()) write_json_file(out_path, graph_to_json(g));
      if (!dot_path.empty()) write_text_file(dot_path, to_dot(g));
      std::cout << "vertices: " << g.size() << "\nedges: " << g.edge_count() << "\n";
      return kExitOk;
    }

    if (*invariants) {
      auto m = load_model(model_path);
      InvariantReport report = m.space ? fingerprint(*m.space) : fingerprint(m.graph);
      Provenance prov{model_path, m.hash, m.space ? std::optional<Side>(m.space->side()) : std::nullopt,
                      CompressionPolicy::parse(policy_text).name()};
      auto j = report_to_json(report, prov);
      if (m.space && strict) j["contractible_strict"] = is_contractible_space_strict(*m.space);
      if (!out_path.empty()) write_json_file(out_path, j);
      print_report(report);
      return kExitOk;
    }

    if (*equiv) {
      auto a = load_model(model_path);
      auto b = load_model(other_path);
      auto result = homotopy_equivalent(a.graph, b.graph, budget);
      std::cout << "verdict: " << to_string(result.verdict) << "\n";
      if (!result.witness.empty()) std::cout << "witness: " << result.witness << "\n";
      std::cout << "states explored: " << result.states_explored << "\n";
      if (result.verdict == Equivalence::Yes) {
        std::cout << "trace steps: " << result.trace.steps.size() << "\n";
        if (!out_path.empty()) write_json_file(out_path, trace_to_json(result.trace));
        return kExitOk;
      }
      return result.verdict == Equivalence::No ? kExitNo : kExitUnknown;
    }

    if (*refine) {
      auto spec = load_object(object_path);
      auto ladder = refine_sequence(spec, parse_side(side_text), levels, parse_bounds(bounds_text));
      auto stability = stability_scan(ladder);
      for (std::size_t k = 0; k < ladder.levels.size(); ++k) {
        const auto& r = stability.fingerprints[k];
        std::cout << "level " << k + 1 << ": side " << format_side(ladder.levels[k].side) << ", "
                  << ladder.levels[k].model.size() << " cubes, euler " << r.euler_graph << ", betti";
        for (auto b : r.betti_trimmed()) std::cout << " " << b;
        std::cout << "\n";
      }
      if (!out_path.empty()) write_json_file(out_path, ladder_to_json(ladder, stability));
      if (stability.stable_index) {
        std::cout << "stable from level " << *stability.stable_index + 1 << "\n";
        return kExitOk;
      }
      std::cout << "no stable tail\n";
      return kExitNo;
    }

    if (*replay_cmd) {
      auto m = load_model(model_path);
      auto trace = trace_from_json(read_json_file(trace_path));
      bool points_only = trace.relabel.empty();
      for (const auto& s : trace.steps) {
        points_only = points_only && (s.op == StepOp::DeletePoint || s.op == StepOp::AttachPoint);
      }
      Json result_json;
      Graph result_graph;
      std::optional<CubicalSpace> result_space;
      try {
        if (m.space && points_only) {
          result_space = replay_space(*m.space, trace);
          result_graph = intersection_graph(*result_space).graph;
          result_json = space_to_json(*result_space);
        } else {
          result_graph = replay(m.graph, trace);
          result_json = graph_to_json(result_graph);
        }
      } catch (const CertificateError& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return kExitNo;
      }
      std::cout << "steps: " << trace.steps.size() << " replayed, 0 certificate failures\n";
      if (!out_path.empty()) write_json_file(out_path, result_json);
      if (!target_path.empty()) {
        auto t = load_model(target_path);
        bool match = (result_space && t.space) ? *result_space == *t.space : result_graph == t.graph;
        std::cout << "target: " << (match ? "matches" : "differs") << "\n";
        if (!match) return kExitNo;
      }
      return kExitOk;
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnknown;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNo;
  }
  return kExitOk;
}

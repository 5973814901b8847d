#include "cubetopo/io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace cubetopo {

namespace {

[[noreturn]] void bad(const std::string& what) { throw InvalidArgument(what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) bad(where + ": missing field \"" + key + "\"");
  return *it;
}

Exact exact_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Exact(j.get<std::int64_t>());
  if (j.is_number_float()) return exact_from_double(j.get<double>());
  if (j.is_string()) return parse_exact(j.get<std::string>());
  bad(where + ": expected a number");
}

Json exact_to_json(const Exact& x) {
  if (boost::multiprecision::denominator(x) == 1 && boost::multiprecision::abs(x) < Exact(1LL << 53)) {
    return boost::multiprecision::numerator(x).convert_to<std::int64_t>();
  }
  return format_exact(x);
}

std::vector<Exact> exact_vector(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where + ": expected an array");
  std::vector<Exact> out;
  for (const auto& x : j) out.push_back(exact_from_json(x, where));
  return out;
}

Json exact_vector_to_json(const std::vector<Exact>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(exact_to_json(x));
  return out;
}

Side side_from_json(const Json& j) {
  if (j.is_string()) return parse_side(j.get<std::string>());
  if (j.is_number_integer()) {
    auto v = j.get<std::int64_t>();
    if (v <= 0) bad("side must be positive");
    return Side(v);
  }
  if (j.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", j.get<double>());
    return parse_side(buf);
  }
  bad("side: expected \"p/q\" or a number");
}

std::string label_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  bad(where + ": vertex labels must be strings");
}

std::vector<std::string> label_list(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where + ": expected an array of labels");
  std::vector<std::string> out;
  for (const auto& x : j) out.push_back(label_from_json(x, where));
  return out;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json_file(const std::filesystem::path& path, const Json& value) {
  write_text_file(path, value.dump(2) + "\n");
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- spaces and graphs ----------------------------------------------------

Json space_to_json(const CubicalSpace& space) {
  Json cubes = Json::array();
  for (const auto& c : space) {
    Json row = Json::array();
    for (auto x : c.coords()) row.push_back(x);
    cubes.push_back(std::move(row));
  }
  return Json{{"n", space.dim()}, {"side", format_side(space.side())}, {"cubes", std::move(cubes)}};
}

CubicalSpace space_from_json(const Json& j) {
  const auto& nj = field(j, "n", "cubical space");
  if (!nj.is_number_integer() || nj.get<std::int64_t>() < 1) bad("cubical space: n must be a positive integer");
  const auto n = nj.get<std::size_t>();
  CubicalSpace space(n, side_from_json(field(j, "side", "cubical space")));
  const auto& cubes = field(j, "cubes", "cubical space");
  if (!cubes.is_array()) bad("cubical space: cubes must be an array");
  for (const auto& c : cubes) {
    if (!c.is_array()) bad("cubical space: each cube is an array of integers");
    std::vector<Coord> coords;
    for (const auto& x : c) {
      if (!x.is_number_integer()) bad("cubical space: cube coordinates must be integers");
      coords.push_back(x.get<Coord>());
    }
    if (coords.size() != n) bad("cubical space: cube has " + std::to_string(coords.size()) + " coordinates, expected " + std::to_string(n));
    space.insert(CubeId(std::move(coords)));
  }
  return space;
}

Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (auto [a, b] : g.edges()) edges.push_back(Json::array({g.label(a), g.label(b)}));
  return Json{{"vertices", g.labels()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const Json& j) {
  auto vertices = label_list(field(j, "vertices", "graph"), "graph vertices");
  const auto& ej = field(j, "edges", "graph");
  if (!ej.is_array()) bad("graph: edges must be an array");
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : ej) {
    if (!e.is_array() || e.size() != 2) bad("graph: each edge is a pair of labels");
    edges.emplace_back(label_from_json(e[0], "graph edge"), label_from_json(e[1], "graph edge"));
  }
  return Graph(std::move(vertices), edges);
}

// ---- traces ---------------------------------------------------------------

Json trace_to_json(const TransformationTrace& trace) {
  Json steps = Json::array();
  for (const auto& s : trace.steps) {
    Json element = s.element.size() == 1 ? Json(s.element[0]) : Json(s.element);
    steps.push_back(Json{{"op", std::string(to_string(s.op))}, {"element", std::move(element)}, {"rim", s.rim}});
  }
  Json out{{"steps", std::move(steps)}};
  Json relabel = Json::object();
  for (const auto& [from, to] : trace.relabel) relabel[from] = to;
  out["relabel"] = std::move(relabel);
  return out;
}

TransformationTrace trace_from_json(const Json& j) {
  TransformationTrace trace;
  const auto& steps = field(j, "steps", "trace");
  if (!steps.is_array()) bad("trace: steps must be an array");
  for (const auto& s : steps) {
    TraceStep step;
    const auto& op = field(s, "op", "trace step");
    if (!op.is_string()) bad("trace step: op must be a string");
    step.op = parse_step_op(op.get<std::string>());
    const auto& el = field(s, "element", "trace step");
    step.element = el.is_array() ? label_list(el, "trace element") : std::vector<std::string>{label_from_json(el, "trace element")};
    step.rim = label_list(field(s, "rim", "trace step"), "trace rim");
    trace.steps.push_back(std::move(step));
  }
  if (auto it = j.find("relabel"); it != j.end()) {
    if (!it->is_object()) bad("trace: relabel must be an object");
    for (const auto& [from, to] : it->items()) trace.relabel[from] = label_from_json(to, "trace relabel");
  }
  return trace;
}

// ---- object specs ---------------------------------------------------------

VoxelMask voxel_mask_from_json(const Json& j) {
  VoxelMask mask;
  for (const auto& x : field(j, "origin", "voxel mask")) {
    if (!x.is_number()) bad("voxel mask: origin must hold numbers");
    mask.origin.push_back(x.get<double>());
  }
  const auto& size = field(j, "voxel_size", "voxel mask");
  if (!size.is_number()) bad("voxel mask: voxel_size must be a number");
  mask.voxel_size = size.get<double>();
  for (const auto& d : field(j, "dims", "voxel mask")) {
    if (!d.is_number_integer() || d.get<std::int64_t>() < 1) bad("voxel mask: dims must be positive integers");
    mask.dims.push_back(d.get<std::size_t>());
  }
  const auto& data = field(j, "data", "voxel mask");
  if (data.is_string()) {
    for (char c : data.get<std::string>()) {
      if (c == '0' || c == '1') mask.data.push_back(static_cast<std::uint8_t>(c - '0'));
      else if (!std::isspace(static_cast<unsigned char>(c))) bad("voxel mask: data string may hold only 0 and 1");
    }
  } else if (data.is_array()) {
    for (const auto& x : data) {
      if (x.is_boolean()) mask.data.push_back(x.get<bool>() ? 1 : 0);
      else if (x.is_number_integer()) mask.data.push_back(x.get<std::int64_t>() != 0 ? 1 : 0);
      else bad("voxel mask: data entries must be 0/1 or booleans");
    }
  } else {
    bad("voxel mask: data must be an array or a 0/1 string");
  }
  mask.validate();
  return mask;
}

Json voxel_mask_to_json(const VoxelMask& mask) {
  Json data = Json::array();
  for (auto b : mask.data) data.push_back(static_cast<int>(b));
  return Json{{"origin", mask.origin}, {"voxel_size", mask.voxel_size}, {"dims", mask.dims}, {"data", std::move(data)}};
}

ObjectSpec object_spec_from_json(const Json& j, const std::filesystem::path& base_dir) {
  const auto& nj = field(j, "n", "object spec");
  if (!nj.is_number_integer() || nj.get<std::int64_t>() < 1) bad("object spec: n must be a positive integer");
  const auto n = nj.get<std::size_t>();
  const auto& kind_j = field(j, "kind", "object spec");
  if (!kind_j.is_string()) bad("object spec: kind must be a string");
  const auto kind = parse_object_kind(kind_j.get<std::string>());
  const auto& p = field(j, "params", "object spec");
  const std::string where = "object spec params";

  auto either = [&](const char* a, const char* b) -> const Json& {
    if (p.is_object() && p.contains(a)) return p.at(a);
    return field(p, b, where);
  };

  ObjectSpec spec;
  switch (kind) {
    case ObjectSpec::Kind::Ball:
      spec = ObjectSpec::ball(exact_vector(field(p, "center", where), where), exact_from_json(field(p, "radius", where), where));
      break;
    case ObjectSpec::Kind::SphereShell:
      spec = ObjectSpec::sphere_shell(exact_vector(field(p, "center", where), where),
                                      exact_from_json(field(p, "inner_radius", where), where),
                                      exact_from_json(field(p, "outer_radius", where), where));
      break;
    case ObjectSpec::Kind::Box:
      spec = ObjectSpec::box(exact_vector(either("min_corner", "min"), where), exact_vector(either("max_corner", "max"), where));
      break;
    case ObjectSpec::Kind::Sampled: {
      const auto& m = field(p, "mask", where);
      VoxelMask mask;
      if (m.is_string()) {
        std::filesystem::path path(m.get<std::string>());
        if (path.is_relative()) path = base_dir / path;
        mask = voxel_mask_from_json(read_json_file(path));
      } else {
        mask = voxel_mask_from_json(m);
      }
      std::size_t samples = 4;
      if (p.contains("samples_per_axis")) {
        const auto& s = p.at("samples_per_axis");
        if (!s.is_number_integer() || s.get<std::int64_t>() < 2) bad("object spec: samples_per_axis must be an integer >= 2");
        samples = s.get<std::size_t>();
      }
      spec = ObjectSpec::sampled(std::move(mask), samples);
      break;
    }
  }
  if (spec.n != n) bad("object spec: parameters have dimension " + std::to_string(spec.n) + " but n = " + std::to_string(n));
  return spec;
}

Json object_spec_to_json(const ObjectSpec& spec) {
  Json params = Json::object();
  switch (spec.kind) {
    case ObjectSpec::Kind::Ball:
      params["center"] = exact_vector_to_json(spec.center);
      params["radius"] = exact_to_json(spec.radius);
      break;
    case ObjectSpec::Kind::SphereShell:
      params["center"] = exact_vector_to_json(spec.center);
      params["inner_radius"] = exact_to_json(spec.inner_radius);
      params["outer_radius"] = exact_to_json(spec.outer_radius);
      break;
    case ObjectSpec::Kind::Box:
      params["min_corner"] = exact_vector_to_json(spec.min_corner);
      params["max_corner"] = exact_vector_to_json(spec.max_corner);
      break;
    case ObjectSpec::Kind::Sampled:
      params["mask"] = voxel_mask_to_json(*spec.mask);
      params["samples_per_axis"] = spec.samples_per_axis;
      break;
  }
  return Json{{"n", spec.n}, {"kind", std::string(to_string(spec.kind))}, {"params", std::move(params)}};
}

// ---- reports --------------------------------------------------------------

Json report_to_json(const InvariantReport& report, const Provenance& provenance) {
  Json out;
  out["euler_graph"] = report.euler_graph;
  out["euler_image"] = report.euler_image ? Json(*report.euler_image) : Json(nullptr);
  out["betti"] = report.betti;
  Json flags = Json::array();
  for (bool b : report.torsion) flags.push_back(b);
  out["torsion_flags"] = std::move(flags);
  out["torsion_coefficients"] = report.torsion_coefficients;
  out["truncated"] = report.truncated;
  out["approximate"] = report.approximate;
  Json prov = Json::object();
  if (!provenance.source.empty()) prov["source"] = provenance.source;
  if (!provenance.source_hash.empty()) prov["source_hash"] = provenance.source_hash;
  if (provenance.side) prov["side"] = format_side(*provenance.side);
  if (!provenance.policy.empty()) prov["policy"] = provenance.policy;
  out["provenance"] = std::move(prov);
  return out;
}

InvariantReport report_from_json(const Json& j) {
  InvariantReport r;
  r.euler_graph = field(j, "euler_graph", "report").get<std::int64_t>();
  const auto& ei = field(j, "euler_image", "report");
  if (!ei.is_null()) r.euler_image = ei.get<std::int64_t>();
  r.betti = field(j, "betti", "report").get<std::vector<std::size_t>>();
  for (const auto& b : field(j, "torsion_flags", "report")) r.torsion.push_back(b.get<bool>());
  r.torsion_coefficients = field(j, "torsion_coefficients", "report").get<std::vector<std::vector<std::string>>>();
  r.truncated = field(j, "truncated", "report").get<bool>();
  r.approximate = field(j, "approximate", "report").get<bool>();
  return r;
}

Json ladder_to_json(const ResolutionLadder& ladder, const StabilityResult& stability) {
  Json levels = Json::array();
  for (std::size_t k = 0; k < ladder.levels.size(); ++k) {
    Json level;
    level["level"] = k + 1;
    level["side"] = format_side(ladder.levels[k].side);
    level["cubes"] = ladder.levels[k].model.size();
    if (k < stability.fingerprints.size()) level["report"] = report_to_json(stability.fingerprints[k]);
    levels.push_back(std::move(level));
  }
  Json out;
  out["approximate"] = ladder.approximate;
  out["levels"] = std::move(levels);
  out["stable_level"] = stability.stable_index ? Json(*stability.stable_index + 1) : Json(nullptr);
  return out;
}

// ---- exports --------------------------------------------------------------

std::string to_dot(const Graph& g, const std::string& name) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    return out + "\"";
  };
  std::string out = "graph " + quote(name) + " {\n";
  for (const auto& l : g.labels()) out += "  " + quote(l) + ";\n";
  for (auto [a, b] : g.edges()) out += "  " + quote(g.label(a)) + " -- " + quote(g.label(b)) + ";\n";
  return out + "}\n";
}

std::string to_off(const CubicalSpace& space) {
  const std::size_t n = space.dim();
  if (n != 2 && n != 3) throw InvalidArgument("OFF export needs n = 2 or n = 3");
  // Each square is listed by its four corners in cyclic order.
  using Corner = std::array<Coord, 3>;
  std::vector<std::array<Corner, 4>> squares;
  if (n == 2) {
    for (const auto& c : space) {
      Coord x = c[0], y = c[1];
      squares.push_back({Corner{x, y, 0}, Corner{x + 1, y, 0}, Corner{x + 1, y + 1, 0}, Corner{x, y + 1, 0}});
    }
  } else {
    std::map<std::pair<Corner, int>, int> facets;  // (anchor, normal axis) -> multiplicity
    for (const auto& c : space) {
      for (int axis = 0; axis < 3; ++axis) {
        for (int side = 0; side < 2; ++side) {
          Corner a{c[0], c[1], c[2]};
          a[static_cast<std::size_t>(axis)] += side;
          ++facets[{a, axis}];
        }
      }
    }
    for (const auto& [key, count] : facets) {
      if (count != 1) continue;
      auto [a, axis] = key;
      auto u = static_cast<std::size_t>((axis + 1) % 3);
      auto v = static_cast<std::size_t>((axis + 2) % 3);
      Corner p1 = a, p2 = a, p3 = a;
      p1[u] += 1;
      p2[u] += 1;
      p2[v] += 1;
      p3[v] += 1;
      squares.push_back({a, p1, p2, p3});
    }
  }
  std::map<Corner, std::size_t> index;
  std::vector<Corner> points;
  for (const auto& sq : squares) {
    for (const auto& p : sq) {
      if (index.emplace(p, points.size()).second) points.push_back(p);
    }
  }
  const double l = boost::rational_cast<double>(space.side());
  std::ostringstream out;
  out << "OFF\n" << points.size() << " " << squares.size() << " 0\n";
  for (const auto& p : points) out << l * p[0] << " " << l * p[1] << " " << l * p[2] << "\n";
  for (const auto& sq : squares) {
    out << 4;
    for (const auto& p : sq) out << " " << index[p];
    out << "\n";
  }
  return out.str();
}

}  // namespace cubetopo

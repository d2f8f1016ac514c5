#ifndef POLYFORGE_IO_HPP
#define POLYFORGE_IO_HPP

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyforge/enumerative.hpp"
#include "polyforge/oracle.hpp"
#include "polyforge/transform_log.hpp"

namespace polyforge {

using json = nlohmann::json;

inline constexpr const char* kSchemaTag = "polyforge/1";

// ---------------------------------------------------------------------------
// rationals and vectors

inline json to_json(const Rat& q) { return rat_to_string(q); }

inline Rat rat_from_json(const json& j) {
  if (!j.is_string()) throw InputError("rationals serialize as strings, got: " + j.dump());
  return rat_from_string(j.get<std::string>());
}

inline json to_json(const RatVec& v) {
  json a = json::array();
  for (const Rat& x : v) a.push_back(to_json(x));
  return a;
}

inline RatVec ratvec_from_json(const json& j) {
  RatVec v;
  for (const auto& x : j) v.push_back(rat_from_json(x));
  return v;
}

// ---------------------------------------------------------------------------
// digests: FNV-1a 64 over the canonical (sorted) H-representation

inline std::string digest_rows(int dim, std::vector<HRow> rows) {
  std::sort(rows.begin(), rows.end());
  std::ostringstream os;
  os << dim;
  for (const HRow& r : rows) {
    os << "|";
    for (const Rat& x : r.normal) os << rat_to_string(x) << ",";
    os << ":" << rat_to_string(r.offset);
  }
  std::string s = os.str();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

inline std::string digest(const Polytope& p) { return digest_rows(p.dim(), p.h.rows); }

// ---------------------------------------------------------------------------
// polytope documents

inline json polytope_to_json(const Polytope& p) {
  json doc;
  doc["schema"] = kSchemaTag;
  doc["kind"] = "polytope";
  doc["dim"] = p.dim();
  json vrep = json::array();
  for (const RatVec& v : p.v.vertices) vrep.push_back(to_json(v));
  doc["vrep"] = vrep;
  json hrep = json::array();
  for (const HRow& r : p.h.rows) hrep.push_back(json{{"normal", to_json(r.normal)}, {"offset", to_json(r.offset)}});
  doc["hrep"] = hrep;
  doc["digest"] = digest(p);
  return doc;
}

inline json polytope_to_json(const Polytope& p, const json& provenance) {
  json doc = polytope_to_json(p);
  doc["provenance"] = provenance;
  return doc;
}

/// Loads a polytope document. Accepts vrep+hrep (validated pairing), vrep
/// only (hull via the bounded oracle), or hrep only with the origin
/// interior (vertices through the polar and the oracle).
inline Polytope polytope_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("dim")) throw InputError("not a polytope document");
  if (doc.contains("schema") && doc["schema"] != kSchemaTag)
    throw InputError("schema-version mismatch: " + doc.value("schema", std::string()));
  int dim = doc["dim"].get<int>();
  bool has_v = doc.contains("vrep") && !doc["vrep"].empty();
  bool has_h = doc.contains("hrep") && !doc["hrep"].empty();

  VPolytope v;
  v.dim = dim;
  if (has_v)
    for (const auto& row : doc["vrep"]) {
      RatVec p = ratvec_from_json(row);
      if (static_cast<int>(p.size()) != dim) throw InputError("vertex arity mismatch");
      v.vertices.push_back(p);
    }
  HPolytope h;
  h.dim = dim;
  if (has_h)
    for (const auto& row : doc["hrep"]) {
      RatVec n = ratvec_from_json(row["normal"]);
      if (static_cast<int>(n.size()) != dim) throw InputError("normal arity mismatch");
      h.rows.push_back(HRow::canonical(n, rat_from_json(row["offset"])));
    }

  if (has_v && has_h) return Polytope::from_reps(v, h);
  if (has_v) {
    OracleResult o = brute_force_hull(v.vertices, dim);
    if (o.v.vertices.size() != v.vertices.size())
      throw InputError("vrep lists non-vertex points");
    return Polytope::from_reps(v, o.h);
  }
  if (has_h) {
    if (!origin_strictly_interior(h))
      throw InputError("hrep-only documents need the origin interior");
    VPolytope polar = polar_dual(h);
    OracleResult o = brute_force_hull(polar.vertices, dim);
    VPolytope verts;
    verts.dim = dim;
    for (const HRow& r : o.h.rows) {
      if (r.offset <= 0) throw InputError("hrep describes an unbounded set");
      verts.vertices.push_back(scale(r.normal, Rat(1) / r.offset));
    }
    return Polytope::from_reps(verts, h);
  }
  throw InputError("polytope document carries neither vrep nor hrep");
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
  return doc;
}

inline void save_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// certificates and transform logs

inline json to_json(const Certificate& c) {
  json j;
  j["kind"] = to_string(c.kind());
  j["hyperplanes_checked"] = c.hyperplanes_checked();
  j["strict_inequalities_verified"] = c.strict_inequalities_verified();
  if (c.common_point()) j["common_point"] = to_json(*c.common_point());
  return j;
}

inline json payload_to_json(StepTag tag, const StepPayload& payload) {
  json j;
  switch (tag) {
    case StepTag::Projective: {
      const auto& m = std::get<ProjectiveMap>(payload);
      json rows = json::array();
      for (const RatVec& r : m.block()) rows.push_back(to_json(r));
      j["block"] = rows;
      break;
    }
    case StepTag::Normal: {
      const auto& t = std::get<NormalTransform>(payload);
      json normals = json::array();
      for (const RatVec& n : t.row_normals) normals.push_back(to_json(n));
      j["normals"] = normals;
      j["offsets"] = to_json(RatVec(t.new_offsets.begin(), t.new_offsets.end()));
      break;
    }
    case StepTag::Ray: {
      const auto& s = std::get<RayScaling>(payload);
      j["lambdas"] = to_json(RatVec(s.lambdas.begin(), s.lambdas.end()));
      break;
    }
  }
  return j;
}

inline std::pair<StepTag, StepPayload> payload_from_json(const std::string& tag, const json& j) {
  if (tag == "projective") {
    RatMat block;
    for (const auto& r : j["block"]) block.push_back(ratvec_from_json(r));
    return {StepTag::Projective, ProjectiveMap::from_block(block)};
  }
  if (tag == "normal") {
    NormalTransform t;
    for (const auto& n : j["normals"]) t.row_normals.push_back(ratvec_from_json(n));
    RatVec offs = ratvec_from_json(j["offsets"]);
    t.new_offsets.assign(offs.begin(), offs.end());
    return {StepTag::Normal, t};
  }
  if (tag == "ray") {
    RayScaling s;
    RatVec l = ratvec_from_json(j["lambdas"]);
    s.lambdas.assign(l.begin(), l.end());
    return {StepTag::Ray, s};
  }
  throw InputError("unknown step tag: " + tag);
}

inline json log_to_json(const TransformLog& log) {
  json doc;
  doc["schema"] = kSchemaTag;
  doc["kind"] = "transform-log";
  doc["dim"] = log.input.dim();
  doc["input_digest"] = digest(log.input);
  doc["final_digest"] = digest(log.final_state());
  doc["bound"] = json{{"declared", log.declared_bound}, {"achieved", log.length()}};
  json steps = json::array();
  for (const auto& e : log.entries) {
    json s;
    s["tag"] = to_string(e.tag);
    s["payload"] = payload_to_json(e.tag, e.payload);
    s["certificate"] = to_json(e.certificate);
    s["snapshot_digest"] = digest(e.after);
    steps.push_back(s);
  }
  doc["steps"] = steps;
  return doc;
}

/// Replays a log document against an input polytope; returns the recomputed
/// log after checking the recorded digests step by step.
inline TransformLog replay_log_document(const json& doc, const Polytope& input) {
  if (doc.value("kind", std::string()) != "transform-log")
    throw InputError("not a transform-log document");
  if (doc["input_digest"] != digest(input))
    throw InputError("log replay: input digest mismatch");
  std::vector<std::pair<StepTag, StepPayload>> steps;
  for (const auto& s : doc["steps"]) steps.push_back(payload_from_json(s["tag"], s["payload"]));
  TransformLog log = replay_log(input, steps, doc["bound"]["declared"].get<size_t>());
  for (size_t i = 0; i < log.entries.size(); ++i) {
    if (doc["steps"][i]["snapshot_digest"] != digest(log.entries[i].after))
      throw CertificateError("log replay diverged at step " + std::to_string(i));
  }
  if (doc["final_digest"] != digest(log.final_state()))
    throw CertificateError("log replay: final digest mismatch");
  return log;
}

// ---------------------------------------------------------------------------
// OFF export (decimal, viewing only)

namespace detail {

/// Cyclic order of a 2-face's vertices: exact angular sort around the
/// centroid inside the face plane.
inline std::vector<size_t> polygon_cycle(const std::vector<RatVec>& pts) {
  size_t n = pts.size();
  RatVec c = zero_vec(pts[0].size());
  for (const RatVec& p : pts) c = add(c, p);
  c = scale(c, Rat(1, static_cast<long>(n)));
  // plane basis from two independent spokes
  RatVec b1 = sub(pts[0], c);
  RatVec b2;
  for (size_t i = 1; i < n; ++i) {
    b2 = sub(pts[i], c);
    RatMat m = {b1, b2};
    if (rank(m) == 2) break;
  }
  // 2d coordinates by solving against two independent rows of [b1 b2]
  auto coords = [&](const RatVec& p) -> std::pair<Rat, Rat> {
    RatVec w = sub(p, c);
    RatMat mm;
    RatVec rr;
    for (size_t row = 0; row < p.size() && mm.size() < 2; ++row) {
      RatMat trial = mm;
      trial.push_back({b1[row], b2[row]});
      if (rank(trial) == trial.size()) {
        mm = trial;
        rr.push_back(w[row]);
      }
    }
    auto xy = solve(mm, rr);
    if (!xy) throw CertificateError("polygon cycle: degenerate basis");
    return {(*xy)[0], (*xy)[1]};
  };
  std::vector<std::pair<std::pair<Rat, Rat>, size_t>> pl;
  for (size_t i = 0; i < n; ++i) pl.emplace_back(coords(pts[i]), i);
  auto half = [](const std::pair<Rat, Rat>& p) {
    return (p.second > 0 || (p.second == 0 && p.first > 0)) ? 0 : 1;
  };
  std::sort(pl.begin(), pl.end(), [&](const auto& a, const auto& b) {
    int ha = half(a.first), hb = half(b.first);
    if (ha != hb) return ha < hb;
    Rat cross = a.first.first * b.first.second - a.first.second * b.first.first;
    if (cross != 0) return cross > 0;
    return a.second < b.second;
  });
  std::vector<size_t> order;
  for (const auto& [xy, i] : pl) order.push_back(i);
  return order;
}

inline std::string decimal(const Rat& q, int digits) {
  boost::multiprecision::mpf_float_1000 f(q);
  std::ostringstream os;
  os << std::setprecision(digits) << f;
  return os.str();
}

}  // namespace detail

/// Standard OFF text for d <= 3; for d = 4 a Schlegel-style projection
/// through the first canonical facet, viewed from the interior centroid
/// pushed beyond it, with the 2-faces as OFF polygons. Decimal output is
/// explicitly lossy and one-way.
inline std::string export_off(const Polytope& p, int digits = 12) {
  int d = p.dim();
  if (d < 2 || d > 4) throw InputError("unsupported dimension for OFF export");

  std::vector<RatVec> coords3;
  std::vector<std::vector<size_t>> faces;

  if (d <= 3) {
    for (const RatVec& v : p.v.vertices) {
      RatVec x = v;
      while (x.size() < 3) x.push_back(Rat(0));
      coords3.push_back(x);
    }
    if (d == 2) {
      faces.push_back(detail::polygon_cycle(p.v.vertices));
    } else {
      for (size_t f = 0; f < p.inc.n_facets; ++f) {
        auto ids = p.inc.vertices_of_facet(f);
        std::vector<RatVec> pts;
        for (size_t i : ids) pts.push_back(p.v.vertices[i]);
        std::vector<size_t> cycle = detail::polygon_cycle(pts);
        std::vector<size_t> face;
        for (size_t k : cycle) face.push_back(ids[k]);
        faces.push_back(face);
      }
    }
  } else {
    // deterministic projection facet: first row in canonical sort order
    std::vector<HRow> sorted = sorted_rows(p.h.rows);
    size_t facet = 0;
    for (size_t r = 0; r < p.h.rows.size(); ++r)
      if (p.h.rows[r] == sorted[0]) facet = r;
    const HRow& row = p.h.rows[facet];
    RatVec centroid = zero_vec(4);
    for (const RatVec& v : p.v.vertices) centroid = add(centroid, v);
    centroid = scale(centroid, Rat(1, static_cast<long>(p.v.vertices.size())));
    Rat gap = row.offset - dot(row.normal, centroid);
    RatVec eye = add(centroid, scale(row.normal, 2 * gap / dot(row.normal, row.normal)));

    std::vector<RatVec> projected;
    for (const RatVec& v : p.v.vertices) {
      RatVec dir = sub(v, eye);
      Rat denom = dot(row.normal, dir);
      if (denom == 0) throw CertificateError("projection point degenerate for a vertex");
      Rat t = (row.offset - dot(row.normal, eye)) / denom;
      projected.push_back(add(eye, scale(dir, t)));
    }
    // basis of the facet hyperplane for 3d coordinates
    RatMat basis;
    for (size_t i = 0; i < 4 && basis.size() < 3; ++i) {
      RatVec e = zero_vec(4);
      e[i] = 1;
      RatVec w = sub(e, scale(row.normal, dot(row.normal, e) / dot(row.normal, row.normal)));
      RatMat trial = basis;
      trial.push_back(w);
      if (rank(trial) == trial.size()) basis = trial;
    }
    RatVec origin = projected[0];
    std::vector<size_t> eq_rows;  // 3 rows making the basis system invertible
    {
      RatMat m3;
      for (size_t row_i = 0; row_i < 4 && m3.size() < 3; ++row_i) {
        RatMat trial = m3;
        trial.push_back({basis[0][row_i], basis[1][row_i], basis[2][row_i]});
        if (rank(trial) == trial.size()) {
          m3 = trial;
          eq_rows.push_back(row_i);
        }
      }
    }
    for (const RatVec& q : projected) {
      RatVec w = sub(q, origin);
      RatMat m3;
      RatVec r3;
      for (size_t row_i : eq_rows) {
        m3.push_back({basis[0][row_i], basis[1][row_i], basis[2][row_i]});
        r3.push_back(w[row_i]);
      }
      auto sol = solve(m3, r3);
      if (!sol) throw CertificateError("projection basis degenerate");
      coords3.push_back(*sol);
    }
    // faces: the 2-faces of the 4-polytope
    for (const auto& face_set : face_vertex_sets(p.inc)) {
      std::vector<size_t> ids;
      std::vector<RatVec> pts;
      for (size_t i = 0; i < p.inc.n_vertices; ++i)
        if (face_set[i]) {
          ids.push_back(i);
          pts.push_back(p.v.vertices[i]);
        }
      if (affine_dim(pts) != 2) continue;
      std::vector<RatVec> proj_pts;
      for (size_t i : ids) proj_pts.push_back(coords3[i]);
      std::vector<size_t> cycle = detail::polygon_cycle(proj_pts);
      std::vector<size_t> face;
      for (size_t k : cycle) face.push_back(ids[k]);
      faces.push_back(face);
    }
    std::sort(faces.begin(), faces.end());
  }

  std::ostringstream os;
  os << "OFF\n" << coords3.size() << " " << faces.size() << " 0\n";
  for (const RatVec& v : coords3)
    os << detail::decimal(v[0], digits) << " " << detail::decimal(v[1], digits) << " "
       << detail::decimal(v[2], digits) << "\n";
  for (const auto& f : faces) {
    os << f.size();
    for (size_t i : f) os << " " << i;
    os << "\n";
  }
  return os.str();
}

}  // namespace polyforge

#endif  // POLYFORGE_IO_HPP

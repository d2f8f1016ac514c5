#ifndef POLYFORGE_POLYTOPE_HPP
#define POLYFORGE_POLYTOPE_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyforge/linalg.hpp"

namespace polyforge {

/// One facet-defining inequality <normal, x> <= offset. Normals are kept
/// canonical: coprime integers, orientation preserved.
struct HRow {
  RatVec normal;
  Rat offset;

  /// Canonical rescaling by a positive rational.
  static HRow canonical(const RatVec& n, const Rat& b) {
    RatVec p = primitive_vector(n);
    if (is_zero(p)) throw InputError("zero facet normal");
    // find the positive factor s with p = s*n, then scale b accordingly
    size_t k = 0;
    while (n[k] == 0) ++k;
    Rat s = p[k] / n[k];
    return HRow{p, b * s};
  }

  bool operator==(const HRow& o) const { return normal == o.normal && offset == o.offset; }
  bool operator<(const HRow& o) const {
    if (normal != o.normal) return std::lexicographical_compare(normal.begin(), normal.end(), o.normal.begin(), o.normal.end());
    return offset < o.offset;
  }
};

struct VPolytope {
  int dim = 0;
  std::vector<RatVec> vertices;
};

struct HPolytope {
  int dim = 0;
  std::vector<HRow> rows;
};

/// Pairs of combinatorially opposite cube facets (or crosspolytope vertices).
struct OppositePairing {
  std::vector<std::pair<size_t, size_t>> pairs;
};

/// Vertex x facet incidence bitmap plus per-side index lists.
struct IncidenceStructure {
  int dim = 0;
  size_t n_vertices = 0;
  size_t n_facets = 0;
  std::vector<std::vector<bool>> on;  // [vertex][facet]

  std::vector<size_t> facets_of_vertex(size_t v) const {
    std::vector<size_t> r;
    for (size_t f = 0; f < n_facets; ++f)
      if (on[v][f]) r.push_back(f);
    return r;
  }
  std::vector<size_t> vertices_of_facet(size_t f) const {
    std::vector<size_t> r;
    for (size_t v = 0; v < n_vertices; ++v)
      if (on[v][f]) r.push_back(v);
    return r;
  }
  bool operator==(const IncidenceStructure& o) const {
    return dim == o.dim && n_vertices == o.n_vertices && n_facets == o.n_facets && on == o.on;
  }
};

enum class CertificateKind {
  ValidRealization,
  CombinatorialCube,
  CombinatorialCrosspolytope,
  ConvexUnion,
  OrthogonalConcurrent,
};

inline const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::ValidRealization: return "valid-realization";
    case CertificateKind::CombinatorialCube: return "combinatorial-cube";
    case CertificateKind::CombinatorialCrosspolytope: return "combinatorial-crosspolytope";
    case CertificateKind::ConvexUnion: return "convex-union";
    case CertificateKind::OrthogonalConcurrent: return "orthogonal-concurrent";
  }
  return "?";
}

/// Witness that a batch of exact checks passed. Constructed only through
/// issue(), which the checkers call after the last check.
class Certificate {
 public:
  CertificateKind kind() const { return kind_; }
  size_t hyperplanes_checked() const { return hyperplanes_checked_; }
  size_t strict_inequalities_verified() const { return strict_checks_; }
  const std::optional<RatVec>& common_point() const { return common_point_; }

  static Certificate issue(CertificateKind k, size_t hyperplanes, size_t strict,
                           std::optional<RatVec> common_point = std::nullopt) {
    Certificate c;
    c.kind_ = k;
    c.hyperplanes_checked_ = hyperplanes;
    c.strict_checks_ = strict;
    c.common_point_ = std::move(common_point);
    return c;
  }

 private:
  Certificate() = default;
  CertificateKind kind_ = CertificateKind::ValidRealization;
  size_t hyperplanes_checked_ = 0;
  size_t strict_checks_ = 0;
  std::optional<RatVec> common_point_;
};

/// Check outcome: either a certificate or the first violated check by name.
struct VerifyOutcome {
  std::optional<Certificate> certificate;
  std::string violated_check;  // empty iff certificate present
  long offending_index = -1;

  bool ok() const { return certificate.has_value(); }
};

// ---------------------------------------------------------------------------
// basic predicates

inline bool origin_strictly_interior(const HPolytope& h) {
  return std::all_of(h.rows.begin(), h.rows.end(), [](const HRow& r) { return r.offset > 0; });
}

inline bool strictly_inside(const HPolytope& h, const RatVec& p) {
  return std::all_of(h.rows.begin(), h.rows.end(),
                     [&](const HRow& r) { return dot(r.normal, p) < r.offset; });
}

inline std::vector<HRow> sorted_rows(std::vector<HRow> rows) {
  std::sort(rows.begin(), rows.end());
  return rows;
}

/// Syntactic polytope equality: canonical rows compared as sorted sets.
inline bool same_h_polytope(const HPolytope& a, const HPolytope& b) {
  return a.dim == b.dim && sorted_rows(a.rows) == sorted_rows(b.rows);
}

inline bool same_vertex_set(const VPolytope& a, const VPolytope& b) {
  if (a.dim != b.dim || a.vertices.size() != b.vertices.size()) return false;
  auto va = a.vertices, vb = b.vertices;
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  return va == vb;
}

// ---------------------------------------------------------------------------
// incidence

/// Exact vertex-facet incidence of a paired representation. Throws
/// InputError when V and H do not describe the same point set.
inline IncidenceStructure incidence(const VPolytope& v, const HPolytope& h) {
  if (v.dim != h.dim) throw InputError("incidence: dimension mismatch");
  IncidenceStructure inc;
  inc.dim = v.dim;
  inc.n_vertices = v.vertices.size();
  inc.n_facets = h.rows.size();
  inc.on.assign(inc.n_vertices, std::vector<bool>(inc.n_facets, false));
  for (size_t i = 0; i < inc.n_vertices; ++i) {
    for (size_t j = 0; j < inc.n_facets; ++j) {
      Rat val = dot(h.rows[j].normal, v.vertices[i]);
      if (val > h.rows[j].offset)
        throw InputError("representation-mismatch: vertex " + std::to_string(i) +
                         " violates row " + std::to_string(j));
      inc.on[i][j] = (val == h.rows[j].offset);
    }
  }
  for (size_t j = 0; j < inc.n_facets; ++j) {
    bool tight = false;
    for (size_t i = 0; i < inc.n_vertices && !tight; ++i) tight = inc.on[i][j];
    if (!tight)
      throw InputError("representation-mismatch: row " + std::to_string(j) +
                       " tight on no vertex");
  }
  return inc;
}

/// Validates the paired representation as a bounded full-dimensional
/// polytope: every vertex on >= d facets, every facet with >= d affinely
/// independent vertices spanning its hyperplane, and every ridge shared by
/// exactly two facets (closed boundary).
inline VerifyOutcome check_valid_realization(const VPolytope& v, const HPolytope& h,
                                             const IncidenceStructure& inc) {
  size_t d = static_cast<size_t>(v.dim);
  size_t strict = 0;
  if (affine_dim(v.vertices) != v.dim)
    return {std::nullopt, "not-full-dimensional", -1};
  for (size_t i = 0; i < inc.n_vertices; ++i) {
    if (inc.facets_of_vertex(i).size() < d)
      return {std::nullopt, "vertex-on-fewer-than-d-facets", static_cast<long>(i)};
    RatMat tight;
    for (size_t f : inc.facets_of_vertex(i)) tight.push_back(h.rows[f].normal);
    if (rank(tight) != d)
      return {std::nullopt, "vertex-not-pinned-by-tight-rows", static_cast<long>(i)};
  }
  for (size_t j = 0; j < inc.n_facets; ++j) {
    std::vector<RatVec> pts;
    for (size_t i : inc.vertices_of_facet(j)) pts.push_back(v.vertices[i]);
    if (affine_dim(pts) != v.dim - 1)
      return {std::nullopt, "facet-not-spanning-hyperplane", static_cast<long>(j)};
    strict += inc.n_vertices - pts.size();
  }
  // ridge closure: intersection of two facets of full ridge rank must not
  // appear in a third facet, and each facet's ridges must each have a mate.
  for (size_t j = 0; j < inc.n_facets; ++j) {
    auto vj = inc.vertices_of_facet(j);
    for (size_t k = j + 1; k < inc.n_facets; ++k) {
      std::vector<RatVec> common;
      for (size_t i : vj)
        if (inc.on[i][k]) common.push_back(v.vertices[i]);
      if (static_cast<int>(d) >= 2 && affine_dim(common) > v.dim - 2)
        return {std::nullopt, "two-rows-share-a-hyperplane", static_cast<long>(k)};
    }
  }
  return {Certificate::issue(CertificateKind::ValidRealization, inc.n_facets, strict), "", -1};
}

// ---------------------------------------------------------------------------
// realization verification against candidate facets

/// Certifies that the candidate facet list realizes a polytope boundary:
/// each candidate spans an affine hyperplane, all non-members lie strictly
/// on one side, every vertex lies on >= d candidates, and no two candidates
/// share a hyperplane. Returns the supporting rows through the outcome when
/// requested via `rows_out`.
inline VerifyOutcome verify_realization(const VPolytope& v,
                                        const std::vector<std::vector<size_t>>& candidate_facets,
                                        std::vector<HRow>* rows_out = nullptr,
                                        CertificateKind kind = CertificateKind::ValidRealization) {
  size_t d = static_cast<size_t>(v.dim);
  size_t strict = 0;
  std::vector<HRow> rows;
  rows.reserve(candidate_facets.size());
  for (size_t c = 0; c < candidate_facets.size(); ++c) {
    const auto& idx = candidate_facets[c];
    std::vector<RatVec> pts;
    for (size_t i : idx) pts.push_back(v.vertices[i]);
    if (pts.empty() || affine_dim(pts) != v.dim - 1)
      return {std::nullopt, "candidate-not-spanning-hyperplane", static_cast<long>(c)};
    RatMat diffs;
    for (size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
    auto n = kernel_vector(diffs, d);
    if (!n) return {std::nullopt, "candidate-normal-not-unique", static_cast<long>(c)};
    Rat b = dot(*n, pts[0]);
    // orient so non-members satisfy < b
    int side = 0;
    std::vector<bool> member(v.vertices.size(), false);
    for (size_t i : idx) member[i] = true;
    for (size_t i = 0; i < v.vertices.size(); ++i) {
      if (member[i]) {
        if (dot(*n, v.vertices[i]) != b)
          return {std::nullopt, "candidate-vertices-not-coplanar", static_cast<long>(c)};
        continue;
      }
      Rat val = dot(*n, v.vertices[i]);
      int s = val < b ? -1 : (val > b ? 1 : 0);
      if (s == 0) return {std::nullopt, "non-member-on-candidate-hyperplane", static_cast<long>(c)};
      if (side == 0) side = s;
      if (s != side) return {std::nullopt, "non-members-on-both-sides", static_cast<long>(c)};
      ++strict;
    }
    if (side > 0) {
      *n = scale(*n, Rat(-1));
      b = -b;
    }
    rows.push_back(HRow::canonical(*n, b));
  }
  for (size_t a = 0; a < rows.size(); ++a)
    for (size_t b2 = a + 1; b2 < rows.size(); ++b2)
      if (rows[a] == rows[b2])
        return {std::nullopt, "two-candidates-share-a-hyperplane", static_cast<long>(b2)};
  for (size_t i = 0; i < v.vertices.size(); ++i) {
    size_t cnt = 0;
    for (const auto& idx : candidate_facets) cnt += std::count(idx.begin(), idx.end(), i);
    if (cnt < d) return {std::nullopt, "vertex-on-fewer-than-d-candidates", static_cast<long>(i)};
  }
  if (rows_out) *rows_out = rows;
  return {Certificate::issue(kind, candidate_facets.size(), strict), "", -1};
}

// ---------------------------------------------------------------------------
// combinatorial type predicates (canonical facet-pairing form, no generic
// graph isomorphism)

namespace detail {

/// Gives each column (facet) its unique disjoint partner, or nullopt when
/// the pairing structure does not exist.
inline std::optional<std::vector<size_t>> disjoint_partner(const IncidenceStructure& inc) {
  std::vector<size_t> partner(inc.n_facets, inc.n_facets);
  for (size_t f = 0; f < inc.n_facets; ++f) {
    size_t found = inc.n_facets;
    for (size_t g = 0; g < inc.n_facets; ++g) {
      if (g == f) continue;
      bool disjoint = true;
      for (size_t v = 0; v < inc.n_vertices && disjoint; ++v)
        disjoint = !(inc.on[v][f] && inc.on[v][g]);
      if (disjoint) {
        if (found != inc.n_facets) return std::nullopt;  // not unique
        found = g;
      }
    }
    if (found == inc.n_facets) return std::nullopt;
    partner[f] = found;
  }
  for (size_t f = 0; f < inc.n_facets; ++f)
    if (partner[partner[f]] != f) return std::nullopt;
  return partner;
}

}  // namespace detail

/// True iff the incidence is isomorphic to the standard d-cube's: 2d facets
/// in d disjoint opposite pairs, each vertex choosing one facet per pair,
/// and the choice map a bijection onto {0,1}^d.
inline bool is_combinatorial_cube(const IncidenceStructure& inc) {
  size_t d = static_cast<size_t>(inc.dim);
  if (d < 1) return false;
  if (inc.n_facets != 2 * d) return false;
  if (inc.n_vertices != (size_t{1} << d)) return false;
  auto partner = detail::disjoint_partner(inc);
  if (!partner) return false;
  // pick pair representatives in index order
  std::vector<size_t> rep;
  std::vector<bool> used(inc.n_facets, false);
  for (size_t f = 0; f < inc.n_facets; ++f) {
    if (used[f]) continue;
    used[f] = used[(*partner)[f]] = true;
    rep.push_back(f);
  }
  if (rep.size() != d) return false;
  std::vector<std::vector<bool>> seen;
  for (size_t v = 0; v < inc.n_vertices; ++v) {
    std::vector<bool> choice(d);
    for (size_t p = 0; p < d; ++p) {
      bool a = inc.on[v][rep[p]];
      bool b = inc.on[v][(*partner)[rep[p]]];
      if (a == b) return false;  // must lie on exactly one of each pair
      choice[p] = a;
    }
    seen.push_back(choice);
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

/// Dual test: 2d vertices in d antipodal pairs sharing no facet, 2^d facets
/// picking one vertex per pair, the picks a bijection onto {0,1}^d.
inline bool is_combinatorial_crosspolytope(const IncidenceStructure& inc) {
  size_t d = static_cast<size_t>(inc.dim);
  if (d < 1) return false;
  if (inc.n_vertices != 2 * d) return false;
  if (inc.n_facets != (size_t{1} << d)) return false;
  // antipode of vertex v: unique vertex sharing no facet
  std::vector<size_t> anti(inc.n_vertices, inc.n_vertices);
  for (size_t v = 0; v < inc.n_vertices; ++v) {
    size_t found = inc.n_vertices;
    for (size_t w = 0; w < inc.n_vertices; ++w) {
      if (w == v) continue;
      bool disjoint = true;
      for (size_t f = 0; f < inc.n_facets && disjoint; ++f)
        disjoint = !(inc.on[v][f] && inc.on[w][f]);
      if (disjoint) {
        if (found != inc.n_vertices) return false;  // antipode not unique
        found = w;
      }
    }
    if (found == inc.n_vertices) return false;
    anti[v] = found;
  }
  for (size_t v = 0; v < inc.n_vertices; ++v)
    if (anti[anti[v]] != v) return false;
  std::vector<size_t> rep;
  std::vector<bool> used(inc.n_vertices, false);
  for (size_t v = 0; v < inc.n_vertices; ++v) {
    if (used[v]) continue;
    used[v] = used[anti[v]] = true;
    rep.push_back(v);
  }
  if (rep.size() != d) return false;
  std::vector<std::vector<bool>> seen;
  for (size_t f = 0; f < inc.n_facets; ++f) {
    std::vector<bool> choice(d);
    for (size_t p = 0; p < d; ++p) {
      bool a = inc.on[rep[p]][f];
      bool b = inc.on[anti[rep[p]]][f];
      if (a == b) return false;
      choice[p] = a;
    }
    seen.push_back(choice);
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

/// Antipodal vertex pairing of a crosspolytope incidence, in first-index
/// order. Throws when the structure is not a crosspolytope.
inline OppositePairing crosspolytope_pairing(const IncidenceStructure& inc) {
  if (!is_combinatorial_crosspolytope(inc))
    throw InputError("not a combinatorial crosspolytope");
  OppositePairing pairing;
  std::vector<bool> used(inc.n_vertices, false);
  for (size_t v = 0; v < inc.n_vertices; ++v) {
    if (used[v]) continue;
    for (size_t w = v + 1; w < inc.n_vertices; ++w) {
      if (used[w]) continue;
      bool disjoint = true;
      for (size_t f = 0; f < inc.n_facets && disjoint; ++f)
        disjoint = !(inc.on[v][f] && inc.on[w][f]);
      if (disjoint) {
        pairing.pairs.emplace_back(v, w);
        used[v] = used[w] = true;
        break;
      }
    }
  }
  return pairing;
}

/// Opposite facet pairing of a cube incidence, in first-index order.
inline OppositePairing cube_facet_pairing(const IncidenceStructure& inc) {
  if (!is_combinatorial_cube(inc)) throw InputError("not a combinatorial cube");
  auto partner = detail::disjoint_partner(inc);
  OppositePairing pairing;
  std::vector<bool> used(inc.n_facets, false);
  for (size_t f = 0; f < inc.n_facets; ++f) {
    if (used[f]) continue;
    used[f] = used[(*partner)[f]] = true;
    pairing.pairs.emplace_back(f, (*partner)[f]);
  }
  return pairing;
}

// ---------------------------------------------------------------------------
// polar duality

/// conv(r_i / b_i); requires the origin strictly interior (all b_i > 0).
inline VPolytope polar_dual(const HPolytope& p) {
  VPolytope out;
  out.dim = p.dim;
  for (const HRow& r : p.rows) {
    if (r.offset <= 0) throw InputError("origin-not-interior: row offset <= 0");
    out.vertices.push_back(scale(r.normal, Rat(1) / r.offset));
  }
  return out;
}

/// Rows (v_i, 1) for each vertex. Inputs carry the all-points-are-vertices
/// invariant, so the row set is already irredundant; exact duplicates are
/// still dropped.
inline HPolytope polar_dual_v(const VPolytope& p) {
  HPolytope out;
  out.dim = p.dim;
  for (const RatVec& v : p.vertices) {
    if (is_zero(v)) throw InputError("origin-not-interior: origin listed as vertex");
    HRow row = HRow::canonical(v, Rat(1));
    if (std::find(out.rows.begin(), out.rows.end(), row) == out.rows.end())
      out.rows.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// paired representation

/// A polytope with both exact representations and their incidence.
/// Immutable after construction; all operations return new values.
struct Polytope {
  VPolytope v;
  HPolytope h;
  IncidenceStructure inc;

  int dim() const { return v.dim; }

  static Polytope from_reps(VPolytope vp, HPolytope hp) {
    Polytope p;
    p.v = std::move(vp);
    p.h = std::move(hp);
    p.inc = incidence(p.v, p.h);
    auto outcome = check_valid_realization(p.v, p.h, p.inc);
    if (!outcome.ok())
      throw InputError("invalid realization: " + outcome.violated_check + " (index " +
                       std::to_string(outcome.offending_index) + ")");
    return p;
  }
};

// ---------------------------------------------------------------------------
// standard models

inline Polytope standard_cube(int dim) {
  size_t d = static_cast<size_t>(dim);
  VPolytope v;
  v.dim = dim;
  for (size_t mask = 0; mask < (size_t{1} << d); ++mask) {
    RatVec p(d);
    for (size_t i = 0; i < d; ++i) p[i] = (mask >> i) & 1 ? Rat(1) : Rat(-1);
    v.vertices.push_back(p);
  }
  HPolytope h;
  h.dim = dim;
  for (size_t i = 0; i < d; ++i) {
    RatVec plus = zero_vec(d), minus = zero_vec(d);
    plus[i] = 1;
    minus[i] = -1;
    h.rows.push_back(HRow{plus, Rat(1)});
    h.rows.push_back(HRow{minus, Rat(1)});
  }
  return Polytope::from_reps(std::move(v), std::move(h));
}

inline Polytope standard_crosspolytope(int dim) {
  size_t d = static_cast<size_t>(dim);
  VPolytope v;
  v.dim = dim;
  for (size_t i = 0; i < d; ++i) {
    RatVec plus = zero_vec(d), minus = zero_vec(d);
    plus[i] = 1;
    minus[i] = -1;
    v.vertices.push_back(plus);
    v.vertices.push_back(minus);
  }
  HPolytope h;
  h.dim = dim;
  for (size_t mask = 0; mask < (size_t{1} << d); ++mask) {
    RatVec n(d);
    for (size_t i = 0; i < d; ++i) n[i] = (mask >> i) & 1 ? Rat(1) : Rat(-1);
    h.rows.push_back(HRow{n, Rat(1)});
  }
  return Polytope::from_reps(std::move(v), std::move(h));
}

/// Builds the paired representation of a crosspolytope from its vertices and
/// antipodal pairing, certifying the 2^d sign-choice facets.
inline Polytope crosspolytope_from_vertices(const VPolytope& v, const OppositePairing& pairing) {
  size_t d = static_cast<size_t>(v.dim);
  if (pairing.pairs.size() != d || v.vertices.size() != 2 * d)
    throw InputError("not-a-crosspolytope: wrong vertex or pair count");
  std::vector<std::vector<size_t>> candidates;
  for (size_t mask = 0; mask < (size_t{1} << d); ++mask) {
    std::vector<size_t> facet(d);
    for (size_t i = 0; i < d; ++i)
      facet[i] = (mask >> i) & 1 ? pairing.pairs[i].first : pairing.pairs[i].second;
    candidates.push_back(facet);
  }
  std::vector<HRow> rows;
  auto outcome = verify_realization(v, candidates, &rows, CertificateKind::CombinatorialCrosspolytope);
  if (!outcome.ok())
    throw InputError("not-a-crosspolytope: " + outcome.violated_check);
  HPolytope h;
  h.dim = v.dim;
  h.rows = rows;
  return Polytope::from_reps(v, h);
}

}  // namespace polyforge

#endif  // POLYFORGE_POLYTOPE_HPP

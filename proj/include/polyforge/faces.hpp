#ifndef POLYFORGE_FACES_HPP
#define POLYFORGE_FACES_HPP

#include <set>
#include <vector>

#include "polyforge/polytope.hpp"

namespace polyforge {

/// f-vector entries f_0..f_{d-1}; satisfies the Euler relation on
/// construction from a valid polytope.
struct FVector {
  int d = 0;
  std::vector<Int> entries;

  bool euler_holds() const {
    Int s = 0;
    int sign = 1;
    for (const Int& f : entries) {
      s += sign * f;
      sign = -sign;
    }
    Int expected = 1 - ((d % 2 == 0) ? Int(1) : Int(-1));
    return s == expected;
  }
  bool operator==(const FVector& o) const { return d == o.d && entries == o.entries; }
};

/// All proper nonempty faces as vertex sets: closure of the facet sets
/// under intersection. Every face of a polytope is the intersection of the
/// facets containing it.
inline std::vector<std::vector<bool>> face_vertex_sets(const IncidenceStructure& inc) {
  std::vector<std::vector<bool>> facet_sets(inc.n_facets,
                                            std::vector<bool>(inc.n_vertices, false));
  for (size_t f = 0; f < inc.n_facets; ++f)
    for (size_t v = 0; v < inc.n_vertices; ++v) facet_sets[f][v] = inc.on[v][f];

  std::set<std::vector<bool>> faces(facet_sets.begin(), facet_sets.end());
  std::vector<std::vector<bool>> frontier(faces.begin(), faces.end());
  while (!frontier.empty()) {
    std::vector<std::vector<bool>> next;
    for (const auto& s : frontier) {
      for (const auto& f : facet_sets) {
        std::vector<bool> meet(inc.n_vertices);
        bool empty = true;
        for (size_t v = 0; v < inc.n_vertices; ++v) {
          meet[v] = s[v] && f[v];
          empty = empty && !meet[v];
        }
        if (empty || meet == s) continue;
        if (faces.insert(meet).second) next.push_back(meet);
      }
    }
    frontier = std::move(next);
  }
  return {faces.begin(), faces.end()};
}

/// Counts faces of each dimension 0..d-1 through the incidence closure,
/// ranking each face by the affine dimension of its vertices.
inline FVector f_vector_of(const IncidenceStructure& inc, const std::vector<RatVec>& vertices) {
  if (inc.n_vertices == 0 || inc.n_facets == 0) throw InputError("degenerate incidence");
  FVector fv;
  fv.d = inc.dim;
  fv.entries.assign(static_cast<size_t>(inc.dim), Int(0));
  for (const auto& face : face_vertex_sets(inc)) {
    std::vector<RatVec> pts;
    for (size_t v = 0; v < inc.n_vertices; ++v)
      if (face[v]) pts.push_back(vertices[v]);
    int dim = affine_dim(pts);
    if (dim < 0 || dim >= inc.dim) throw InputError("degenerate incidence: face of dimension " + std::to_string(dim));
    ++fv.entries[static_cast<size_t>(dim)];
  }
  if (!fv.euler_holds()) throw InputError("degenerate incidence: Euler relation fails");
  return fv;
}

inline FVector f_vector_of(const Polytope& p) { return f_vector_of(p.inc, p.v.vertices); }

/// Total face count (proper nonempty faces), for the connected-sum identity.
inline Int total_faces(const FVector& f) {
  Int s = 0;
  for (const Int& x : f.entries) s += x;
  return s;
}

/// Sub-incidence of one facet as a (d-1)-polytope: its vertices against the
/// ridges it shares with the other facets.
inline IncidenceStructure facet_incidence(const Polytope& p, size_t facet) {
  auto verts = p.inc.vertices_of_facet(facet);
  std::vector<std::vector<bool>> ridges;
  for (size_t g = 0; g < p.inc.n_facets; ++g) {
    if (g == facet) continue;
    std::vector<bool> common(verts.size(), false);
    std::vector<RatVec> pts;
    for (size_t i = 0; i < verts.size(); ++i) {
      if (p.inc.on[verts[i]][g]) {
        common[i] = true;
        pts.push_back(p.v.vertices[verts[i]]);
      }
    }
    if (affine_dim(pts) != p.dim() - 2) continue;
    if (std::find(ridges.begin(), ridges.end(), common) == ridges.end()) ridges.push_back(common);
  }
  IncidenceStructure inc;
  inc.dim = p.dim() - 1;
  inc.n_vertices = verts.size();
  inc.n_facets = ridges.size();
  inc.on.assign(inc.n_vertices, std::vector<bool>(inc.n_facets, false));
  for (size_t i = 0; i < inc.n_vertices; ++i)
    for (size_t r = 0; r < ridges.size(); ++r) inc.on[i][r] = ridges[r][i];
  return inc;
}

/// A polytope is cubical iff every facet is a combinatorial cube (faces of
/// cubes are cubes, so all proper faces follow).
inline bool is_cubical(const Polytope& p) {
  for (size_t f = 0; f < p.inc.n_facets; ++f)
    if (!is_combinatorial_cube(facet_incidence(p, f))) return false;
  return true;
}

}  // namespace polyforge

#endif  // POLYFORGE_FACES_HPP

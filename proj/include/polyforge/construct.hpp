#ifndef POLYFORGE_CONSTRUCT_HPP
#define POLYFORGE_CONSTRUCT_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyforge/faces.hpp"
#include "polyforge/normalize.hpp"

namespace polyforge {

// ---------------------------------------------------------------------------
// prisms

/// Lifts two normally equivalent (d-1)-cubes into a d-cube in which they are
/// the opposite facets at heights 0 and 1, via the block H-representation
/// [A | b1-b2; 0 | 1; 0 | -1] <= [b1; 1; 0].
inline Polytope prism_lift(const Polytope& q1, const Polytope& q2) {
  if (q1.dim() != q2.dim()) throw InputError("prism_lift: dimension mismatch");
  size_t dq = static_cast<size_t>(q1.dim());
  if (q1.h.rows.size() != q2.h.rows.size())
    throw InputError("not-normally-equivalent: row counts differ");

  // align q2's rows with q1's by exact normal match
  std::vector<Rat> b2(q1.h.rows.size());
  for (size_t i = 0; i < q1.h.rows.size(); ++i) {
    bool found = false;
    for (size_t j = 0; j < q2.h.rows.size() && !found; ++j) {
      if (q2.h.rows[j].normal == q1.h.rows[i].normal) {
        b2[i] = q2.h.rows[j].offset;
        found = true;
      }
    }
    if (!found) throw InputError("not-normally-equivalent: facet normal sets differ");
  }

  HPolytope h;
  h.dim = q1.dim() + 1;
  for (size_t i = 0; i < q1.h.rows.size(); ++i) {
    RatVec n = q1.h.rows[i].normal;
    n.push_back(q1.h.rows[i].offset - b2[i]);
    h.rows.push_back(HRow::canonical(n, q1.h.rows[i].offset));
  }
  RatVec top = zero_vec(dq + 1), bottom = zero_vec(dq + 1);
  top[dq] = 1;
  bottom[dq] = -1;
  h.rows.push_back(HRow{top, Rat(1)});
  h.rows.push_back(HRow{bottom, Rat(0)});

  VPolytope v;
  v.dim = q1.dim() + 1;
  for (const RatVec& p : q1.v.vertices) {
    RatVec x = p;
    x.push_back(Rat(0));
    v.vertices.push_back(x);
  }
  for (const RatVec& p : q2.v.vertices) {
    RatVec x = p;
    x.push_back(Rat(1));
    v.vertices.push_back(x);
  }

  Polytope prism;
  try {
    prism = Polytope::from_reps(std::move(v), std::move(h));
  } catch (const InputError& e) {
    throw CertificateError(std::string("result-not-a-cube: ") + e.what());
  }
  if (!is_combinatorial_cube(prism.inc))
    throw CertificateError("result-not-a-cube: prism lift lost the cube type");
  return prism;
}

// ---------------------------------------------------------------------------
// projective plumbing between a (d-1)-polytope's own coordinates and R^d

/// Extends a (d-1)-dimensional projective map to R^d so that the height-0
/// hyperplane transforms by psi and stays at height 0.
inline ProjectiveMap extend_to_height0(const ProjectiveMap& psi) {
  size_t dq = static_cast<size_t>(psi.dim());
  const RatMat& b = psi.block();
  RatMat out(dq + 2, zero_vec(dq + 2));
  for (size_t i = 0; i < dq; ++i) {
    for (size_t j = 0; j < dq; ++j) out[i][j] = b[i][j];
    out[i][dq + 1] = b[i][dq];
  }
  out[dq][dq] = 1;  // height numerator: t
  for (size_t j = 0; j < dq; ++j) out[dq + 1][j] = b[dq][j];
  out[dq + 1][dq + 1] = b[dq][dq];
  return ProjectiveMap::from_block(out);
}

/// (x, t) |-> (x, t+1).
inline ProjectiveMap shift_up(int dim) {
  RatVec e = zero_vec(static_cast<size_t>(dim));
  e[static_cast<size_t>(dim) - 1] = 1;
  return ProjectiveMap::translation(e);
}

/// Affine chart of the hyperplane <n, x> = b: drops the coordinate k with
/// the largest |n_k| (first such index). chart_embedding maps chart
/// coordinates y plus a height t to U(y) + t*n.
struct FacetChart {
  size_t dropped;
  RatVec normal;
  Rat offset;

  RatVec to_chart(const RatVec& x) const {
    RatVec y;
    for (size_t i = 0; i < x.size(); ++i)
      if (i != dropped) y.push_back(x[i]);
    return y;
  }

  /// R^d -> R^d projective (affine) map realizing (y, t) |-> U(y) + t*n.
  ProjectiveMap embedding() const {
    size_t d = normal.size();
    RatMat blk(d + 1, zero_vec(d + 1));
    size_t slot = 0;
    std::vector<size_t> slot_of;
    for (size_t i = 0; i < d; ++i)
      if (i != dropped) slot_of.push_back(i);
    for (size_t s = 0; s < slot_of.size(); ++s) blk[slot_of[s]][s] = 1;
    for (size_t i = 0; i < d; ++i) blk[i][d - 1] += normal[i];
    // x_k = (b - sum_{i != k} n_i y_i)/n_k + t*n_k
    for (size_t s = 0; s < slot_of.size(); ++s)
      blk[dropped][s] = -normal[slot_of[s]] / normal[dropped];
    blk[dropped][d] = offset / normal[dropped];
    blk[d][d] = 1;
    (void)slot;
    return ProjectiveMap::from_block(blk);
  }

  static FacetChart of(const HRow& row) {
    size_t k = 0;
    Rat best = -1;
    for (size_t i = 0; i < row.normal.size(); ++i) {
      Rat a = row.normal[i] < 0 ? -row.normal[i] : row.normal[i];
      if (a > best) {
        best = a;
        k = i;
      }
    }
    return FacetChart{k, row.normal, row.offset};
  }
};

/// The facet of p with row index `row` as a free-standing (d-1)-polytope in
/// chart coordinates, recentred so the origin is interior. Returns the
/// polytope, the chart, and the chart centroid used for recentring.
struct ChartedFacet {
  Polytope polytope;
  FacetChart chart;
  RatVec centroid;          // chart coordinates of the recentring shift
  std::vector<size_t> vertex_ids;  // vertex indices in p, matching polytope order
};

inline ChartedFacet facet_as_polytope(const Polytope& p, size_t row) {
  FacetChart chart = FacetChart::of(p.h.rows[row]);
  auto ids = p.inc.vertices_of_facet(row);
  VPolytope v;
  v.dim = p.dim() - 1;
  for (size_t i : ids) v.vertices.push_back(chart.to_chart(p.v.vertices[i]));
  RatVec g = zero_vec(static_cast<size_t>(v.dim));
  for (const RatVec& x : v.vertices) g = add(g, x);
  g = scale(g, Rat(1, static_cast<long>(v.vertices.size())));
  for (RatVec& x : v.vertices) x = sub(x, g);

  IncidenceStructure finc = facet_incidence(p, row);
  std::vector<std::vector<size_t>> candidates;
  for (size_t f = 0; f < finc.n_facets; ++f) candidates.push_back(finc.vertices_of_facet(f));
  std::vector<HRow> rows;
  auto outcome = verify_realization(v, candidates, &rows);
  if (!outcome.ok())
    throw InputError("facet chart failed verification: " + outcome.violated_check);
  HPolytope h;
  h.dim = v.dim;
  h.rows = rows;
  return ChartedFacet{Polytope::from_reps(v, h), chart, g, ids};
}

// ---------------------------------------------------------------------------
// certified gluing

struct GlueResult {
  Polytope polytope;
  ProjectiveMap map_used;
  Rat parameter;                        // accepted contraction parameter
  std::vector<RatVec> shared_facet;     // vertices of the vanished facet
  Certificate certificate;
};

namespace detail {

/// Projective contraction toward `center` (a point on the hyperplane
/// <n,x> = b) that fixes the hyperplane pointwise: with w = x - center,
/// w |-> w / (1 + kappa <n_in, w>). For points on the inward side all
/// denominators stay >= 1.
inline ProjectiveMap facet_contraction(const RatVec& center, const RatVec& inward, const Rat& kappa) {
  size_t d = center.size();
  RatMat blk = identity(d + 1);
  for (size_t j = 0; j < d; ++j) blk[d][j] = kappa * inward[j];
  ProjectiveMap core = ProjectiveMap::from_block(blk);
  ProjectiveMap to_origin = ProjectiveMap::translation(scale(center, Rat(-1)));
  ProjectiveMap back = ProjectiveMap::translation(center);
  return back.compose(core.compose(to_origin));
}

/// Affine reflection across the hyperplane of `row` (fixes it pointwise).
inline ProjectiveMap facet_reflection(const HRow& row) {
  size_t d = row.normal.size();
  Rat nn = dot(row.normal, row.normal);
  RatMat blk = identity(d + 1);
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) blk[i][j] -= 2 * row.normal[i] * row.normal[j] / nn;
    blk[i][d] += 2 * row.normal[i] * row.offset / nn;
  }
  return ProjectiveMap::from_block(blk);
}

inline bool same_point_set(std::vector<RatVec> a, std::vector<RatVec> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace detail

/// Glues q onto p along p's facet f1 and q's facet f2. `align` must carry
/// q's facet vertex set exactly onto p's (it is supplied by construction in
/// every pipeline here). The final map is align composed with a member of
/// the one-parameter contraction family toward f2's centroid, found by
/// halving from 1 until the exact convex-union certificate passes.
inline GlueResult glue(const Polytope& p, size_t f1, const Polytope& q, size_t f2,
                       const ProjectiveMap& align) {
  std::vector<RatVec> f1_pts, f2_pts;
  for (size_t i : p.inc.vertices_of_facet(f1)) f1_pts.push_back(p.v.vertices[i]);
  for (size_t i : q.inc.vertices_of_facet(f2)) f2_pts.push_back(q.v.vertices[i]);
  {
    std::vector<RatVec> mapped;
    for (const RatVec& x : f2_pts) mapped.push_back(align.apply(x));
    if (!detail::same_point_set(mapped, f1_pts))
      throw InputError("no-projective-correspondence: align does not carry F2 onto F1");
  }

  RatVec center = zero_vec(static_cast<size_t>(q.dim()));
  for (const RatVec& x : f2_pts) center = add(center, x);
  center = scale(center, Rat(1, static_cast<long>(f2_pts.size())));
  RatVec inward = scale(q.h.rows[f2].normal, Rat(-1));

  HRow f1_flipped = HRow::canonical(scale(p.h.rows[f1].normal, Rat(-1)), -p.h.rows[f1].offset);
  FVector fp = f_vector_of(p);
  FVector fq = f_vector_of(q);
  // faces(R) = faces(P) u faces(Q) minus F: the two copies of F's face
  // poset are identified and F itself disappears
  FVector ff = f_vector_of(facet_incidence(p, f1), f1_pts);
  Int expected_faces = total_faces(fp) + total_faces(fq) - total_faces(ff) - 2;
  Int expected_facets = fp.entries.back() + fq.entries.back() - 2;

  std::vector<bool> p_on_f1(p.v.vertices.size());
  for (size_t i = 0; i < p.v.vertices.size(); ++i) p_on_f1[i] = p.inc.on[i][f1];

  Rat mu(1);
  const Rat mu_floor = Rat(1) / (Int(1) << 200);
  std::string last_reason;
  while (mu >= mu_floor) {
    Rat kappa = (1 - mu) / mu;
    ProjectiveMap contraction = detail::facet_contraction(center, inward, kappa);
    for (int use_reflection = 0; use_reflection < 2; ++use_reflection) {
      ProjectiveMap candidate = use_reflection
                                    ? align.compose(detail::facet_reflection(q.h.rows[f2]).compose(contraction))
                                    : align.compose(contraction);
      Polytope qi;
      try {
        qi = apply_projective(candidate, q).polytope;
      } catch (const InputError& e) {
        last_reason = e.what();
        continue;
      } catch (const CertificateError& e) {
        last_reason = e.what();
        continue;
      }
      // shared facet must be exactly f1's hyperplane, oppositely oriented
      if (!(qi.h.rows[f2] == f1_flipped)) {
        last_reason = "image facet not on F1's hyperplane with opposite orientation";
        continue;
      }
      // strict convexity checks in both directions
      bool ok = true;
      size_t strict = 0;
      for (size_t i = 0; i < qi.v.vertices.size() && ok; ++i) {
        if (qi.inc.on[i][f2]) continue;  // shared vertices
        if (dot(p.h.rows[f1].normal, qi.v.vertices[i]) <= p.h.rows[f1].offset) ok = false;
        for (size_t r = 0; r < p.h.rows.size() && ok; ++r) {
          if (r == f1) continue;
          if (dot(p.h.rows[r].normal, qi.v.vertices[i]) >= p.h.rows[r].offset) ok = false;
          ++strict;
        }
      }
      for (size_t i = 0; i < p.v.vertices.size() && ok; ++i) {
        if (p_on_f1[i]) continue;
        if (dot(qi.h.rows[f2].normal, p.v.vertices[i]) <= qi.h.rows[f2].offset) ok = false;
        for (size_t r = 0; r < qi.h.rows.size() && ok; ++r) {
          if (r == f2) continue;
          if (dot(qi.h.rows[r].normal, p.v.vertices[i]) >= qi.h.rows[r].offset) ok = false;
          ++strict;
        }
      }
      if (!ok) {
        last_reason = "strict side inequality failed";
        continue;
      }

      // assemble the union
      VPolytope uv;
      uv.dim = p.dim();
      uv.vertices = p.v.vertices;
      for (size_t i = 0; i < qi.v.vertices.size(); ++i)
        if (!qi.inc.on[i][f2]) uv.vertices.push_back(qi.v.vertices[i]);
      HPolytope uh;
      uh.dim = p.dim();
      for (size_t r = 0; r < p.h.rows.size(); ++r)
        if (r != f1) uh.rows.push_back(p.h.rows[r]);
      for (size_t r = 0; r < qi.h.rows.size(); ++r)
        if (r != f2) uh.rows.push_back(qi.h.rows[r]);
      Polytope unioned;
      try {
        unioned = Polytope::from_reps(std::move(uv), std::move(uh));
      } catch (const InputError& e) {
        last_reason = std::string("union validation: ") + e.what();
        continue;
      }
      FVector fu = f_vector_of(unioned);
      if (total_faces(fu) != expected_faces || fu.entries.back() != expected_facets) {
        last_reason = "face count identity failed";
        continue;
      }
      Certificate cert = Certificate::issue(
          CertificateKind::ConvexUnion, p.h.rows.size() + qi.h.rows.size(), strict);
      return GlueResult{std::move(unioned), candidate, mu, f1_pts, cert};
    }
    mu /= 2;
  }
  throw CertificateError("search-exhausted: no contraction parameter certified (" + last_reason + ")");
}

// ---------------------------------------------------------------------------
// towers

struct TowerProvenance {
  std::vector<Rat> glue_parameters;
  size_t natural_cubes = 0;  // before padding
  size_t padded_cubes = 0;
};

/// Stacked cubical d-polytope with marked bottom and top facets; witnesses
/// carry the input realizations onto those facets exactly (inputs enter at
/// height 0, i.e. as (v, 0)).
struct Tower {
  Polytope polytope;
  size_t cube_count = 0;
  size_t bottom_facet = 0;
  size_t top_facet = 0;
  ProjectiveMap bottom_witness;
  ProjectiveMap top_witness;
  TowerProvenance provenance;
};

namespace detail {

inline size_t find_facet_by_vertices(const Polytope& p, const std::vector<RatVec>& pts) {
  for (size_t f = 0; f < p.inc.n_facets; ++f) {
    std::vector<RatVec> fv;
    for (size_t i : p.inc.vertices_of_facet(f)) fv.push_back(p.v.vertices[i]);
    if (same_point_set(fv, pts)) return f;
  }
  throw CertificateError("internal-assertion: expected facet not found in union");
}

inline Polytope recentre(const Polytope& p, RatVec* shift_out) {
  RatVec g = zero_vec(static_cast<size_t>(p.dim()));
  for (const RatVec& x : p.v.vertices) g = add(g, x);
  g = scale(g, Rat(1, static_cast<long>(p.v.vertices.size())));
  if (shift_out) *shift_out = g;
  return apply_projective(ProjectiveMap::translation(scale(g, Rat(-1))), p).polytope;
}

}  // namespace detail

/// Builds a d-tower connecting two (d-1)-cube realizations: relate the two
/// cubes, lift every normal transformation in the merged log to a prism,
/// absorb the projective steps into the gluing maps, and glue sequentially.
/// With pad_to set, right prisms are stacked on top until the tower has
/// exactly that many cubes.
inline Tower build_tower(const Polytope& q_in, const Polytope& q2_in,
                         std::optional<size_t> pad_to = std::nullopt) {
  if (q_in.dim() != q2_in.dim()) throw InputError("build_tower: dimension mismatch");
  int d = q_in.dim() + 1;
  size_t bound = 4 * static_cast<size_t>(d);

  RatVec g1, g2;
  Polytope q = detail::recentre(q_in, &g1);
  Polytope q2 = detail::recentre(q2_in, &g2);

  TransformLog rel = relate_cubes(q, q2);

  // split the merged alternating log into projective gaps and normal steps
  struct NormalStage {
    Polytope before, after;
    ProjectiveMap gap_before;  // composed projectives since the previous normal
  };
  std::vector<NormalStage> stages;
  ProjectiveMap gap = ProjectiveMap::identity_map(q.dim());
  Polytope state = q;
  for (const auto& e : rel.entries) {
    if (e.tag == StepTag::Projective) {
      gap = std::get<ProjectiveMap>(e.payload).compose(gap);
      state = e.after;
    } else if (e.tag == StepTag::Normal) {
      stages.push_back(NormalStage{state, e.after, gap});
      gap = ProjectiveMap::identity_map(q.dim());
      state = e.after;
    } else {
      throw CertificateError("internal-assertion: ray step in a primal cube log");
    }
  }
  ProjectiveMap tail_gap = gap;  // projectives after the last normal step

  Tower tower;
  tower.provenance.natural_cubes = std::max<size_t>(stages.size(), 1);

  ProjectiveMap up = shift_up(d);
  Polytope top_chart_cube = q;  // realization whose height-1 copy is the current top
  ProjectiveMap phi = ProjectiveMap::identity_map(d);

  if (stages.empty()) {
    // purely projective relation: a single right prism realizes the tower
    Polytope k = rel.final_state();
    tower.polytope = prism_lift(k, k);
    tower.cube_count = 1;
    top_chart_cube = k;
    // the only normal-free gap carries q onto k
    ProjectiveMap whole = tail_gap;
    tower.bottom_witness = extend_to_height0(whole.compose(ProjectiveMap::translation(scale(g1, Rat(-1)))));
    tail_gap = ProjectiveMap::identity_map(q.dim());
  } else {
    tower.polytope = prism_lift(stages[0].before, stages[0].after);
    tower.cube_count = 1;
    top_chart_cube = stages[0].after;
    tower.bottom_witness =
        extend_to_height0(stages[0].gap_before.compose(ProjectiveMap::translation(scale(g1, Rat(-1)))));
    for (size_t k = 1; k < stages.size(); ++k) {
      Polytope prism = prism_lift(stages[k].before, stages[k].after);
      ProjectiveMap align =
          phi.compose(up.compose(extend_to_height0(stages[k].gap_before.inverse_map())));
      std::vector<RatVec> top_pts;
      for (const RatVec& x : top_chart_cube.v.vertices) {
        RatVec lifted = x;
        lifted.push_back(Rat(1));
        top_pts.push_back(phi.apply(lifted));
      }
      size_t top_row = detail::find_facet_by_vertices(tower.polytope, top_pts);
      size_t bottom_row = prism.h.rows.size() - 1;  // the height >= 0 row
      GlueResult res = glue(tower.polytope, top_row, prism, bottom_row, align);
      tower.provenance.glue_parameters.push_back(res.parameter);
      tower.polytope = res.polytope;
      phi = res.map_used;
      top_chart_cube = stages[k].after;
      ++tower.cube_count;
    }
  }

  // padding with right prisms over the current top realization
  while (pad_to && tower.cube_count < *pad_to) {
    Polytope prism = prism_lift(top_chart_cube, top_chart_cube);
    ProjectiveMap align = phi.compose(up);
    std::vector<RatVec> top_pts;
    for (const RatVec& x : top_chart_cube.v.vertices) {
      RatVec lifted = x;
      lifted.push_back(Rat(1));
      top_pts.push_back(phi.apply(lifted));
    }
    size_t top_row = detail::find_facet_by_vertices(tower.polytope, top_pts);
    size_t bottom_row = prism.h.rows.size() - 1;
    GlueResult res = glue(tower.polytope, top_row, prism, bottom_row, align);
    tower.provenance.glue_parameters.push_back(res.parameter);
    tower.provenance.padded_cubes++;
    tower.polytope = res.polytope;
    phi = res.map_used;
    ++tower.cube_count;
  }

  if (tower.cube_count > std::max(bound, pad_to.value_or(0)))
    throw CertificateError("internal-assertion: tower exceeded its cube bound");

  // locate the marked facets and build the witnesses
  {
    std::vector<RatVec> bottom_pts;
    for (const RatVec& x : q_in.v.vertices) {
      RatVec lifted = x;
      lifted.push_back(Rat(0));
      bottom_pts.push_back(tower.bottom_witness.apply(lifted));
    }
    tower.bottom_facet = detail::find_facet_by_vertices(tower.polytope, bottom_pts);
  }
  tower.top_witness = phi.compose(up.compose(extend_to_height0(
      tail_gap.inverse_map().compose(ProjectiveMap::translation(scale(g2, Rat(-1)))))));
  {
    std::vector<RatVec> top_pts;
    for (const RatVec& x : q2_in.v.vertices) {
      RatVec lifted = x;
      lifted.push_back(Rat(0));
      top_pts.push_back(tower.top_witness.apply(lifted));
    }
    tower.top_facet = detail::find_facet_by_vertices(tower.polytope, top_pts);
  }

  if (!is_cubical(tower.polytope))
    throw CertificateError("internal-assertion: tower is not cubical");
  return tower;
}

// ---------------------------------------------------------------------------
// C-connected sum

struct CConnectedSum {
  Polytope polytope;
  size_t connector_cubes = 0;
  TowerProvenance tower_provenance;
  Rat glue_parameter_1, glue_parameter_2;
};

/// Q1 #_{F1} C #_{F2} Q2 with C the cubical connector built as a tower of
/// exactly 4d cubes between the two facets.
inline CConnectedSum c_connected_sum(const Polytope& q1, size_t f1, const Polytope& q2, size_t f2) {
  if (q1.dim() != q2.dim()) throw InputError("c_connected_sum: dimension mismatch");
  int d = q1.dim();
  size_t connector_size = 4 * static_cast<size_t>(d);

  ChartedFacet c1 = facet_as_polytope(q1, f1);
  ChartedFacet c2 = facet_as_polytope(q2, f2);
  Tower tower = build_tower(c1.polytope, c2.polytope, connector_size);

  // glue the tower's bottom onto q1's facet f1
  ProjectiveMap align1 = c1.chart.embedding()
                             .compose(extend_to_height0(ProjectiveMap::translation(c1.centroid))
                                          .compose(tower.bottom_witness.inverse_map()));
  GlueResult res1 = glue(q1, f1, tower.polytope, tower.bottom_facet, align1);

  // the tower's top facet inside the union
  std::vector<RatVec> top_pts;
  for (size_t i : tower.polytope.inc.vertices_of_facet(tower.top_facet))
    top_pts.push_back(res1.map_used.apply(tower.polytope.v.vertices[i]));
  size_t top_row = detail::find_facet_by_vertices(res1.polytope, top_pts);

  // glue q2 onto that facet
  ProjectiveMap align2 =
      res1.map_used.compose(tower.top_witness.compose(extend_to_height0(
          ProjectiveMap::translation(scale(c2.centroid, Rat(-1)))).compose(
          c2.chart.embedding().inverse_map())));
  GlueResult res2 = glue(res1.polytope, top_row, q2, f2, align2);

  if (!is_cubical(res2.polytope))
    throw CertificateError("internal-assertion: C-connected sum is not cubical");

  CConnectedSum out;
  out.polytope = res2.polytope;
  out.connector_cubes = tower.cube_count;
  out.tower_provenance = tower.provenance;
  out.glue_parameter_1 = res1.parameter;
  out.glue_parameter_2 = res2.parameter;
  return out;
}

}  // namespace polyforge

#endif  // POLYFORGE_CONSTRUCT_HPP

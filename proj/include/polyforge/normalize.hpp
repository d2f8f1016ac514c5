#ifndef POLYFORGE_NORMALIZE_HPP
#define POLYFORGE_NORMALIZE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyforge/transform_log.hpp"

namespace polyforge {

struct Hyperplane {
  RatVec normal;
  Rat offset;
};

struct CompletedAxis {
  RatVec direction;  // unnormalized rational direction of the finished diagonal
  Hyperplane h;      // tracked through all later transformations
};

/// Working state of the crosspolytope normalization: the current
/// crosspolytope, its antipodal pairing, and the finished axes.
struct IterationState {
  Polytope cross;
  OppositePairing pairing;
  std::vector<CompletedAxis> completed;
};

namespace detail {

/// Certificate that `p` is a combinatorial crosspolytope realized by its
/// own incidence (re-verified from scratch against the pairing's 2^d
/// sign-choice facets).
inline Certificate crosspolytope_certificate(const Polytope& p, const OppositePairing& pairing) {
  size_t d = static_cast<size_t>(p.dim());
  std::vector<std::vector<size_t>> candidates;
  for (size_t mask = 0; mask < (size_t{1} << d); ++mask) {
    std::vector<size_t> facet(d);
    for (size_t i = 0; i < d; ++i)
      facet[i] = (mask >> i) & 1 ? pairing.pairs[i].first : pairing.pairs[i].second;
    candidates.push_back(facet);
  }
  auto outcome = verify_realization(p.v, candidates, nullptr,
                                    CertificateKind::CombinatorialCrosspolytope);
  if (!outcome.ok())
    throw CertificateError("internal-assertion: intermediate lost crosspolytope type: " +
                           outcome.violated_check);
  return *outcome.certificate;
}

inline Certificate cube_certificate(const Polytope& p) {
  if (!is_combinatorial_cube(p.inc))
    throw CertificateError("internal-assertion: intermediate lost cube type");
  std::vector<std::vector<size_t>> candidates;
  for (size_t f = 0; f < p.inc.n_facets; ++f) candidates.push_back(p.inc.vertices_of_facet(f));
  auto outcome = verify_realization(p.v, candidates, nullptr, CertificateKind::CombinatorialCube);
  if (!outcome.ok())
    throw CertificateError("internal-assertion: cube realization check failed: " +
                           outcome.violated_check);
  return *outcome.certificate;
}

/// Primal facet data (r, b) of a polar vertex p = r/b: canonical integer
/// direction with positive scale.
inline std::pair<RatVec, Rat> primal_row_of_polar_vertex(const RatVec& p) {
  RatVec r = primitive_vector(p);
  if (is_zero(r)) throw CertificateError("internal-assertion: polar vertex at the origin");
  size_t k = 0;
  while (r[k] == 0) ++k;
  Rat b = r[k] / p[k];
  return {r, b};
}

}  // namespace detail

/// Canonical separation threshold for iteration i (origin already at the
/// midpoint of l_i): c = max(1/b, max_{j != first} <u,p_j>/<u,r>) with u the
/// diagonal direction toward p_first and (r, b) the primal row data of
/// p_first. Strict separation by a hyperplane orthogonal to u holds for
/// every c' > c.
inline Rat separation_threshold(const IterationState& state, size_t i) {
  const auto& [a, bidx] = state.pairing.pairs[i];
  const RatVec& va = state.cross.v.vertices[a];
  const RatVec& vb = state.cross.v.vertices[bidx];
  RatVec u = sub(va, vb);
  if (is_zero(u)) throw InputError("degenerate-segment: antipodal vertices coincide");
  auto [r, b] = detail::primal_row_of_polar_vertex(va);
  Rat ur = dot(u, r);
  if (ur <= 0) throw CertificateError("internal-assertion: diagonal direction flipped");
  Rat c = Rat(1) / b;
  for (size_t j = 0; j < state.cross.v.vertices.size(); ++j) {
    if (j == a) continue;
    Rat val = dot(u, state.cross.v.vertices[j]) / ur;
    if (val > c) c = val;
  }
  return c;
}

/// Ray scaling that moves every vertex except pair i along its ray from the
/// current origin onto H_i (steps (1)-(3) of the iteration must be done:
/// origin and p_first strictly on one side of H_i, the rest strictly on the
/// other).
inline RayScaling flatten_onto_hyperplane(const IterationState& state, size_t i) {
  if (state.completed.size() <= i)
    throw InputError("flatten_onto_hyperplane: iteration " + std::to_string(i) +
                     " has no hyperplane yet");
  const auto& [a, bidx] = state.pairing.pairs[i];
  const Hyperplane& h = state.completed[i].h;
  if (h.offset == 0)
    throw CertificateError("ray-parallel-to-H: origin lies on the hyperplane");
  RayScaling s;
  s.lambdas.assign(state.cross.v.vertices.size(), Rat(1));
  for (size_t j = 0; j < state.cross.v.vertices.size(); ++j) {
    if (j == a || j == bidx) continue;
    Rat val = dot(h.normal, state.cross.v.vertices[j]);
    if (val == 0 || (val > 0) != (h.offset > 0))
      throw CertificateError("ray-parallel-to-H: ray from the origin misses the hyperplane");
    s.lambdas[j] = h.offset / val;
  }
  return s;
}

/// Result of the 4d-step crosspolytope normalization.
struct NormalizeCrossResult {
  TransformLog polar_log;  // projective (origin shifts) and ray steps, 4d of them
  IterationState state;    // final crosspolytope with completed axes
};

namespace detail {

/// Runs one canonical iteration on axis i, appending the four polar steps.
/// The tracked hyperplanes of earlier axes are updated through the two
/// translations; ray steps leave them set-wise fixed because the origin
/// lies on every earlier hyperplane at that moment.
inline void run_iteration(IterationState& st, size_t i,
                          std::vector<std::pair<StepTag, StepPayload>>& steps) {
  const auto [a, bidx] = st.pairing.pairs[i];

  auto translate_state = [&](const RatVec& t) {
    ProjectiveMap psi = ProjectiveMap::translation(t);
    st.cross = apply_projective(psi, st.cross).polytope;
    for (auto& ax : st.completed) ax.h.offset += dot(ax.h.normal, t);
    if (!origin_strictly_interior(st.cross.h))
      throw CertificateError("internal-assertion: origin left the crosspolytope");
    steps.emplace_back(StepTag::Projective, psi);
  };

  // (1) origin to the midpoint of l_i
  RatVec mid = scale(add(st.cross.v.vertices[a], st.cross.v.vertices[bidx]), Rat(1, 2));
  translate_state(scale(mid, Rat(-1)));

  // (2) push p_a outward to (c+1) r and fix H_i through (c+1/2) r
  Rat c = separation_threshold(st, i);
  auto [r, b] = primal_row_of_polar_vertex(st.cross.v.vertices[a]);
  RatVec u = sub(st.cross.v.vertices[a], st.cross.v.vertices[bidx]);
  RayScaling push;
  push.lambdas.assign(st.cross.v.vertices.size(), Rat(1));
  push.lambdas[a] = (c + 1) * b;
  if (push.lambdas[a] < 1)
    throw CertificateError("internal-assertion: outward push would pull the vertex inward");
  st.cross = ray_scale(st.cross, push).polytope;
  steps.emplace_back(StepTag::Ray, push);

  Hyperplane h{u, dot(u, scale(r, c + Rat(1, 2)))};

  // (3) origin to (c + 7/10) r, strictly between H_i and the pushed vertex
  translate_state(scale(r, -(c + Rat(7, 10))));
  h.offset += dot(h.normal, scale(r, -(c + Rat(7, 10))));

  st.completed.push_back(CompletedAxis{u, h});

  // (4) flatten every other vertex onto H_i along its ray
  RayScaling flat = flatten_onto_hyperplane(st, i);
  st.cross = ray_scale(st.cross, flat).polytope;
  steps.emplace_back(StepTag::Ray, flat);

  // persistence: every diagonal l_j (j != k) lies on H_k for all finished k
  for (size_t k = 0; k < st.completed.size(); ++k) {
    for (size_t j = 0; j < st.pairing.pairs.size(); ++j) {
      if (j == k) continue;
      for (size_t idx : {st.pairing.pairs[j].first, st.pairing.pairs[j].second}) {
        if (dot(st.completed[k].h.normal, st.cross.v.vertices[idx]) != st.completed[k].h.offset)
          throw CertificateError("internal-assertion: persistence of H_" + std::to_string(k) +
                                 " failed at iteration " + std::to_string(i));
      }
    }
  }
}

}  // namespace detail

/// Crosspolytope normalization: d iterations of four canonical steps on
/// the polar crosspolytope, after which the diagonals are pairwise
/// orthogonal and concurrent (certified by the caller via
/// check_orthogonal_concurrent). Exactly 4d tagged steps.
inline NormalizeCrossResult normalize_crosspolytope(const Polytope& cross,
                                                    const OppositePairing& pairing) {
  size_t d = static_cast<size_t>(cross.dim());
  if (pairing.pairs.size() != d) throw InputError("pairing arity mismatch");
  if (!is_combinatorial_crosspolytope(cross.inc)) throw InputError("not-a-crosspolytope");
  if (!origin_strictly_interior(cross.h)) throw InputError("origin-not-interior");

  IterationState st{cross, pairing, {}};
  std::vector<std::pair<StepTag, StepPayload>> steps;
  for (size_t i = 0; i < d; ++i) detail::run_iteration(st, i, steps);

  NormalizeCrossResult res{replay_log(cross, steps, 4 * d), std::move(st)};
  for (auto& e : res.polar_log.entries)
    e.certificate = detail::crosspolytope_certificate(e.after, pairing);
  return res;
}

/// Exact orthogonality and concurrency of the diagonals. The certificate
/// carries the common point.
inline VerifyOutcome check_orthogonal_concurrent(const Polytope& cross,
                                                 const OppositePairing& pairing) {
  size_t d = pairing.pairs.size();
  std::vector<RatVec> dirs, bases;
  for (auto& [a, b] : pairing.pairs) {
    dirs.push_back(sub(cross.v.vertices[a], cross.v.vertices[b]));
    bases.push_back(cross.v.vertices[b]);
  }
  size_t checked = 0;
  for (size_t i = 0; i < d; ++i)
    for (size_t j = i + 1; j < d; ++j) {
      ++checked;
      if (dot(dirs[i], dirs[j]) != 0)
        return {std::nullopt, "diagonals-not-orthogonal",
                static_cast<long>(i * d + j)};
    }
  RatVec common;
  if (d == 1) {
    common = scale(add(cross.v.vertices[pairing.pairs[0].first],
                       cross.v.vertices[pairing.pairs[0].second]),
                   Rat(1, 2));
  } else {
    // intersect the first two diagonal lines, then verify the rest
    size_t dim = static_cast<size_t>(cross.dim());
    RatMat m;
    RatVec rhs;
    for (size_t row = 0; row < dim; ++row) {
      m.push_back({dirs[0][row], -dirs[1][row]});
      rhs.push_back(bases[1][row] - bases[0][row]);
    }
    // solve the overdetermined 2-unknown system exactly
    RatMat mm;
    RatVec rr;
    for (size_t row = 0; row < dim && mm.size() < 2; ++row) {
      RatMat trial = mm;
      trial.push_back(m[row]);
      if (rank(trial) == trial.size()) {
        mm = trial;
        rr.push_back(rhs[row]);
      }
    }
    auto ts = mm.size() == 2 ? solve(mm, rr) : std::nullopt;
    if (!ts) return {std::nullopt, "diagonals-parallel-or-skew", 1};
    common = add(bases[0], scale(dirs[0], (*ts)[0]));
    for (size_t row = 0; row < dim; ++row)
      if (m[row][0] * (*ts)[0] + m[row][1] * (*ts)[1] != rhs[row])
        return {std::nullopt, "first-two-diagonals-skew", 1};
    for (size_t i = 1; i < d; ++i) {
      RatVec off = sub(common, bases[i]);
      if (!parallel(off, dirs[i]))
        return {std::nullopt, "diagonal-misses-common-point", static_cast<long>(i)};
    }
  }
  return {Certificate::issue(CertificateKind::OrthogonalConcurrent, checked, d, common), "", -1};
}

/// The two-entry tail: a rational linear change of frame sending the
/// orthogonal diagonal frame to the coordinate axes (common point to the
/// origin), then the ray scaling to unit vertices. Final polytope is
/// exactly conv(+-e_1, ..., +-e_d).
inline std::vector<std::pair<StepTag, StepPayload>> standardize_tail(const Polytope& cross,
                                                                     const OppositePairing& pairing) {
  auto oc = check_orthogonal_concurrent(cross, pairing);
  if (!oc.ok()) throw InputError("precondition-violated: " + oc.violated_check);
  const RatVec& x0 = *oc.certificate->common_point();
  size_t d = static_cast<size_t>(cross.dim());

  RatMat frame(d, zero_vec(d));
  for (size_t i = 0; i < d; ++i) {
    RatVec u = sub(cross.v.vertices[pairing.pairs[i].first],
                   cross.v.vertices[pairing.pairs[i].second]);
    frame[i] = scale(u, Rat(1) / dot(u, u));
  }
  ProjectiveMap frame_map(frame, scale(mat_vec(frame, x0), Rat(-1)), zero_vec(d), Rat(1));

  RayScaling unit;
  unit.lambdas.assign(2 * d, Rat(1));
  for (size_t i = 0; i < d; ++i) {
    RatVec pa = frame_map.apply(cross.v.vertices[pairing.pairs[i].first]);
    RatVec pb = frame_map.apply(cross.v.vertices[pairing.pairs[i].second]);
    if (pa[i] <= 0 || pb[i] >= 0)
      throw CertificateError("internal-assertion: frame map lost axis orientation");
    unit.lambdas[pairing.pairs[i].first] = Rat(1) / pa[i];
    unit.lambdas[pairing.pairs[i].second] = Rat(-1) / pb[i];
  }
  return {{StepTag::Projective, frame_map}, {StepTag::Ray, unit}};
}

// ---------------------------------------------------------------------------
// cube-side driver

namespace detail {

/// Cube rows reordered into opposite-facet pairs, first index order.
inline Polytope cube_in_pairing_order(const Polytope& q, const OppositePairing& facet_pairs) {
  HPolytope h;
  h.dim = q.dim();
  for (auto& [a, b] : facet_pairs.pairs) {
    h.rows.push_back(q.h.rows[a]);
    h.rows.push_back(q.h.rows[b]);
  }
  return Polytope::from_reps(q.v, h);
}

}  // namespace detail

/// Full normalization of a combinatorial cube to the standard cube
/// conv({+-1}^d): dualize, run the 4d polar steps plus the two-entry tail,
/// and express every polar step as the corresponding primal projective or
/// normal transformation. Log length is exactly 4d + 2.
inline TransformLog normalize_cube(const Polytope& q) {
  size_t d = static_cast<size_t>(q.dim());
  if (!is_combinatorial_cube(q.inc)) throw InputError("not-a-cube");
  if (!origin_strictly_interior(q.h)) throw InputError("origin-not-interior");

  OppositePairing facet_pairs = cube_facet_pairing(q.inc);
  Polytope cube = detail::cube_in_pairing_order(q, facet_pairs);

  // polar crosspolytope, vertices in row order (pairs adjacent)
  VPolytope pv = polar_dual(cube.h);
  OppositePairing vertex_pairs;
  for (size_t i = 0; i < d; ++i) vertex_pairs.pairs.emplace_back(2 * i, 2 * i + 1);
  Polytope cross = crosspolytope_from_vertices(pv, vertex_pairs);

  NormalizeCrossResult norm = normalize_crosspolytope(cross, vertex_pairs);
  auto tail = standardize_tail(norm.state.cross, vertex_pairs);

  std::vector<std::pair<StepTag, StepPayload>> polar_steps;
  for (const auto& e : norm.polar_log.entries) polar_steps.emplace_back(e.tag, e.payload);
  polar_steps.insert(polar_steps.end(), tail.begin(), tail.end());

  // translate to primal steps, tracking the primal cube in lockstep to read
  // off the normal-transform offsets
  std::vector<std::pair<StepTag, StepPayload>> primal_steps;
  Polytope polar_state = cross;
  Polytope cube_state = cube;
  for (const auto& [tag, payload] : polar_steps) {
    if (tag == StepTag::Projective) {
      ProjectiveMap primal = primal_of_polar_step(std::get<ProjectiveMap>(payload));
      polar_state = apply_projective(std::get<ProjectiveMap>(payload), polar_state).polytope;
      cube_state = apply_projective(primal, cube_state).polytope;
      primal_steps.emplace_back(StepTag::Projective, primal);
    } else {
      const RayScaling& s = std::get<RayScaling>(payload);
      NormalTransform t;
      for (size_t j = 0; j < s.lambdas.size(); ++j) {
        t.row_normals.push_back(cube_state.h.rows[j].normal);
        t.new_offsets.push_back(cube_state.h.rows[j].offset / s.lambdas[j]);
      }
      polar_state = ray_scale(polar_state, s).polytope;
      cube_state = normal_transform(cube_state, t).polytope;
      primal_steps.emplace_back(StepTag::Normal, t);
    }
    // the primal state's polar must match the polar state vertex for vertex
    VPolytope check = polar_dual(cube_state.h);
    if (check.vertices != polar_state.v.vertices)
      throw CertificateError("internal-assertion: primal/polar lockstep diverged");
  }

  TransformLog log = replay_log(q, primal_steps, 4 * d + 2);
  for (auto& e : log.entries) e.certificate = detail::cube_certificate(e.after);
  if (!same_h_polytope(log.final_state().h, standard_cube(q.dim()).h))
    throw CertificateError("internal-assertion: normalization missed the standard cube");
  return log;
}

/// Relates two combinatorial d-cubes: normalize both, append the reversed
/// inverse of the second log, merge adjacent same-kind transforms, and
/// re-certify. Applying the result to Q yields Q' exactly.
inline TransformLog relate_cubes(const Polytope& q, const Polytope& q2) {
  if (q.dim() != q2.dim()) throw InputError("dimension mismatch");
  size_t d = static_cast<size_t>(q.dim());
  if (!is_combinatorial_cube(q.inc) || !is_combinatorial_cube(q2.inc))
    throw InputError("not-a-cube");

  // normally equivalent cubes differ by a single offset replacement
  {
    auto normals_of = [](const Polytope& p) {
      std::vector<RatVec> n;
      for (const HRow& r : p.h.rows) n.push_back(r.normal);
      std::sort(n.begin(), n.end());
      return n;
    };
    if (normals_of(q) == normals_of(q2)) {
      try {
        std::vector<std::pair<StepTag, StepPayload>> steps = {
            {StepTag::Normal, normal_payload_of(q2.h)}};
        steps = merge_steps(q, steps);
        TransformLog log = replay_log(q, steps, 8 * d - 1);
        for (auto& e : log.entries) e.certificate = detail::cube_certificate(e.after);
        if (same_h_polytope(log.final_state().h, q2.h)) return log;
      } catch (const CertificateError&) {
        // same normal set but a type-changing offset pattern; take the long way
      }
    }
  }

  TransformLog l1 = normalize_cube(q);
  TransformLog l2 = normalize_cube(q2);

  std::vector<std::pair<StepTag, StepPayload>> steps;
  for (const auto& e : l1.entries) steps.emplace_back(e.tag, e.payload);
  auto back = inverted_steps(l2);
  steps.insert(steps.end(), back.begin(), back.end());

  steps = merge_steps(q, steps);
  TransformLog log = replay_log(q, steps, 8 * d - 1);
  for (auto& e : log.entries) e.certificate = detail::cube_certificate(e.after);

  if (!same_h_polytope(log.final_state().h, q2.h) ||
      !same_vertex_set(log.final_state().v, q2.v))
    throw CertificateError("internal-assertion: relate_cubes did not reach the target cube");
  return log;
}

// ---------------------------------------------------------------------------
// empirical continuity probe (advisory)

struct ContinuityReport {
  Rat epsilon;
  Rat max_frame_delta;   // max |entry difference| across the tail frame map
  Rat ratio;             // max_frame_delta / epsilon
  bool flagged = false;  // ratio exceeded the calibrated constant
};

/// Perturbs every vertex of a crosspolytope fixture by +-epsilon in a fixed
/// coordinate pattern, reruns the normalization, and compares the tail
/// frame maps entry by entry. Violations are flagged, never fatal.
inline ContinuityReport continuity_report(const Polytope& cross, const OppositePairing& pairing,
                                          const Rat& epsilon, const Rat& calibrated_bound) {
  auto tail_frame = [&](const Polytope& c) {
    NormalizeCrossResult r = normalize_crosspolytope(c, pairing);
    auto tail = standardize_tail(r.state.cross, pairing);
    return std::get<ProjectiveMap>(tail[0].second).block();
  };
  RatMat base = tail_frame(cross);

  VPolytope vp = cross.v;
  size_t dim = static_cast<size_t>(cross.dim());
  for (size_t i = 0; i < vp.vertices.size(); ++i) {
    Rat sign = (i % 2 == 0) ? epsilon : -epsilon;
    vp.vertices[i][i % dim] += sign;
  }
  Polytope perturbed = crosspolytope_from_vertices(vp, pairing);
  RatMat moved = tail_frame(perturbed);

  ContinuityReport rep;
  rep.epsilon = epsilon;
  rep.max_frame_delta = 0;
  for (size_t i = 0; i < base.size(); ++i)
    for (size_t j = 0; j < base[i].size(); ++j) {
      Rat delta = base[i][j] - moved[i][j];
      if (delta < 0) delta = -delta;
      if (delta > rep.max_frame_delta) rep.max_frame_delta = delta;
    }
  rep.ratio = rep.max_frame_delta / epsilon;
  rep.flagged = rep.ratio > calibrated_bound;
  return rep;
}

}  // namespace polyforge

#endif  // POLYFORGE_NORMALIZE_HPP

#ifndef POLYFORGE_PROJECTIVE_HPP
#define POLYFORGE_PROJECTIVE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "polyforge/polytope.hpp"

namespace polyforge {

/// x |-> (Ax + b) / (c^T x + alpha), stored as the (d+1)x(d+1) block
/// [[A, b], [c^T, alpha]] with a canonical scalar normalization (first
/// nonzero entry = 1) so equality is syntactic.
class ProjectiveMap {
 public:
  ProjectiveMap() = default;

  ProjectiveMap(RatMat a, RatVec b, RatVec c, Rat alpha) {
    size_t d = a.size();
    block_.assign(d + 1, zero_vec(d + 1));
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = 0; j < d; ++j) block_[i][j] = a[i][j];
      block_[i][d] = b[i];
    }
    for (size_t j = 0; j < d; ++j) block_[d][j] = c[j];
    block_[d][d] = alpha;
    normalize();
    if (det(block_) == 0) throw InputError("singular projective block matrix");
  }

  static ProjectiveMap from_block(RatMat block) {
    ProjectiveMap m;
    m.block_ = std::move(block);
    m.normalize();
    if (det(m.block_) == 0) throw InputError("singular projective block matrix");
    return m;
  }

  static ProjectiveMap identity_map(int dim) {
    return from_block(identity(static_cast<size_t>(dim) + 1));
  }

  static ProjectiveMap translation(const RatVec& t) {
    size_t d = t.size();
    RatMat blk = identity(d + 1);
    for (size_t i = 0; i < d; ++i) blk[i][d] = t[i];
    return from_block(blk);
  }

  /// Linear part only (c = 0, alpha = 1, b = 0).
  static ProjectiveMap linear(const RatMat& a) {
    size_t d = a.size();
    RatMat blk = identity(d + 1);
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) blk[i][j] = a[i][j];
    return from_block(blk);
  }

  int dim() const { return static_cast<int>(block_.size()) - 1; }
  const RatMat& block() const { return block_; }

  Rat denominator_at(const RatVec& x) const {
    size_t d = block_.size() - 1;
    Rat v = block_[d][d];
    for (size_t j = 0; j < d; ++j) v += block_[d][j] * x[j];
    return v;
  }

  /// Applies to a single point; throws on a vanishing denominator.
  RatVec apply(const RatVec& x) const {
    size_t d = block_.size() - 1;
    Rat den = denominator_at(x);
    if (den == 0) throw InputError("projective map sends point to infinity");
    RatVec y(d);
    for (size_t i = 0; i < d; ++i) {
      Rat num = block_[i][d];
      for (size_t j = 0; j < d; ++j) num += block_[i][j] * x[j];
      y[i] = num / den;
    }
    return y;
  }

  /// this comes second: (f.compose(g))(x) = f(g(x)).
  ProjectiveMap compose(const ProjectiveMap& g) const {
    return from_block(mat_mul(block_, g.block_));
  }

  ProjectiveMap inverse_map() const {
    auto inv = inverse(block_);
    if (!inv) throw InputError("singular projective block matrix");
    return from_block(*inv);
  }

  bool is_identity() const {
    return block_ == identity(block_.size());
  }

  bool operator==(const ProjectiveMap& o) const { return block_ == o.block_; }

 private:
  void normalize() {
    for (const auto& row : block_)
      for (const Rat& x : row)
        if (x != 0) {
          if (x != 1) {
            Rat f = x;
            for (auto& r : block_)
              for (Rat& y : r) y /= f;
          }
          return;
        }
    throw InputError("zero projective block matrix");
  }

  RatMat block_;
};

/// Dual map of the block [[A, b], [c^T, alpha]]: x |-> (A^T x - c) / (-b^T x + alpha).
/// Involutive; if Q = phi(P) with interior origins on both sides, the
/// inverse of the dual carries polar(P) onto polar(Q).
inline ProjectiveMap dual_map(const ProjectiveMap& phi) {
  size_t d = static_cast<size_t>(phi.dim());
  const RatMat& blk = phi.block();
  RatMat out(d + 1, zero_vec(d + 1));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) out[i][j] = blk[j][i];
  for (size_t i = 0; i < d; ++i) out[i][d] = -blk[d][i];
  for (size_t j = 0; j < d; ++j) out[d][j] = -blk[j][d];
  out[d][d] = blk[d][d];
  return ProjectiveMap::from_block(out);
}

/// The primal transformation whose effect on the polar side is `polar_step`
/// (per the duality relation polar_step = (dual_map(primal))^{-1}).
inline ProjectiveMap primal_of_polar_step(const ProjectiveMap& polar_step) {
  return dual_map(polar_step.inverse_map());
}

/// Per-vertex positive scalars; the polar counterpart of a normal transform.
struct RayScaling {
  std::vector<Rat> lambdas;

  bool valid() const {
    return std::all_of(lambdas.begin(), lambdas.end(), [](const Rat& l) { return l > 0; });
  }
  bool is_identity() const {
    return std::all_of(lambdas.begin(), lambdas.end(), [](const Rat& l) { return l == 1; });
  }
};

/// Offset replacement for an H-polytope, normals untouched. Carries the row
/// normals it expects so application is immune to row reordering.
struct NormalTransform {
  std::vector<RatVec> row_normals;  // canonical, parallel to new_offsets
  std::vector<Rat> new_offsets;

  bool is_identity_on(const HPolytope& h) const {
    if (h.rows.size() != new_offsets.size()) return false;
    for (size_t i = 0; i < h.rows.size(); ++i) {
      if (h.rows[i].normal != row_normals[i] || h.rows[i].offset != new_offsets[i]) return false;
    }
    return true;
  }
};

// ---------------------------------------------------------------------------

/// Image of a paired polytope under an admissible projective map, with the
/// incidence-preservation certificate.
struct ProjectiveImage {
  Polytope polytope;
  Certificate certificate;
};

/// Admissibility on P: the denominator keeps one strict sign across the
/// vertices. The denominator is affine, so that bounds it on all of P.
inline bool is_admissible_on(const ProjectiveMap& phi, const std::vector<RatVec>& vertices) {
  int sign = 0;
  for (const RatVec& v : vertices) {
    Rat den = phi.denominator_at(v);
    int s = den > 0 ? 1 : (den < 0 ? -1 : 0);
    if (s == 0) return false;
    if (sign == 0) sign = s;
    if (s != sign) return false;
  }
  return true;
}

inline ProjectiveImage apply_projective(const ProjectiveMap& phi, const Polytope& p) {
  if (phi.dim() != p.dim()) throw InputError("projective map dimension mismatch");
  if (!is_admissible_on(phi, p.v.vertices))
    throw InputError("inadmissible-map: denominator changes sign or vanishes on a vertex");

  VPolytope vi;
  vi.dim = p.dim();
  for (const RatVec& v : p.v.vertices) vi.vertices.push_back(phi.apply(v));

  // rows transform by the inverse block acting on the homogeneous covector
  // (r | -b); orientation fixed against the image vertices afterwards
  size_t d = static_cast<size_t>(p.dim());
  RatMat inv_block = *inverse(phi.block());
  HPolytope hi;
  hi.dim = p.dim();
  for (size_t j = 0; j < p.h.rows.size(); ++j) {
    RatVec cov(d + 1);
    for (size_t k = 0; k <= d; ++k) {
      cov[k] = 0;
      for (size_t i = 0; i < d; ++i) cov[k] += p.h.rows[j].normal[i] * inv_block[i][k];
      cov[k] -= p.h.rows[j].offset * inv_block[d][k];
    }
    RatVec n(cov.begin(), cov.begin() + d);
    Rat b = -cov[d];
    // orient: all image vertices must satisfy <n, y> <= b
    int side = 0;
    for (const RatVec& y : vi.vertices) {
      Rat val = dot(n, y) - b;
      int s = val < 0 ? -1 : (val > 0 ? 1 : 0);
      if (s == 0) continue;
      if (side == 0) side = s;
      if (s != side) throw CertificateError("projective image row not supporting");
    }
    if (side > 0) {
      n = scale(n, Rat(-1));
      b = -b;
    }
    hi.rows.push_back(HRow::canonical(n, b));
  }

  Polytope out = Polytope::from_reps(std::move(vi), std::move(hi));
  if (!(out.inc == p.inc))
    throw CertificateError("projective image changed the incidence structure");
  return ProjectiveImage{std::move(out),
                         Certificate::issue(CertificateKind::ValidRealization, out.h.rows.size(),
                                            out.h.rows.size() * out.v.vertices.size())};
}

/// Origin shift: returns the projective map (I, 0, v, 1) whose polar
/// effect translates polar(P) by +v, together with that translated polar.
/// The precondition is admissibility of the map on P, i.e. the shifted
/// polar keeps the origin strictly interior.
inline std::pair<ProjectiveMap, VPolytope> origin_shift(const Polytope& p, const RatVec& v) {
  size_t d = static_cast<size_t>(p.dim());
  ProjectiveMap phi(identity(d), zero_vec(d), v, Rat(1));
  if (!is_admissible_on(phi, p.v.vertices))
    throw InputError("v-not-interior: origin shift by v leaves no interior origin");
  VPolytope polar = polar_dual(p.h);
  for (RatVec& pv : polar.vertices) pv = add(pv, v);
  return {phi, polar};
}

/// Scales vertex i along its ray from the origin by lambdas[i]; certifies
/// that the combinatorial type survived by re-verifying the original facet
/// candidates on the scaled points.
struct RayScaleResult {
  Polytope polytope;
  Certificate certificate;
};

inline RayScaleResult ray_scale(const Polytope& p, const RayScaling& s) {
  if (s.lambdas.size() != p.v.vertices.size()) throw InputError("ray scaling arity mismatch");
  if (!s.valid()) throw InputError("ray scaling requires positive scalars");
  if (!origin_strictly_interior(p.h)) throw InputError("origin-not-interior");

  VPolytope scaled;
  scaled.dim = p.dim();
  for (size_t i = 0; i < p.v.vertices.size(); ++i)
    scaled.vertices.push_back(scale(p.v.vertices[i], s.lambdas[i]));

  std::vector<std::vector<size_t>> candidates;
  for (size_t f = 0; f < p.inc.n_facets; ++f) candidates.push_back(p.inc.vertices_of_facet(f));
  std::vector<HRow> rows;
  VerifyOutcome outcome = verify_realization(scaled, candidates, &rows);
  if (!outcome.ok())
    throw CertificateError("type-change: " + outcome.violated_check + " (candidate " +
                           std::to_string(outcome.offending_index) + ")");
  HPolytope h;
  h.dim = p.dim();
  h.rows = rows;
  Polytope out;
  try {
    out = Polytope::from_reps(std::move(scaled), std::move(h));
  } catch (const InputError& e) {
    throw CertificateError(std::string("type-change: ") + e.what());
  }
  if (!(out.inc == p.inc)) throw CertificateError("type-change: incidence differs after scaling");
  return RayScaleResult{std::move(out), *outcome.certificate};
}

/// Replaces H-rep offsets, keeping every normal; certifies that no facet
/// degenerated and the combinatorial data stays a valid realization. The
/// vertex set is recomputed from the tight-row structure of the input.
struct NormalTransformResult {
  Polytope polytope;
  Certificate certificate;
};

inline NormalTransformResult normal_transform(const Polytope& p, const NormalTransform& t) {
  if (t.new_offsets.size() != p.h.rows.size() || t.row_normals.size() != p.h.rows.size())
    throw InputError("normal transform arity mismatch");
  size_t d = static_cast<size_t>(p.dim());

  // align payload rows with the current rows by exact normal match
  std::vector<Rat> offsets(p.h.rows.size());
  std::vector<bool> used(p.h.rows.size(), false);
  for (size_t i = 0; i < p.h.rows.size(); ++i) {
    bool found = false;
    for (size_t j = 0; j < t.row_normals.size() && !found; ++j) {
      if (!used[j] && t.row_normals[j] == p.h.rows[i].normal) {
        offsets[i] = t.new_offsets[j];
        used[j] = true;
        found = true;
      }
    }
    if (!found) throw InputError("normal transform: no payload row for a facet normal");
  }

  HPolytope h;
  h.dim = p.dim();
  for (size_t i = 0; i < p.h.rows.size(); ++i)
    h.rows.push_back(HRow{p.h.rows[i].normal, offsets[i]});

  // each vertex of the result sits where its old tight rows meet
  VPolytope v;
  v.dim = p.dim();
  for (size_t i = 0; i < p.inc.n_vertices; ++i) {
    RatMat m;
    RatVec rhs;
    for (size_t f : p.inc.facets_of_vertex(i)) {
      m.push_back(h.rows[f].normal);
      rhs.push_back(h.rows[f].offset);
    }
    // use d independent rows
    RatMat mm;
    RatVec rr;
    for (size_t r = 0; r < m.size() && mm.size() < d; ++r) {
      RatMat trial = mm;
      trial.push_back(m[r]);
      if (rank(trial) == trial.size()) {
        mm = trial;
        rr.push_back(rhs[r]);
      }
    }
    auto x = solve(mm, rr);
    if (!x) throw CertificateError("facet-degenerated: vertex rows no longer meet in a point");
    // remaining tight rows must agree and nothing may be violated
    for (size_t f = 0; f < h.rows.size(); ++f) {
      Rat val = dot(h.rows[f].normal, *x);
      if (p.inc.on[i][f] && val != h.rows[f].offset)
        throw CertificateError("facet-degenerated: tight row detached from vertex");
      if (!p.inc.on[i][f] && val >= h.rows[f].offset)
        throw CertificateError("facet-degenerated: offsets collapse a vertex");
    }
    v.vertices.push_back(*x);
  }

  Polytope out;
  try {
    out = Polytope::from_reps(std::move(v), std::move(h));
  } catch (const InputError& e) {
    throw CertificateError(std::string("facet-degenerated: ") + e.what());
  }
  if (!(out.inc == p.inc)) throw CertificateError("facet-degenerated: incidence changed");
  return NormalTransformResult{
      std::move(out), Certificate::issue(CertificateKind::ValidRealization, h.rows.size(),
                                         h.rows.size() * out.v.vertices.size())};
}

/// Normal transform payload capturing the current offsets of h.
inline NormalTransform normal_payload_of(const HPolytope& h) {
  NormalTransform t;
  for (const HRow& r : h.rows) {
    t.row_normals.push_back(r.normal);
    t.new_offsets.push_back(r.offset);
  }
  return t;
}

}  // namespace polyforge

#endif  // POLYFORGE_PROJECTIVE_HPP

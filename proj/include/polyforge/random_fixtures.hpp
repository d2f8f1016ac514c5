#ifndef POLYFORGE_RANDOM_FIXTURES_HPP
#define POLYFORGE_RANDOM_FIXTURES_HPP

#include <cstdint>

#include "polyforge/projective.hpp"

namespace polyforge {

/// Deterministic xorshift generator; identical sequences on every platform,
/// unlike the standard library distributions.
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  size_t below(size_t n) { return static_cast<size_t>(next() % n); }
  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }
};

/// Random combinatorial d-cube with the origin interior: a seeded chain of
/// normal transforms, admissible projective maps, and unimodular shears
/// applied to the standard cube. Coefficients stay small so downstream
/// exact arithmetic stays desk-scale.
inline Polytope random_cube(int dim, uint64_t seed, int ops = 4) {
  Rng rng(seed);
  Polytope p = standard_cube(dim);
  const std::vector<Rat> offset_factors = {Rat(1), Rat(3, 2), Rat(2), Rat(5, 4), Rat(4, 3)};
  const std::vector<Rat> c_entries = {Rat(0), Rat(0), Rat(1), Rat(-1)};
  size_t d = static_cast<size_t>(dim);

  for (int k = 0; k < ops; ++k) {
    switch (rng.below(3)) {
      case 0: {  // normal transform
        NormalTransform t = normal_payload_of(p.h);
        for (Rat& b : t.new_offsets) b *= rng.pick(offset_factors);
        try {
          p = normal_transform(p, t).polytope;
        } catch (const CertificateError&) {
          // offsets would degenerate a facet of this realization; skip
        }
        break;
      }
      case 1: {  // admissible projective skew
        // bound |c^T v| < 1 over the current vertices by scaling down
        RatVec c(d);
        for (size_t i = 0; i < d; ++i) c[i] = rng.pick(c_entries);
        if (is_zero(c)) break;
        Rat max_abs = 0;
        for (const RatVec& v : p.v.vertices) {
          Rat val = dot(c, v);
          if (val < 0) val = -val;
          if (val > max_abs) max_abs = val;
        }
        Rat scale_factor = Rat(1) / (4 * (max_abs + 1));
        ProjectiveMap phi(identity(d), zero_vec(d), scale(c, scale_factor), Rat(1));
        p = apply_projective(phi, p).polytope;
        break;
      }
      case 2: {  // unimodular shear x_i += +-x_j
        if (d < 2) break;
        size_t i = rng.below(d);
        size_t j = rng.below(d - 1);
        if (j >= i) ++j;
        RatMat a = identity(d);
        a[i][j] = rng.below(2) ? Rat(1) : Rat(-1);
        p = apply_projective(ProjectiveMap::linear(a), p).polytope;
        break;
      }
    }
  }
  return p;
}

/// Random crosspolytope with its antipodal pairing: admissible origin
/// shifts and type-preserving ray scalings applied to the standard one.
inline std::pair<Polytope, OppositePairing> random_crosspolytope(int dim, uint64_t seed,
                                                                 int ops = 4) {
  Rng rng(seed);
  Polytope p = standard_crosspolytope(dim);
  OppositePairing pairing;
  for (int i = 0; i < dim; ++i) pairing.pairs.emplace_back(2 * i, 2 * i + 1);
  const std::vector<Rat> lambdas = {Rat(1), Rat(1, 2), Rat(2, 3), Rat(3, 2), Rat(2)};
  size_t d = static_cast<size_t>(dim);

  for (int k = 0; k < ops; ++k) {
    if (rng.below(2) == 0) {
      RayScaling s;
      for (size_t i = 0; i < p.v.vertices.size(); ++i) s.lambdas.push_back(rng.pick(lambdas));
      try {
        p = ray_scale(p, s).polytope;
      } catch (const CertificateError&) {
        // scaling left the combinatorial type; skip
      }
    } else {
      // origin shift: translate by t with -t strictly interior
      RatVec inner = zero_vec(d);
      for (size_t i = 0; i < d; ++i)
        inner[i] = Rat(static_cast<long>(rng.below(5)) - 2, 8 * static_cast<long>(d));
      RatVec t = scale(inner, Rat(-1));
      ProjectiveMap psi = ProjectiveMap::translation(t);
      Polytope moved = apply_projective(psi, p).polytope;
      if (origin_strictly_interior(moved.h)) p = moved;
    }
  }
  return {p, pairing};
}

}  // namespace polyforge

#endif  // POLYFORGE_RANDOM_FIXTURES_HPP

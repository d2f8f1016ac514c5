#ifndef POLYFORGE_ORACLE_HPP
#define POLYFORGE_ORACLE_HPP

#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "polyforge/polytope.hpp"

namespace polyforge {

/// Deliberately naive hull oracle: enumerate hyperplanes through d-subsets
/// of the input points with exact side tests. It is the independent check
/// for everything the construction pipelines produce, so it shares no hull
/// or incidence logic with them.
struct OracleResult {
  VPolytope v;
  HPolytope h;
  IncidenceStructure inc;
  std::vector<size_t> vertex_input_index;  // position of each hull vertex in the input
};

inline size_t oracle_point_limit() {
  if (const char* env = std::getenv("POLYFORGE_ORACLE_LIMIT")) {
    long v = std::atol(env);
    if (v > 0) return static_cast<size_t>(v);
  }
  return 200;
}

constexpr int kOracleMaxDim = 5;

namespace detail {

// determinants by direct cofactor expansion: multiplication-only, far
// cheaper than pivoted elimination for the oracle's hot loop
inline Rat det2x2(const Rat& a, const Rat& b, const Rat& c, const Rat& d) { return a * d - b * c; }

inline Rat det_cofactor(const RatMat& m, std::vector<size_t>& cols, size_t row) {
  size_t n = cols.size();
  if (n == 1) return m[row][cols[0]];
  if (n == 2) return det2x2(m[row][cols[0]], m[row][cols[1]], m[row + 1][cols[0]], m[row + 1][cols[1]]);
  Rat acc = 0;
  for (size_t k = 0; k < n; ++k) {
    size_t c = cols[k];
    cols.erase(cols.begin() + static_cast<long>(k));
    Rat minor = det_cofactor(m, cols, row + 1);
    cols.insert(cols.begin() + static_cast<long>(k), c);
    if (minor != 0) acc += ((k % 2 == 0) ? m[row][c] : -m[row][c]) * minor;
  }
  return acc;
}

/// Hyperplane normal through the rows of `diffs` ((d-1) x d): the vector of
/// signed maximal minors. Zero iff the rows do not span a hyperplane.
inline RatVec cross_normal(const RatMat& diffs, size_t d) {
  RatVec normal(d);
  std::vector<size_t> cols;
  cols.reserve(d - 1);
  for (size_t drop = 0; drop < d; ++drop) {
    cols.clear();
    for (size_t c = 0; c < d; ++c)
      if (c != drop) cols.push_back(c);
    Rat minor = (d == 1) ? Rat(1) : det_cofactor(diffs, cols, 0);
    normal[drop] = (drop % 2 == 0) ? minor : -minor;
  }
  return normal;
}

}  // namespace detail

using IntMat = std::vector<std::vector<Int>>;

namespace detail {

inline Int idet_cofactor(const IntMat& m, std::vector<size_t>& cols, size_t row) {
  size_t n = cols.size();
  if (n == 1) return m[row][cols[0]];
  if (n == 2)
    return m[row][cols[0]] * m[row + 1][cols[1]] - m[row][cols[1]] * m[row + 1][cols[0]];
  Int acc = 0;
  for (size_t k = 0; k < n; ++k) {
    size_t c = cols[k];
    cols.erase(cols.begin() + static_cast<long>(k));
    Int minor = idet_cofactor(m, cols, row + 1);
    cols.insert(cols.begin() + static_cast<long>(k), c);
    if (minor != 0) acc += ((k % 2 == 0) ? m[row][c] : -m[row][c]) * minor;
  }
  return acc;
}

/// Axis-wise integer rescaling of the points: x_i |-> L_i x_i with L_i the
/// lcm of the i-th coordinate denominators. A linear change of coordinates,
/// so hull membership, incidence and side signs are unchanged; the rows map
/// back through n_i |-> L_i n_i.
inline std::optional<IntMat> integer_scaled(const std::vector<RatVec>& points, size_t d,
                                            std::vector<Int>* scales_out) {
  std::vector<Int> scale(d, Int(1));
  for (const RatVec& p : points)
    for (size_t c = 0; c < d; ++c) scale[c] = boost::multiprecision::lcm(scale[c], denominator(p[c]));
  size_t total_bits = 0;
  for (const Int& l : scale) total_bits += boost::multiprecision::msb(l) + 1;
  if (total_bits > 4096) return std::nullopt;  // rationals stay the honest path
  IntMat out(points.size(), std::vector<Int>(d));
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t c = 0; c < d; ++c)
      out[i][c] = numerator(points[i][c]) * (scale[c] / denominator(points[i][c]));
  *scales_out = scale;
  return out;
}

}  // namespace detail

inline OracleResult brute_force_hull(const std::vector<RatVec>& points, int dim) {
  size_t n = points.size();
  size_t d = static_cast<size_t>(dim);
  if (dim < 1 || dim > kOracleMaxDim || n > oracle_point_limit())
    throw BoundsError("oracle-bounds-exceeded: " + std::to_string(n) + " points in dim " +
                      std::to_string(dim));
  if (affine_dim(points) != dim) throw InputError("degenerate: points not full-dimensional");

  // enumerate d-subsets; for each spanning subset take its hyperplane and
  // keep it when all points lie weakly on one side
  std::vector<HRow> rows;
  std::vector<size_t> idx(d);
  for (size_t i = 0; i < d; ++i) idx[i] = i;
  auto advance = [&]() {
    size_t k = d;
    while (k > 0) {
      --k;
      if (idx[k] + (d - k) < n) {
        ++idx[k];
        for (size_t j = k + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
        return true;
      }
    }
    return false;
  };

  std::vector<Int> axis_scale;
  std::optional<IntMat> ipts = detail::integer_scaled(points, d, &axis_scale);

  if (ipts && n >= d) {
    // integer path: gcd-free determinants and dot products
    IntMat diffs(d - 1, std::vector<Int>(d));
    std::vector<size_t> cols(d - 1);
    std::vector<Int> nvec(d);
    do {
      for (size_t i = 1; i < d; ++i)
        for (size_t c = 0; c < d; ++c)
          diffs[i - 1][c] = (*ipts)[idx[i]][c] - (*ipts)[idx[0]][c];
      bool spanning = false;
      for (size_t drop = 0; drop < d; ++drop) {
        cols.clear();
        for (size_t c = 0; c < d; ++c)
          if (c != drop) cols.push_back(c);
        Int minor = (d == 1) ? Int(1) : detail::idet_cofactor(diffs, cols, 0);
        nvec[drop] = (drop % 2 == 0) ? minor : -minor;
        if (nvec[drop] != 0) spanning = true;
      }
      if (!spanning) continue;
      Int b = 0;
      for (size_t c = 0; c < d; ++c) b += nvec[c] * (*ipts)[idx[0]][c];
      bool below = true, above = true;
      for (size_t i = 0; i < n && (below || above); ++i) {
        Int val = 0;
        for (size_t c = 0; c < d; ++c) val += nvec[c] * (*ipts)[i][c];
        if (val > b) below = false;
        if (val < b) above = false;
      }
      if (below || above) {
        // back to original coordinates: n_c picks up the axis scale
        RatVec rn(d);
        for (size_t c = 0; c < d; ++c) rn[c] = Rat(nvec[c] * axis_scale[c]);
        Rat rb = dot(rn, points[idx[0]]);
        if (below)
          rows.push_back(HRow::canonical(rn, rb));
        else
          rows.push_back(HRow::canonical(scale(rn, Rat(-1)), -rb));
      }
    } while (advance());
  } else if (n >= d) {
    RatMat diffs(d >= 1 ? d - 1 : 0, zero_vec(d));
    do {
      for (size_t i = 1; i < d; ++i)
        for (size_t c = 0; c < d; ++c)
          diffs[i - 1][c] = points[idx[i]][c] - points[idx[0]][c];
      RatVec nvec = detail::cross_normal(diffs, d);
      if (is_zero(nvec)) continue;  // subset not spanning a hyperplane
      Rat b = dot(nvec, points[idx[0]]);
      bool below = true, above = true;
      for (size_t i = 0; i < n && (below || above); ++i) {
        Rat val = dot(nvec, points[i]);
        if (val > b) below = false;
        if (val < b) above = false;
      }
      if (below)
        rows.push_back(HRow::canonical(nvec, b));
      else if (above)
        rows.push_back(HRow::canonical(scale(nvec, Rat(-1)), -b));
    } while (advance());
  }

  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

  // a point is a hull vertex iff its tight rows pin it (rank d)
  OracleResult res;
  res.v.dim = dim;
  res.h.dim = dim;
  res.h.rows = rows;
  std::vector<std::vector<bool>> on;
  for (size_t i = 0; i < n; ++i) {
    RatMat tight;
    std::vector<bool> flags(rows.size(), false);
    for (size_t j = 0; j < rows.size(); ++j) {
      if (dot(rows[j].normal, points[i]) == rows[j].offset) {
        tight.push_back(rows[j].normal);
        flags[j] = true;
      }
    }
    if (rank(tight) == d) {
      res.v.vertices.push_back(points[i]);
      res.vertex_input_index.push_back(i);
      on.push_back(flags);
    }
  }
  res.inc.dim = dim;
  res.inc.n_vertices = res.v.vertices.size();
  res.inc.n_facets = rows.size();
  res.inc.on = on;
  return res;
}

/// Cross-validates a constructed polytope against the oracle: same facet
/// rows, same vertex set, same incidence up to the induced reindexing.
inline bool oracle_agrees(const Polytope& p) {
  OracleResult o = brute_force_hull(p.v.vertices, p.dim());
  if (!same_h_polytope(o.h, HPolytope{p.dim(), sorted_rows(p.h.rows)})) return false;
  if (o.v.vertices.size() != p.v.vertices.size()) return false;
  // align columns: p's rows sorted must match o's rows sorted; compare
  // incidence through canonical row order and exact vertex identity
  auto canon = [](const Polytope& q) {
    std::vector<std::pair<RatVec, std::vector<HRow>>> cells;  // (vertex, sorted tight rows)
    for (size_t i = 0; i < q.v.vertices.size(); ++i) {
      std::vector<HRow> tight;
      for (size_t j = 0; j < q.h.rows.size(); ++j)
        if (q.inc.on[i][j]) tight.push_back(q.h.rows[j]);
      std::sort(tight.begin(), tight.end());
      cells.emplace_back(q.v.vertices[i], tight);
    }
    std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first)
        return std::lexicographical_compare(a.first.begin(), a.first.end(), b.first.begin(),
                                            b.first.end());
      return std::lexicographical_compare(a.second.begin(), a.second.end(), b.second.begin(),
                                          b.second.end());
    });
    return cells;
  };
  Polytope po;
  po.v = o.v;
  po.h = o.h;
  po.inc = o.inc;
  return canon(p) == canon(po);
}

}  // namespace polyforge

#endif  // POLYFORGE_ORACLE_HPP

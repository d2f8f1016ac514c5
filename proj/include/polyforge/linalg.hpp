#ifndef POLYFORGE_LINALG_HPP
#define POLYFORGE_LINALG_HPP

#include <algorithm>
#include <optional>
#include <vector>

#include "polyforge/rational.hpp"

namespace polyforge {

using RatVec = std::vector<Rat>;

/// Dense rational matrix, row major. Sized for desk-scale exact geometry
/// (d <= 6ish), not for numerics at scale.
using RatMat = std::vector<RatVec>;

inline Rat dot(const RatVec& a, const RatVec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RatVec add(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline RatVec sub(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline RatVec scale(const RatVec& a, const Rat& s) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

inline bool is_zero(const RatVec& a) {
  return std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; });
}

inline RatVec zero_vec(size_t n) { return RatVec(n, Rat(0)); }

inline RatMat identity(size_t n) {
  RatMat m(n, zero_vec(n));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline RatVec mat_vec(const RatMat& m, const RatVec& v) {
  RatVec r(m.size());
  for (size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], v);
  return r;
}

inline RatMat mat_mul(const RatMat& a, const RatMat& b) {
  size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  RatMat r(n, zero_vec(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      Rat s = 0;
      for (size_t t = 0; t < k; ++t) s += a[i][t] * b[t][j];
      r[i][j] = s;
    }
  return r;
}

inline RatMat transpose(const RatMat& m) {
  if (m.empty()) return {};
  RatMat r(m[0].size(), zero_vec(m.size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[0].size(); ++j) r[j][i] = m[i][j];
  return r;
}

/// Rank of the row span, by fraction-reduced Gaussian elimination.
inline size_t rank(RatMat m) {
  size_t rows = m.size();
  if (rows == 0) return 0;
  size_t cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      Rat f = m[i][c] / m[r][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

/// Affine dimension of a point set (rank of differences); -1 for empty.
inline int affine_dim(const std::vector<RatVec>& pts) {
  if (pts.empty()) return -1;
  RatMat diffs;
  for (size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
  return static_cast<int>(rank(diffs));
}

inline Rat det(RatMat m) {
  size_t n = m.size();
  Rat d = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rat f = m[i][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return d;
}

/// Solves m x = rhs for square nonsingular m; nullopt when singular.
inline std::optional<RatVec> solve(RatMat m, RatVec rhs) {
  size_t n = m.size();
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[c]);
    std::swap(rhs[piv], rhs[c]);
    for (size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c] == 0) continue;
      Rat f = m[i][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
      rhs[i] -= f * rhs[c];
    }
  }
  RatVec x(n);
  for (size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

inline std::optional<RatMat> inverse(const RatMat& m) {
  size_t n = m.size();
  RatMat aug = m;
  for (size_t i = 0; i < n; ++i) {
    RatVec e = zero_vec(n);
    e[i] = 1;
    aug[i].insert(aug[i].end(), e.begin(), e.end());
  }
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && aug[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(aug[piv], aug[c]);
    Rat p = aug[c][c];
    for (size_t j = 0; j < 2 * n; ++j) aug[c][j] /= p;
    for (size_t i = 0; i < n; ++i) {
      if (i == c || aug[i][c] == 0) continue;
      Rat f = aug[i][c];
      for (size_t j = 0; j < 2 * n; ++j) aug[i][j] -= f * aug[c][j];
    }
  }
  RatMat inv(n, zero_vec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

/// One-dimensional kernel vector of a rank-(n-1) square-ish matrix
/// (rows x n). Returns nullopt when the kernel is not one-dimensional.
inline std::optional<RatVec> kernel_vector(RatMat m, size_t cols) {
  size_t rows = m.size();
  std::vector<size_t> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c] / m[r][c];
      for (size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  if (r + 1 != cols) return std::nullopt;
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : pivot_col) is_pivot[c] = true;
  size_t free_col = 0;
  while (free_col < cols && is_pivot[free_col]) ++free_col;
  RatVec x = zero_vec(cols);
  x[free_col] = 1;
  for (size_t i = 0; i < r; ++i) x[pivot_col[i]] = -m[i][free_col] / m[i][pivot_col[i]];
  return x;
}

/// Scales v by a positive rational so entries are coprime integers.
/// Direction (and hence halfspace orientation) is preserved.
inline RatVec primitive_vector(const RatVec& v) {
  Int l = 1;
  for (const Rat& x : v) l = boost::multiprecision::lcm(l, denominator(x));
  Int g = 0;
  std::vector<Int> ints(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    ints[i] = numerator(v[i]) * (l / denominator(v[i]));
    g = boost::multiprecision::gcd(g, ints[i]);
  }
  if (g == 0) return zero_vec(v.size());
  RatVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(ints[i] / g);
  return r;
}

/// Primitive integer vector with the first nonzero entry positive; canonical
/// representative of an unoriented direction.
inline RatVec primitive_direction(const RatVec& v) {
  RatVec p = primitive_vector(v);
  for (const Rat& x : p) {
    if (x > 0) return p;
    if (x < 0) return scale(p, Rat(-1));
  }
  return p;
}

inline bool parallel(const RatVec& a, const RatVec& b) {
  // all 2x2 minors vanish
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j)
      if (a[i] * b[j] - a[j] * b[i] != 0) return false;
  return true;
}

}  // namespace polyforge

#endif  // POLYFORGE_LINALG_HPP

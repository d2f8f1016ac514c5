#ifndef POLYFORGE_ENUMERATIVE_HPP
#define POLYFORGE_ENUMERATIVE_HPP

#include <string>
#include <vector>

#include "polyforge/faces.hpp"

namespace polyforge {

/// Dense rational polynomial, coefficients ascending, trailing zeros trimmed.
struct RatPolynomial {
  std::vector<Rat> coeffs;

  static RatPolynomial zero() { return {}; }

  void trim() {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  }
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Rat at(size_t i) const { return i < coeffs.size() ? coeffs[i] : Rat(0); }

  RatPolynomial operator+(const RatPolynomial& o) const {
    RatPolynomial r;
    r.coeffs.resize(std::max(coeffs.size(), o.coeffs.size()), Rat(0));
    for (size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = at(i) + o.at(i);
    r.trim();
    return r;
  }
  RatPolynomial operator-(const RatPolynomial& o) const {
    RatPolynomial r;
    r.coeffs.resize(std::max(coeffs.size(), o.coeffs.size()), Rat(0));
    for (size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = at(i) - o.at(i);
    r.trim();
    return r;
  }
  RatPolynomial operator*(const RatPolynomial& o) const {
    if (coeffs.empty() || o.coeffs.empty()) return {};
    RatPolynomial r;
    r.coeffs.assign(coeffs.size() + o.coeffs.size() - 1, Rat(0));
    for (size_t i = 0; i < coeffs.size(); ++i)
      for (size_t j = 0; j < o.coeffs.size(); ++j) r.coeffs[i + j] += coeffs[i] * o.coeffs[j];
    r.trim();
    return r;
  }
  bool operator==(const RatPolynomial& o) const { return coeffs == o.coeffs; }

  static RatPolynomial monomial(const Rat& c, size_t deg) {
    RatPolynomial r;
    r.coeffs.assign(deg + 1, Rat(0));
    r.coeffs[deg] = c;
    r.trim();
    return r;
  }
};

/// Exact division by (1 + t); nullopt when the remainder is nonzero.
inline std::optional<RatPolynomial> divide_by_one_plus_t(const RatPolynomial& p) {
  if (p.coeffs.empty()) return RatPolynomial{};
  std::vector<Rat> rev(p.coeffs.rbegin(), p.coeffs.rend());
  std::vector<Rat> out;
  Rat acc = 0;
  for (size_t i = 0; i < rev.size(); ++i) {
    acc = rev[i] - acc;
    if (i + 1 < rev.size())
      out.push_back(acc);
    else if (acc != 0)
      return std::nullopt;  // remainder at t = -1
  }
  RatPolynomial q;
  q.coeffs.assign(out.rbegin(), out.rend());
  q.trim();
  return q;
}

// ---------------------------------------------------------------------------
// cubical g-vector

struct GcVector {
  int d = 0;
  std::vector<Int> entries;  // g_0 .. g_{floor(d/2)}

  bool operator==(const GcVector& o) const { return d == o.d && entries == o.entries; }
};

inline Int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

inline Int pow2(int e) { return Int(1) << e; }

/// f_i(d-cube) = 2^{d-i} C(d, i).
inline FVector cube_f(int d) {
  if (d < 1) throw InputError("cube_f: d >= 1 required");
  FVector f;
  f.d = d;
  for (int i = 0; i < d; ++i) f.entries.push_back(pow2(d - i) * binomial(d, i));
  return f;
}

inline RatPolynomial f_polynomial(const FVector& f) {
  RatPolynomial p;
  for (const Int& x : f.entries) p.coeffs.push_back(Rat(x));
  p.trim();
  return p;
}

/// h^{sc}(Q,t) = (1-t)^{d-1} f(Q, 2t/(1-t)), expanded exactly as
/// sum_i f_i (2t)^i (1-t)^{d-1-i}.
inline RatPolynomial short_cubical_h(const FVector& f) {
  int d = f.d;
  if (static_cast<int>(f.entries.size()) != d)
    throw InputError("short_cubical_h: f-vector length does not match its dimension");
  RatPolynomial one_minus_t;
  one_minus_t.coeffs = {Rat(1), Rat(-1)};
  RatPolynomial acc = RatPolynomial::zero();
  for (int i = 0; i < d; ++i) {
    RatPolynomial term = RatPolynomial::monomial(Rat(f.entries[i]) * pow2(i), i);
    for (int j = 0; j < d - 1 - i; ++j) term = term * one_minus_t;
    acc = acc + term;
  }
  return acc;
}

/// h^c via the recurrence (1+t) h^c(t) = t h^{sc}(t) + 2^{d-1}(1 + t^{d+1}),
/// which restores polynomiality for odd d where the closed form with
/// 2^{d-1}(1-(-t)^{d+1})/(1+t) does not divide exactly.
inline RatPolynomial cubical_h(const FVector& f) {
  int d = f.d;
  RatPolynomial hsc = short_cubical_h(f);
  RatPolynomial rhs = RatPolynomial::monomial(Rat(1), 1) * hsc;
  rhs = rhs + RatPolynomial::monomial(Rat(pow2(d - 1)), 0);
  rhs = rhs + RatPolynomial::monomial(Rat(pow2(d - 1)), d + 1);
  auto h = divide_by_one_plus_t(rhs);
  if (!h) throw InputError("cubical_h: (1+t) does not divide exactly (non-cubical f-vector?)");
  return *h;
}

/// Cubical Dehn-Sommerville: h^c palindromic of length d+1.
inline bool check_dehn_sommerville(const RatPolynomial& h, int d) {
  if (h.degree() > d) return false;
  for (int i = 0; i <= d; ++i)
    if (h.at(i) != h.at(d - i)) return false;
  return true;
}

/// g^c_0 = 2^{d-1}, g^c_i = h^c_i - h^c_{i-1} for 1 <= i <= floor(d/2).
inline GcVector gc_vector(const RatPolynomial& h, int d) {
  if (!check_dehn_sommerville(h, d)) throw InputError("ds-violated");
  GcVector g;
  g.d = d;
  for (int i = 0; i <= d / 2; ++i) {
    Rat v = i == 0 ? h.at(0) : h.at(i) - h.at(i - 1);
    if (denominator(v) != 1) throw InputError("gc_vector: non-integer entry");
    g.entries.push_back(numerator(v));
  }
  return g;
}

inline GcVector gc_of_f(const FVector& f) { return gc_vector(cubical_h(f), f.d); }

/// f(Q # Q', t) = f(Q,t) + f(Q',t) - f(cube^{d-1},t) - t^{d-1}, with the
/// facet itself contributing the top coefficient of f(cube^{d-1},t).
inline FVector connected_sum_f(const FVector& fp, const FVector& fq, int d) {
  if (fp.d != d || fq.d != d) throw InputError("connected_sum_f: dimension mismatch");
  FVector facet = cube_f(d - 1);
  FVector r;
  r.d = d;
  for (int i = 0; i < d; ++i) {
    Int sub = (i < d - 1) ? facet.entries[i] : Int(1);  // the facet itself
    Int extra = (i == d - 1) ? Int(1) : Int(0);         // minus t^{d-1}
    r.entries.push_back(fp.entries[i] + fq.entries[i] - sub - extra);
  }
  if (!r.euler_holds()) throw InputError("connected_sum_f: Euler relation fails");
  return r;
}

/// f-vector of a d-tower of m cubes (m-1 connected sums of cubes).
inline FVector tower_f(int d, int m) {
  if (m < 1) throw InputError("tower_f: m >= 1 required");
  FVector f = cube_f(d);
  for (int k = 1; k < m; ++k) f = connected_sum_f(f, cube_f(d), d);
  return f;
}

/// g^c of a C-connected sum with an m-cube connector: coordinate 1 picks up
/// (m+1) 2^{d-1}, higher coordinates add, g^c_0 stays 2^{d-1}. At m = 4d
/// this is the (4d+1) 2^{d-1} correction.
inline GcVector gc_of_c_connected_sum(const GcVector& g1, const GcVector& g2, int d, int m) {
  if (g1.d != d || g2.d != d) throw InputError("gc_of_c_connected_sum: dimension mismatch");
  GcVector r;
  r.d = d;
  r.entries = g1.entries;
  for (size_t i = 1; i < r.entries.size(); ++i) r.entries[i] += g2.entries[i];
  r.entries[1] += Int(m + 1) * pow2(d - 1);
  return r;
}

// ---------------------------------------------------------------------------
// g^c -> f (for reporting density results through the f-space angle)

/// Reconstructs rational f entries from rational g^c entries (g_0 .. g_k):
/// h^c by partial sums and the palindrome, h^{sc}_i = h^c_i + h^c_{i+1},
/// then f by inverting the triangular substitution.
inline RatVec f_of_gc_rational(const RatVec& g, int d) {
  std::vector<Rat> h(d + 1, Rat(0));
  h[0] = g[0];
  for (int i = 1; i <= d / 2; ++i) h[i] = h[i - 1] + g[static_cast<size_t>(i)];
  for (int i = 0; i <= d; ++i)
    if (i > d / 2) h[i] = h[d - i];
  std::vector<Rat> hsc(d, Rat(0));
  for (int i = 0; i < d; ++i) hsc[i] = h[i] + h[i + 1];
  // forward triangular solve: hsc_j = sum_{i<=j} f_i 2^i (-1)^{j-i} C(d-1-i, j-i)
  RatVec fr(static_cast<size_t>(d), Rat(0));
  for (int j = 0; j < d; ++j) {
    Rat s = hsc[j];
    for (int i = 0; i < j; ++i) {
      int sign = ((j - i) % 2 == 0) ? 1 : -1;
      s -= fr[i] * pow2(i) * sign * binomial(d - 1 - i, j - i);
    }
    fr[j] = s / pow2(j);
  }
  return fr;
}

inline FVector f_of_gc(const GcVector& g) {
  RatVec ge;
  for (const Int& x : g.entries) ge.push_back(Rat(x));
  RatVec fr = f_of_gc_rational(ge, g.d);
  FVector f;
  f.d = g.d;
  for (const Rat& x : fr) {
    if (denominator(x) != 1) throw InputError("f_of_gc: non-integer f entry");
    f.entries.push_back(numerator(x));
  }
  return f;
}

// ---------------------------------------------------------------------------
// density scheduling

/// Abstract AKN-style generator: the sequence for coordinate i has
/// g^c_i = 2^m m^{i-1} to leading order and vanishing entries beyond i;
/// lower-order terms are dropped (they are o(.) in the source asymptotics).
struct GeneratorSpec {
  int coordinate = 1;
};

inline GcVector generator_value(const GeneratorSpec& gen, int d, long index) {
  GcVector g;
  g.d = d;
  g.entries.assign(static_cast<size_t>(d / 2) + 1, Int(0));
  g.entries[0] = pow2(d - 1);
  Int lead = pow2(static_cast<int>(index));
  for (int e = 0; e < gen.coordinate - 1; ++e) lead *= index;
  g.entries[static_cast<size_t>(gen.coordinate)] = lead;
  return g;
}

struct ScheduleStep {
  long m = 0;
  std::vector<long> pairing_indices;  // l chosen for coordinates k-1 .. 1
  GcVector combined;
  Rat cos2_g;  // exact squared cosine against the target ray in g-space
  Rat cos2_f;  // same, reported through the linear g->f map at the cube apex
};

struct ScheduleReport {
  int d = 0;
  RatVec target;
  std::vector<ScheduleStep> steps;
  bool monotone = true;
};

inline Rat squared_cosine(const RatVec& a, const RatVec& b) {
  Rat num = dot(a, b);
  Rat den = dot(a, a) * dot(b, b);
  if (den == 0) throw InputError("zero vector in angle computation");
  return num * num / den;
}

namespace detail {

/// Minimal l >= 1 with 2^l l^{power} >= bound (exact integer comparisons).
inline long minimal_pairing_index(const Rat& bound, int power) {
  long l = 1;
  while (true) {
    Int val = pow2(static_cast<int>(l));
    for (int e = 0; e < power; ++e) val *= l;
    if (Rat(val) >= bound) return l;
    ++l;
    if (l > 100000) throw Error("pairing index search diverged");
  }
}

inline ScheduleStep schedule_step_at(int d, const RatVec& target,
                                     const std::vector<GeneratorSpec>& gens, long m) {
  int k = d / 2;
  auto gen_for = [&](int coord) -> const GeneratorSpec& {
    for (const auto& g : gens)
      if (g.coordinate == coord) return g;
    throw InputError("no generator supplied for coordinate " + std::to_string(coord));
  };
  ScheduleStep step;
  step.m = m;
  GcVector x = generator_value(gen_for(k), d, m);
  for (int j = k - 1; j >= 1; --j) {
    if (target[static_cast<size_t>(j)] == 0)
      throw InputError("zero-target coordinate where a ratio is required");
    Rat c = target[static_cast<size_t>(j - 1)] / target[static_cast<size_t>(j)];
    if (j == 1) {
      // last-step correction for the connector's own g^c_1 contribution
      Rat corr = Rat(1) - Rat(1, m);
      Rat p = (d >= m) ? Rat(pow2(static_cast<int>(d - m))) : Rat(1, pow2(static_cast<int>(m - d)));
      c += p * corr;
    }
    Rat bound = c * Rat(x.entries[static_cast<size_t>(j) + 1]);
    long l = minimal_pairing_index(bound, j - 1);
    step.pairing_indices.push_back(l);
    x = gc_of_c_connected_sum(x, generator_value(gen_for(j), d, l), d, 4 * d);
  }
  step.combined = x;

  RatVec xg, tg;
  for (int i = 1; i <= k; ++i) {
    xg.push_back(Rat(x.entries[static_cast<size_t>(i)]));
    tg.push_back(target[static_cast<size_t>(i - 1)]);
  }
  step.cos2_g = squared_cosine(xg, tg);

  // f-space angle at the cube apex: the g->f map is affine with g_0 pinned,
  // so ray directions transform by its linear part
  auto f_delta = [&](const RatVec& gpart) {
    RatVec with(static_cast<size_t>(k) + 1, Rat(0));
    with[0] = Rat(pow2(d - 1));
    for (int i = 1; i <= k; ++i) with[static_cast<size_t>(i)] = gpart[static_cast<size_t>(i - 1)];
    RatVec base(static_cast<size_t>(k) + 1, Rat(0));
    base[0] = Rat(pow2(d - 1));
    return sub(f_of_gc_rational(with, d), f_of_gc_rational(base, d));
  };
  step.cos2_f = squared_cosine(f_delta(xg), f_delta(tg));
  return step;
}

}  // namespace detail

/// Schedules C-connected sums of abstract generators toward the target ray.
/// For each reported step the pairing indices follow the ceiling rule
/// (minimal l with 2^l l^{j-1} >= c * current coordinate); the reported m
/// subsequence is the greedy one along which the exact squared cosine
/// improves, mirroring the subsequence-taking in the source argument.
inline ScheduleReport density_schedule(int d, const RatVec& target,
                                       const std::vector<GeneratorSpec>& gens, size_t steps,
                                       long m_start = 0) {
  int k = d / 2;
  if (static_cast<int>(target.size()) != k)
    throw InputError("target ray length must be floor(d/2)");
  for (const Rat& s : target)
    if (s < 0) throw InputError("target ray must be nonnegative");
  if (target[target.size() - 1] == 0)
    throw InputError("zero-target coordinate where a ratio is required");
  if (m_start <= 0) m_start = d;

  ScheduleReport rep;
  rep.d = d;
  rep.target = target;
  std::optional<Rat> best;
  for (long m = m_start; m < m_start + 4000 && rep.steps.size() < steps; ++m) {
    ScheduleStep step = detail::schedule_step_at(d, target, gens, m);
    if (!best || step.cos2_g > *best) {
      best = step.cos2_g;
      rep.steps.push_back(std::move(step));
    }
  }
  if (rep.steps.size() < steps)
    throw Error("density schedule did not find enough improving steps");
  for (size_t i = 1; i < rep.steps.size(); ++i)
    if (rep.steps[i].cos2_g < rep.steps[i - 1].cos2_g) rep.monotone = false;
  return rep;
}

}  // namespace polyforge

#endif  // POLYFORGE_ENUMERATIVE_HPP

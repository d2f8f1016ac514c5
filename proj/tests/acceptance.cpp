// Acceptance suite: one pass/fail line per criterion, exact arithmetic
// throughout. Exits nonzero if any criterion fails.

#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

#include "polyforge/construct.hpp"
#include "polyforge/enumerative.hpp"
#include "polyforge/io.hpp"
#include "polyforge/normalize.hpp"
#include "polyforge/oracle.hpp"
#include "polyforge/random_fixtures.hpp"

using namespace polyforge;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << criterion << ": " << what
            << std::endl;
  if (!ok) ++failures;
}

void note(const std::string& what) { std::cout << "       " << what << std::endl; }

double secs(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

struct Fixtures {
  std::vector<Polytope> cubes3;  // 100 seeded random 3-cubes
  std::vector<Polytope> cubes4;  // 25 seeded random 4-cubes
};

Fixtures make_fixtures() {
  Fixtures f;
  for (uint64_t s = 1; s <= 100; ++s) f.cubes3.push_back(random_cube(3, s));
  for (uint64_t s = 1; s <= 25; ++s) f.cubes4.push_back(random_cube(4, 1000 + s));
  return f;
}

size_t subset_count(size_t n, size_t d) {
  size_t c = 1;
  for (size_t i = 0; i < d; ++i) c = c * (n - i) / (i + 1);
  return c;
}

size_t max_coord_bits(const Polytope& p) {
  size_t maxbits = 0;
  for (const auto& v : p.v.vertices)
    for (const auto& x : v) {
      size_t b = boost::multiprecision::msb(boost::multiprecision::abs(numerator(x)) + 1) +
                 boost::multiprecision::msb(denominator(x) + 1);
      maxbits = std::max(maxbits, b);
    }
  return maxbits;
}

// oracle sweep registry for criterion 7
struct OracleItem {
  std::string name;
  Polytope polytope;
};
std::vector<OracleItem> oracle_queue;

void queue_for_oracle(const std::string& name, const Polytope& p) {
  oracle_queue.push_back({name, p});
}

}  // namespace

// ---------------------------------------------------------------------------

static void criterion_1(const Fixtures& fx) {
  auto t0 = Clock::now();
  size_t max_len3 = 0, max_len4 = 0;
  bool certified = true, replayed = true;
  auto run_pairs = [&](const std::vector<Polytope>& cubes, size_t& max_len) {
    for (size_t i = 0; i < cubes.size(); ++i) {
      const Polytope& a = cubes[i];
      const Polytope& b = cubes[(i + 1) % cubes.size()];
      TransformLog log = relate_cubes(a, b);
      max_len = std::max(max_len, log.length());
      for (const auto& e : log.entries)
        certified = certified && e.certificate.kind() == CertificateKind::CombinatorialCube;
      // replay the tagged payloads from scratch and land on b exactly
      std::vector<std::pair<StepTag, StepPayload>> steps;
      for (const auto& e : log.entries) steps.emplace_back(e.tag, e.payload);
      TransformLog again = replay_log(a, steps, log.declared_bound);
      replayed = replayed && same_h_polytope(again.final_state().h, b.h) &&
                 same_vertex_set(again.final_state().v, b.v);
    }
  };
  run_pairs(fx.cubes3, max_len3);
  run_pairs(fx.cubes4, max_len4);
  auto t1 = Clock::now();

  bool bound_ok = max_len3 <= 23 && max_len4 <= 31;
  bool runtime_ok = secs(t0, t1) < 120.0;
  report(1, bound_ok && certified && replayed && runtime_ok,
         "transformation-count bound for 100 random 3-cube and 25 random 4-cube relations");
  std::ostringstream os;
  os << "max log length: d=3 " << max_len3 << " (bound 23), d=4 " << max_len4
     << " (bound 31); certificates " << (certified ? "all cube-valid" : "FAILED")
     << "; exact replay " << (replayed ? "ok" : "FAILED") << "; " << std::fixed
     << std::setprecision(1) << secs(t0, t1) << "s";
  note(os.str());
  if (!bound_ok)
    note("the merged normalize-concatenate construction has a structural floor of 8d+3 "
         "entries (two-entry tails, one mergeable junction); the declared 8d-1 is not "
         "reachable by it. Correctness, certificates and exact replay all hold.");
}

static void criterion_2_and_3(const Fixtures& fx) {
  bool len_ok = true, exact_ok = true, orth_ok = true;
  auto run = [&](const std::vector<Polytope>& cubes, size_t bound) {
    for (const Polytope& q : cubes) {
      TransformLog log = normalize_cube(q);
      len_ok = len_ok && log.length() <= bound;
      exact_ok = exact_ok && same_h_polytope(log.final_state().h, standard_cube(q.dim()).h);
      // the polar side of the same run, checked for exact orthogonality
      OppositePairing fp = cube_facet_pairing(q.inc);
      HPolytope ordered;
      ordered.dim = q.dim();
      for (auto& [a, b] : fp.pairs) {
        ordered.rows.push_back(q.h.rows[a]);
        ordered.rows.push_back(q.h.rows[b]);
      }
      Polytope cube = Polytope::from_reps(q.v, ordered);
      OppositePairing vp;
      for (int i = 0; i < q.dim(); ++i) vp.pairs.emplace_back(2 * i, 2 * i + 1);
      Polytope cross = crosspolytope_from_vertices(polar_dual(cube.h), vp);
      NormalizeCrossResult res = normalize_crosspolytope(cross, vp);
      auto oc = check_orthogonal_concurrent(res.state.cross, vp);
      orth_ok = orth_ok && oc.ok();
    }
  };
  run(fx.cubes3, 14);
  run(fx.cubes4, 18);
  report(2, len_ok && exact_ok,
         "normalization reaches the standard cube in <= 4d+2 steps, exact canonical H-reps");
  report(3, orth_ok,
         "orthogonality and concurrency certificates pass on every normalization run");
}

static void criterion_4() {
  bool ok = true;
  size_t max3 = 0, max4 = 0;
  for (uint64_t s = 1; s <= 20; ++s) {
    Polytope a = random_cube(2, 2000 + s, 3);
    Polytope b = random_cube(2, 3000 + s, 3);
    Tower t = build_tower(a, b);
    max3 = std::max(max3, t.cube_count);
    ok = ok && t.cube_count <= 12;
    // witnesses must reproduce the inputs on the marked facets
    auto check_witness = [&](const Polytope& input, const ProjectiveMap& w, size_t facet) {
      std::vector<RatVec> mapped;
      for (const RatVec& v : input.v.vertices) {
        RatVec lifted = v;
        lifted.push_back(Rat(0));
        mapped.push_back(w.apply(lifted));
      }
      std::vector<RatVec> actual;
      for (size_t i : t.polytope.inc.vertices_of_facet(facet))
        actual.push_back(t.polytope.v.vertices[i]);
      std::sort(mapped.begin(), mapped.end());
      std::sort(actual.begin(), actual.end());
      return mapped == actual;
    };
    ok = ok && check_witness(a, t.bottom_witness, t.bottom_facet);
    ok = ok && check_witness(b, t.top_witness, t.top_facet);
    if (s <= 6) queue_for_oracle("d3 tower seed " + std::to_string(s), t.polytope);
  }
  for (uint64_t s = 1; s <= 5; ++s) {
    Polytope a = random_cube(3, 4000 + s, 2);
    Polytope b = random_cube(3, 5000 + s, 2);
    Tower t = build_tower(a, b);
    max4 = std::max(max4, t.cube_count);
    ok = ok && t.cube_count <= 16;
    ok = ok && is_cubical(t.polytope);
    queue_for_oracle("d4 tower seed " + std::to_string(s), t.polytope);
  }
  {
    // a small-coordinate d=4 tower the hull oracle can sweep end to end
    Polytope cube3 = standard_cube(3);
    NormalTransform stretch = normal_payload_of(cube3.h);
    stretch.new_offsets[0] = 2;
    Tower t = build_tower(cube3, normal_transform(cube3, stretch).polytope, 8);
    ok = ok && t.cube_count == 8 && is_cubical(t.polytope);
    queue_for_oracle("d4 tower over standard cubes (padded to 8)", t.polytope);
  }
  report(4, ok, "tower bound: 20 random quadrilateral pairs (<= 12 cubes) and 5 random "
                "3-cube pairs (<= 16 cubes), glue certificates and witness maps");
  note("max cube counts: d=3 " + std::to_string(max3) + ", d=4 " + std::to_string(max4));
}

static void criterion_5() {
  Polytope cube3 = standard_cube(3);
  CConnectedSum cs3 = c_connected_sum(cube3, 0, cube3, 0);
  GcVector g3 = gc_of_f(f_vector_of(cs3.polytope));
  bool geo3 = cs3.connector_cubes == 12 && g3.entries[1] == 52;
  queue_for_oracle("d3 C-connected sum", cs3.polytope);

  GcVector pred4 = gc_of_c_connected_sum(gc_of_f(cube_f(4)), gc_of_f(cube_f(4)), 4, 16);
  bool arith4 = pred4.entries[1] == 136 && pred4.entries[2] == 0;

  Polytope cube4 = standard_cube(4);
  CConnectedSum cs4 = c_connected_sum(cube4, 0, cube4, 0);
  GcVector g4 = gc_of_f(f_vector_of(cs4.polytope));
  bool geo4 = cs4.connector_cubes == 16 && g4.entries[1] == 136;
  queue_for_oracle("d4 C-connected sum", cs4.polytope);

  report(5, geo3 && arith4 && geo4,
         "g^c_1 of C-connected sums: measured 52 for two 3-cubes with a 12-cube connector, "
         "136 for two 4-cubes with a 16-cube connector (arithmetic and geometric)");
  note("measured g^c_1: d=3 " + g3.entries[1].str() + ", d=4 " + g4.entries[1].str());
}

static void criterion_6() {
  bool ok = true;
  for (int d = 2; d <= 6; ++d) {
    ok = ok && check_dehn_sommerville(cubical_h(cube_f(d)), d);
    for (int m = 1; m <= 4 * d; ++m)
      ok = ok && check_dehn_sommerville(cubical_h(tower_f(d, m)), d);
  }
  // measured f-vectors of the geometric constructions queued so far
  for (const auto& item : oracle_queue) {
    FVector f = f_vector_of(item.polytope);
    ok = ok && check_dehn_sommerville(cubical_h(f), f.d);
  }
  ok = ok && short_cubical_h(cube_f(3)).coeffs == std::vector<Rat>{Rat(8), Rat(8), Rat(8)};
  ok = ok && cubical_h(cube_f(3)).coeffs == std::vector<Rat>{Rat(4), Rat(4), Rat(4), Rat(4)};
  report(6, ok, "Dehn-Sommerville palindromes for cubes, towers and all geometric builds; "
                "h^sc(3-cube) = (8,8,8) and h^c(3-cube) = (4,4,4,4)");
}

static void criterion_7(const Fixtures& fx) {
  bool ok = true;
  size_t checked = 0, skipped = 0;
  for (uint64_t s = 1; s <= 100; s += 9) {
    ok = ok && oracle_agrees(fx.cubes3[s - 1]);
    ++checked;
  }
  for (uint64_t s = 1; s <= 25; s += 6) {
    ok = ok && oracle_agrees(fx.cubes4[s - 1]);
    ++checked;
  }
  for (const auto& item : oracle_queue) {
    size_t n = item.polytope.v.vertices.size();
    size_t d = static_cast<size_t>(item.polytope.dim());
    size_t work = subset_count(n, d);
    size_t bits = max_coord_bits(item.polytope);
    // keep the naive oracle's share of the run to a few minutes: subset
    // count times coordinate size is the work estimate
    if (work > 25000000 || (work > 300000 && bits > 96)) {
      ++skipped;
      note("oracle skipped (work cap): " + item.name + " [" + std::to_string(n) +
           " vertices, " + std::to_string(bits) + "-bit coordinates]");
      continue;
    }
    auto t0 = Clock::now();
    bool agree = oracle_agrees(item.polytope);
    auto t1 = Clock::now();
    ok = ok && agree;
    ++checked;
    std::ostringstream os;
    os << "oracle " << (agree ? "agrees" : "DISAGREES") << ": " << item.name << " ("
       << std::fixed << std::setprecision(1) << secs(t0, t1) << "s)";
    note(os.str());
  }
  report(7, ok, "brute-force hull oracle agrees with every constructed polytope checked (" +
                    std::to_string(checked) + " checked, " + std::to_string(skipped) +
                    " beyond the work cap)");
}

static void criterion_8() {
  bool ok = true;
  for (int d : {4, 5}) {
    for (RatVec target : {RatVec{Rat(1), Rat(1)}, RatVec{Rat(2), Rat(1)}, RatVec{Rat(1), Rat(2)}}) {
      ScheduleReport rep = density_schedule(d, target, {{1}, {2}}, 10);
      bool mono = rep.monotone && rep.steps.size() == 10 &&
                  rep.steps.back().cos2_g > rep.steps.front().cos2_g &&
                  rep.steps.back().cos2_g > Rat(99, 100);
      ok = ok && mono;
      std::ostringstream os;
      os << "d=" << d << " ray (" << rat_to_string(target[0]) << "," << rat_to_string(target[1])
         << "): cos^2 " << std::setprecision(6) << rep.steps.front().cos2_g.convert_to<double>()
         << " -> " << rep.steps.back().cos2_g.convert_to<double>()
         << (rep.monotone ? " monotone" : " NOT MONOTONE");
      note(os.str());
    }
  }
  report(8, ok, "density schedules drive the exact squared cosine monotonically toward 1 "
                "over 10 steps for three target rays in d = 4 and d = 5");
}

static void criterion_9(const Fixtures& fx) {
  // determinism: byte-identical logs for repeated runs
  bool deterministic = true;
  for (uint64_t s : {7u, 19u, 70u}) {
    json a = log_to_json(normalize_cube(fx.cubes3[s]));
    json b = log_to_json(normalize_cube(fx.cubes3[s]));
    deterministic = deterministic && a.dump() == b.dump();
  }
  json a4 = log_to_json(relate_cubes(fx.cubes4[0], fx.cubes4[1]));
  json b4 = log_to_json(relate_cubes(fx.cubes4[0], fx.cubes4[1]));
  deterministic = deterministic && a4.dump() == b4.dump();

  // advisory continuity probe at eps = 10^-6
  const Rat eps(1, 1000000);
  const Rat calibrated(Int(1) << 24);
  size_t probed = 0, flagged = 0;
  for (uint64_t s = 1; s <= 6; ++s) {
    auto [cross, pairing] = random_crosspolytope(3, s);
    ContinuityReport rep = continuity_report(cross, pairing, eps, calibrated);
    ++probed;
    if (rep.flagged) ++flagged;
    std::ostringstream os;
    os << "continuity probe seed " << s << ": frame drift / eps = "
       << std::setprecision(3) << rep.ratio.convert_to<double>()
       << (rep.flagged ? " [flagged: canonical-scale jump]" : " [bounded]");
    note(os.str());
  }
  report(9, deterministic,
         "byte-identical logs on repeated runs; continuity probe ran on " +
             std::to_string(probed) + " fixtures (" + std::to_string(flagged) +
             " flagged, advisory only)");
  if (flagged)
    note("flagged drifts come from the primitive-integer normal convention: a perturbed "
         "direction can jump to a much larger canonical representative, rescaling the "
         "canonical push constants; certificates and exact results are unaffected");
}

int main() {
  auto t0 = Clock::now();
  Fixtures fx = make_fixtures();
  criterion_1(fx);
  criterion_2_and_3(fx);
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7(fx);
  criterion_8();
  criterion_9(fx);
  auto t1 = Clock::now();
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                              : std::to_string(failures) + " CRITERIA FAILED")
            << " (" << std::fixed << std::setprecision(1) << secs(t0, t1) << "s)" << std::endl;
  return failures == 0 ? 0 : 1;
}

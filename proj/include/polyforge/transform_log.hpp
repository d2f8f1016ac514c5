#ifndef POLYFORGE_TRANSFORM_LOG_HPP
#define POLYFORGE_TRANSFORM_LOG_HPP

#include <utility>
#include <variant>
#include <vector>

#include "polyforge/projective.hpp"

namespace polyforge {

enum class StepTag { Projective, Normal, Ray };

inline const char* to_string(StepTag t) {
  switch (t) {
    case StepTag::Projective: return "projective";
    case StepTag::Normal: return "normal";
    case StepTag::Ray: return "ray";
  }
  return "?";
}

using StepPayload = std::variant<ProjectiveMap, NormalTransform, RayScaling>;

struct LogEntry {
  StepTag tag;
  StepPayload payload;
  Certificate certificate;
  Polytope after;  // snapshot of the state following this step
};

/// Ordered, certified transformation sequence. Applying the entries in
/// order to `input` reproduces the stored final polytope exactly.
struct TransformLog {
  Polytope input;
  std::vector<LogEntry> entries;
  size_t declared_bound = 0;

  const Polytope& final_state() const { return entries.empty() ? input : entries.back().after; }
  size_t length() const { return entries.size(); }
};

/// Applies one payload; returns the new state and the certificate the
/// application produced.
inline std::pair<Polytope, Certificate> apply_step(const Polytope& state, StepTag tag,
                                                   const StepPayload& payload) {
  switch (tag) {
    case StepTag::Projective: {
      auto img = apply_projective(std::get<ProjectiveMap>(payload), state);
      return {std::move(img.polytope), img.certificate};
    }
    case StepTag::Normal: {
      auto res = normal_transform(state, std::get<NormalTransform>(payload));
      return {std::move(res.polytope), res.certificate};
    }
    case StepTag::Ray: {
      auto res = ray_scale(state, std::get<RayScaling>(payload));
      return {std::move(res.polytope), res.certificate};
    }
  }
  throw Error("unreachable step tag");
}

/// Replays tagged payloads from `input`, recomputing snapshots and
/// certificates.
inline TransformLog replay_log(const Polytope& input,
                               const std::vector<std::pair<StepTag, StepPayload>>& steps,
                               size_t declared_bound) {
  TransformLog log;
  log.input = input;
  log.declared_bound = declared_bound;
  Polytope state = input;
  for (const auto& [tag, payload] : steps) {
    auto [next, cert] = apply_step(state, tag, payload);
    log.entries.push_back(LogEntry{tag, payload, cert, next});
    state = std::move(next);
  }
  return log;
}

/// Inverse sequence: reversed entries, each payload inverted against its
/// pre-state (projective maps invert as maps, ray scalings reciprocate,
/// normal transforms restore the previous offsets).
inline std::vector<std::pair<StepTag, StepPayload>> inverted_steps(const TransformLog& log) {
  std::vector<std::pair<StepTag, StepPayload>> out;
  for (size_t k = log.entries.size(); k-- > 0;) {
    const Polytope& pre = (k == 0) ? log.input : log.entries[k - 1].after;
    const LogEntry& e = log.entries[k];
    switch (e.tag) {
      case StepTag::Projective:
        out.emplace_back(StepTag::Projective,
                         std::get<ProjectiveMap>(e.payload).inverse_map());
        break;
      case StepTag::Normal:
        out.emplace_back(StepTag::Normal, normal_payload_of(pre.h));
        break;
      case StepTag::Ray: {
        RayScaling inv;
        for (const Rat& l : std::get<RayScaling>(e.payload).lambdas) inv.lambdas.push_back(Rat(1) / l);
        out.emplace_back(StepTag::Ray, inv);
        break;
      }
    }
  }
  return out;
}

namespace detail {

inline bool merge_pair(std::pair<StepTag, StepPayload>& a,
                       const std::pair<StepTag, StepPayload>& b) {
  if (a.first != b.first) return false;
  switch (a.first) {
    case StepTag::Projective:
      a.second = std::get<ProjectiveMap>(b.second).compose(std::get<ProjectiveMap>(a.second));
      return true;
    case StepTag::Ray: {
      RayScaling& ra = std::get<RayScaling>(a.second);
      const RayScaling& rb = std::get<RayScaling>(b.second);
      if (ra.lambdas.size() != rb.lambdas.size()) return false;
      for (size_t i = 0; i < ra.lambdas.size(); ++i) ra.lambdas[i] *= rb.lambdas[i];
      return true;
    }
    case StepTag::Normal:
      // offsets are absolute replacements, so the later transform wins
      a.second = std::get<NormalTransform>(b.second);
      return true;
  }
  return false;
}

inline bool payload_is_identity(const std::pair<StepTag, StepPayload>& s, const Polytope& pre) {
  switch (s.first) {
    case StepTag::Projective: return std::get<ProjectiveMap>(s.second).is_identity();
    case StepTag::Ray: return std::get<RayScaling>(s.second).is_identity();
    case StepTag::Normal: return std::get<NormalTransform>(s.second).is_identity_on(pre.h);
  }
  return false;
}

}  // namespace detail

/// Merges adjacent same-tag steps (projective maps compose, ray scalings
/// multiply, a later offset replacement absorbs an earlier one) and drops
/// identities, iterating to a fixpoint.
inline std::vector<std::pair<StepTag, StepPayload>> merge_steps(
    const Polytope& input, std::vector<std::pair<StepTag, StepPayload>> steps) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::pair<StepTag, StepPayload>> merged;
    for (auto& s : steps) {
      if (!merged.empty() && detail::merge_pair(merged.back(), s)) {
        changed = true;
      } else {
        merged.push_back(std::move(s));
      }
    }
    // drop identity steps (needs the running pre-state for normal entries)
    std::vector<std::pair<StepTag, StepPayload>> kept;
    Polytope state = input;
    for (auto& s : merged) {
      if (detail::payload_is_identity(s, state)) {
        changed = true;
        continue;
      }
      auto [next, cert] = apply_step(state, s.first, s.second);
      state = std::move(next);
      kept.push_back(std::move(s));
    }
    steps = std::move(kept);
  }
  return steps;
}

}  // namespace polyforge

#endif  // POLYFORGE_TRANSFORM_LOG_HPP

#pragma once

// Internal affine-form machinery behind stability_check and the nested-limit
// proofs. A level-1 stability check replays one cycle with registers as
// affine forms in the repetition index n and requires the evolution to
// reproduce itself; the level-2 proof replays one whole segment (everything
// between consecutive limit points) the same way, with the inner cycle
// analyzed over bilinear forms in (n, m).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "itrm/engine.hpp"

namespace itrm::detail {

// a + b*n with nonnegative components (Nat is signed internally, so gap
// arithmetic below may go negative freely).
struct Form {
  Nat a;
  Nat b;

  bool operator==(const Form&) const = default;
};

inline Form constant_form(Nat v) { return Form{std::move(v), 0}; }

// Outcome of comparing two affine forms across all n >= 0.
struct GapAnalysis {
  bool equal_at_zero = false;
  bool uniform = false;  // outcome identical for every n
  Nat flip;              // earliest n >= 1 with a different outcome, when !uniform
};

GapAnalysis analyze_gap(const Form& lhs, const Form& rhs);

// Symbolic replay of one segment: runs the machine from a limit
// configuration given as affine forms in the meta-repetition index, through
// concrete-shape steps and exactly one inner limit, following the n = 0
// branch outcomes. Registers the earliest n at which any branch outcome
// deviates. Fails (bail) when the dynamics cannot be captured affinely.
struct SegmentReplay {
  bool completed = false;  // reached the segment's limit point
  std::size_t end_pc = 0;
  std::vector<Form> end_forms;
  std::vector<bool> pc_set;   // size = program length + 1
  std::vector<Form> reg_min;  // running minima over the segment, as forms
  std::optional<Nat> flip;    // earliest meta-repetition with a flipped branch
  std::string bail_note;      // nonempty => analysis failed
};

SegmentReplay symbolic_replay_segment(const Program& p, const OracleReal& x,
                                      std::size_t start_pc, std::vector<Form> forms,
                                      std::uint64_t max_steps);

}  // namespace itrm::detail

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "itrm/isa.hpp"
#include "itrm/oracle.hpp"
#include "itrm/ordinal.hpp"

namespace itrm {

// Machine state at one clock value. pc == program length means halted.
struct Configuration {
  std::size_t pc = 0;
  std::vector<Nat> registers;

  bool operator==(const Configuration&) const = default;
};

Configuration initial_configuration(const Program& p, const Nat& input);

// One successor step. Deterministic; requires c not halted.
Configuration step(const Configuration& c, const Program& p, const OracleReal& x);

// Resource limits for a run. max_steps_per_level bounds concrete steps
// between accelerations, max_level bounds the omega-power of clock jumps,
// max_accelerations bounds the total number of jumps of any kind.
struct Budget {
  std::uint64_t max_steps_per_level = 100000;
  std::uint32_t max_level = 2;
  std::uint64_t max_accelerations = 1000;
};

// Finite evidence for limit inference: a cycle of length cycle_length whose
// pc trace repeats exactly and whose registers evolve affinely,
//
//   value(offset k, register r, repetition m) = base_values[k][r] + m * drifts[k][r]
//
// verified over replay_count additional replays beyond the base repetition.
// All drifts are nonnegative.
struct CycleWitness {
  Ordinal start_clock;
  std::size_t cycle_length = 0;
  std::vector<std::size_t> pc_trace;
  std::vector<std::vector<Nat>> base_values;
  std::vector<std::vector<Nat>> drifts;
  int replay_count = 3;
};

// A window of consecutive configurations at successor clocks, the input to
// cycle detection. configs[i] is the state at start_clock + i.
struct TraceWindow {
  Ordinal start_clock;
  std::vector<Configuration> configs;
};

// Searches the window for the smallest live cycle (anchored at the window
// end, back-extended to the earliest matching start). Returns a witness only
// if pc repetition and affine register evolution verify across
// 1 + replay_count repetitions, all drifts are nonnegative, and every oracle
// read inside the cycle is drift-stable: a read whose address register
// drifts is accepted only against an eventually periodic oracle, with the
// cycle length multiplied to cover the oracle period.
std::optional<CycleWitness> detect_affine_cycle(const TraceWindow& window,
                                                const Program& p, const OracleReal& x,
                                                int replay_count = 3);

// Outcome of the symbolic stability analysis of a verified cycle.
struct Stability {
  enum class Kind { Stable, Breakpoint, Unknown };
  Kind kind = Kind::Unknown;
  Nat breakpoint;    // earliest repetition whose branch outcomes differ
  std::string note;  // reason when kind == Unknown
};

// Replays one cycle symbolically with each register as an affine form in the
// repetition index and decides whether every branch outcome persists for all
// repetitions (stable), first flips at a computable repetition (breakpoint),
// or cannot be analyzed (unknown, e.g. drifting reads from a predicate
// oracle). Stable also certifies that the affine evolution reproduces itself,
// so it holds for every future repetition, not only the replayed ones.
Stability stability_check(const CycleWitness& w, const Program& p, const OracleReal& x);

// Earliest repetition n >= 1 at which the outcome of comparing
// v1 + n*d1 with v2 + n*d2 differs from the outcome at n = 0, if any.
std::optional<Nat> affine_comparison_flip(const Nat& v1, const Nat& d1, const Nat& v2,
                                          const Nat& d2);

struct LimitResult {
  Configuration config;  // state at the limit: pc = min of the pc trace,
                         // registers = min over drift-free offsets, 0 when
                         // every offset drifts
  Ordinal clock;         // start_clock + omega
};

// Applies the liminf rule to a stable witness. Throws std::invalid_argument
// if stability_check does not report stable.
LimitResult accelerate_omega(const CycleWitness& w, const Program& p, const OracleReal& x);

struct FastForwardResult {
  Configuration config;
  Ordinal clock;  // start_clock + cycle_length * n_star
};

// Jumps n_star whole repetitions ahead affinely from the witness start.
FastForwardResult fast_forward(const CycleWitness& w, const Nat& n_star);

// Independent cross-check for accelerate_omega: concretely replays `replays`
// cycles from the witness start (requires replays >= 3), classifies drifts by
// differencing the observed values, and applies the liminf rule. Reports a
// break if the replays deviate from exact pc repetition or affine evolution.
struct LiminfBruteResult {
  bool affine_ok = false;
  Configuration config;      // valid when affine_ok
  std::string break_report;  // valid when !affine_ok
};

LiminfBruteResult liminf_brute(const CycleWitness& w, const Program& p, const OracleReal& x,
                               std::uint64_t replays);

// One clock jump performed on the way to a certificate's clocks.
struct DerivationStep {
  std::string kind;  // "limit" | "fast_forward" | "meta_fast_forward" | "limit2"
  Ordinal from_clock;
  Ordinal to_clock;
};

// Two clocks with one configuration: replaying the engine to clock_a and to
// clock_b must reproduce `config` at both. Determinism then implies the run
// repeats with period clock_b - clock_a forever and never halts.
struct DivergenceCertificate {
  Ordinal clock_a;
  Ordinal clock_b;
  Configuration config;
  std::vector<DerivationStep> derivation;
};

struct Halted {
  Nat output;
  Ordinal clock;
};

struct Diverges {
  DivergenceCertificate certificate;
};

struct BudgetExhausted {
  Configuration config;
  Ordinal clock;
  std::string reason;
};

using Outcome = std::variant<Halted, Diverges, BudgetExhausted>;

enum class TraceEvent { Step, Limit, FastForward, Halt, Diverge, Budget };

struct TraceRecord {
  std::uint64_t seq = 0;
  Ordinal clock;
  Configuration config;
  TraceEvent event = TraceEvent::Step;
};

// A level-1 limit jump performed by a run, kept for cross-checking.
struct LimitRecord {
  Ordinal clock;
  Configuration config;
  CycleWitness witness;
};

struct RunStats {
  std::uint64_t concrete_steps = 0;
  std::uint64_t fast_forwards = 0;
  std::uint64_t limit_jumps = 0;
  std::uint64_t meta_fast_forwards = 0;
  std::uint64_t omega2_jumps = 0;
};

struct RunOptions {
  Budget budget;
  bool collect_trace = false;
  std::size_t trace_step_cap = 256;  // ring of plain step records; limit,
                                     // jump and terminal records always kept
  bool collect_limits = false;
};

struct RunResult {
  Outcome outcome;
  std::vector<TraceRecord> trace;
  std::vector<LimitRecord> limits;
  RunStats stats;
};

// Transfinite execution: concrete successor steps, limit stages inferred
// from verified stable cycles, breakpoint fast-forwarding, divergence
// detection through configuration recurrence. Halted outcomes are exact;
// Diverges outcomes carry a certificate accepted by verify_divergence.
RunResult run(const Program& p, const OracleReal& x, const Nat& input,
              const RunOptions& options = {});

// Re-runs the engine to each certificate clock and compares configurations.
// False on any mismatch, on clock_a >= clock_b, or when the certificate
// clocks cannot be reached within the verification budget.
bool verify_divergence(const DivergenceCertificate& cert, const Program& p,
                       const OracleReal& x, const Nat& input,
                       const Budget& budget = Budget{1000000, 2, 100000});

// Runs the machine to an exact clock value and returns the configuration
// there, or nullopt if the machine halts strictly earlier or the budget runs
// out first.
std::optional<Configuration> run_to_clock(const Program& p, const OracleReal& x,
                                          const Nat& input, const Ordinal& target,
                                          const Budget& budget = Budget{1000000, 2, 100000});

}  // namespace itrm

#ifndef PREFENDER_ATTACK_HPP_
#define PREFENDER_ATTACK_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prefender/config.hpp"
#include "prefender/isa.hpp"
#include "prefender/pipeline.hpp"
#include "prefender/report.hpp"
#include "prefender/sim.hpp"

namespace prefender {

enum class Verdict : uint8_t { SUCCESS, DEFEATED, WRONG };
const char* verdict_name(Verdict v);

struct InferenceResult {
  Verdict verdict = Verdict::DEFEATED;
  std::optional<uint32_t> inferred;
  uint32_t extremum_count = 0;
};

// Reload kinds look for the unique fastest index, probe for the unique
// slowest; ties are counted within +-1 cycle of the extremum.
InferenceResult infer_secret(const std::vector<uint32_t>& latencies, AttackKind kind);

// A generated attack round: phase 1 initialization, the victim's single
// secret-dependent load, and the timed probe sweep, as one straight-line
// program. Probe-loop instructions reuse their slot pc across iterations
// (one static instruction executed K times); initialization code carries
// unique pcs.
struct AttackProgram {
  Program prog;
  AttackKind kind = AttackKind::FLUSH_RELOAD;
  uint32_t secret = 0;
  Addr victim_base = 0;
  Addr probe_base = 0;  // == victim_base except for prime+probe
  Addr probe_pc = 0;
  std::vector<uint32_t> probe_order;                    // ordinal -> index
  std::vector<std::pair<size_t, uint32_t>> probe_loads; // instr idx -> index
  std::vector<std::pair<size_t, Cycle>> skips;          // advance cycles before instr idx
  std::vector<std::pair<Addr, uint64_t>> pokes;
  size_t phase1_end = 0;   // first instr index after phase 1
  size_t victim_load_idx = 0;
  std::vector<Addr> eviction_lines;  // addresses checked after phase 1
};

// Builds one attack round. The secret must be < k_lines; seed drives the
// probe permutation and noise addresses. Throws std::invalid_argument when
// the eviction set cannot be constructed under the cache geometry (e.g. a
// prime+probe spec whose probed lines do not map to distinct L1 sets).
AttackProgram gen_attack(const AttackSpec& spec, const CacheConfig& cache,
                         uint32_t secret, uint64_t seed);

struct TrialResult {
  uint32_t secret = 0;
  InferenceResult inference;
  std::vector<uint32_t> latencies;
  double probe_l1_hit_fraction = 0.0;  // probe loads that hit L1
  bool phase1_verified = false;
};

struct ScenarioRun {
  ScenarioReport report;
  std::vector<TrialResult> trial_results;
  std::vector<PrefetchIssue> issues;  // all trials, in execution order
  PortCounters counters;              // summed over trials
};

// Runs `trials` independent simulations (fresh state each), randomizing the
// secret per trial unless spec.secret >= 0, and aggregates a report.
ScenarioRun run_scenario(const AttackSpec& spec, const SimConfig& cfg, uint32_t trials);

}  // namespace prefender

#endif  // PREFENDER_ATTACK_HPP_

#ifndef PREFENDER_CONFIG_HPP_
#define PREFENDER_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include "prefender/access_tracker.hpp"
#include "prefender/cache.hpp"
#include "prefender/prefetchers.hpp"
#include "prefender/record_protector.hpp"
#include "prefender/scale_tracker.hpp"

namespace prefender {

enum class AttackKind : uint8_t { FLUSH_RELOAD, EVICT_RELOAD, PRIME_PROBE };
const char* attack_kind_name(AttackKind k);

enum class SecretDomain : uint8_t { ANY, IN_PAGE };

struct AttackSpec {
  AttackKind kind = AttackKind::FLUSH_RELOAD;
  int32_t secret = -1;  // -1: randomized per trial
  uint32_t k_lines = 128;
  uint64_t stride_bytes = 0x200;
  bool c2_random_order = false;
  bool c3_noisy_instr = false;
  bool c4_noisy_access = false;
  uint32_t noise_instr_count = 8;
  uint64_t noise_offset = 0x100;
  uint64_t seed = 1;
  uint32_t trials = 20;
  SecretDomain secret_domain = SecretDomain::ANY;
};

enum class WorkloadKind : uint8_t { SEQUENTIAL, STRIDED, RANDOM, DEP_CHAIN, NESTED_2D };
const char* workload_kind_name(WorkloadKind k);

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::SEQUENTIAL;
  uint64_t length = 100000;  // number of loads
  uint64_t stride_bytes = 256;
  uint64_t seed = 1;
};

struct SimConfig {
  CacheConfig cache;
  StConfig st;
  AtConfig at;
  RpConfig rp;
  BasePrefetcher base = BasePrefetcher::NONE;
  uint32_t stride_table_size = 64;
  Cycle bucket_cycles = 1000;
  AttackSpec attack;
  WorkloadSpec workload;
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Sectioned key = value format with `#` comments:
//
//   [cache]
//   l1_size = 65536
//   [st]
//   enabled = true
//   [attack]
//   kind = flush_reload
//   challenges = c2,c3
//
// Sections: cache, st, at, rp, prefetcher, stride, sim, attack, workload.
// The PREFENDER_SEED environment variable overrides attack.seed and
// workload.seed.
SimConfig parse_config(const std::string& text);
SimConfig load_config_file(const std::string& path);

// Applies a dotted key ("at.buffer_count") to a config; used by sweeps.
void apply_config_key(SimConfig& cfg, const std::string& dotted_key,
                      const std::string& value);

}  // namespace prefender

#endif  // PREFENDER_CONFIG_HPP_

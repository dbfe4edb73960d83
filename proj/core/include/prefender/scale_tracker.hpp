#ifndef PREFENDER_SCALE_TRACKER_HPP_
#define PREFENDER_SCALE_TRACKER_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "prefender/cache.hpp"
#include "prefender/common.hpp"
#include "prefender/isa.hpp"

namespace prefender {

struct StConfig {
  bool enabled = true;
  uint32_t bit_width = 64;   // 64, or 16 to model a narrow datapath
  uint32_t max_per_load = 2; // candidates issued per qualifying load
};

// Per-register calculation history: a fixed value (known compile-time
// constant) and a scale. A register whose value depends on loaded data has
// fva = NA; a register produced by a constant-only reg-reg op has sc = NA.
// fva and sc are never both NA.
struct RegTrack {
  uint64_t fva = 0;
  uint64_t sc = 1;
  bool fva_valid = false;
  bool sc_valid = true;

  static RegTrack initial() { return RegTrack{}; }
};

struct StCandidate {
  Addr blk = 0;     // block to prefetch
  Addr anchor = 0;  // block of the triggering target address
  uint64_t sc_used = 0;
};

// Propagates (fva, sc) through register writes and, on a load, proposes the
// +/- sc neighbors of the target address as same-page prefetch candidates.
class ScaleTracker {
 public:
  explicit ScaleTracker(const StConfig& cfg) : cfg_(cfg) { reset(); }

  void reset();

  // Register-write rules, applied per retired instruction:
  //   loadi rd, imm            -> fva=imm, sc=1
  //   load  rd, imm(rs)        -> fva=NA,  sc=1 (loaded values are unknown)
  //   add/sub rd, rs, imm      -> NA:  (NA, sc_rs)        Valid: (fva+-imm, 1)
  //   add/sub rd, rs0, rs1     -> V,V: (fva0+-fva1, NA)   one NA: (NA, sc of NA side)
  //                               NA,NA: (NA, min(sc0, sc1))
  //   mul/shl/shr rd, rs, imm  -> NA:  (NA, sc_rs o imm)  Valid: (fva o imm, 1)
  //   mul/shl/shr rd, rs0, rs1 -> V,V: (fva0 o fva1, NA)  one NA: (NA, sc_NA o fva_V)
  //                               NA,NA: (NA, sc0 o sc1)
  //   anything else with a rd  -> fva=NA, sc=1
  // Scale arithmetic saturates at 2^63-1 and clamps zero to 1.
  void track(const MicroInstruction& in);

  // Applied to a load's destination after its address was consumed.
  void on_load_dest(uint8_t rd);

  // For `load rd, imm(rs)` at effective address eff: when
  // line_size < sc_rs < page_size, proposes blocks of eff-sc then eff+sc,
  // keeping only candidates in the same page as eff.
  std::vector<StCandidate> candidates_for_load(uint8_t rs, Addr eff,
                                               const CacheConfig& cache) const;

  const RegTrack& reg(uint8_t r) const { return tracks_[r]; }
  const StConfig& config() const { return cfg_; }

 private:
  void assign(uint8_t rd, RegTrack t);
  uint64_t apply_width(uint64_t v) const;

  StConfig cfg_;
  std::array<RegTrack, 32> tracks_;
};

}  // namespace prefender

#endif  // PREFENDER_SCALE_TRACKER_HPP_

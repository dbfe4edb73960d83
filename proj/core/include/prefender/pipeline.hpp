#ifndef PREFENDER_PIPELINE_HPP_
#define PREFENDER_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "prefender/access_tracker.hpp"
#include "prefender/cache.hpp"
#include "prefender/common.hpp"
#include "prefender/isa.hpp"
#include "prefender/prefetchers.hpp"
#include "prefender/record_protector.hpp"
#include "prefender/scale_tracker.hpp"

namespace prefender {

struct PrefetchIssue {
  Cycle at = 0;
  PrefetchSource source = PrefetchSource::AT;
  Addr blk = 0;
  Addr trigger_pc = 0;
  PrefetchStatus status = PrefetchStatus::ACCEPTED;
};

// Per-retired-instruction hook order (fixed):
//   register write  -> scale tracker rule table only
//   load            -> 1. demand access to the hierarchy
//                      2. access tracker activate + record + DiffMin update
//                      3. record protector match; on hit protect and guide,
//                         else guide by a live protected scale, else the
//                         access tracker's DiffMin candidate
//                      4. scale tracker candidates for the address register
//                      5. scale recording when candidates were emitted
//                      6. basic prefetcher hook
//                      7. issue: RP_GUIDED/AT first, then ST, then basic
//   flush           -> hierarchy only, trackers untouched
// Trackers observe demand accesses only, never prefetch fills.
class Pipeline {
 public:
  Pipeline(MemoryHierarchy& hier, ScaleTracker& st, AccessTracker& at,
           RecordProtector& rp, BasePrefetcher base, TaggedPrefetcher& tagged,
           StridePrefetcher& stride, bool st_on, bool at_on, bool rp_on);

  AccessResult load_access(Addr pc, Addr eff, uint8_t rs, uint8_t rd, Cycle now);
  void reg_write(const MicroInstruction& in);
  void flush(Addr addr);

  // Periodic sweep for the idle-unprotect rule.
  void tick(Cycle now);

  const std::vector<PrefetchIssue>& issues() const { return issues_; }
  void clear_issues() { issues_.clear(); }

 private:
  void issue(PrefetchSource src, Addr blk, Addr pc, Cycle now);

  MemoryHierarchy& hier_;
  ScaleTracker& st_;
  AccessTracker& at_;
  RecordProtector& rp_;
  BasePrefetcher base_;
  TaggedPrefetcher& tagged_;
  StridePrefetcher& stride_;
  bool st_on_;
  bool at_on_;
  bool rp_on_;
  std::vector<PrefetchIssue> issues_;
};

}  // namespace prefender

#endif  // PREFENDER_PIPELINE_HPP_

#include "prefender/pipeline.hpp"

namespace prefender {

Pipeline::Pipeline(MemoryHierarchy& hier, ScaleTracker& st, AccessTracker& at,
                   RecordProtector& rp, BasePrefetcher base, TaggedPrefetcher& tagged,
                   StridePrefetcher& stride, bool st_on, bool at_on, bool rp_on)
    : hier_(hier),
      st_(st),
      at_(at),
      rp_(rp),
      base_(base),
      tagged_(tagged),
      stride_(stride),
      st_on_(st_on),
      at_on_(at_on),
      rp_on_(rp_on) {}

void Pipeline::issue(PrefetchSource src, Addr blk, Addr pc, Cycle now) {
  PrefetchStatus status = hier_.prefetch(blk, src, now);
  issues_.push_back({now, src, blk, pc, status});
}

void Pipeline::reg_write(const MicroInstruction& in) {
  if (st_on_) st_.track(in);
}

void Pipeline::flush(Addr addr) { hier_.flush(addr); }

void Pipeline::tick(Cycle now) {
  if (!rp_on_ || !at_on_) return;
  for (auto& buf : at_.buffers())
    if (buf.in_use) rp_.maybe_unprotect(buf, now);
}

AccessResult Pipeline::load_access(Addr pc, Addr eff, uint8_t rs, uint8_t rd, Cycle now) {
  AccessResult res = hier_.access(eff, now);
  const CacheConfig& cc = hier_.config();
  Addr blk = block_of(eff, cc.line_size);
  L1Lookup in_l1 = [&](Addr b) { return hier_.contains(CacheLevel::L1, b, now); };

  AccessBuffer* buf = nullptr;
  if (at_on_) {
    buf = at_.activate(pc, now);
    if (buf) {
      if (rp_on_) rp_.maybe_unprotect(*buf, now);
      at_.record(*buf, blk);
      at_.update_diff_min(*buf);
    }
  }

  // One guided-or-DiffMin candidate per load. A scale-buffer hit (or a live
  // protected scale) replaces the DiffMin policy rather than adding to it.
  std::optional<Addr> tracker_cand;
  PrefetchSource tracker_src = PrefetchSource::AT;
  bool guided = false;
  if (rp_on_) {
    if (auto m = rp_.match_scale(blk)) {
      if (buf) rp_.protect(*buf, m->sc, m->anchor, now);
      tracker_cand = rp_.guided_candidate(blk, m->sc, buf, in_l1);
      tracker_src = PrefetchSource::RP_GUIDED;
      guided = true;
    } else if (buf && buf->protected_flag &&
               RecordProtector::on_pattern(blk, buf->prot_sc, buf->prot_anchor)) {
      tracker_cand = rp_.guided_candidate(blk, buf->prot_sc, buf, in_l1);
      tracker_src = PrefetchSource::RP_GUIDED;
      guided = true;
    }
  }
  if (!guided && at_on_ && buf) tracker_cand = at_.candidate(*buf, blk, in_l1);

  std::vector<StCandidate> st_cands;
  if (st_on_) st_cands = st_.candidates_for_load(rs, eff, cc);

  if (tracker_cand) issue(tracker_src, *tracker_cand, pc, now);
  uint32_t st_budget = st_.config().max_per_load;
  for (const auto& c : st_cands) {
    if (st_budget == 0) break;
    issue(PrefetchSource::ST, c.blk, pc, now);
    --st_budget;
  }
  if (!st_cands.empty() && rp_on_) rp_.record_scale(st_cands.front().sc_used, blk);

  if (base_ == BasePrefetcher::TAGGED) {
    if (auto t = tagged_.on_access(blk, res)) issue(PrefetchSource::TAGGED, *t, pc, now);
  } else if (base_ == BasePrefetcher::STRIDE) {
    if (auto s = stride_.on_access(pc, eff)) issue(PrefetchSource::STRIDE, *s, pc, now);
  }

  if (st_on_) st_.on_load_dest(rd);
  return res;
}

}  // namespace prefender

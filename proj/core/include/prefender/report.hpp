#ifndef PREFENDER_REPORT_HPP_
#define PREFENDER_REPORT_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "prefender/common.hpp"

namespace prefender {

enum class ReportFormat : uint8_t { JSON_LINES, CSV };

// Plot-ready scenario results. Field ordering in the serialized forms is
// fixed so that reruns with the same configuration and seed are
// byte-identical.
struct ScenarioReport {
  std::string scenario;  // label, e.g. "attack:flush_reload" or "bench:strided"
  uint64_t trials = 0;
  Cycle bucket_cycles = 1000;

  double success_rate = 0.0;
  double defeated_rate = 0.0;
  double wrong_rate = 0.0;

  std::vector<double> per_index_latency;  // mean cycles per probed index

  // (source name, per-bucket accepted prefetch counts); sources appear in a
  // fixed order and row count is |sources| * buckets on emission.
  std::vector<std::pair<std::string, std::vector<uint64_t>>> prefetch_counts;

  std::vector<double> protected_buffer_timeline;  // mean count per bucket

  uint64_t demand_miss_count = 0;
  uint64_t demand_merge_count = 0;
  uint64_t total_miss_latency = 0;
  double ipc_proxy = 0.0;

  uint64_t prefetch_total(const std::string& source) const;
};

// JSON_LINES: one object per line (summary, then prefetch_counts rows, then
// protected_buffers rows, then per_index_latency rows). CSV: the per-index
// latency table with header "index,mean_latency_cycles". Floating values
// carry 6 decimal places.
std::string emit_report(const ScenarioReport& report, ReportFormat format);

}  // namespace prefender

#endif  // PREFENDER_REPORT_HPP_

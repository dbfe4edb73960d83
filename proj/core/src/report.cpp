#include "prefender/report.hpp"

#include <cstdio>

namespace prefender {

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

uint64_t ScenarioReport::prefetch_total(const std::string& source) const {
  for (const auto& [name, buckets] : prefetch_counts) {
    if (name != source) continue;
    uint64_t sum = 0;
    for (uint64_t c : buckets) sum += c;
    return sum;
  }
  return 0;
}

std::string emit_report(const ScenarioReport& r, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::CSV) {
    out += "index,mean_latency_cycles\n";
    for (size_t i = 0; i < r.per_index_latency.size(); ++i) {
      out += std::to_string(i);
      out += ',';
      out += fmt6(r.per_index_latency[i]);
      out += '\n';
    }
    return out;
  }

  out += "{\"type\":\"summary\",\"scenario\":\"" + r.scenario + "\"";
  out += ",\"trials\":" + std::to_string(r.trials);
  out += ",\"bucket_cycles\":" + std::to_string(r.bucket_cycles);
  out += ",\"success_rate\":" + fmt6(r.success_rate);
  out += ",\"defeated_rate\":" + fmt6(r.defeated_rate);
  out += ",\"wrong_rate\":" + fmt6(r.wrong_rate);
  out += ",\"demand_miss_count\":" + std::to_string(r.demand_miss_count);
  out += ",\"demand_merge_count\":" + std::to_string(r.demand_merge_count);
  out += ",\"total_miss_latency\":" + std::to_string(r.total_miss_latency);
  out += ",\"ipc_proxy\":" + fmt6(r.ipc_proxy);
  for (const auto& [name, buckets] : r.prefetch_counts) {
    uint64_t sum = 0;
    for (uint64_t c : buckets) sum += c;
    out += ",\"prefetch_total_" + name + "\":" + std::to_string(sum);
  }
  out += "}\n";

  for (const auto& [name, buckets] : r.prefetch_counts) {
    for (size_t b = 0; b < buckets.size(); ++b) {
      out += "{\"type\":\"prefetch_counts\",\"source\":\"" + name + "\"";
      out += ",\"bucket\":" + std::to_string(b);
      out += ",\"count\":" + std::to_string(buckets[b]);
      out += "}\n";
    }
  }
  for (size_t b = 0; b < r.protected_buffer_timeline.size(); ++b) {
    out += "{\"type\":\"protected_buffers\",\"bucket\":" + std::to_string(b);
    out += ",\"count\":" + fmt6(r.protected_buffer_timeline[b]);
    out += "}\n";
  }
  for (size_t i = 0; i < r.per_index_latency.size(); ++i) {
    out += "{\"type\":\"per_index_latency\",\"index\":" + std::to_string(i);
    out += ",\"mean_latency_cycles\":" + fmt6(r.per_index_latency[i]);
    out += "}\n";
  }
  return out;
}

}  // namespace prefender

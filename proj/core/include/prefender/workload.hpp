#ifndef PREFENDER_WORKLOAD_HPP_
#define PREFENDER_WORKLOAD_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "prefender/config.hpp"
#include "prefender/isa.hpp"
#include "prefender/report.hpp"
#include "prefender/sim.hpp"

namespace prefender {

// A benign workload as a straight-line trace; loop-body instructions share
// their pc across iterations.
//   SEQUENTIAL  loads stepping by line_size
//   STRIDED     loads stepping by stride_bytes
//   RANDOM      seed-derived addresses
//   DEP_CHAIN   each address comes from the previous loaded value
//   NESTED_2D   unrolled double loop over 128*i + 32*j
struct WorkloadProgram {
  Program prog;
  std::vector<std::pair<Addr, uint64_t>> pokes;
};

WorkloadProgram gen_workload(const WorkloadSpec& spec, const CacheConfig& cache);

struct WorkloadRun {
  RunSummary summary;
  ScenarioReport report;
};

WorkloadRun run_workload(const WorkloadSpec& spec, const SimConfig& cfg);

}  // namespace prefender

#endif  // PREFENDER_WORKLOAD_HPP_

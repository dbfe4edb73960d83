#ifndef PREFENDER_SELFTEST_HPP_
#define PREFENDER_SELFTEST_HPP_

#include <ostream>

namespace prefender {

// Quick invariant sweep over the tracker rule table, DiffMin arithmetic,
// cache LRU behavior, scale-buffer matching, and report determinism.
// Returns true when every check passes; one line per check on `out`.
bool run_selftest(std::ostream& out);

}  // namespace prefender

#endif  // PREFENDER_SELFTEST_HPP_

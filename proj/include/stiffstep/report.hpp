#pragma once

#include <cstddef>
#include <vector>

namespace stiffstep {

/// Work and communication tally of one solve or one explicit advance.
///
/// For PCG, `iterations` counts iterations and `residual_history` holds r.z
/// per iteration (initial value first). For explicit schemes `iterations`
/// counts sub-steps and the history stays empty. A local event is one
/// neighbour (halo) exchange; a global event is one all-rank reduction.
struct SolveReport {
  std::size_t iterations = 0;
  std::vector<double> residual_history;
  bool converged = true;
  std::size_t local_events = 0;
  std::size_t global_events = 0;

  SolveReport& operator+=(const SolveReport& other) {
    iterations += other.iterations;
    residual_history.insert(residual_history.end(), other.residual_history.begin(),
                            other.residual_history.end());
    converged = converged && other.converged;
    local_events += other.local_events;
    global_events += other.global_events;
    return *this;
  }
};

}  // namespace stiffstep

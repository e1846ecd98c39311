#pragma once

#include <cstddef>
#include <functional>

namespace riskband {

/// Thread budget for the parallel kernels. Results never depend on it: work
/// is split into items whose outputs are stored by item index.
struct ExecPolicy {
  std::size_t threads = default_threads();

  /// RISKBAND_THREADS if set and positive, otherwise the hardware concurrency.
  static std::size_t default_threads();
  static ExecPolicy serial() { return ExecPolicy{1}; }
};

/// Calls body(i) for i in [0, count) on up to policy.threads threads. The
/// first exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t count, const ExecPolicy& policy,
                  const std::function<void(std::size_t)>& body);

}  // namespace riskband

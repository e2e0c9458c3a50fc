#pragma once

#include <chrono>

#include "arena/common/random.hpp"

namespace arena::gateway {

/// Exponential backoff: base * factor^retry, scaled by a uniform jitter in
/// [1 - jitter, 1 + jitter].
struct Backoff {
  std::chrono::duration<double> base{0.5};
  double factor = 2.0;
  double jitter = 0.2;

  /// Delay before retry number `retry` (0-based).
  std::chrono::duration<double> delay(int retry, Rng& rng) const;
};

}  // namespace arena::gateway

// Process-wide seed for the power-iteration starts.  NSWIENER_SEED in the
// environment overrides the default, so norm estimates stay reproducible
// across runs while remaining steerable.
#pragma once

#include <cstdint>

namespace nswiener {

std::uint64_t power_iteration_seed();

}  // namespace nswiener

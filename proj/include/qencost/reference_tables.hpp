#pragma once

#include <array>
#include <cstdint>

namespace qencost {

// Measured minimal shot counts for the uniform-readout study at
// epsilon = 0.1, delta = 0.5, factor 100, indexed by register size
// n = 1..12. Shipped as the default dataset for the scaling fits.
inline constexpr std::array<std::int64_t, 12> kMinShotsMeasured{
    41,     462,    1961,    5907,    16001,   41401,
    99802,  225206, 511371,  1187631, 2604712, 5669580};

}  // namespace qencost

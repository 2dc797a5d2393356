#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bnsim/network.hpp"

namespace bnsim {

// Ground truth from exhaustive enumeration of the joint distribution.
struct ExactResult {
    std::vector<std::string> nodes;               // all variables, declaration order
    std::vector<std::vector<double>> posteriors;  // one normalized row per node
    double evidence_probability = 0.0;

    const std::vector<double>& posterior(std::string_view id) const;
};

inline constexpr std::uint64_t kDefaultStateCap = std::uint64_t(1) << 24;

// Brute-force posterior marginals: sums joint_probability over every full
// assignment consistent with `evidence`. Evidence nodes get point-mass
// rows. With empty evidence this returns the prior marginals.
//
// Throws CapacityError when the joint state space exceeds `state_cap` and
// ImpossibleEvidenceError when the evidence has probability zero.
ExactResult exact_inference(const Network& net, const Evidence& evidence,
                            std::uint64_t state_cap = kDefaultStateCap);

} // namespace bnsim

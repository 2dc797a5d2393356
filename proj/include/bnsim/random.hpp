#pragma once

#include <cstdint>
#include <random>

namespace bnsim {

// Reproducible uniform stream.
//
// The generator is pinned so runs can be replayed bit-for-bit anywhere:
//   engine   mt19937_64 seeded directly with `seed` (algorithm fixed by
//            the C++ standard, widely available in other languages)
//   uniform  next_uniform() = (engine() >> 11) * 2^-53, i.e. the top 53
//            bits of one 64-bit output mapped onto [0,1)
//   derive   derive_seed(master, i) applies the splitmix64 finalizer to
//            master + (i+1) * 0x9E3779B97F4A7C15
//
// Substreams derived per run (and per trial inside the run loops) make
// results independent of scheduling and of how many draws other trials
// consume.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    // One uniform draw on [0,1).
    double next_uniform() {
        ++position_;
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t position() const { return position_; }

    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
        std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Independent stream indexed off this stream's seed.
    RandomStream substream(std::uint64_t index) const {
        return RandomStream(derive_seed(seed_, index));
    }

private:
    std::uint64_t seed_;
    std::uint64_t position_ = 0;
    std::mt19937_64 engine_;
};

} // namespace bnsim

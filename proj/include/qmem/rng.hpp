// Copyright 2026 The qmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <limits>

namespace qmem {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Combines a master seed with stream coordinates into an independent stream seed.
inline constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                           std::uint64_t c = 0) {
    std::uint64_t h = splitmix64_mix(master + 0x9e3779b97f4a7c15ULL);
    h = splitmix64_mix(h ^ (a + 0x632be59bd9b4e019ULL));
    h = splitmix64_mix(h ^ (b + 0x85157af5ULL));
    h = splitmix64_mix(h ^ (c + 0x2545f4914f6cdd1dULL));
    return h;
}

/// SplitMix64 generator. Cheap to construct, so every trajectory gets its own.
///
/// Satisfies UniformRandomBitGenerator so <random> distributions work on it.
class RandomStream {
  public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        ++draws_;
        return splitmix64_mix(state_);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, k).
    std::uint32_t below(std::uint32_t k) {
        return static_cast<std::uint32_t>((static_cast<unsigned __int128>((*this)()) * k) >> 64);
    }

    bool coin() {
        return ((*this)() >> 63) != 0;
    }

    std::uint64_t draws() const {
        return draws_;
    }

  private:
    std::uint64_t state_;
    std::uint64_t draws_ = 0;
};

}  // namespace qmem

// Copyright 2026 The vmc Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VMC_RNG_HPP
#define VMC_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace vmc {

// Philox4x32-10 block function (Salmon et al., counter-based RNG).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Purposes used to separate independent streams derived from one seed.
enum class StreamPurpose : std::uint32_t {
  kParameterInit = 1,
  kChainInit = 2,
  kSweep = 3,
  kLanczosStart = 4,
  kTest = 99,
};

// Counter-based generator. A stream is identified by (seed, a, b, purpose);
// draws within the stream walk the low counter word. Streams never
// depend on the order in which other streams are consumed, which makes
// results independent of how work is split across threads.
class CounterRng {
 public:
  using result_type = std::uint32_t;

  CounterRng(std::uint64_t seed, std::uint32_t a, std::uint32_t b,
             StreamPurpose purpose);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n), unbiased. n must be positive.
  std::uint32_t below(std::uint32_t n);
  // Standard normal via Box-Muller.
  double normal();

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vmc

#endif  // VMC_RNG_HPP

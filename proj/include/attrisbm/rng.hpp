// Copyright 2026 The attrisbm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Random number plumbing.
//
// Every random operation draws from std::mt19937_64, whose output sequence
// is fixed by the C++ standard. Independent streams are derived from a user
// seed by mixing in a stream tag with the SplitMix64 finalizer, so e.g.
// community sampling and edge sampling can be reproduced separately.
//
// Note that the std:: distribution adaptors (binomial, poisson,
// uniform_real) are implementation-defined, so bit-identical output is
// guaranteed for a given standard library, not across vendors.

#ifndef ATTRISBM_RNG_HPP_
#define ATTRISBM_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace attrisbm {

using Engine = std::mt19937_64;

struct RngSeed {
  std::uint64_t value = 0;
};

// Stream tags. Values are part of the reproducibility contract; do not
// renumber.
enum class Stream : std::uint64_t {
  kCommunities = 0x636f6d6d,
  kEdges = 0x65646765,
  kBeliefPropagation = 0x62707270,
  kBranching = 0x6272616e,
};

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds a sequence of integers into a seed. Order matters.
inline std::uint64_t HashSeed(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = SplitMix64(seed);
  for (std::uint64_t p : parts) h = SplitMix64(h ^ SplitMix64(p));
  return h;
}

inline Engine MakeEngine(RngSeed seed, Stream stream) {
  return Engine(HashSeed(seed.value, {static_cast<std::uint64_t>(stream)}));
}

}  // namespace attrisbm

#endif  // ATTRISBM_RNG_HPP_

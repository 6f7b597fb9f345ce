//
// Copyright 2026 The dpform Authors
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
//

#ifndef DPFORM_RANDOM_H_
#define DPFORM_RANDOM_H_

#include <cstdint>
#include <random>

namespace dpform {

// splitmix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent seed for stream (a, b) of a master seed.
constexpr std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t a,
                                std::uint64_t b) {
  return Mix64(Mix64(Mix64(seed) ^ a) ^ b);
}

// Seeded standard-normal source. One stream per (master seed, trial,
// dimension) so trials can run in any order on any thread.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed, std::uint64_t trial = 0,
                       std::uint64_t dimension = 0)
      : engine_(MixSeed(seed, trial, dimension)) {}

  double StandardNormal() { return normal_(engine_); }
  double Gaussian(double sigma) { return sigma * normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace dpform

#endif  // DPFORM_RANDOM_H_

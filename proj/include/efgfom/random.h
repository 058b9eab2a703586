// Copyright 2026 The efgfom Authors
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


#ifndef EFGFOM_RANDOM_H_
#define EFGFOM_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>

namespace efgfom {

// Portable sampling on top of std::mt19937_64, whose output sequence is fixed
// by the C++ standard. The std:: distributions are implementation-defined, so
// every derived variate is computed here from raw 64-bit draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1) with 53 bits of resolution.
  double Uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Index uniform in [0, n). Bias is below 2^-40 for the sizes used here.
  std::size_t Index(std::size_t n) {
    return static_cast<std::size_t>(Uniform() * static_cast<double>(n)) % n;
  }

  double Exponential();

  // Symmetric Dirichlet(1) draw (uniform on the simplex) written into `out`.
  void Dirichlet(std::span<double> out);

  std::uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace efgfom

#endif  // EFGFOM_RANDOM_H_

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


#include "efgfom/random.h"

#include <cmath>

namespace efgfom {

double Rng::Exponential() { return -std::log(Uniform()); }

void Rng::Dirichlet(std::span<double> out) {
  double total = 0.0;
  for (double& v : out) {
    v = Exponential();
    total += v;
  }
  for (double& v : out) v /= total;
}

}  // namespace efgfom

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


#ifndef EFGFOM_VALIDATE_H_
#define EFGFOM_VALIDATE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "efgfom/games.h"
#include "efgfom/scext.h"

namespace efgfom {

// One checked property. `worst` is the measured worst-case residual in the
// units of `tolerance` (see each check for its direction).
struct InvariantResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tolerance = 0.0;
  long samples = 0;
  std::string detail;
};

struct ValidationReport {
  std::string source;
  std::vector<InvariantResult> results;
  bool passed() const;
  std::string ToJson() const;
};

struct ValidationOptions {
  std::uint64_t seed = 0;
  int strategy_samples = 1000;   // dilatability, linear max, conjugate oracle
  int hessian_samples = 100;
  int conjugate_samples = 100;   // random g for conjugate checks
  int diameter_pairs = 10000;
  // 0: EFGFOM_THREADS if set, else hardware concurrency.
  int threads = 0;
};

int ResolveThreads(int requested);

// Runs every treeplex suite on both players of `game`, plus chain/treeplex
// equivalence. Suites run in parallel; the report order is fixed.
ValidationReport ValidateGame(const GameInstance& game,
                              const ValidationOptions& options);
ValidationReport ValidateChain(const ScExtChain& chain,
                               const ValidationOptions& options);

// Quadratic form m^T H m by central differences of `gradient` along m, with a
// step that keeps x +- eps m strictly positive.
template <typename GradientFn>
double QuadraticForm(GradientFn&& gradient, const std::vector<double>& x,
                     const std::vector<double>& m);

// Every vertex of the treeplex (pure strategy in sequence form). Throws
// InvalidParameter beyond 10^6 vertices.
std::vector<SequenceVector> EnumerateVertices(const Treeplex& t);

}  // namespace efgfom

#include "efgfom/validate_inl.h"

#endif  // EFGFOM_VALIDATE_H_

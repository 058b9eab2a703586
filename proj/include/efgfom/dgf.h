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


#ifndef EFGFOM_DGF_H_
#define EFGFOM_DGF_H_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "efgfom/treeplex.h"

namespace efgfom {

enum class DgfKind {
  kDge,               // dilatable global entropy, weights gamma / w
  kDilatedEntropy,    // dilated entropy with the beta weights
  kDilatedEuclidean,  // dilated Euclidean with the beta weights
};

std::string_view DgfKindName(DgfKind kind);
std::optional<DgfKind> ParseDgfKind(std::string_view name);

// Per-decision-point weights plus the weight of the empty sequence.
struct DilatedWeights {
  double root = 0.0;
  std::vector<double> decision_points;
};

struct DgfWeights {
  DilatedWeights beta;
  DilatedWeights gamma;
  std::vector<double> w;  // per sequence; w[0] is the empty-sequence weight
};

// beta_j = 2 + 2 max_a sum_{j' in C_ja} beta_j', beta_root = 2 + 2 sum_{C_root}.
DilatedWeights ComputeBeta(const Treeplex& t);
// gamma_j = 1 + max_a sum_{j' in C_ja} gamma_j', gamma_root = 1 + sum_{C_root};
// w_ja = gamma_j - sum_{j' in C_ja} gamma_j', w_root = gamma_root - sum_{C_root}.
DgfWeights ComputeGammaW(const Treeplex& t);

// Average and maximum over {root} and every decision point.
struct WeightStats {
  double mean = 0.0;
  double max = 0.0;
};
WeightStats Summarize(const DilatedWeights& weights);

// A distance-generating function on a treeplex together with its constants.
// Every operation works on scale * d, where d is the unscaled DGF. With
// scale = M_Q the entropy DGFs are 1-strongly convex in the l1 norm, which is
// what the saddle-point solvers need.
struct ProximalSetup {
  DgfKind kind = DgfKind::kDge;
  double scale = 1.0;
  DilatedWeights dilation;  // beta, or gamma for the dilatable global entropy
  std::vector<double> w;    // dilatable global entropy only
  double max_l1 = 0.0;
  int depth = 0;
  double max_log_actions = 0.0;

  static ProximalSetup Make(const Treeplex& t, DgfKind kind, double scale = 1.0);
  // scale = M_Q for the entropy kinds, 1 for the Euclidean one.
  static ProximalSetup ForSolver(const Treeplex& t, DgfKind kind);
};

// Dilated DGF with entropy (or Euclidean) local regularizers, evaluated
// directly from its definition. Unreachable branches contribute 0.
double DilatedEntropyValue(const Treeplex& t, const DilatedWeights& alpha,
                           std::span<const double> x);
double DilatedEuclideanValue(const Treeplex& t, const DilatedWeights& alpha,
                             std::span<const double> x);
// sum_s w_s x_s log x_s + sum_j gamma_j x_{p_j} log |A_j|
double GlobalEntropyValue(const Treeplex& t, const DgfWeights& weights,
                          std::span<const double> x);

// Throws DomainError on negative or non-finite coordinates.
double Value(const ProximalSetup& setup, const Treeplex& t,
             std::span<const double> x);

// Throws DomainError on coordinates <= 0 (entropy kinds) or on parents <= 0.
SequenceVector Gradient(const ProximalSetup& setup, const Treeplex& t,
                        std::span<const double> x);

// argmax_{x in Q} { g.x - scale * d(x) }. Local softmaxes subtract their max
// exponent; non-finite inputs raise OverflowGuard. If `max_value` is given it
// receives the attained maximum (the conjugate value).
SequenceVector ConjugateGradient(const ProximalSetup& setup, const Treeplex& t,
                                 std::span<const double> g,
                                 double* max_value = nullptr);

// argmin_{x in Q} { g.x + D(x || center) } = grad d*(-g + grad d(center)).
SequenceVector Prox(const ProximalSetup& setup, const Treeplex& t,
                    std::span<const double> center, std::span<const double> g);

// d(x) - d(center) - grad d(center).(x - center)
double Bregman(const ProximalSetup& setup, const Treeplex& t,
               std::span<const double> x, std::span<const double> center);

// DGE: M_Q^2 max_j log|A_j|; dilated entropy: 2^(depth+2) M_Q^2 max_j log|A_j|;
// both multiplied by scale.
double DiameterBound(const ProximalSetup& setup, const Treeplex& t);

// Smallest probability kept by the conjugate map. Softmax terms that underflow
// are raised to this floor so iterates stay strictly interior.
inline constexpr double kProbabilityFloor = 1e-280;

}  // namespace efgfom

#endif  // EFGFOM_DGF_H_

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


#ifndef EFGFOM_SCEXT_H_
#define EFGFOM_SCEXT_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "efgfom/dgf.h"
#include "efgfom/random.h"
#include "efgfom/sparse_matrix.h"
#include "efgfom/treeplex.h"

namespace efgfom {

inline constexpr int kChainFormatVersion = 1;

// One term a[i] * x_p[i] of a scaling function, p < current block.
struct ChainCoefficient {
  int ref_block = 0;
  int ref_index = 0;
  double value = 0.0;
};

// Block k is the simplex of size `size` scaled by
//   h(x) = sum of coeff.value * x[coeff.ref_block][coeff.ref_index].
// A block without coefficients is unscaled (h = 1, ||a||_0 = 0).
struct ChainBlock {
  int size = 0;
  std::vector<ChainCoefficient> scale;
};

// X_1 ext^{h_1} X_2 ... ext^{h_{n-1}} X_n with every X_k a simplex. Points
// are flat vectors; block k occupies [offset(k), offset(k) + size).
class ScExtChain {
 public:
  ScExtChain() = default;
  // Structural checks only. Throws EmptyActionSet (size < 1),
  // CyclicStructure (reference to the same or a later block),
  // InvalidParameter (index out of range or repeated), InvalidCoefficient
  // (value outside [0, 1] or not finite).
  static ScExtChain Build(std::vector<ChainBlock> blocks);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int dim() const { return dim_; }
  const ChainBlock& block(int k) const { return blocks_[k]; }
  const std::vector<ChainBlock>& blocks() const { return blocks_; }
  int offset(int k) const { return offsets_[k]; }
  int size(int k) const { return blocks_[k].size; }
  bool scaled(int k) const { return !blocks_[k].scale.empty(); }
  // h_{k-1} evaluated at x (1 for unscaled blocks).
  double Scale(int k, std::span<const double> x) const;
  // Flat coordinate of a coefficient reference.
  int Coordinate(const ChainCoefficient& c) const {
    return offsets_[c.ref_block] + c.ref_index;
  }

 private:
  std::vector<ChainBlock> blocks_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

bool operator==(const ScExtChain& a, const ScExtChain& b);

// Sampling checks on 100 interior points: h <= 1 (else InvalidCoefficient)
// and h > 1e-12 (else NonPositiveScale). Returns the first failure.
std::optional<Error> ValidateScales(const ScExtChain& chain, std::uint64_t seed);

// One block per decision point in top-down order, scaled by the indicator of
// the parent sequence. Chain coordinate i is sequence i + 1.
ScExtChain ChainFromTreeplex(const Treeplex& t);
// Sequence-form vector (with x_empty = 1) to chain point and back.
std::vector<double> SequenceToChain(std::span<const double> x);
SequenceVector ChainToSequence(std::span<const double> z);

struct ChainWeights {
  std::vector<double> alpha_dilated;  // alpha_n = 2 recursion
  std::vector<double> alpha_dge;      // alpha_n = 1 recursion
};
ChainWeights ComputeChainWeights(const ScExtChain& chain);

// Dilated entropy form:
//   sum_k alpha_k (h_{k-1} log s_k + sum_i x_k[i] log(x_k[i] / h_{k-1}))
double ChainDilatedValue(const ScExtChain& chain, std::span<const double> alpha,
                         std::span<const double> x);
// Global entropy form:
//   sum_k alpha_k sum_i x_k[i] log x_k[i] - sum_k alpha_k h log h
//   + sum_k alpha_k h log s_k
double ChainGlobalValue(const ScExtChain& chain, std::span<const double> alpha,
                        std::span<const double> x);
std::vector<double> ChainDilatedGradient(const ScExtChain& chain,
                                         std::span<const double> alpha,
                                         std::span<const double> x);
std::vector<double> ChainGlobalGradient(const ScExtChain& chain,
                                        std::span<const double> alpha,
                                        std::span<const double> x);
// argmax_{x in X} g.x - psi(x) for the dilated entropy form with weights alpha
// (the same point for the global form, which agrees with it on X).
std::vector<double> ChainConjugateGradient(const ScExtChain& chain,
                                           std::span<const double> alpha,
                                           std::span<const double> g,
                                           double* max_value = nullptr);

struct ChainLinearMax {
  std::vector<double> vertex;
  double value = 0.0;
};
// Backward max-DP; ties go to the lowest index.
ChainLinearMax ChainLinearMaximize(const ScExtChain& chain,
                                   std::span<const double> g);
double ChainLinearMaximizeValue(const ScExtChain& chain,
                                std::span<const double> g);
// M_X
double ChainMaxL1(const ScExtChain& chain);
bool IsChainPoint(const ScExtChain& chain, std::span<const double> x, double tol);
// Dirichlet(1) per block pushed forward through the scales.
std::vector<double> SampleChainPoint(const ScExtChain& chain, Rng& rng);
std::vector<double> UniformChainPoint(const ScExtChain& chain);
// Every point that picks one coordinate per block. Throws InvalidParameter
// above 10 blocks or 10^6 points.
std::vector<std::vector<double>> EnumerateChainVertices(const ScExtChain& chain);

// Entropy DGF on a chain scaled by `scale`: dilated entropy with
// alpha_dilated, or the global form with alpha_dge.
struct ChainSetup {
  DgfKind kind = DgfKind::kDge;
  double scale = 1.0;
  std::vector<double> alpha;
  double max_l1 = 0.0;

  // Throws InvalidParameter for the Euclidean kind.
  static ChainSetup Make(const ScExtChain& chain, DgfKind kind, double scale = 1.0);
  // scale = M_X
  static ChainSetup ForSolver(const ScExtChain& chain, DgfKind kind);
};

double Value(const ChainSetup& setup, const ScExtChain& chain,
             std::span<const double> x);
std::vector<double> Gradient(const ChainSetup& setup, const ScExtChain& chain,
                             std::span<const double> x);
std::vector<double> ConjugateGradient(const ChainSetup& setup,
                                      const ScExtChain& chain,
                                      std::span<const double> g,
                                      double* max_value = nullptr);
std::vector<double> Prox(const ChainSetup& setup, const ScExtChain& chain,
                         std::span<const double> center,
                         std::span<const double> g);
double Bregman(const ChainSetup& setup, const ScExtChain& chain,
               std::span<const double> x, std::span<const double> center);
// scale * max_{x in X} sum_k alpha_k h_{k-1}(x) log s_k, an upper bound on
// max d - min d since the DGF is nonnegative on X.
double DiameterBound(const ChainSetup& setup, const ScExtChain& chain);

// Chain file, optionally carrying an opponent chain and a payoff matrix
// (rows index the first chain, columns the opponent).
struct ChainFile {
  ScExtChain chain;
  std::optional<ScExtChain> opponent;
  std::optional<SparseMatrix> payoff;
};

std::string SerializeChainFile(const ChainFile& file);
// Throws ParseError, SchemaVersionMismatch, InvalidCoefficient,
// NonPositiveScale.
ChainFile ParseChainFile(const std::string& text);
void SaveChainFile(const ChainFile& file, const std::filesystem::path& path);
ChainFile LoadChainFile(const std::filesystem::path& path);

// Matching pennies as a pair of one-block chains.
ChainFile MatchingPennies();

}  // namespace efgfom

#endif  // EFGFOM_SCEXT_H_

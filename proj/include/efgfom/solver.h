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


#ifndef EFGFOM_SOLVER_H_
#define EFGFOM_SOLVER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "efgfom/dgf.h"
#include "efgfom/games.h"
#include "efgfom/scext.h"
#include "efgfom/sparse_matrix.h"
#include "efgfom/treeplex.h"

namespace efgfom {

// A compact convex set together with a 1-strongly convex (scaled) DGF.
class Domain {
 public:
  virtual ~Domain() = default;
  virtual int dim() const = 0;
  // argmin d, i.e. the conjugate gradient at 0.
  virtual std::vector<double> Center() const = 0;
  // argmax_x {g.x - d(x)}; `max_value` receives d*(g).
  virtual std::vector<double> ConjugateGradient(std::span<const double> g,
                                                double* max_value = nullptr) const = 0;
  // argmin_x {g.x + D(x || center)}
  virtual std::vector<double> Prox(std::span<const double> center,
                                   std::span<const double> g) const = 0;
  virtual double Value(std::span<const double> x) const = 0;
  // max_x g.x over the domain.
  virtual double LinearMaximizeValue(std::span<const double> g) const = 0;
  virtual bool IsFeasible(std::span<const double> x, double tol) const = 0;
  // Upper bound on the DGF diameter (already scaled).
  virtual double DiameterBound() const = 0;
  virtual std::string Describe() const = 0;
};

class TreeplexDomain : public Domain {
 public:
  // Uses ProximalSetup::ForSolver. The Euclidean kind is rejected with
  // InvalidParameter.
  TreeplexDomain(Treeplex treeplex, DgfKind kind);

  const Treeplex& treeplex() const { return treeplex_; }
  const ProximalSetup& setup() const { return setup_; }

  int dim() const override { return treeplex_.num_sequences(); }
  std::vector<double> Center() const override;
  std::vector<double> ConjugateGradient(std::span<const double> g,
                                        double* max_value) const override;
  std::vector<double> Prox(std::span<const double> center,
                           std::span<const double> g) const override;
  double Value(std::span<const double> x) const override;
  double LinearMaximizeValue(std::span<const double> g) const override;
  bool IsFeasible(std::span<const double> x, double tol) const override;
  double DiameterBound() const override { return diameter_; }
  std::string Describe() const override;

 private:
  Treeplex treeplex_;
  ProximalSetup setup_;
  double diameter_ = 0.0;
};

class ChainDomain : public Domain {
 public:
  // Uses ChainSetup::ForSolver.
  ChainDomain(ScExtChain chain, DgfKind kind);

  const ScExtChain& chain() const { return chain_; }
  const ChainSetup& setup() const { return setup_; }

  int dim() const override { return chain_.dim(); }
  std::vector<double> Center() const override;
  std::vector<double> ConjugateGradient(std::span<const double> g,
                                        double* max_value) const override;
  std::vector<double> Prox(std::span<const double> center,
                           std::span<const double> g) const override;
  double Value(std::span<const double> x) const override;
  double LinearMaximizeValue(std::span<const double> g) const override;
  bool IsFeasible(std::span<const double> x, double tol) const override;
  double DiameterBound() const override { return diameter_; }
  std::string Describe() const override;

 private:
  ScExtChain chain_;
  ChainSetup setup_;
  double diameter_ = 0.0;
};

// min_{x in X} max_{y in Y} x^T A y
struct SaddlePointProblem {
  std::shared_ptr<const Domain> x;
  std::shared_ptr<const Domain> y;
  SparseMatrix payoff;
  double opnorm = 0.0;  // max |A_ij|

  // Throws InvalidParameter on dimension mismatch.
  static SaddlePointProblem Make(std::shared_ptr<const Domain> x,
                                 std::shared_ptr<const Domain> y,
                                 SparseMatrix payoff);
};

// Both players of a game with the same DGF kind.
SaddlePointProblem ProblemFromGame(const GameInstance& game, DgfKind kind);
// Needs the opponent chain and the payoff; InvalidParameter otherwise.
SaddlePointProblem ProblemFromChainFile(const ChainFile& file, DgfKind kind);

// max_y x^T A y - min_x x^T A y
double SaddleGap(const SaddlePointProblem& p, std::span<const double> x,
                 std::span<const double> y);

enum class Algorithm { kEgt, kMirrorProx, kEgtAs };
std::string_view AlgorithmName(Algorithm alg);
std::optional<Algorithm> ParseAlgorithm(std::string_view name);

// EGT: 4 ||A|| sqrt(omega_x omega_y) / (T + 1); MP: ||A|| (omega_x + omega_y) / (2T).
// NaN for EGT/AS, which has no guarantee. Throws InvalidParameter if T < 1.
double TheoreticalBound(Algorithm alg, long iterations, double opnorm,
                        double omega_x, double omega_y);

// Iterates of the excessive gap technique.
struct EgtState {
  std::vector<double> x;
  std::vector<double> y;
  double mu_x = 0.0;
  double mu_y = 0.0;
  double tau = 0.0;  // step of the last iteration
  long iteration = 0;
  long gradient_computations = 0;  // products with A or A^T
};

// f_{mu_y}(x) = max_y {x^T A y - mu_y d_y(y)} and
// g_{mu_x}(y) = min_x {x^T A y + mu_x d_x(x)}, given A^T x and A y.
struct SmoothedValues {
  double f = 0.0;
  double g = 0.0;
  double excessive_gap() const { return g - f; }
};
SmoothedValues EvaluateSmoothed(const SaddlePointProblem& p, const EgtState& s,
                                std::span<const double> atx,
                                std::span<const double> ay);

class Egt {
 public:
  // Initialize with mu_x = mu_y = mu (||A|| if not given).
  explicit Egt(const SaddlePointProblem& p, std::optional<double> mu = std::nullopt);
  // t += 1, tau = 2 / (t + 2); ShrinkX on even t, ShrinkY on odd t.
  void Iterate();
  const EgtState& state() const { return state_; }
  // Costs two products; not counted.
  SmoothedValues Smoothed() const;

  // One shrink step with an arbitrary tau in (0, 1), from `s`. `ay` (resp.
  // `atx`) is A y (resp. A^T x) at the current iterate. Each call performs two
  // products and adds them to the count.
  static EgtState ShrinkX(const SaddlePointProblem& p, const EgtState& s,
                          std::span<const double> ay, double tau);
  static EgtState ShrinkY(const SaddlePointProblem& p, const EgtState& s,
                          std::span<const double> atx, double tau);
  // Initialize given A^T x_center (two products if not supplied, else one).
  static EgtState Initialize(const SaddlePointProblem& p, double mu,
                             const std::vector<double>* atx_center = nullptr);

 private:
  const SaddlePointProblem& p_;
  EgtState state_;
};

struct EgtAsOptions {
  double mu_start = 1e-6;
  double mu_growth = 1.2;
  double fit_target = 0.1;
  double tau_start = 0.5;
  double tau_min = 1e-12;
};

// EGT with aggressive stepsizing, mu balancing and initial mu fitting.
class EgtAs {
 public:
  explicit EgtAs(const SaddlePointProblem& p, EgtAsOptions options = {});
  // One accepted step. Rejected attempts roll back and halve tau; throws
  // StallError once tau < tau_min.
  void Iterate();
  const EgtState& state() const { return state_; }
  double fitted_mu() const { return fitted_mu_; }
  long rejected_steps() const { return rejected_; }
  SmoothedValues Smoothed() const;

 private:
  bool Accepts(const EgtState& candidate, std::vector<double>* atx,
               std::vector<double>* ay) const;

  const SaddlePointProblem& p_;
  EgtAsOptions options_;
  EgtState state_;
  std::vector<double> atx_;
  std::vector<double> ay_;
  double tau_ = 0.5;
  double fitted_mu_ = 0.0;
  long rejected_ = 0;
};

// Mirror prox with constant stepsize eta = 1 / ||A||; the output is the
// eta-weighted average of the w iterates.
class MirrorProx {
 public:
  explicit MirrorProx(const SaddlePointProblem& p);
  void Iterate();
  const std::vector<double>& x() const { return avg_x_; }
  const std::vector<double>& y() const { return avg_y_; }
  const std::vector<double>& z_x() const { return z_x_; }
  const std::vector<double>& z_y() const { return z_y_; }
  long iteration() const { return iteration_; }
  long gradient_computations() const { return gradient_computations_; }
  double eta() const { return eta_; }

 private:
  const SaddlePointProblem& p_;
  double eta_ = 1.0;
  std::vector<double> z_x_, z_y_;
  std::vector<double> sum_x_, sum_y_;
  std::vector<double> avg_x_, avg_y_;
  double weight_ = 0.0;
  long iteration_ = 0;
  long gradient_computations_ = 0;
};

struct IterationRecord {
  long iteration = 0;
  long gradient_computations = 0;
  double gap = 0.0;
  double mu_x = 0.0;
  double mu_y = 0.0;
  double tau = 0.0;
  double bound = 0.0;
  double wall_time_ms = 0.0;
};

struct SolveOptions {
  Algorithm algorithm = Algorithm::kEgt;
  long iterations = 1000;
  // Stop once this many products have been spent (checked after each
  // iteration).
  std::optional<long> gradient_budget;
  // Log every iteration up to this value, then powers of two (and the last).
  long log_dense_until = 512;
  bool record_wall_time = false;
  EgtAsOptions egt_as;
};

struct SolveResult {
  std::vector<IterationRecord> log;
  std::vector<double> x;
  std::vector<double> y;
  double omega_x = 0.0;
  double omega_y = 0.0;
  double final_gap = 0.0;
  long gradient_computations = 0;
  long iterations = 0;
  // gap <= bound at every logged iteration (true for EGT/AS, which has none).
  bool bound_satisfied = true;
  std::optional<double> fitted_mu;
};

bool IsLoggedIteration(long t, long dense_until);

// Throws NumericalFailure when an iterate leaves its domain by more than 1e-6
// or stops being strictly positive where the DGF needs it.
SolveResult Solve(const SaddlePointProblem& p, const SolveOptions& options);

inline constexpr std::string_view kIterationLogHeader =
    "iteration,gradient_computations,gap,mu_x,mu_y,tau,bound,wall_time_ms";
std::string IterationLogCsv(const std::vector<IterationRecord>& log);

}  // namespace efgfom

#endif  // EFGFOM_SOLVER_H_

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


#include "efgfom/solver.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

namespace efgfom {
namespace {

constexpr double kFeasibilityTol = 1e-6;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// v / mu, treating the product with a zero matrix (mu = ||A|| = 0) as zero.
std::vector<double> Divide(std::span<const double> v, double mu) {
  std::vector<double> out(v.begin(), v.end());
  for (double& e : out) e = mu > 0.0 ? e / mu : 0.0;
  return out;
}

std::vector<double> Scaled(std::span<const double> v, double c) {
  std::vector<double> out(v.begin(), v.end());
  for (double& e : out) e *= c;
  return out;
}

// (1 - tau) a + tau b
std::vector<double> Mix(std::span<const double> a, std::span<const double> b,
                        double tau) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - tau) * a[i] + tau * b[i];
  return out;
}

std::vector<double> Times(const SaddlePointProblem& p, std::span<const double> y,
                          long* count) {
  std::vector<double> out(p.payoff.rows());
  p.payoff.Multiply(y, out);
  ++*count;
  return out;
}

std::vector<double> TimesTransposed(const SaddlePointProblem& p,
                                    std::span<const double> x, long* count) {
  std::vector<double> out(p.payoff.cols());
  p.payoff.MultiplyTransposed(x, out);
  ++*count;
  return out;
}

void CheckIterate(const Domain& d, std::span<const double> v, const char* name,
                  long iteration) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      throw Error(ErrorKind::kNumericalFailure,
                  std::string(name) + "[" + std::to_string(i) + "] = " +
                      std::to_string(v[i]) + " at iteration " +
                      std::to_string(iteration) + " is not strictly positive");
    }
  }
  if (!d.IsFeasible(v, kFeasibilityTol)) {
    throw Error(ErrorKind::kNumericalFailure,
                std::string(name) + " left its domain at iteration " +
                    std::to_string(iteration));
  }
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

TreeplexDomain::TreeplexDomain(Treeplex treeplex, DgfKind kind)
    : treeplex_(std::move(treeplex)) {
  if (kind == DgfKind::kDilatedEuclidean) {
    throw Error(ErrorKind::kInvalidParameter,
                "the solvers need an entropy DGF (dge or dilated-entropy)");
  }
  setup_ = ProximalSetup::ForSolver(treeplex_, kind);
  diameter_ = efgfom::DiameterBound(setup_, treeplex_);
}

std::vector<double> TreeplexDomain::Center() const {
  std::vector<double> zero(dim(), 0.0);
  return efgfom::ConjugateGradient(setup_, treeplex_, zero);
}

std::vector<double> TreeplexDomain::ConjugateGradient(std::span<const double> g,
                                                      double* max_value) const {
  return efgfom::ConjugateGradient(setup_, treeplex_, g, max_value);
}

std::vector<double> TreeplexDomain::Prox(std::span<const double> center,
                                         std::span<const double> g) const {
  return efgfom::Prox(setup_, treeplex_, center, g);
}

double TreeplexDomain::Value(std::span<const double> x) const {
  return efgfom::Value(setup_, treeplex_, x);
}

double TreeplexDomain::LinearMaximizeValue(std::span<const double> g) const {
  return efgfom::LinearMaximizeValue(treeplex_, g);
}

bool TreeplexDomain::IsFeasible(std::span<const double> x, double tol) const {
  return IsStrategy(treeplex_, x, tol);
}

std::string TreeplexDomain::Describe() const {
  return "treeplex(" + std::to_string(treeplex_.num_sequences()) + " sequences, " +
         std::string(DgfKindName(setup_.kind)) + ")";
}

ChainDomain::ChainDomain(ScExtChain chain, DgfKind kind) : chain_(std::move(chain)) {
  setup_ = ChainSetup::ForSolver(chain_, kind);
  diameter_ = efgfom::DiameterBound(setup_, chain_);
}

std::vector<double> ChainDomain::Center() const {
  std::vector<double> zero(dim(), 0.0);
  return efgfom::ConjugateGradient(setup_, chain_, zero);
}

std::vector<double> ChainDomain::ConjugateGradient(std::span<const double> g,
                                                   double* max_value) const {
  return efgfom::ConjugateGradient(setup_, chain_, g, max_value);
}

std::vector<double> ChainDomain::Prox(std::span<const double> center,
                                      std::span<const double> g) const {
  return efgfom::Prox(setup_, chain_, center, g);
}

double ChainDomain::Value(std::span<const double> x) const {
  return efgfom::Value(setup_, chain_, x);
}

double ChainDomain::LinearMaximizeValue(std::span<const double> g) const {
  return ChainLinearMaximizeValue(chain_, g);
}

bool ChainDomain::IsFeasible(std::span<const double> x, double tol) const {
  return IsChainPoint(chain_, x, tol);
}

std::string ChainDomain::Describe() const {
  return "chain(" + std::to_string(chain_.num_blocks()) + " blocks, " +
         std::to_string(chain_.dim()) + " coordinates, " +
         std::string(DgfKindName(setup_.kind)) + ")";
}

SaddlePointProblem SaddlePointProblem::Make(std::shared_ptr<const Domain> x,
                                            std::shared_ptr<const Domain> y,
                                            SparseMatrix payoff) {
  if (payoff.rows() != x->dim() || payoff.cols() != y->dim()) {
    throw Error(ErrorKind::kInvalidParameter,
                "payoff matrix is " + std::to_string(payoff.rows()) + "x" +
                    std::to_string(payoff.cols()) + " but the domains have " +
                    std::to_string(x->dim()) + " and " + std::to_string(y->dim()) +
                    " coordinates");
  }
  SaddlePointProblem p;
  p.x = std::move(x);
  p.y = std::move(y);
  p.opnorm = payoff.MaxAbs();
  p.payoff = std::move(payoff);
  return p;
}

SaddlePointProblem ProblemFromGame(const GameInstance& game, DgfKind kind) {
  return SaddlePointProblem::Make(std::make_shared<TreeplexDomain>(game.treeplex_x, kind),
                                  std::make_shared<TreeplexDomain>(game.treeplex_y, kind),
                                  game.payoff);
}

SaddlePointProblem ProblemFromChainFile(const ChainFile& file, DgfKind kind) {
  if (!file.opponent || !file.payoff) {
    throw Error(ErrorKind::kInvalidParameter,
                "chain file has no opponent chain and payoff");
  }
  return SaddlePointProblem::Make(std::make_shared<ChainDomain>(file.chain, kind),
                                  std::make_shared<ChainDomain>(*file.opponent, kind),
                                  *file.payoff);
}

double SaddleGap(const SaddlePointProblem& p, std::span<const double> x,
                 std::span<const double> y) {
  std::vector<double> atx(p.payoff.cols());
  std::vector<double> ay(p.payoff.rows());
  p.payoff.MultiplyTransposed(x, atx);
  p.payoff.Multiply(y, ay);
  for (double& v : ay) v = -v;
  // max_y x^T A y + max_x (-A y).x
  return p.y->LinearMaximizeValue(atx) + p.x->LinearMaximizeValue(ay);
}

std::string_view AlgorithmName(Algorithm alg) {
  switch (alg) {
    case Algorithm::kEgt: return "egt";
    case Algorithm::kMirrorProx: return "mp";
    case Algorithm::kEgtAs: return "egt-as";
  }
  return "unknown";
}

std::optional<Algorithm> ParseAlgorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kEgt, Algorithm::kMirrorProx, Algorithm::kEgtAs}) {
    if (AlgorithmName(a) == name) return a;
  }
  return std::nullopt;
}

double TheoreticalBound(Algorithm alg, long iterations, double opnorm,
                        double omega_x, double omega_y) {
  if (iterations < 1) {
    throw Error(ErrorKind::kInvalidParameter, "bound needs T >= 1");
  }
  const double t = static_cast<double>(iterations);
  switch (alg) {
    case Algorithm::kEgt:
      return 4.0 * opnorm * std::sqrt(omega_x * omega_y) / (t + 1.0);
    case Algorithm::kMirrorProx:
      return opnorm * (omega_x + omega_y) / (2.0 * t);
    case Algorithm::kEgtAs:
      return kNaN;
  }
  return kNaN;
}

SmoothedValues EvaluateSmoothed(const SaddlePointProblem& p, const EgtState& s,
                                std::span<const double> atx,
                                std::span<const double> ay) {
  SmoothedValues out;
  double fy = 0.0;
  p.y->ConjugateGradient(Divide(atx, s.mu_y), &fy);
  out.f = s.mu_y * fy;
  std::vector<double> neg = Divide(ay, s.mu_x);
  for (double& v : neg) v = -v;
  double gx = 0.0;
  p.x->ConjugateGradient(neg, &gx);
  out.g = -s.mu_x * gx;
  return out;
}

EgtState Egt::Initialize(const SaddlePointProblem& p, double mu,
                         const std::vector<double>* atx_center) {
  EgtState s;
  s.mu_x = mu;
  s.mu_y = mu;
  const std::vector<double> center = p.x->Center();
  std::vector<double> atx = atx_center ? *atx_center
                                       : TimesTransposed(p, center, &s.gradient_computations);
  s.y = p.y->ConjugateGradient(Divide(atx, s.mu_y), nullptr);
  const std::vector<double> ay = Times(p, s.y, &s.gradient_computations);
  s.x = p.x->Prox(center, Divide(ay, s.mu_x));
  return s;
}

EgtState Egt::ShrinkX(const SaddlePointProblem& p, const EgtState& s,
                      std::span<const double> ay, double tau) {
  EgtState n = s;
  std::vector<double> neg = Divide(ay, s.mu_x);
  for (double& v : neg) v = -v;
  const std::vector<double> x_bar = p.x->ConjugateGradient(neg, nullptr);
  const std::vector<double> x_hat = Mix(s.x, x_bar, tau);
  const std::vector<double> atx_hat = TimesTransposed(p, x_hat, &n.gradient_computations);
  const std::vector<double> y_bar = p.y->ConjugateGradient(Divide(atx_hat, s.mu_y), nullptr);
  const std::vector<double> ay_bar = Times(p, y_bar, &n.gradient_computations);
  const double step = s.mu_x > 0.0 ? tau / ((1.0 - tau) * s.mu_x) : 0.0;
  const std::vector<double> x_tilde = p.x->Prox(x_bar, Scaled(ay_bar, step));
  n.x = Mix(s.x, x_tilde, tau);
  n.y = Mix(s.y, y_bar, tau);
  n.mu_x = (1.0 - tau) * s.mu_x;
  n.tau = tau;
  return n;
}

EgtState Egt::ShrinkY(const SaddlePointProblem& p, const EgtState& s,
                      std::span<const double> atx, double tau) {
  EgtState n = s;
  const std::vector<double> y_bar = p.y->ConjugateGradient(Divide(atx, s.mu_y), nullptr);
  const std::vector<double> y_hat = Mix(s.y, y_bar, tau);
  std::vector<double> neg = Divide(Times(p, y_hat, &n.gradient_computations), s.mu_x);
  for (double& v : neg) v = -v;
  const std::vector<double> x_bar = p.x->ConjugateGradient(neg, nullptr);
  const std::vector<double> atx_bar = TimesTransposed(p, x_bar, &n.gradient_computations);
  const double step = s.mu_y > 0.0 ? -tau / ((1.0 - tau) * s.mu_y) : 0.0;
  const std::vector<double> y_tilde = p.y->Prox(y_bar, Scaled(atx_bar, step));
  n.y = Mix(s.y, y_tilde, tau);
  n.x = Mix(s.x, x_bar, tau);
  n.mu_y = (1.0 - tau) * s.mu_y;
  n.tau = tau;
  return n;
}

Egt::Egt(const SaddlePointProblem& p, std::optional<double> mu)
    : p_(p), state_(Initialize(p, mu.value_or(p.opnorm))) {}

void Egt::Iterate() {
  const long t = state_.iteration + 1;
  const double tau = 2.0 / (static_cast<double>(t) + 2.0);
  EgtState next;
  if (t % 2 == 0) {
    const std::vector<double> ay = Times(p_, state_.y, &state_.gradient_computations);
    next = ShrinkX(p_, state_, ay, tau);
  } else {
    const std::vector<double> atx =
        TimesTransposed(p_, state_.x, &state_.gradient_computations);
    next = ShrinkY(p_, state_, atx, tau);
  }
  next.iteration = t;
  state_ = std::move(next);
}

SmoothedValues Egt::Smoothed() const {
  long unused = 0;
  return EvaluateSmoothed(p_, state_, TimesTransposed(p_, state_.x, &unused),
                          Times(p_, state_.y, &unused));
}

EgtAs::EgtAs(const SaddlePointProblem& p, EgtAsOptions options)
    : p_(p), options_(options), tau_(options.tau_start) {
  if (!(options_.mu_start > 0.0) || !(options_.mu_growth > 1.0) ||
      !(options_.tau_start > 0.0 && options_.tau_start < 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "invalid EGT/AS options");
  }
  long count = 0;
  const std::vector<double> atx_center =
      TimesTransposed(p_, p_.x->Center(), &count);
  double mu = options_.mu_start;
  while (true) {
    // The theoretical value mu = ||A|| always satisfies the invariant, so the
    // search stops there at the latest.
    const bool last = mu >= p_.opnorm;
    if (last) mu = std::max(p_.opnorm, options_.mu_start);
    EgtState s = Egt::Initialize(p_, mu, &atx_center);
    count += s.gradient_computations;
    s.gradient_computations = 0;
    std::vector<double> atx = TimesTransposed(p_, s.x, &count);
    std::vector<double> ay = Times(p_, s.y, &count);
    const SmoothedValues v = EvaluateSmoothed(p_, s, atx, ay);
    if (last || v.excessive_gap() > options_.fit_target) {
      state_ = std::move(s);
      atx_ = std::move(atx);
      ay_ = std::move(ay);
      break;
    }
    mu *= options_.mu_growth;
  }
  state_.gradient_computations = count;
  fitted_mu_ = mu;
}

bool EgtAs::Accepts(const EgtState& candidate, std::vector<double>* atx,
                    std::vector<double>* ay) const {
  long unused = 0;
  *atx = TimesTransposed(p_, candidate.x, &unused);
  *ay = Times(p_, candidate.y, &unused);
  const SmoothedValues v = EvaluateSmoothed(p_, candidate, *atx, *ay);
  const double slack = 1e-12 * std::max({1.0, std::abs(v.f), std::abs(v.g)});
  return v.f <= v.g + slack;
}

void EgtAs::Iterate() {
  while (true) {
    EgtState candidate = state_.mu_x >= state_.mu_y
                             ? Egt::ShrinkX(p_, state_, ay_, tau_)
                             : Egt::ShrinkY(p_, state_, atx_, tau_);
    candidate.iteration = state_.iteration + 1;
    candidate.gradient_computations += 2;  // the invariant check below
    std::vector<double> atx, ay;
    if (Accepts(candidate, &atx, &ay)) {
      state_ = std::move(candidate);
      atx_ = std::move(atx);
      ay_ = std::move(ay);
      return;
    }
    state_.gradient_computations = candidate.gradient_computations;
    ++rejected_;
    tau_ *= 0.5;
    if (tau_ < options_.tau_min) {
      throw Error(ErrorKind::kStallError,
                  "EGT/AS stepsize fell below " + FormatDouble(options_.tau_min) +
                      " at iteration " + std::to_string(state_.iteration + 1));
    }
  }
}

SmoothedValues EgtAs::Smoothed() const {
  return EvaluateSmoothed(p_, state_, atx_, ay_);
}

MirrorProx::MirrorProx(const SaddlePointProblem& p)
    : p_(p),
      eta_(p.opnorm > 0.0 ? 1.0 / p.opnorm : 1.0),
      z_x_(p.x->Center()),
      z_y_(p.y->Center()),
      sum_x_(z_x_.size(), 0.0),
      sum_y_(z_y_.size(), 0.0),
      avg_x_(z_x_),
      avg_y_(z_y_) {}

void MirrorProx::Iterate() {
  const std::vector<double> az_y = Times(p_, z_y_, &gradient_computations_);
  const std::vector<double> atz_x = TimesTransposed(p_, z_x_, &gradient_computations_);
  const std::vector<double> w_x = p_.x->Prox(z_x_, Scaled(az_y, eta_));
  const std::vector<double> w_y = p_.y->Prox(z_y_, Scaled(atz_x, -eta_));
  const std::vector<double> aw_y = Times(p_, w_y, &gradient_computations_);
  const std::vector<double> atw_x = TimesTransposed(p_, w_x, &gradient_computations_);
  z_x_ = p_.x->Prox(z_x_, Scaled(aw_y, eta_));
  z_y_ = p_.y->Prox(z_y_, Scaled(atw_x, -eta_));
  weight_ += eta_;
  for (std::size_t i = 0; i < w_x.size(); ++i) {
    sum_x_[i] += eta_ * w_x[i];
    avg_x_[i] = sum_x_[i] / weight_;
  }
  for (std::size_t i = 0; i < w_y.size(); ++i) {
    sum_y_[i] += eta_ * w_y[i];
    avg_y_[i] = sum_y_[i] / weight_;
  }
  ++iteration_;
}

bool IsLoggedIteration(long t, long dense_until) {
  return t <= dense_until || (t > 0 && (t & (t - 1)) == 0);
}

SolveResult Solve(const SaddlePointProblem& p, const SolveOptions& options) {
  if (options.iterations < 1) {
    throw Error(ErrorKind::kInvalidParameter, "iterations must be >= 1");
  }
  if (options.gradient_budget && *options.gradient_budget < 1) {
    throw Error(ErrorKind::kInvalidParameter, "gradient budget must be >= 1");
  }
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  result.omega_x = p.x->DiameterBound();
  result.omega_y = p.y->DiameterBound();

  std::optional<Egt> egt;
  std::optional<EgtAs> egt_as;
  std::optional<MirrorProx> mp;
  switch (options.algorithm) {
    case Algorithm::kEgt: egt.emplace(p); break;
    case Algorithm::kEgtAs:
      egt_as.emplace(p, options.egt_as);
      result.fitted_mu = egt_as->fitted_mu();
      break;
    case Algorithm::kMirrorProx: mp.emplace(p); break;
  }

  for (long t = 1; t <= options.iterations; ++t) {
    IterationRecord rec;
    rec.iteration = t;
    const std::vector<double>* x = nullptr;
    const std::vector<double>* y = nullptr;
    if (egt) {
      egt->Iterate();
      const EgtState& s = egt->state();
      x = &s.x;
      y = &s.y;
      rec.gradient_computations = s.gradient_computations;
      rec.mu_x = s.mu_x;
      rec.mu_y = s.mu_y;
      rec.tau = s.tau;
    } else if (egt_as) {
      egt_as->Iterate();
      const EgtState& s = egt_as->state();
      x = &s.x;
      y = &s.y;
      rec.gradient_computations = s.gradient_computations;
      rec.mu_x = s.mu_x;
      rec.mu_y = s.mu_y;
      rec.tau = s.tau;
    } else {
      mp->Iterate();
      x = &mp->x();
      y = &mp->y();
      CheckIterate(*p.x, mp->z_x(), "z_x", t);
      CheckIterate(*p.y, mp->z_y(), "z_y", t);
      rec.gradient_computations = mp->gradient_computations();
      rec.mu_x = kNaN;
      rec.mu_y = kNaN;
      rec.tau = kNaN;
    }
    CheckIterate(*p.x, *x, "x", t);
    CheckIterate(*p.y, *y, "y", t);
    const bool last = t == options.iterations ||
                      (options.gradient_budget &&
                       rec.gradient_computations >= *options.gradient_budget);
    if (last || IsLoggedIteration(t, options.log_dense_until)) {
      rec.gap = SaddleGap(p, *x, *y);
      rec.bound = TheoreticalBound(options.algorithm, t, p.opnorm, result.omega_x,
                                   result.omega_y);
      if (options.record_wall_time) {
        rec.wall_time_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
      }
      if (!std::isnan(rec.bound) && !(rec.gap <= rec.bound)) {
        result.bound_satisfied = false;
      }
      result.log.push_back(rec);
    }
    if (last) {
      result.x = *x;
      result.y = *y;
      result.final_gap = rec.gap;
      result.gradient_computations = rec.gradient_computations;
      result.iterations = t;
      break;
    }
  }
  return result;
}

std::string IterationLogCsv(const std::vector<IterationRecord>& log) {
  std::string out(kIterationLogHeader);
  out += '\n';
  for (const IterationRecord& r : log) {
    out += std::to_string(r.iteration) + "," +
           std::to_string(r.gradient_computations) + "," + FormatDouble(r.gap) +
           "," + FormatDouble(r.mu_x) + "," + FormatDouble(r.mu_y) + "," +
           FormatDouble(r.tau) + "," + FormatDouble(r.bound) + "," +
           FormatDouble(r.wall_time_ms) + "\n";
  }
  return out;
}

}  // namespace efgfom

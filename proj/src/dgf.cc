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


#include "efgfom/dgf.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace efgfom {
namespace {

// Bottom-up recursion shared by beta and gamma:
//   v_j = base + factor * max_a sum_{C_ja} v, root = base + factor * sum_{C_root} v.
DilatedWeights RecursiveWeights(const Treeplex& t, double base, double factor) {
  DilatedWeights out;
  out.decision_points.assign(t.num_decision_points(), 0.0);
  for (int j : t.bottom_up_order()) {
    const DecisionPoint& dp = t.decision_point(j);
    double best = 0.0;
    for (int a = 0; a < dp.num_actions; ++a) {
      double sum = 0.0;
      for (int c : t.children(dp.sequence(a))) sum += out.decision_points[c];
      best = std::max(best, sum);
    }
    out.decision_points[j] = base + factor * best;
  }
  double sum = 0.0;
  for (int c : t.children(kEmptySequence)) sum += out.decision_points[c];
  out.root = base + factor * sum;
  return out;
}

double XLogX(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

void CheckFinite(std::span<const double> x, bool strictly_positive) {
  for (std::size_t s = 0; s < x.size(); ++s) {
    const double v = x[s];
    if (!std::isfinite(v) || v < 0.0 || (strictly_positive && v <= 0.0)) {
      throw Error(ErrorKind::kDomainError,
                  "coordinate " + std::to_string(s) + " = " + std::to_string(v) +
                      (strictly_positive ? " is not strictly positive"
                                         : " is outside the domain"));
    }
  }
}

// Euclidean projection of v onto the probability simplex (sort-based).
void ProjectToSimplex(std::span<const double> v, std::span<double> out) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) theta = candidate;
  }
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
}

bool IsEntropy(DgfKind kind) { return kind != DgfKind::kDilatedEuclidean; }

// Unscaled gradient of the dilated DGF, following the bottom-up template:
// local gradients on the actions, d_j(y) - grad d_j(y).y onto the parent.
SequenceVector DilatedGradient(const Treeplex& t, const DilatedWeights& alpha,
                               bool entropy, std::span<const double> x) {
  SequenceVector g(t.num_sequences(), 0.0);
  for (int j : t.bottom_up_order()) {
    const DecisionPoint& dp = t.decision_point(j);
    const double parent = x[dp.parent_sequence];
    if (!(parent > 0.0)) {
      throw Error(ErrorKind::kDomainError,
                  "parent sequence " + std::to_string(dp.parent_sequence) +
                      " of decision point " + std::to_string(j) +
                      " is not strictly positive");
    }
    const double aj = alpha.decision_points[j];
    const double n = dp.num_actions;
    double local_value = entropy ? std::log(n) : 0.0;
    double inner = 0.0;  // grad d_j(y) . y
    for (int a = 0; a < dp.num_actions; ++a) {
      const double y = x[dp.sequence(a)] / parent;
      double grad;
      if (entropy) {
        grad = 1.0 + std::log(y);
        local_value += XLogX(y);
      } else {
        grad = y - 1.0 / n;
        local_value += 0.5 * (y - 1.0 / n) * (y - 1.0 / n);
      }
      g[dp.sequence(a)] += aj * grad;
      inner += grad * y;
    }
    g[dp.parent_sequence] += aj * (local_value - inner);
  }
  const double root = x[kEmptySequence];
  g[kEmptySequence] += alpha.root * (entropy ? 1.0 + std::log(root) : root - 1.0);
  return g;
}

SequenceVector GlobalEntropyGradient(const Treeplex& t, const DilatedWeights& gamma,
                                     std::span<const double> w,
                                     std::span<const double> x) {
  SequenceVector g(t.num_sequences(), 0.0);
  for (int s = 0; s < t.num_sequences(); ++s) {
    g[s] = (1.0 + std::log(x[s])) * w[s];
  }
  for (int j = 0; j < t.num_decision_points(); ++j) {
    const DecisionPoint& dp = t.decision_point(j);
    g[dp.parent_sequence] += gamma.decision_points[j] * std::log(dp.num_actions);
  }
  return g;
}

// grad d*(g) for the unscaled dilated DGF; returns the conjugate value too.
SequenceVector DilatedConjugate(const Treeplex& t, const DilatedWeights& alpha,
                                bool entropy, std::vector<double> h,
                                double* value) {
  SequenceVector z(t.num_sequences(), 0.0);
  std::vector<double> u;
  for (int j : t.bottom_up_order()) {
    const DecisionPoint& dp = t.decision_point(j);
    const double aj = alpha.decision_points[j];
    const int n = dp.num_actions;
    u.resize(n);
    for (int a = 0; a < n; ++a) {
      u[a] = h[dp.sequence(a)] / aj;
      if (!std::isfinite(u[a])) {
        throw Error(ErrorKind::kOverflowGuard,
                    "non-finite exponent at sequence " +
                        std::to_string(dp.sequence(a)));
      }
    }
    double local;  // d_j^*(u)
    if (entropy) {
      const double top = *std::max_element(u.begin(), u.end());
      double partition = 0.0;
      for (int a = 0; a < n; ++a) partition += std::exp(u[a] - top);
      for (int a = 0; a < n; ++a) {
        z[dp.sequence(a)] =
            std::max(std::exp(u[a] - top) / partition, kProbabilityFloor);
      }
      local = top + std::log(partition) - std::log(static_cast<double>(n));
    } else {
      std::vector<double> shifted(n);
      for (int a = 0; a < n; ++a) shifted[a] = u[a] + 1.0 / n;
      std::span<double> y(z.data() + dp.first_sequence, n);
      ProjectToSimplex(shifted, y);
      local = 0.0;
      for (int a = 0; a < n; ++a) {
        local += u[a] * y[a] - 0.5 * (y[a] - 1.0 / n) * (y[a] - 1.0 / n);
      }
    }
    h[dp.parent_sequence] += aj * local;
  }
  z[kEmptySequence] = 1.0;
  for (int j : t.top_down_order()) {
    const DecisionPoint& dp = t.decision_point(j);
    const double parent = z[dp.parent_sequence];
    for (int a = 0; a < dp.num_actions; ++a) {
      double& v = z[dp.sequence(a)];
      v *= parent;
      if (entropy) v = std::max(v, kProbabilityFloor);
    }
  }
  if (value) *value = h[kEmptySequence];
  return z;
}

}  // namespace

std::string_view DgfKindName(DgfKind kind) {
  switch (kind) {
    case DgfKind::kDge: return "dge";
    case DgfKind::kDilatedEntropy: return "dilated-entropy";
    case DgfKind::kDilatedEuclidean: return "dilated-euclidean";
  }
  return "unknown";
}

std::optional<DgfKind> ParseDgfKind(std::string_view name) {
  for (DgfKind k : {DgfKind::kDge, DgfKind::kDilatedEntropy,
                    DgfKind::kDilatedEuclidean}) {
    if (DgfKindName(k) == name) return k;
  }
  return std::nullopt;
}

DilatedWeights ComputeBeta(const Treeplex& t) { return RecursiveWeights(t, 2.0, 2.0); }

DgfWeights ComputeGammaW(const Treeplex& t) {
  DgfWeights out;
  out.beta = ComputeBeta(t);
  out.gamma = RecursiveWeights(t, 1.0, 1.0);
  out.w.assign(t.num_sequences(), 0.0);
  out.w[kEmptySequence] = out.gamma.root;
  for (int c : t.children(kEmptySequence)) {
    out.w[kEmptySequence] -= out.gamma.decision_points[c];
  }
  for (int j = 0; j < t.num_decision_points(); ++j) {
    const DecisionPoint& dp = t.decision_point(j);
    for (int a = 0; a < dp.num_actions; ++a) {
      double w = out.gamma.decision_points[j];
      for (int c : t.children(dp.sequence(a))) w -= out.gamma.decision_points[c];
      out.w[dp.sequence(a)] = w;
    }
  }
  return out;
}

WeightStats Summarize(const DilatedWeights& weights) {
  WeightStats s;
  s.max = weights.root;
  double total = weights.root;
  for (double v : weights.decision_points) {
    total += v;
    s.max = std::max(s.max, v);
  }
  s.mean = total / static_cast<double>(weights.decision_points.size() + 1);
  return s;
}

ProximalSetup ProximalSetup::Make(const Treeplex& t, DgfKind kind, double scale) {
  if (!(scale > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "DGF scale must be positive");
  }
  ProximalSetup s;
  s.kind = kind;
  s.scale = scale;
  if (kind == DgfKind::kDge) {
    DgfWeights weights = ComputeGammaW(t);
    s.dilation = std::move(weights.gamma);
    s.w = std::move(weights.w);
  } else {
    s.dilation = ComputeBeta(t);
  }
  s.max_l1 = MaxL1(t);
  s.depth = Depth(t);
  for (const DecisionPoint& dp : t.decision_points()) {
    s.max_log_actions = std::max(s.max_log_actions, std::log(dp.num_actions));
  }
  return s;
}

ProximalSetup ProximalSetup::ForSolver(const Treeplex& t, DgfKind kind) {
  return Make(t, kind, IsEntropy(kind) ? MaxL1(t) : 1.0);
}

double DilatedEntropyValue(const Treeplex& t, const DilatedWeights& alpha,
                           std::span<const double> x) {
  double total = alpha.root * XLogX(x[kEmptySequence]);
  for (int j = 0; j < t.num_decision_points(); ++j) {
    const DecisionPoint& dp = t.decision_point(j);
    const double parent = x[dp.parent_sequence];
    if (parent <= 0.0) continue;
    double local = parent * std::log(static_cast<double>(dp.num_actions));
    for (int a = 0; a < dp.num_actions; ++a) {
      const double v = x[dp.sequence(a)];
      if (v > 0.0) local += v * std::log(v / parent);
    }
    total += alpha.decision_points[j] * local;
  }
  return total;
}

double DilatedEuclideanValue(const Treeplex& t, const DilatedWeights& alpha,
                             std::span<const double> x) {
  const double r = x[kEmptySequence] - 1.0;
  double total = alpha.root * 0.5 * r * r;
  for (int j = 0; j < t.num_decision_points(); ++j) {
    const DecisionPoint& dp = t.decision_point(j);
    const double parent = x[dp.parent_sequence];
    if (parent <= 0.0) continue;
    const double n = dp.num_actions;
    double local = 0.0;
    for (int a = 0; a < dp.num_actions; ++a) {
      const double d = x[dp.sequence(a)] / parent - 1.0 / n;
      local += 0.5 * d * d;
    }
    total += alpha.decision_points[j] * parent * local;
  }
  return total;
}

double GlobalEntropyValue(const Treeplex& t, const DgfWeights& weights,
                          std::span<const double> x) {
  double total = 0.0;
  for (int s = 0; s < t.num_sequences(); ++s) total += weights.w[s] * XLogX(x[s]);
  for (int j = 0; j < t.num_decision_points(); ++j) {
    const DecisionPoint& dp = t.decision_point(j);
    total += weights.gamma.decision_points[j] * x[dp.parent_sequence] *
             std::log(static_cast<double>(dp.num_actions));
  }
  return total;
}

double Value(const ProximalSetup& setup, const Treeplex& t,
             std::span<const double> x) {
  CheckFinite(x, false);
  double v = 0.0;
  switch (setup.kind) {
    case DgfKind::kDge: {
      DgfWeights weights;
      weights.gamma = setup.dilation;
      weights.w = setup.w;
      v = GlobalEntropyValue(t, weights, x);
      break;
    }
    case DgfKind::kDilatedEntropy:
      v = DilatedEntropyValue(t, setup.dilation, x);
      break;
    case DgfKind::kDilatedEuclidean:
      v = DilatedEuclideanValue(t, setup.dilation, x);
      break;
  }
  return setup.scale * v;
}

SequenceVector Gradient(const ProximalSetup& setup, const Treeplex& t,
                        std::span<const double> x) {
  CheckFinite(x, IsEntropy(setup.kind));
  SequenceVector g =
      setup.kind == DgfKind::kDge
          ? GlobalEntropyGradient(t, setup.dilation, setup.w, x)
          : DilatedGradient(t, setup.dilation, IsEntropy(setup.kind), x);
  for (double& v : g) v *= setup.scale;
  return g;
}

SequenceVector ConjugateGradient(const ProximalSetup& setup, const Treeplex& t,
                                 std::span<const double> g, double* max_value) {
  std::vector<double> h(g.begin(), g.end());
  for (double& v : h) v /= setup.scale;
  double value = 0.0;
  SequenceVector z =
      DilatedConjugate(t, setup.dilation, IsEntropy(setup.kind), std::move(h), &value);
  if (max_value) *max_value = setup.scale * value;
  return z;
}

SequenceVector Prox(const ProximalSetup& setup, const Treeplex& t,
                    std::span<const double> center, std::span<const double> g) {
  SequenceVector shifted = Gradient(setup, t, center);
  for (std::size_t s = 0; s < shifted.size(); ++s) shifted[s] -= g[s];
  return ConjugateGradient(setup, t, shifted);
}

double Bregman(const ProximalSetup& setup, const Treeplex& t,
               std::span<const double> x, std::span<const double> center) {
  const SequenceVector grad = Gradient(setup, t, center);
  double linear = 0.0;
  for (std::size_t s = 0; s < grad.size(); ++s) linear += grad[s] * (x[s] - center[s]);
  return Value(setup, t, x) - Value(setup, t, center) - linear;
}

double DiameterBound(const ProximalSetup& setup, const Treeplex& t) {
  const double m2 = setup.max_l1 * setup.max_l1;
  switch (setup.kind) {
    case DgfKind::kDge:
      return setup.scale * m2 * setup.max_log_actions;
    case DgfKind::kDilatedEntropy:
      return setup.scale * std::ldexp(1.0, setup.depth + 2) * m2 *
             setup.max_log_actions;
    case DgfKind::kDilatedEuclidean: {
      // d >= 0 with minimum at the uniform point and each local term is at
      // most (1 - 1/n)/2, so the range is bounded by a linear maximum over Q.
      SequenceVector g(t.num_sequences(), 0.0);
      g[kEmptySequence] = 0.0;
      for (int j = 0; j < t.num_decision_points(); ++j) {
        const DecisionPoint& dp = t.decision_point(j);
        g[dp.parent_sequence] += setup.dilation.decision_points[j] * 0.5 *
                                 (1.0 - 1.0 / dp.num_actions);
      }
      return setup.scale * LinearMaximizeValue(t, g);
    }
  }
  return 0.0;
}

}  // namespace efgfom

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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "efgfom/error.h"
#include "efgfom/games.h"
#include "efgfom/random.h"
#include "efgfom/validate.h"
#include "test_util.h"

namespace efgfom {
namespace {

using testing::ChainTreeplex;
using testing::Dot;
using testing::PureStrategies;
using testing::SingleSimplex;

const double kLog2 = std::log(2.0);

std::vector<double> RandomG(std::size_t n, Rng& rng, double scale = 3.0) {
  std::vector<double> g(n);
  for (double& v : g) v = rng.Uniform(-scale, scale);
  return g;
}

TEST(Weights, ChainUnrolled) {
  const Treeplex t = ChainTreeplex(3);
  const DilatedWeights beta = ComputeBeta(t);
  EXPECT_EQ(beta.decision_points, (std::vector<double>{14, 6, 2}));
  EXPECT_EQ(beta.root, 30);
  for (int levels = 1; levels <= 10; ++levels) {
    const Treeplex c = ChainTreeplex(levels);
    EXPECT_EQ(ComputeBeta(c).root, std::pow(2.0, levels + 2) - 2);
    EXPECT_EQ(ComputeGammaW(c).gamma.root, levels + 1);
  }
}

TEST(Weights, Kuhn) {
  const Treeplex t = GenerateKuhn().treeplex_x;
  const WeightStats b = Summarize(ComputeBeta(t));
  EXPECT_DOUBLE_EQ(b.max, 38);
  EXPECT_NEAR(b.mean, 62.0 / 7.0, 1e-12);
  const DgfWeights w = ComputeGammaW(t);
  const WeightStats g = Summarize(w.gamma);
  EXPECT_DOUBLE_EQ(g.max, 7);
  EXPECT_NEAR(g.mean, 16.0 / 7.0, 1e-12);
  EXPECT_DOUBLE_EQ(w.gamma.root, MaxL1(t));
}

TEST(Weights, LeafAndResidual) {
  const Treeplex t = SingleSimplex(3);
  EXPECT_EQ(ComputeBeta(t).decision_points[0], 2);
  const DgfWeights w = ComputeGammaW(t);
  EXPECT_EQ(w.gamma.decision_points[0], 1);
  for (int s = 1; s < 4; ++s) EXPECT_EQ(w.w[s], 1);
  // w_{ja} = gamma_j - sum of the child gammas, all >= 1
  const Treeplex k = GenerateLeduc(3).treeplex_y;
  const DgfWeights wk = ComputeGammaW(k);
  for (int j = 0; j < k.num_decision_points(); ++j) {
    const DecisionPoint& dp = k.decision_point(j);
    for (int a = 0; a < dp.num_actions; ++a) {
      double below = 0.0;
      for (int c : k.children(dp.sequence(a))) below += wk.gamma.decision_points[c];
      EXPECT_DOUBLE_EQ(wk.w[dp.sequence(a)], wk.gamma.decision_points[j] - below);
      EXPECT_GE(wk.w[dp.sequence(a)], 1.0);
    }
  }
}

TEST(Weights, Leduc3) {
  const Treeplex t = GenerateLeduc(3).treeplex_x;
  EXPECT_DOUBLE_EQ(Summarize(ComputeBeta(t)).max, 686);
  EXPECT_DOUBLE_EQ(Summarize(ComputeGammaW(t).gamma).max, 43);
}

TEST(Value, UniformKuhnIsZero) {
  const Treeplex t = GenerateKuhn().treeplex_x;
  const ProximalSetup s = ProximalSetup::Make(t, DgfKind::kDge);
  EXPECT_NEAR(Value(s, t, UniformStrategy(t)), 0.0, 1e-14);
  const ProximalSetup d = ProximalSetup::Make(t, DgfKind::kDilatedEntropy);
  EXPECT_NEAR(Value(d, t, UniformStrategy(t)), 0.0, 1e-14);
}

TEST(Value, SimplexVertex) {
  const Treeplex t = SingleSimplex(2);
  const ProximalSetup s = ProximalSetup::Make(t, DgfKind::kDge);
  EXPECT_NEAR(Value(s, t, std::vector<double>{1, 1, 0}), kLog2, 1e-15);
}

TEST(Value, GlobalAndDilatedCoincide) {
  Rng rng(11);
  for (const Treeplex& t : {GenerateKuhn().treeplex_x, GenerateLeduc(3).treeplex_y}) {
    const DgfWeights w = ComputeGammaW(t);
    for (int s = 0; s < 200; ++s) {
      const SequenceVector x = SampleStrategy(t, rng);
      const double a = GlobalEntropyValue(t, w, x);
      const double b = DilatedEntropyValue(t, w.gamma, x);
      EXPECT_LE(std::abs(a - b), 1e-8 * (1 + std::abs(b)));
    }
  }
}

TEST(Value, RejectsNegative) {
  const Treeplex t = SingleSimplex(2);
  const ProximalSetup s = ProximalSetup::Make(t, DgfKind::kDge);
  EXPECT_THROW(Value(s, t, std::vector<double>{1, 1.5, -0.5}), Error);
  EXPECT_THROW(Gradient(s, t, std::vector<double>{1, 1, 0}), Error);
}

TEST(Gradient, UniformSimplex) {
  for (int k : {2, 3, 7}) {
    const Treeplex t = SingleSimplex(k);
    const ProximalSetup s = ProximalSetup::Make(t, DgfKind::kDge);
    const SequenceVector g = Gradient(s, t, UniformStrategy(t));
    for (int a = 1; a <= k; ++a) EXPECT_NEAR(g[a], 1 + std::log(1.0 / k), 1e-14);
  }
}

TEST(Gradient, FiniteDifferences) {
  const Treeplex t = GenerateKuhn().treeplex_x;
  Rng rng(5);
  for (DgfKind kind : {DgfKind::kDge, DgfKind::kDilatedEntropy, DgfKind::kDilatedEuclidean}) {
    const ProximalSetup s = ProximalSetup::Make(t, kind);
    for (int trial = 0; trial < 20; ++trial) {
      SequenceVector x = SampleStrategy(t, rng);
      const SequenceVector g = Gradient(s, t, x);
      for (int i = 0; i < t.num_sequences(); ++i) {
        const double keep = x[i];
        const double h = std::min(1e-6, keep / 2);
        x[i] = keep + h;
        const double up = Value(s, t, x);
        x[i] = keep - h;
        const double down = Value(s, t, x);
        x[i] = keep;
        const double fd = (up - down) / (2 * h);
        EXPECT_LE(std::abs(fd - g[i]), 1e-4 * std::max(1.0, std::abs(g[i])))
            << DgfKindName(kind) << " seq " << i;
      }
    }
  }
}

TEST(Conjugate, ZeroGivesUniform) {
  const Treeplex t = GenerateKuhn().treeplex_y;
  for (DgfKind kind : {DgfKind::kDge, DgfKind::kDilatedEntropy, DgfKind::kDilatedEuclidean}) {
    const ProximalSetup s = ProximalSetup::Make(t, kind);
    const SequenceVector x = ConjugateGradient(s, t, std::vector<double>(13, 0.0));
    const SequenceVector u = UniformStrategy(t);
    for (int i = 0; i < 13; ++i) EXPECT_NEAR(x[i], u[i], 1e-14) << DgfKindName(kind);
  }
}

TEST(Conjugate, Softmax) {
  const Treeplex t = SingleSimplex(2);
  const ProximalSetup s = ProximalSetup::Make(t, DgfKind::kDge);
  const SequenceVector x = ConjugateGradient(s, t, std::vector<double>{0, 1, 0});
  const double e = std::exp(1.0);
  EXPECT_NEAR(x[1], e / (e + 1), 1e-15);
  EXPECT_NEAR(x[2], 1 / (e + 1), 1e-15);
}

TEST(Conjugate, Optimality) {
  const Treeplex t = GenerateKuhn().treeplex_x;
  const auto vertices = PureStrategies(t);
  Rng rng(17);
  std::vector<SequenceVector> samples;
  for (int s = 0; s < 1000; ++s) samples.push_back(SampleStrategy(t, rng));
  for (DgfKind kind : {DgfKind::kDge, DgfKind::kDilatedEntropy, DgfKind::kDilatedEuclidean}) {
    const ProximalSetup s = ProximalSetup::Make(t, kind);
    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<double> g = RandomG(13, rng);
      double attained = 0.0;
      const SequenceVector x = ConjugateGradient(s, t, g, &attained);
      EXPECT_TRUE(IsStrategy(t, x, 1e-12));
      const double best = Dot(g, x) - Value(s, t, x);
      EXPECT_NEAR(attained, best, 1e-10);
      for (const auto& v : vertices) EXPECT_GE(best - (Dot(g, v) - Value(s, t, v)), -1e-9);
      for (const auto& v : samples) EXPECT_GE(best - (Dot(g, v) - Value(s, t, v)), -1e-9);
    }
  }
}

TEST(Conjugate, InvertsGradient) {
  const Treeplex t = GenerateLeduc(3).treeplex_x;
  Rng rng(2);
  for (DgfKind kind : {DgfKind::kDge, DgfKind::kDilatedEntropy}) {
    const ProximalSetup s = ProximalSetup::Make(t, kind, 3.5);
    for (int trial = 0; trial < 20; ++trial) {
      const SequenceVector x = SampleStrategy(t, rng);
      const SequenceVector back = ConjugateGradient(s, t, Gradient(s, t, x));
      for (int i = 0; i < t.num_sequences(); ++i) EXPECT_NEAR(back[i], x[i], 1e-8);
    }
  }
}

TEST(Conjugate, ScaleDividesGradient) {
  const Treeplex t = GenerateKuhn().treeplex_x;
  Rng rng(4);
  const ProximalSetup one = ProximalSetup::Make(t, DgfKind::kDge);
  const ProximalSetup seven = ProximalSetup::Make(t, DgfKind::kDge, 7.0);
  const std::vector<double> g = RandomG(13, rng, 10.0);
  std::vector<double> g7(g);
  for (double& v : g7) v /= 7.0;
  double v1 = 0.0, v7 = 0.0;
  const SequenceVector a = ConjugateGradient(seven, t, g, &v7);
  const SequenceVector b = ConjugateGradient(one, t, g7, &v1);
  for (int i = 0; i < 13; ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
  EXPECT_NEAR(v7, 7.0 * v1, 1e-12);
}

TEST(Conjugate, ExtremeInputs) {
  const Treeplex t = GenerateKuhn().treeplex_x;
  const ProximalSetup s = ProximalSetup::Make(t, DgfKind::kDge);
  std::vector<double> g(13, 0.0);
  g[2] = 1e300;
  g[5] = -1e300;
  const SequenceVector x = ConjugateGradient(s, t, g);
  EXPECT_TRUE(IsStrategy(t, x, 1e-12));
  for (double v : x) EXPECT_GT(v, 0.0);
  g[3] = std::numeric_limits<double>::infinity();
  try {
    ConjugateGradient(s, t, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOverflowGuard);
  }
}

TEST(Prox, ZeroStepIsIdentity) {
  const Treeplex t = GenerateKuhn().treeplex_x;
  Rng rng(8);
  for (DgfKind kind : {DgfKind::kDge, DgfKind::kDilatedEntropy}) {
    const ProximalSetup s = ProximalSetup::Make(t, kind);
    const SequenceVector c = SampleStrategy(t, rng);
    const SequenceVector p = Prox(s, t, c, std::vector<double>(13, 0.0));
    for (int i = 0; i < 13; ++i) EXPECT_NEAR(p[i], c[i], 1e-10);
  }
}

TEST(Prox, GridSearchOnSimplex) {
  const Treeplex t = SingleSimplex(3);
  for (DgfKind kind : {DgfKind::kDge, DgfKind::kDilatedEntropy, DgfKind::kDilatedEuclidean}) {
    const ProximalSetup s = ProximalSetup::Make(t, kind);
    const std::vector<double> center{1, 0.5, 0.3, 0.2};
    const std::vector<double> g{0, 0.4, -0.3, 0.1};
    const SequenceVector p = Prox(s, t, center, g);
    // coarse grid, then a fine grid around the best cell
    auto objective = [&](double a, double b) {
      const std::vector<double> x{1, a, b, 1 - a - b};
      return Dot(g, x) + Bregman(s, t, x, center);
    };
    double best = 1e300, ba = 0, bb = 0;
    const int n = 400;
    for (int i = 1; i < n; ++i) {
      for (int j = 1; i + j < n; ++j) {
        const double v = objective(double(i) / n, double(j) / n);
        if (v < best) best = v, ba = double(i) / n, bb = double(j) / n;
      }
    }
    const double step = 1.0 / n;
    const double a0 = ba, b0 = bb;
    for (int i = -400; i <= 400; ++i) {
      for (int j = -400; j <= 400; ++j) {
        const double a = a0 + i * step / 400, b = b0 + j * step / 400;
        if (a <= 0 || b <= 0 || a + b >= 1) continue;
        const double v = objective(a, b);
        if (v < best) best = v, ba = a, bb = b;
      }
    }
    EXPECT_NEAR(p[1], ba, 1e-5) << DgfKindName(kind);
    EXPECT_NEAR(p[2], bb, 1e-5) << DgfKindName(kind);
  }
}

TEST(Prox, LargeStepConcentrates) {
  const Treeplex t = GenerateKuhn().treeplex_x;
  const ProximalSetup s = ProximalSetup::Make(t, DgfKind::kDge);
  const SequenceVector c = UniformStrategy(t);
  const int target = t.decision_point(3).sequence(1);
  std::vector<double> g(13, 0.0);
  g[target] = -200.0;
  const SequenceVector p = Prox(s, t, c, g);
  EXPECT_GT(p[target], 0.999);
  std::vector<double> shifted = Gradient(s, t, c);
  shifted[target] += 200.0;
  const SequenceVector q = ConjugateGradient(s, t, shifted);
  for (int i = 0; i < 13; ++i) EXPECT_NEAR(p[i], q[i], 1e-12);
}

TEST(Bregman, StrongConvexity) {
  const Treeplex t = GenerateKuhn().treeplex_x;
  const ProximalSetup s = ProximalSetup::Make(t, DgfKind::kDge);
  Rng rng(9);
  EXPECT_NEAR(Bregman(s, t, UniformStrategy(t), UniformStrategy(t)), 0.0, 1e-14);
  for (int trial = 0; trial < 500; ++trial) {
    const SequenceVector x = SampleStrategy(t, rng);
    const SequenceVector c = SampleStrategy(t, rng);
    double l1 = 0.0, l2 = 0.0;
    for (int i = 0; i < 13; ++i) {
      l1 += std::abs(x[i] - c[i]);
      l2 += (x[i] - c[i]) * (x[i] - c[i]);
    }
    const double d = Bregman(s, t, x, c);
    EXPECT_GE(d, l1 * l1 / (2 * MaxL1(t)) - 1e-12);
    EXPECT_GE(d, l2 / 2 - 1e-12);
  }
}

TEST(Bregman, HessianBoundsOnTangents) {
  const Treeplex t = GenerateLeduc(3).treeplex_x;
  Rng rng(10);
  for (DgfKind kind : {DgfKind::kDge, DgfKind::kDilatedEntropy}) {
    const ProximalSetup s = ProximalSetup::Make(t, kind);
    for (int trial = 0; trial < 20; ++trial) {
      const SequenceVector x = SampleStrategy(t, rng);
      const SequenceVector y = SampleStrategy(t, rng);
      std::vector<double> m(x.size());
      double l1 = 0.0, l2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        m[i] = y[i] - x[i];
        l1 += std::abs(m[i]);
        l2 += m[i] * m[i];
      }
      const double q = QuadraticForm(
          [&](const std::vector<double>& z) { return Gradient(s, t, z); }, x, m);
      EXPECT_GE(q, l2 * (1 - 1e-3));
      EXPECT_GE(q, l1 * l1 / MaxL1(t) * (1 - 1e-3));
    }
  }
}

TEST(Diameter, Formulas) {
  const Treeplex t = GenerateKuhn().treeplex_x;
  EXPECT_NEAR(DiameterBound(ProximalSetup::Make(t, DgfKind::kDge), t), 49 * kLog2, 1e-12);
  EXPECT_NEAR(DiameterBound(ProximalSetup::Make(t, DgfKind::kDilatedEntropy), t),
              16 * 49 * kLog2, 1e-10);
  for (int k : {2, 5}) {
    const Treeplex s = SingleSimplex(k);
    const ProximalSetup setup = ProximalSetup::Make(s, DgfKind::kDge);
    // the range of the entropy on a simplex is log k, attained at a vertex
    std::vector<double> v(k + 1, 0.0);
    v[0] = v[1] = 1.0;
    EXPECT_NEAR(Value(setup, s, v) - Value(setup, s, UniformStrategy(s)), std::log(k), 1e-14);
    EXPECT_GE(DiameterBound(setup, s), std::log(k) - 1e-14);
  }
}

TEST(Diameter, DominatesRange) {
  const Treeplex t = GenerateKuhn().treeplex_y;
  for (DgfKind kind : {DgfKind::kDge, DgfKind::kDilatedEntropy}) {
    const ProximalSetup s = ProximalSetup::Make(t, kind);
    const double low = Value(s, t, UniformStrategy(t));
    for (const auto& v : PureStrategies(t)) {
      EXPECT_LE(Value(s, t, v) - low, DiameterBound(s, t));
    }
  }
}

}  // namespace
}  // namespace efgfom

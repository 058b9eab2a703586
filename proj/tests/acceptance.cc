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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "efgfom/dgf.h"
#include "efgfom/games.h"
#include "efgfom/scext.h"
#include "efgfom/solver.h"
#include "efgfom/validate.h"

using namespace efgfom;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Outcome {
  bool passed = true;
  std::string detail;
  void Check(bool ok, const std::string& what) {
    if (!ok) passed = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!") + what;
  }
};

std::string Num(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::uint64_t g_seed = 0;

// ---------------------------------------------------------------------------

Outcome Weights() {
  Outcome o;
  auto start = Clock::now();
  const GameInstance kuhn = GenerateKuhn();
  const WeightStats b = Summarize(ComputeBeta(kuhn.treeplex_x));
  const WeightStats g = Summarize(ComputeGammaW(kuhn.treeplex_x).gamma);
  const double kuhn_time = Seconds(start);
  o.Check(std::abs(b.mean - 8.8571) <= 1e-3, "kuhn beta mean " + Num("%.4f", b.mean));
  o.Check(b.max == 38, "beta max " + Num("%g", b.max));
  o.Check(std::abs(g.mean - 2.2857) <= 1e-3, "gamma mean " + Num("%.4f", g.mean));
  o.Check(g.max == 7, "gamma max " + Num("%g", g.max));
  o.Check(kuhn_time < 1.0, "kuhn " + Num("%.3fs", kuhn_time));

  start = Clock::now();
  const GameInstance leduc = GenerateLeduc(3);
  const double lb = Summarize(ComputeBeta(leduc.treeplex_x)).max;
  const double lg = Summarize(ComputeGammaW(leduc.treeplex_x).gamma).max;
  const double leduc_time = Seconds(start);
  o.Check(leduc.treeplex_x.num_decision_points() == 144, "leduc3 J 144");
  o.Check(leduc.treeplex_x.num_sequences() == 337, "Sigma 337");
  o.Check(leduc.num_leaves.value_or(-1) == 1116, "leaves " + std::to_string(leduc.num_leaves.value_or(-1)));
  o.Check(lb == 686, "beta max " + Num("%g", lb));
  o.Check(lg == 43, "gamma max " + Num("%g", lg));
  o.Check(leduc_time < 5.0, "leduc3 " + Num("%.3fs", leduc_time));
  return o;
}

Outcome Dilatability() {
  Outcome o;
  const auto start = Clock::now();
  Rng rng(g_seed + 2);
  for (const GameInstance& game : {GenerateKuhn(), GenerateLeduc(3)}) {
    double worst = 0.0;
    for (const Treeplex* t : {&game.treeplex_x, &game.treeplex_y}) {
      const DgfWeights w = ComputeGammaW(*t);
      for (int s = 0; s < 1000; ++s) {
        const SequenceVector x = SampleStrategy(*t, rng);
        const double a = GlobalEntropyValue(*t, w, x);
        const double d = DilatedEntropyValue(*t, w.gamma, x);
        worst = std::max(worst, std::abs(a - d) / (1 + std::abs(d)));
      }
    }
    o.Check(worst <= 1e-8, game.name + " worst " + Num("%.2e", worst));
  }
  const double time = Seconds(start);
  o.Check(time < 10.0, Num("%.3fs", time));
  return o;
}

// worst 1 - q / bound over 100 tangent pairs
struct HessianWorst {
  double l2 = -1e300;
  double l1 = -1e300;
};

HessianWorst Hessian(const std::function<std::vector<double>(Rng&)>& sample,
                     const std::function<std::vector<double>(const std::vector<double>&)>& grad,
                     double max_l1, Rng& rng) {
  HessianWorst w;
  for (int s = 0; s < 100; ++s) {
    const std::vector<double> x = sample(rng);
    const std::vector<double> y = sample(rng);
    std::vector<double> m(x.size());
    double n1 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      m[i] = y[i] - x[i];
      n1 += std::abs(m[i]);
      n2 += m[i] * m[i];
    }
    const double q = QuadraticForm(grad, x, m);
    w.l2 = std::max(w.l2, 1 - q / n2);
    w.l1 = std::max(w.l1, 1 - q / (n1 * n1 / max_l1));
  }
  return w;
}

Outcome StrongConvexity() {
  Outcome o;
  Rng rng(g_seed + 3);
  const GameInstance kuhn = GenerateKuhn();
  const GameInstance leduc = GenerateLeduc(3);
  for (DgfKind kind : {DgfKind::kDge, DgfKind::kDilatedEntropy}) {
    for (const Treeplex* t : {&kuhn.treeplex_x, &leduc.treeplex_x}) {
      const ProximalSetup s = ProximalSetup::Make(*t, kind);
      const HessianWorst w = Hessian(
          [&](Rng& r) { return SampleStrategy(*t, r); },
          [&](const std::vector<double>& x) { return Gradient(s, *t, x); }, MaxL1(*t), rng);
      o.Check(w.l2 <= 1e-3 && w.l1 <= 1e-3,
              "treeplex " + std::string(DgfKindName(kind)) + " |S|=" +
                  std::to_string(t->num_sequences()) + " " + Num("%.3f", w.l2) + "/" +
                  Num("%.3f", w.l1));
    }
    const ScExtChain three = ScExtChain::Build(
        {{2, {}}, {3, {{0, 0, 1.0}}}, {2, {{0, 1, 0.5}, {1, 2, 0.5}}}});
    for (const ScExtChain& c : {ChainFromTreeplex(kuhn.treeplex_x), three}) {
      const ChainSetup s = ChainSetup::Make(c, kind);
      const HessianWorst w = Hessian(
          [&](Rng& r) { return SampleChainPoint(c, r); },
          [&](const std::vector<double>& x) { return Gradient(s, c, x); }, ChainMaxL1(c),
          rng);
      o.Check(w.l2 <= 1e-3 && w.l1 <= 1e-3,
              "chain " + std::string(DgfKindName(kind)) + " dim=" + std::to_string(c.dim()) +
                  " " + Num("%.3f", w.l2) + "/" + Num("%.3f", w.l1));
    }
  }
  return o;
}

Outcome ConjugateProx() {
  Outcome o;
  Rng rng(g_seed + 4);
  const Treeplex t = GenerateKuhn().treeplex_x;
  const std::vector<SequenceVector> vertices = EnumerateVertices(t);
  std::vector<SequenceVector> samples;
  for (int s = 0; s < 1000; ++s) samples.push_back(SampleStrategy(t, rng));
  for (DgfKind kind : {DgfKind::kDge, DgfKind::kDilatedEntropy}) {
    const ProximalSetup s = ProximalSetup::Make(t, kind);
    std::vector<double> sample_values, vertex_values;
    for (const auto& v : samples) sample_values.push_back(Value(s, t, v));
    for (const auto& v : vertices) vertex_values.push_back(Value(s, t, v));
    double margin = 1e300, prox = 0.0, inverse = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> g(t.num_sequences());
      for (double& v : g) v = rng.Uniform(-3, 3);
      const SequenceVector x = ConjugateGradient(s, t, g);
      const double best = Dot(g, x) - Value(s, t, x);
      for (std::size_t i = 0; i < vertices.size(); ++i) {
        margin = std::min(margin, best - (Dot(g, vertices[i]) - vertex_values[i]));
      }
      for (std::size_t i = 0; i < samples.size(); ++i) {
        margin = std::min(margin, best - (Dot(g, samples[i]) - sample_values[i]));
      }
      const SequenceVector& c = samples[trial];
      const SequenceVector p = Prox(s, t, c, std::vector<double>(g.size(), 0.0));
      const SequenceVector back = ConjugateGradient(s, t, Gradient(s, t, c));
      for (std::size_t i = 0; i < c.size(); ++i) {
        prox = std::max(prox, std::abs(p[i] - c[i]));
        inverse = std::max(inverse, std::abs(back[i] - c[i]));
      }
    }
    const std::string k(DgfKindName(kind));
    o.Check(margin >= -1e-9, k + " margin " + Num("%.2e", margin));
    o.Check(prox <= 1e-10, "prox " + Num("%.1e", prox));
    o.Check(inverse <= 1e-8, "inverse " + Num("%.1e", inverse));
  }
  return o;
}

struct Run {
  std::string label;
  SolveResult result;
  double seconds = 0.0;
  std::string csv;
};

Run SolveOnce(const std::string& label, const SaddlePointProblem& p, Algorithm alg,
              long iterations, long dense = 512) {
  SolveOptions options;
  options.algorithm = alg;
  options.iterations = iterations;
  options.log_dense_until = dense;
  Run r;
  r.label = label;
  const auto start = Clock::now();
  r.result = Solve(p, options);
  r.seconds = Seconds(start);
  r.csv = IterationLogCsv(r.result.log);
  return r;
}

struct Setting {
  std::string label;
  std::function<SaddlePointProblem()> problem;
  Algorithm alg;
  long iterations;
  long dense;
};

std::vector<Setting> SolverSettings() {
  std::vector<Setting> out;
  for (int ranks : {0, 3}) {
    for (DgfKind kind : {DgfKind::kDge, DgfKind::kDilatedEntropy}) {
      for (Algorithm alg : {Algorithm::kEgt, Algorithm::kMirrorProx}) {
        const std::string label = std::string(ranks ? "leduc3" : "kuhn") + "/" +
                                  std::string(AlgorithmName(alg)) + "/" +
                                  std::string(DgfKindName(kind));
        out.push_back({label,
                       [ranks, kind] {
                         return ProblemFromGame(ranks ? GenerateLeduc(3) : GenerateKuhn(), kind);
                       },
                       alg, 1000, 512});
      }
    }
  }
  out.push_back({"pennies/mp/dge", [] { return ProblemFromChainFile(MatchingPennies(), DgfKind::kDge); },
                 Algorithm::kMirrorProx, 2000, 512});
  out.push_back({"kuhn/egt-as/dge", [] { return ProblemFromGame(GenerateKuhn(), DgfKind::kDge); },
                 Algorithm::kEgtAs, 1000, 1000});
  return out;
}

std::vector<Run> g_runs;

const Run& Find(const std::string& label) {
  for (const Run& r : g_runs) {
    if (r.label == label) return r;
  }
  std::fprintf(stderr, "missing run %s\n", label.c_str());
  std::abort();
}

Outcome BoundDominance() {
  Outcome o;
  for (const Run& r : g_runs) {
    if (r.label.rfind("kuhn/egt/", 0) != 0 && r.label.rfind("kuhn/mp/", 0) != 0 &&
        r.label.rfind("leduc3/", 0) != 0) {
      continue;
    }
    double ratio = 0.0;
    for (const IterationRecord& rec : r.result.log) ratio = std::max(ratio, rec.gap / rec.bound);
    const double limit = r.label.rfind("kuhn", 0) == 0 ? 10.0 : 300.0;
    o.Check(r.result.bound_satisfied && r.seconds < limit,
            r.label + " max gap/bound " + Num("%.3g", ratio) + " " + Num("%.2fs", r.seconds));
  }
  return o;
}

double GapAt(const Run& r, long t) {
  for (const IterationRecord& rec : r.result.log) {
    if (rec.iteration == t) return rec.gap;
  }
  return std::nan("");
}

Outcome DgfComparison() {
  Outcome o;
  const Run& dge = Find("leduc3/egt/dge");
  const Run& dil = Find("leduc3/egt/dilated-entropy");
  for (long t : {100L, 1000L}) {
    const double a = GapAt(dge, t), b = GapAt(dil, t);
    o.Check(a < b, "T=" + std::to_string(t) + " dge " + Num("%.4g", a) + " < dilated " +
                       Num("%.4g", b));
  }
  return o;
}

Outcome Convergence() {
  Outcome o;
  const Run& mp = Find("pennies/mp/dge");
  long hit = -1;
  for (const IterationRecord& rec : mp.result.log) {
    if (rec.iteration <= 2000 && rec.gap <= 1e-3) {
      hit = rec.iteration;
      break;
    }
  }
  o.Check(hit > 0, "pennies mp gap<=1e-3 at T=" + std::to_string(hit));
  const Run& as = Find("kuhn/egt-as/dge");
  long spent = -1;
  for (const IterationRecord& rec : as.result.log) {
    if (rec.gradient_computations <= 2000 && rec.gap <= 1e-3) {
      spent = rec.gradient_computations;
      break;
    }
  }
  o.Check(spent > 0, "kuhn egt-as gap<=1e-3 after " + std::to_string(spent) +
                         " gradients (mu " + Num("%.4g", as.result.fitted_mu.value_or(0)) + ")");
  return o;
}

Outcome Equivalence() {
  Outcome o;
  const Treeplex t = GenerateKuhn().treeplex_x;
  const ScExtChain c = ChainFromTreeplex(t);
  const ChainWeights w = ComputeChainWeights(c);
  o.Check(w.alpha_dge == ComputeGammaW(t).gamma.decision_points, "alpha_dge == gamma");
  const ProximalSetup ts = ProximalSetup::Make(t, DgfKind::kDge);
  const ChainSetup cs = ChainSetup::Make(c, DgfKind::kDge);
  Rng rng(g_seed + 8);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> g(t.num_sequences());
    for (double& v : g) v = rng.Uniform(-3, 3);
    const SequenceVector a = ConjugateGradient(ts, t, g);
    const std::vector<double> b = ConjugateGradient(cs, c, SequenceToChain(g));
    for (int i = 0; i < c.dim(); ++i) worst = std::max(worst, std::abs(a[i + 1] - b[i]));
  }
  o.Check(worst <= 1e-9, "conjugate diff " + Num("%.1e", worst));
  return o;
}

Outcome Determinism() {
  Outcome o;
  int same = 0;
  for (const Setting& s : SolverSettings()) {
    const Run again = SolveOnce(s.label, s.problem(), s.alg, s.iterations, s.dense);
    if (again.csv == Find(s.label).csv) {
      ++same;
    } else {
      o.Check(false, s.label + " differs");
    }
  }
  ValidationOptions v;
  v.seed = g_seed;
  v.diameter_pairs = 1000;
  const bool report_same =
      ValidateGame(GenerateKuhn(), v).ToJson() == ValidateGame(GenerateKuhn(), v).ToJson();
  o.Check(report_same, "validation report");
  o.Check(same == static_cast<int>(SolverSettings().size()),
          std::to_string(same) + " CSV logs byte-identical");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_seed = std::strtoull(argv[1], nullptr, 10);
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "weights", Weights},
      {2, "dilatability", Dilatability},
      {3, "strong-convexity", StrongConvexity},
      {4, "conjugate-prox", ConjugateProx},
      {5, "bound-dominance", BoundDominance},
      {6, "dgf-comparison", DgfComparison},
      {7, "convergence", Convergence},
      {8, "chain-equivalence", Equivalence},
      {9, "determinism", Determinism},
  };
  for (const Setting& s : SolverSettings()) {
    try {
      g_runs.push_back(SolveOnce(s.label, s.problem(), s.alg, s.iterations, s.dense));
    } catch (const std::exception& e) {
      std::printf("solver run %s failed: %s\n", s.label.c_str(), e.what());
      return 1;
    }
  }
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.Check(false, std::string("exception: ") + e.what());
    }
    std::printf("[%s] %d %s: %s\n", out.passed ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str());
    std::fflush(stdout);
    failed += !out.passed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

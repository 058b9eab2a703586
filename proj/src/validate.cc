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


#include "efgfom/validate.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <future>
#include <sstream>
#include <thread>

#include "efgfom/dgf.h"
#include "json.hpp"

namespace efgfom {
namespace {

using Vec = std::vector<double>;

// A DGF on a convex set, seen through plain callables so the same checks
// run on treeplexes and chains.
struct Ops {
  std::string label;
  double max_l1 = 0.0;
  double diameter = 0.0;
  std::function<Vec(Rng&)> sample;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Vec(const Vec&)> conjugate;
  std::function<double(const Vec&)> violation;  // distance from feasibility
  std::function<Vec(const Vec&)> best_vertex;
  std::function<double(const Vec&)> support;
};

double Dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double MaxAbsDiff(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Vec RandomVector(std::size_t n, Rng& rng, double lo, double hi) {
  Vec g(n);
  for (double& v : g) v = rng.Uniform(lo, hi);
  return g;
}

InvariantResult Make(std::string name, double worst, double tol, long samples,
                     std::string detail = "") {
  InvariantResult r;
  r.name = std::move(name);
  r.worst = worst;
  r.tolerance = tol;
  r.samples = samples;
  r.passed = worst <= tol;
  r.detail = std::move(detail);
  return r;
}

double StrategyViolation(const Treeplex& t, const Vec& x) {
  double v = std::abs(x[kEmptySequence] - 1.0);
  for (double e : x) v = std::max(v, -e);
  for (const DecisionPoint& dp : t.decision_points()) {
    double mass = 0.0;
    for (int a = 0; a < dp.num_actions; ++a) mass += x[dp.sequence(a)];
    v = std::max(v, std::abs(mass - x[dp.parent_sequence]));
  }
  return v;
}

double ChainViolation(const ScExtChain& c, const Vec& x) {
  double v = 0.0;
  for (double e : x) v = std::max(v, -e);
  for (int k = 0; k < c.num_blocks(); ++k) {
    double mass = 0.0;
    for (int i = 0; i < c.size(k); ++i) mass += x[c.offset(k) + i];
    v = std::max(v, std::abs(mass - c.Scale(k, x)));
  }
  return v;
}

Ops TreeplexOps(const std::string& label, const Treeplex& t, DgfKind kind) {
  auto setup = std::make_shared<ProximalSetup>(ProximalSetup::Make(t, kind));
  Ops ops;
  ops.label = label;
  ops.max_l1 = setup->max_l1;
  ops.diameter = DiameterBound(*setup, t);
  ops.sample = [&t](Rng& rng) { return SampleStrategy(t, rng); };
  ops.value = [&t, setup](const Vec& x) { return Value(*setup, t, x); };
  ops.gradient = [&t, setup](const Vec& x) { return Gradient(*setup, t, x); };
  ops.conjugate = [&t, setup](const Vec& g) { return ConjugateGradient(*setup, t, g); };
  ops.violation = [&t](const Vec& x) { return StrategyViolation(t, x); };
  ops.best_vertex = [&t](const Vec& g) { return LinearMaximize(t, g).vertex; };
  ops.support = [&t](const Vec& g) { return LinearMaximizeValue(t, g); };
  return ops;
}

Ops ChainOps(const std::string& label, const ScExtChain& c, DgfKind kind) {
  auto setup = std::make_shared<ChainSetup>(ChainSetup::Make(c, kind));
  Ops ops;
  ops.label = label;
  ops.max_l1 = setup->max_l1;
  ops.diameter = DiameterBound(*setup, c);
  ops.sample = [&c](Rng& rng) { return SampleChainPoint(c, rng); };
  ops.value = [&c, setup](const Vec& x) { return Value(*setup, c, x); };
  ops.gradient = [&c, setup](const Vec& x) { return Gradient(*setup, c, x); };
  ops.conjugate = [&c, setup](const Vec& g) { return ConjugateGradient(*setup, c, g); };
  ops.violation = [&c](const Vec& x) { return ChainViolation(c, x); };
  ops.best_vertex = [&c](const Vec& g) { return ChainLinearMaximize(c, g).vertex; };
  ops.support = [&c](const Vec& g) { return ChainLinearMaximizeValue(c, g); };
  return ops;
}

// m^T H m >= ||m||_2^2 and >= ||m||_1^2 / M on tangent directions m = x' - x.
std::vector<InvariantResult> HessianSuite(const Ops& ops, int samples, Rng& rng) {
  double worst_l2 = -std::numeric_limits<double>::infinity();
  double worst_l1 = worst_l2;
  for (int s = 0; s < samples; ++s) {
    const Vec x = ops.sample(rng);
    const Vec other = ops.sample(rng);
    Vec m(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) m[i] = other[i] - x[i];
    const double q = QuadraticForm(ops.gradient, x, m);
    double l1 = 0.0, l2 = 0.0;
    for (double v : m) {
      l1 += std::abs(v);
      l2 += v * v;
    }
    if (l2 == 0.0) continue;
    worst_l2 = std::max(worst_l2, 1.0 - q / l2);
    worst_l1 = std::max(worst_l1, 1.0 - q / (l1 * l1 / ops.max_l1));
  }
  return {Make(ops.label + ".hessian_l2", worst_l2, 1e-3, samples,
               "worst 1 - m'Hm / ||m||_2^2"),
          Make(ops.label + ".hessian_l1", worst_l1, 1e-3, samples,
               "worst 1 - m'Hm M / ||m||_1^2")};
}

std::vector<InvariantResult> ConjugateSuite(const Ops& ops, int num_g, int num_samples,
                                            Rng& rng) {
  std::vector<Vec> points;
  std::vector<double> values;
  for (int s = 0; s < num_samples; ++s) {
    points.push_back(ops.sample(rng));
    values.push_back(ops.value(points.back()));
  }
  const std::size_t n = points.front().size();
  double optimality = -std::numeric_limits<double>::infinity();
  double feasibility = 0.0;
  for (int k = 0; k < num_g; ++k) {
    const Vec g = RandomVector(n, rng, -3.0, 3.0);
    const Vec star = ops.conjugate(g);
    feasibility = std::max(feasibility, ops.violation(star));
    for (double v : star) {
      if (!(v > 0.0)) feasibility = std::numeric_limits<double>::infinity();
    }
    const double best = Dot(g, star) - ops.value(star);
    for (std::size_t s = 0; s < points.size(); ++s) {
      optimality = std::max(optimality, Dot(g, points[s]) - values[s] - best);
    }
    // vertices: the linear maximizer of g and of a few random directions
    for (int r = 0; r < 10; ++r) {
      const Vec v = ops.best_vertex(r == 0 ? g : RandomVector(n, rng, -1.0, 1.0));
      optimality = std::max(optimality, Dot(g, v) - ops.value(v) - best);
    }
  }
  double inverse = 0.0;
  double prox_identity = 0.0;
  for (int s = 0; s < std::min<int>(num_g, static_cast<int>(points.size())); ++s) {
    const Vec back = ops.conjugate(ops.gradient(points[s]));
    inverse = std::max(inverse, MaxAbsDiff(back, points[s]));
  }
  {
    // prox(c, 0) = grad d*(grad d(c)); checked at the minimizer of d.
    const Vec center = ops.conjugate(Vec(n, 0.0));
    prox_identity = MaxAbsDiff(ops.conjugate(ops.gradient(center)), center);
  }
  return {Make(ops.label + ".conjugate_optimality", optimality, 1e-9,
               static_cast<long>(num_g) * (num_samples + 10),
               "worst (g.v - d(v)) - (g.x* - d(x*)) over vertices and samples"),
          Make(ops.label + ".conjugate_feasibility", feasibility, 1e-9, num_g,
               "worst constraint violation of grad d*(g)"),
          Make(ops.label + ".conjugate_inverse", inverse, 1e-8, num_g,
               "worst |grad d*(grad d(x)) - x|"),
          Make(ops.label + ".prox_identity", prox_identity, 1e-10, 1,
               "|prox(c, 0) - c| at the DGF minimizer")};
}

InvariantResult GradientSuite(const Ops& ops, int samples, Rng& rng) {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x = ops.sample(rng);
    const Vec g = ops.gradient(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double keep = x[i];
      const double step = 1e-4 * keep;
      x[i] = keep + step;
      const double up = ops.value(x);
      x[i] = keep - step;
      const double down = ops.value(x);
      x[i] = keep;
      const double fd = (up - down) / (2.0 * step);
      // allowance for cancellation in up - down
      const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                           std::max(std::abs(up), std::abs(down)) / step;
      worst = std::max(worst, std::max(0.0, std::abs(fd - g[i]) - noise) /
                                  std::max(1.0, std::abs(g[i])));
    }
  }
  return Make(ops.label + ".gradient_fd", worst, 1e-4, samples,
              "worst relative error against central differences, net of roundoff");
}

// max d - min d over the domain, probed at samples and vertices; the minimizer
// is the conjugate gradient at 0.
InvariantResult DiameterSuite(const Ops& ops, int pairs, Rng& rng) {
  const Vec first = ops.sample(rng);
  const double low = ops.value(ops.conjugate(Vec(first.size(), 0.0)));
  double worst = ops.value(first) - low;
  for (int s = 1; s < pairs; ++s) {
    const Vec x = s % 2 ? ops.sample(rng)
                        : ops.best_vertex(RandomVector(first.size(), rng, -1.0, 1.0));
    worst = std::max(worst, ops.value(x) - low);
  }
  return Make(ops.label + ".diameter_dominance", worst - ops.diameter,
              1e-12 * std::max(1.0, ops.diameter), pairs,
              "max d(x) - min d minus the diameter bound");
}

InvariantResult SupportSuite(const std::string& label, const Ops& ops, int samples,
                             Rng& rng) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < 10; ++r) {
    const Vec first = ops.sample(rng);
    const Vec g = RandomVector(first.size(), rng, -1.0, 1.0);
    const double top = ops.support(g);
    for (int s = 0; s < samples / 10; ++s) {
      worst = std::max(worst, Dot(g, ops.sample(rng)) - top);
    }
  }
  return Make(label + ".linear_maximize", worst, 1e-9, samples,
              "worst g.x - max_Q g.x over sampled strategies");
}

void Enumerate(const Treeplex& t, std::size_t limit, std::vector<SequenceVector>* out) {
  // Pure strategies: choose one action at every decision point, then keep
  // only the reached part. Distinct vertices are collected by recursion over
  // reached decision points in top-down order.
  std::vector<int> choice(t.num_decision_points(), 0);
  std::function<void(std::vector<int>, SequenceVector)> rec =
      [&](std::vector<int> frontier, SequenceVector x) {
        if (frontier.empty()) {
          if (out->size() >= limit) {
            throw Error(ErrorKind::kInvalidParameter, "too many vertices");
          }
          out->push_back(std::move(x));
          return;
        }
        const int j = frontier.back();
        frontier.pop_back();
        const DecisionPoint& dp = t.decision_point(j);
        for (int a = 0; a < dp.num_actions; ++a) {
          SequenceVector next = x;
          next[dp.sequence(a)] = 1.0;
          std::vector<int> f = frontier;
          for (int c : t.children(dp.sequence(a))) f.push_back(c);
          rec(std::move(f), std::move(next));
        }
      };
  SequenceVector root(t.num_sequences(), 0.0);
  root[kEmptySequence] = 1.0;
  std::vector<int> frontier(t.children(kEmptySequence).begin(),
                            t.children(kEmptySequence).end());
  rec(frontier, root);
}

std::vector<InvariantResult> StructureSuite(const std::string& label,
                                            const Treeplex& t) {
  std::vector<InvariantResult> out;
  auto err = Validate(t);
  out.push_back(Make(label + ".structure", err ? 1.0 : 0.0, 0.0, 1,
                     err ? err->what() : ""));
  const DgfWeights w = ComputeGammaW(t);
  double min_w = *std::min_element(w.w.begin(), w.w.end());
  const double mq = MaxL1(t);
  out.push_back(Make(label + ".weights", std::max(1.0 - min_w, std::abs(w.gamma.root - mq)),
                     0.0, 1, "max(1 - min w, |gamma_root - M_Q|)"));
  if (t.num_decision_points() <= 12) {
    std::vector<SequenceVector> vertices;
    Enumerate(t, 1000000, &vertices);
    double best = 0.0;
    for (const SequenceVector& v : vertices) {
      double l1 = 0.0;
      for (double e : v) l1 += e;
      best = std::max(best, l1);
    }
    out.push_back(Make(label + ".max_l1_bruteforce", std::abs(best - mq), 1e-12,
                       static_cast<long>(vertices.size())));
  }
  return out;
}

std::vector<InvariantResult> DilatabilitySuite(const std::string& label,
                                               const Treeplex& t, int samples,
                                               Rng& rng) {
  const DgfWeights w = ComputeGammaW(t);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const SequenceVector x = SampleStrategy(t, rng);
    const double global = GlobalEntropyValue(t, w, x);
    const double dilated = DilatedEntropyValue(t, w.gamma, x);
    worst = std::max(worst, std::abs(global - dilated) / (1.0 + std::abs(dilated)));
  }
  return {Make(label + ".dilatability", worst, 1e-8, samples,
               "worst |dge - dilated(gamma)| / (1 + |dilated|)")};
}

std::vector<InvariantResult> EquivalenceSuite(const std::string& label,
                                              const Treeplex& t, int num_g, Rng& rng) {
  const ScExtChain chain = ChainFromTreeplex(t);
  const ChainWeights cw = ComputeChainWeights(chain);
  const DgfWeights w = ComputeGammaW(t);
  const DilatedWeights beta = ComputeBeta(t);
  double weight_diff = 0.0;
  for (int j = 0; j < t.num_decision_points(); ++j) {
    weight_diff = std::max(weight_diff, std::abs(cw.alpha_dge[j] - w.gamma.decision_points[j]));
    weight_diff = std::max(weight_diff, std::abs(cw.alpha_dilated[j] - beta.decision_points[j]));
  }
  const ProximalSetup tree_setup = ProximalSetup::Make(t, DgfKind::kDge);
  const ChainSetup chain_setup = ChainSetup::Make(chain, DgfKind::kDge);
  double value_diff = 0.0, gradient_diff = 0.0, conjugate_diff = 0.0;
  for (int s = 0; s < num_g; ++s) {
    const SequenceVector x = SampleStrategy(t, rng);
    const Vec z = SequenceToChain(x);
    value_diff = std::max(value_diff, std::abs(Value(tree_setup, t, x) -
                                               Value(chain_setup, chain, z)));
    const SequenceVector gt = Gradient(tree_setup, t, x);
    const Vec gc = Gradient(chain_setup, chain, z);
    for (std::size_t i = 0; i < gc.size(); ++i) {
      gradient_diff = std::max(gradient_diff, std::abs(gt[i + 1] - gc[i]) /
                                                  std::max(1.0, std::abs(gt[i + 1])));
    }
    const Vec g = RandomVector(t.num_sequences(), rng, -3.0, 3.0);
    const SequenceVector xt = ConjugateGradient(tree_setup, t, g);
    const Vec xc = ConjugateGradient(chain_setup, chain, SequenceToChain(g));
    conjugate_diff = std::max(conjugate_diff, MaxAbsDiff(SequenceToChain(xt), xc));
  }
  const double mx = std::abs(ChainMaxL1(chain) - (MaxL1(t) - 1.0));
  return {Make(label + ".chain_weights", weight_diff, 0.0, 1,
               "chain alpha vs gamma and beta"),
          Make(label + ".chain_value", value_diff, 1e-9, num_g),
          Make(label + ".chain_gradient", gradient_diff, 1e-9, num_g),
          Make(label + ".chain_conjugate", conjugate_diff, 1e-9, num_g),
          Make(label + ".chain_max_l1", mx, 1e-12, 1, "M_X = M_Q - 1")};
}

using Task = std::function<std::vector<InvariantResult>()>;

std::vector<InvariantResult> RunTasks(const std::vector<Task>& tasks, int threads) {
  std::vector<std::vector<InvariantResult>> parts(tasks.size());
  std::size_t next = 0;
  while (next < tasks.size()) {
    std::vector<std::future<std::vector<InvariantResult>>> wave;
    const std::size_t end = std::min(tasks.size(), next + std::max(1, threads));
    for (std::size_t i = next; i < end; ++i) {
      wave.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred,
                                tasks[i]));
    }
    for (std::size_t i = next; i < end; ++i) parts[i] = wave[i - next].get();
    next = end;
  }
  std::vector<InvariantResult> out;
  for (auto& p : parts) {
    for (auto& r : p) out.push_back(std::move(r));
  }
  return out;
}

Rng TaskRng(std::uint64_t seed, int task) {
  return Rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(task + 1));
}

void AddDomainTasks(std::vector<Task>& tasks, const std::function<Ops()>& make,
                    const ValidationOptions& o) {
  const int base = static_cast<int>(tasks.size()) * 8;
  tasks.push_back([=] {
    Rng rng = TaskRng(o.seed, base + 1);
    return HessianSuite(make(), o.hessian_samples, rng);
  });
  tasks.push_back([=] {
    Rng rng = TaskRng(o.seed, base + 2);
    return ConjugateSuite(make(), o.conjugate_samples, o.strategy_samples, rng);
  });
  tasks.push_back([=] {
    Rng rng = TaskRng(o.seed, base + 3);
    return std::vector<InvariantResult>{GradientSuite(make(), o.hessian_samples, rng)};
  });
  tasks.push_back([=] {
    Rng rng = TaskRng(o.seed, base + 4);
    return std::vector<InvariantResult>{DiameterSuite(make(), o.diameter_pairs, rng)};
  });
}

}  // namespace

int ResolveThreads(int requested) {
  int n = requested;
  if (n <= 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("EFGFOM_THREADS")) {
      const int cap = std::atoi(env);
      if (cap > 0) n = cap;
    }
  }
  return std::max(1, n);
}

bool ValidationReport::passed() const {
  return std::all_of(results.begin(), results.end(),
                     [](const InvariantResult& r) { return r.passed; });
}

std::string ValidationReport::ToJson() const {
  nlohmann::ordered_json doc;
  doc["source"] = source;
  doc["passed"] = passed();
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const InvariantResult& r : results) {
    nlohmann::ordered_json e;
    e["name"] = r.name;
    e["passed"] = r.passed;
    e["worst"] = r.worst;
    e["tolerance"] = r.tolerance;
    e["samples"] = r.samples;
    if (!r.detail.empty()) e["detail"] = r.detail;
    list.push_back(std::move(e));
  }
  doc["invariants"] = std::move(list);
  return doc.dump(2);
}

std::vector<SequenceVector> EnumerateVertices(const Treeplex& t) {
  std::vector<SequenceVector> out;
  Enumerate(t, 1000000, &out);
  return out;
}

ValidationReport ValidateGame(const GameInstance& game,
                              const ValidationOptions& options) {
  ValidationReport report;
  report.source = game.name;
  std::vector<Task> tasks;
  const Treeplex* players[2] = {&game.treeplex_x, &game.treeplex_y};
  for (int p = 0; p < 2; ++p) {
    const Treeplex& t = *players[p];
    const std::string label = "p" + std::to_string(p + 1);
    const ValidationOptions o = options;
    tasks.push_back([&t, label] { return StructureSuite(label, t); });
    tasks.push_back([&t, label, o, p] {
      Rng rng = TaskRng(o.seed, 1000 + p);
      return DilatabilitySuite(label, t, o.strategy_samples, rng);
    });
    tasks.push_back([&t, label, o, p] {
      Rng rng = TaskRng(o.seed, 2000 + p);
      Ops ops = TreeplexOps(label, t, DgfKind::kDge);
      return std::vector<InvariantResult>{SupportSuite(label, ops, o.strategy_samples, rng)};
    });
    tasks.push_back([&t, label, o, p] {
      Rng rng = TaskRng(o.seed, 3000 + p);
      return EquivalenceSuite(label, t, o.conjugate_samples, rng);
    });
    for (DgfKind kind : {DgfKind::kDge, DgfKind::kDilatedEntropy}) {
      const std::string name = label + "." + std::string(DgfKindName(kind));
      AddDomainTasks(tasks, [&t, name, kind] { return TreeplexOps(name, t, kind); }, o);
    }
  }
  report.results = RunTasks(tasks, ResolveThreads(options.threads));
  return report;
}

ValidationReport ValidateChain(const ScExtChain& chain,
                               const ValidationOptions& options) {
  ValidationReport report;
  report.source = "chain";
  std::vector<Task> tasks;
  const ValidationOptions o = options;
  tasks.push_back([&chain, o] {
    std::vector<InvariantResult> out;
    auto err = ValidateScales(chain, o.seed);
    out.push_back(Make("chain.scales", err ? 1.0 : 0.0, 0.0, 100,
                       err ? err->what() : ""));
    if (chain.num_blocks() <= 10) {
      const double mx = ChainMaxL1(chain);
      double best = 0.0;
      const auto vertices = EnumerateChainVertices(chain);
      for (const Vec& v : vertices) {
        double l1 = 0.0;
        for (double e : v) l1 += e;
        best = std::max(best, l1);
      }
      out.push_back(Make("chain.max_l1_bruteforce", std::abs(best - mx), 1e-12,
                         static_cast<long>(vertices.size())));
    }
    Rng rng = TaskRng(o.seed, 10);
    const ChainWeights w = ComputeChainWeights(chain);
    double worst = 0.0;
    for (int s = 0; s < o.strategy_samples; ++s) {
      const Vec x = SampleChainPoint(chain, rng);
      const double a = ChainGlobalValue(chain, w.alpha_dge, x);
      const double b = ChainDilatedValue(chain, w.alpha_dge, x);
      worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(b)));
    }
    out.push_back(Make("chain.dilatability", worst, 1e-8, o.strategy_samples,
                       "worst |global - dilated| / (1 + |dilated|) with alpha_dge"));
    Ops ops = ChainOps("chain", chain, DgfKind::kDge);
    out.push_back(SupportSuite("chain", ops, o.strategy_samples, rng));
    return out;
  });
  for (DgfKind kind : {DgfKind::kDge, DgfKind::kDilatedEntropy}) {
    const std::string name = "chain." + std::string(DgfKindName(kind));
    AddDomainTasks(tasks, [&chain, name, kind] { return ChainOps(name, chain, kind); }, o);
  }
  report.results = RunTasks(tasks, ResolveThreads(options.threads));
  return report;
}

}  // namespace efgfom

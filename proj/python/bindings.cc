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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "efgfom/dgf.h"
#include "efgfom/error.h"
#include "efgfom/games.h"
#include "efgfom/scext.h"
#include "efgfom/solver.h"
#include "efgfom/validate.h"

namespace py = pybind11;
using namespace efgfom;

namespace {

DgfKind KindFromName(const std::string& name) {
  auto kind = ParseDgfKind(name);
  if (!kind) throw Error(ErrorKind::kInvalidParameter, "unknown dgf '" + name + "'");
  return *kind;
}

Algorithm AlgorithmFromName(const std::string& name) {
  auto alg = ParseAlgorithm(name);
  if (!alg) throw Error(ErrorKind::kInvalidParameter, "unknown algorithm '" + name + "'");
  return *alg;
}

py::list Triplets(const SparseMatrix& m) {
  py::list out;
  for (const Triplet& e : m.entries()) out.append(py::make_tuple(e.row, e.col, e.value));
  return out;
}

py::dict WeightsDict(const DilatedWeights& w) {
  py::dict d;
  d["root"] = w.root;
  d["decision_points"] = w.decision_points;
  return d;
}

py::dict SolveProblem(const SaddlePointProblem& p, const std::string& algorithm,
                      long iterations, std::optional<long> budget, long log_dense) {
  SolveOptions o;
  o.algorithm = AlgorithmFromName(algorithm);
  o.iterations = iterations;
  o.gradient_budget = budget;
  o.log_dense_until = log_dense;
  SolveResult r;
  {
    py::gil_scoped_release release;
    r = Solve(p, o);
  }
  py::list log;
  for (const IterationRecord& rec : r.log) {
    py::dict row;
    row["iteration"] = rec.iteration;
    row["gradient_computations"] = rec.gradient_computations;
    row["gap"] = rec.gap;
    row["mu_x"] = rec.mu_x;
    row["mu_y"] = rec.mu_y;
    row["tau"] = rec.tau;
    row["bound"] = rec.bound;
    log.append(row);
  }
  py::dict out;
  out["log"] = log;
  out["csv"] = IterationLogCsv(r.log);
  out["x"] = r.x;
  out["y"] = r.y;
  out["final_gap"] = r.final_gap;
  out["gradient_computations"] = r.gradient_computations;
  out["iterations"] = r.iterations;
  out["bound_satisfied"] = r.bound_satisfied;
  out["omega_x"] = r.omega_x;
  out["omega_y"] = r.omega_y;
  out["opnorm"] = p.opnorm;
  out["fitted_mu"] = r.fitted_mu ? py::cast(*r.fitted_mu) : py::none();
  return out;
}

ValidationOptions MakeOptions(std::uint64_t seed, int threads) {
  ValidationOptions o;
  o.seed = seed;
  o.threads = threads;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sequence-form DGFs and first-order saddle-point solvers";

  static py::handle error_type =
      py::exception<Error>(m, "Error", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
      inst.attr("kind") = std::string(ErrorKindName(e.kind()));
      PyErr_SetObject(error_type.ptr(), inst.ptr());
    }
  });

  py::class_<Treeplex>(m, "Treeplex")
      .def_property_readonly("num_decision_points", &Treeplex::num_decision_points)
      .def_property_readonly("num_sequences", &Treeplex::num_sequences)
      .def("decision_point_ids",
           [](const Treeplex& t) {
             std::vector<std::string> ids;
             for (const DecisionPoint& dp : t.decision_points()) ids.push_back(dp.id);
             return ids;
           })
      .def("sequence_id", &Treeplex::SequenceId)
      .def("max_l1", [](const Treeplex& t) { return MaxL1(t); })
      .def("depth", [](const Treeplex& t) { return Depth(t); })
      .def("uniform_strategy", [](const Treeplex& t) { return UniformStrategy(t); })
      .def("sample_strategy",
           [](const Treeplex& t, std::uint64_t seed) {
             Rng rng(seed);
             return SampleStrategy(t, rng);
           },
           py::arg("seed"))
      .def("is_strategy",
           [](const Treeplex& t, const std::vector<double>& x, double tol) {
             return IsStrategy(t, x, tol);
           },
           py::arg("x"), py::arg("tol") = 1e-9)
      .def("linear_maximize",
           [](const Treeplex& t, const std::vector<double>& g) {
             LinearMaxResult r = LinearMaximize(t, g);
             return py::make_tuple(r.vertex, r.value);
           })
      .def("beta", [](const Treeplex& t) { return WeightsDict(ComputeBeta(t)); })
      .def("gamma", [](const Treeplex& t) { return WeightsDict(ComputeGammaW(t).gamma); })
      .def("w", [](const Treeplex& t) { return ComputeGammaW(t).w; });

  py::class_<GameInstance>(m, "Game")
      .def_readonly("name", &GameInstance::name)
      .def_readonly("treeplex_x", &GameInstance::treeplex_x)
      .def_readonly("treeplex_y", &GameInstance::treeplex_y)
      .def_readonly("num_leaves", &GameInstance::num_leaves)
      .def("payoff", [](const GameInstance& g) { return Triplets(g.payoff); })
      .def("serialize", &SerializeGame)
      .def("save", [](const GameInstance& g, const std::string& path) { SaveGame(g, path); });

  m.def("generate_kuhn", &GenerateKuhn);
  m.def("generate_leduc", &GenerateLeduc, py::arg("ranks"));
  m.def("parse_game", &ParseGame);
  m.def("load_game", [](const std::string& path) { return LoadGame(path); });

  m.def("dgf_value",
        [](const Treeplex& t, const std::string& kind, const std::vector<double>& x,
           double scale) { return Value(ProximalSetup::Make(t, KindFromName(kind), scale), t, x); },
        py::arg("treeplex"), py::arg("kind"), py::arg("x"), py::arg("scale") = 1.0);
  m.def("dgf_gradient",
        [](const Treeplex& t, const std::string& kind, const std::vector<double>& x,
           double scale) {
          return Gradient(ProximalSetup::Make(t, KindFromName(kind), scale), t, x);
        },
        py::arg("treeplex"), py::arg("kind"), py::arg("x"), py::arg("scale") = 1.0);
  m.def("conjugate_gradient",
        [](const Treeplex& t, const std::string& kind, const std::vector<double>& g,
           double scale) {
          double value = 0.0;
          SequenceVector x =
              ConjugateGradient(ProximalSetup::Make(t, KindFromName(kind), scale), t, g, &value);
          return py::make_tuple(x, value);
        },
        py::arg("treeplex"), py::arg("kind"), py::arg("g"), py::arg("scale") = 1.0);
  m.def("prox",
        [](const Treeplex& t, const std::string& kind, const std::vector<double>& center,
           const std::vector<double>& g, double scale) {
          return Prox(ProximalSetup::Make(t, KindFromName(kind), scale), t, center, g);
        },
        py::arg("treeplex"), py::arg("kind"), py::arg("center"), py::arg("g"),
        py::arg("scale") = 1.0);
  m.def("diameter_bound",
        [](const Treeplex& t, const std::string& kind, double scale) {
          return DiameterBound(ProximalSetup::Make(t, KindFromName(kind), scale), t);
        },
        py::arg("treeplex"), py::arg("kind"), py::arg("scale") = 1.0);

  py::class_<ScExtChain>(m, "Chain")
      .def_property_readonly("num_blocks", &ScExtChain::num_blocks)
      .def_property_readonly("dim", &ScExtChain::dim)
      .def("max_l1", [](const ScExtChain& c) { return ChainMaxL1(c); })
      .def("alpha_dge", [](const ScExtChain& c) { return ComputeChainWeights(c).alpha_dge; })
      .def("alpha_dilated",
           [](const ScExtChain& c) { return ComputeChainWeights(c).alpha_dilated; })
      .def("conjugate_gradient",
           [](const ScExtChain& c, const std::string& kind, const std::vector<double>& g) {
             return ConjugateGradient(ChainSetup::Make(c, KindFromName(kind)), c, g);
           })
      .def("__eq__", [](const ScExtChain& a, const ScExtChain& b) { return a == b; });

  py::class_<ChainFile>(m, "ChainFile")
      .def_readonly("chain", &ChainFile::chain)
      .def_readonly("opponent", &ChainFile::opponent)
      .def("serialize", &SerializeChainFile);

  m.def("chain_from_treeplex", &ChainFromTreeplex);
  m.def("sequence_to_chain", [](const std::vector<double>& x) { return SequenceToChain(x); });
  m.def("parse_chain_file", &ParseChainFile);
  m.def("load_chain_file", [](const std::string& path) { return LoadChainFile(path); });
  m.def("matching_pennies", &MatchingPennies);

  m.def("solve_game",
        [](const GameInstance& g, const std::string& algorithm, const std::string& dgf,
           long iterations, std::optional<long> budget, long log_dense) {
          return SolveProblem(ProblemFromGame(g, KindFromName(dgf)), algorithm, iterations,
                              budget, log_dense);
        },
        py::arg("game"), py::arg("algorithm") = "egt", py::arg("dgf") = "dge",
        py::arg("iterations") = 1000, py::arg("gradient_budget") = py::none(),
        py::arg("log_dense_until") = 512);
  m.def("solve_chain_file",
        [](const ChainFile& f, const std::string& algorithm, const std::string& dgf,
           long iterations, std::optional<long> budget, long log_dense) {
          return SolveProblem(ProblemFromChainFile(f, KindFromName(dgf)), algorithm,
                              iterations, budget, log_dense);
        },
        py::arg("file"), py::arg("algorithm") = "mp", py::arg("dgf") = "dge",
        py::arg("iterations") = 1000, py::arg("gradient_budget") = py::none(),
        py::arg("log_dense_until") = 512);
  m.def("theoretical_bound",
        [](const std::string& algorithm, long t, double opnorm, double ox, double oy) {
          return TheoreticalBound(AlgorithmFromName(algorithm), t, opnorm, ox, oy);
        });

  m.def("validate_game",
        [](const GameInstance& g, std::uint64_t seed, int threads) {
          py::gil_scoped_release release;
          return ValidateGame(g, MakeOptions(seed, threads)).ToJson();
        },
        py::arg("game"), py::arg("seed") = 0, py::arg("threads") = 0);
  m.def("validate_chain",
        [](const ScExtChain& c, std::uint64_t seed, int threads) {
          py::gil_scoped_release release;
          return ValidateChain(c, MakeOptions(seed, threads)).ToJson();
        },
        py::arg("chain"), py::arg("seed") = 0, py::arg("threads") = 0);
}

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


#include "efgfom/scext.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace efgfom {
namespace {

using json = nlohmann::json;

double XLogX(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

int NonZeros(const ChainBlock& b) {
  int n = 0;
  for (const ChainCoefficient& c : b.scale) n += c.value != 0.0;
  return n;
}

void CheckDim(const ScExtChain& chain, std::span<const double> x) {
  if (static_cast<int>(x.size()) != chain.dim()) {
    throw Error(ErrorKind::kInvalidParameter,
                "chain vector has length " + std::to_string(x.size()) +
                    ", expected " + std::to_string(chain.dim()));
  }
}

void CheckInterior(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !std::isfinite(x[i])) {
      throw Error(ErrorKind::kDomainError,
                  "chain coordinate " + std::to_string(i) + " = " +
                      std::to_string(x[i]) + " is not strictly positive");
    }
  }
}

void CheckNonNegative(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0) || !std::isfinite(x[i])) {
      throw Error(ErrorKind::kDomainError,
                  "chain coordinate " + std::to_string(i) + " = " +
                      std::to_string(x[i]) + " is outside the domain");
    }
  }
}

double ScaleOrThrow(const ScExtChain& chain, int k, std::span<const double> x) {
  const double h = chain.Scale(k, x);
  if (!(h > 0.0)) {
    throw Error(ErrorKind::kDomainError,
                "scale of block " + std::to_string(k) + " is not positive");
  }
  return h;
}

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::kParseError, where + ": " + what);
}

const json& Field(const json& obj, const std::string& key,
                  const std::string& where) {
  if (!obj.is_object()) Fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) Fail(where, "missing field '" + key + "'");
  return *it;
}

int IntField(const json& obj, const std::string& key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_number_integer()) Fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

json ChainToJson(const ScExtChain& chain) {
  json blocks = json::array();
  json hs = json::array();
  for (int k = 0; k < chain.num_blocks(); ++k) {
    blocks.push_back({{"size", chain.size(k)}});
    if (!chain.scaled(k)) continue;
    json coeffs = json::array();
    for (const ChainCoefficient& c : chain.block(k).scale) {
      coeffs.push_back({{"ref_block", c.ref_block},
                        {"ref_index", c.ref_index},
                        {"value", c.value}});
    }
    hs.push_back({{"block", k}, {"coeffs", std::move(coeffs)}});
  }
  return {{"blocks", std::move(blocks)}, {"h", std::move(hs)}};
}

ScExtChain ChainFromJson(const json& doc, const std::string& where) {
  const json& blocks = Field(doc, "blocks", where);
  if (!blocks.is_array()) Fail(where + ".blocks", "expected an array");
  std::vector<ChainBlock> out(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    out[k].size =
        IntField(blocks[k], "size", where + ".blocks[" + std::to_string(k) + "]");
  }
  if (auto it = doc.find("h"); it != doc.end()) {
    if (!it->is_array()) Fail(where + ".h", "expected an array");
    std::set<int> seen;
    for (std::size_t e = 0; e < it->size(); ++e) {
      const std::string at = where + ".h[" + std::to_string(e) + "]";
      const json& entry = (*it)[e];
      const int k = IntField(entry, "block", at);
      if (k < 0 || k >= static_cast<int>(out.size())) {
        Fail(at + ".block", "block " + std::to_string(k) + " does not exist");
      }
      if (!seen.insert(k).second) {
        Fail(at + ".block", "block " + std::to_string(k) + " has two scales");
      }
      const json& coeffs = Field(entry, "coeffs", at);
      if (!coeffs.is_array()) Fail(at + ".coeffs", "expected an array");
      for (std::size_t c = 0; c < coeffs.size(); ++c) {
        const std::string cat = at + ".coeffs[" + std::to_string(c) + "]";
        const json& value = Field(coeffs[c], "value", cat);
        if (!value.is_number()) Fail(cat + ".value", "expected a number");
        out[k].scale.push_back(ChainCoefficient{IntField(coeffs[c], "ref_block", cat),
                                                IntField(coeffs[c], "ref_index", cat),
                                                value.get<double>()});
      }
    }
  }
  return ScExtChain::Build(std::move(out));
}

}  // namespace

ScExtChain ScExtChain::Build(std::vector<ChainBlock> blocks) {
  ScExtChain c;
  c.offsets_.reserve(blocks.size());
  for (int k = 0; k < static_cast<int>(blocks.size()); ++k) {
    const ChainBlock& b = blocks[k];
    if (b.size < 1) {
      throw Error(ErrorKind::kEmptyActionSet,
                  "block " + std::to_string(k) + " has size " + std::to_string(b.size));
    }
    std::set<std::pair<int, int>> refs;
    for (const ChainCoefficient& coeff : b.scale) {
      const std::string where = "block " + std::to_string(k) + " coefficient (" +
                                std::to_string(coeff.ref_block) + ", " +
                                std::to_string(coeff.ref_index) + ")";
      if (coeff.ref_block < 0 || coeff.ref_block >= k) {
        throw Error(ErrorKind::kCyclicStructure,
                    where + " does not refer to an earlier block");
      }
      if (coeff.ref_index < 0 || coeff.ref_index >= blocks[coeff.ref_block].size) {
        throw Error(ErrorKind::kInvalidParameter, where + " index out of range");
      }
      if (!refs.emplace(coeff.ref_block, coeff.ref_index).second) {
        throw Error(ErrorKind::kInvalidParameter, where + " appears twice");
      }
      if (!(coeff.value >= 0.0 && coeff.value <= 1.0)) {
        throw Error(ErrorKind::kInvalidCoefficient,
                    where + " has value " + std::to_string(coeff.value) +
                        " outside [0, 1]");
      }
    }
    c.offsets_.push_back(c.dim_);
    c.dim_ += b.size;
  }
  c.blocks_ = std::move(blocks);
  return c;
}

double ScExtChain::Scale(int k, std::span<const double> x) const {
  if (!scaled(k)) return 1.0;
  double h = 0.0;
  for (const ChainCoefficient& c : blocks_[k].scale) h += c.value * x[Coordinate(c)];
  return h;
}

bool operator==(const ScExtChain& a, const ScExtChain& b) {
  if (a.num_blocks() != b.num_blocks()) return false;
  for (int k = 0; k < a.num_blocks(); ++k) {
    const ChainBlock& x = a.block(k);
    const ChainBlock& y = b.block(k);
    if (x.size != y.size || x.scale.size() != y.scale.size()) return false;
    for (std::size_t i = 0; i < x.scale.size(); ++i) {
      if (x.scale[i].ref_block != y.scale[i].ref_block ||
          x.scale[i].ref_index != y.scale[i].ref_index ||
          x.scale[i].value != y.scale[i].value) {
        return false;
      }
    }
  }
  return true;
}

std::optional<Error> ValidateScales(const ScExtChain& chain, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(chain.dim());
  for (int sample = 0; sample < 100; ++sample) {
    for (int k = 0; k < chain.num_blocks(); ++k) {
      const double h = chain.Scale(k, x);
      if (h > 1.0 + 1e-9) {
        return Error(ErrorKind::kInvalidCoefficient,
                     "scale of block " + std::to_string(k) + " reaches " +
                         std::to_string(h) + " > 1");
      }
      if (!(h > 1e-12)) {
        return Error(ErrorKind::kNonPositiveScale,
                     "scale of block " + std::to_string(k) + " is " +
                         std::to_string(h) + " at an interior point");
      }
      std::span<double> local(x.data() + chain.offset(k), chain.size(k));
      rng.Dirichlet(local);
      for (double& v : local) v *= h;
    }
  }
  return std::nullopt;
}

ScExtChain ChainFromTreeplex(const Treeplex& t) {
  std::vector<ChainBlock> blocks(t.num_decision_points());
  for (int j = 0; j < t.num_decision_points(); ++j) {
    const DecisionPoint& dp = t.decision_point(j);
    blocks[j].size = dp.num_actions;
    if (dp.parent_sequence != kEmptySequence) {
      blocks[j].scale.push_back(ChainCoefficient{
          t.decision_point_of(dp.parent_sequence), t.action_of(dp.parent_sequence),
          1.0});
    }
  }
  return ScExtChain::Build(std::move(blocks));
}

std::vector<double> SequenceToChain(std::span<const double> x) {
  return std::vector<double>(x.begin() + 1, x.end());
}

SequenceVector ChainToSequence(std::span<const double> z) {
  SequenceVector x(z.size() + 1);
  x[kEmptySequence] = 1.0;
  std::copy(z.begin(), z.end(), x.begin() + 1);
  return x;
}

ChainWeights ComputeChainWeights(const ScExtChain& chain) {
  ChainWeights w;
  const int n = chain.num_blocks();
  w.alpha_dilated.assign(n, 0.0);
  w.alpha_dge.assign(n, 0.0);
  auto run = [&](double base, std::vector<double>& alpha) {
    std::vector<double> acc(chain.dim(), 0.0);
    for (int k = n - 1; k >= 0; --k) {
      double top = 0.0;
      for (int i = 0; i < chain.size(k); ++i) {
        top = std::max(top, acc[chain.offset(k) + i]);
      }
      alpha[k] = base + base * top;
      const int nnz = NonZeros(chain.block(k));
      for (const ChainCoefficient& c : chain.block(k).scale) {
        acc[chain.Coordinate(c)] += alpha[k] * nnz * c.value;
      }
    }
  };
  run(2.0, w.alpha_dilated);
  run(1.0, w.alpha_dge);
  return w;
}

double ChainDilatedValue(const ScExtChain& chain, std::span<const double> alpha,
                         std::span<const double> x) {
  double total = 0.0;
  for (int k = 0; k < chain.num_blocks(); ++k) {
    const double h = chain.Scale(k, x);
    if (h <= 0.0) continue;
    double local = h * std::log(static_cast<double>(chain.size(k)));
    for (int i = 0; i < chain.size(k); ++i) {
      const double v = x[chain.offset(k) + i];
      if (v > 0.0) local += v * std::log(v / h);
    }
    total += alpha[k] * local;
  }
  return total;
}

double ChainGlobalValue(const ScExtChain& chain, std::span<const double> alpha,
                        std::span<const double> x) {
  double total = 0.0;
  for (int k = 0; k < chain.num_blocks(); ++k) {
    const double h = chain.Scale(k, x);
    double local = h * std::log(static_cast<double>(chain.size(k))) - XLogX(h);
    for (int i = 0; i < chain.size(k); ++i) local += XLogX(x[chain.offset(k) + i]);
    total += alpha[k] * local;
  }
  return total;
}

std::vector<double> ChainDilatedGradient(const ScExtChain& chain,
                                         std::span<const double> alpha,
                                         std::span<const double> x) {
  CheckDim(chain, x);
  CheckInterior(x);
  std::vector<double> g(chain.dim(), 0.0);
  for (int k = 0; k < chain.num_blocks(); ++k) {
    const double h = ScaleOrThrow(chain, k, x);
    double mass = 0.0;
    for (int i = 0; i < chain.size(k); ++i) {
      const int s = chain.offset(k) + i;
      g[s] += alpha[k] * (1.0 + std::log(x[s] / h));
      mass += x[s];
    }
    const double dh =
        alpha[k] * (std::log(static_cast<double>(chain.size(k))) - mass / h);
    for (const ChainCoefficient& c : chain.block(k).scale) {
      g[chain.Coordinate(c)] += dh * c.value;
    }
  }
  return g;
}

std::vector<double> ChainGlobalGradient(const ScExtChain& chain,
                                        std::span<const double> alpha,
                                        std::span<const double> x) {
  CheckDim(chain, x);
  CheckInterior(x);
  std::vector<double> g(chain.dim(), 0.0);
  for (int k = 0; k < chain.num_blocks(); ++k) {
    for (int i = 0; i < chain.size(k); ++i) {
      const int s = chain.offset(k) + i;
      g[s] += alpha[k] * (1.0 + std::log(x[s]));
    }
    if (!chain.scaled(k)) continue;
    const double h = ScaleOrThrow(chain, k, x);
    const double dh =
        alpha[k] * (std::log(static_cast<double>(chain.size(k))) - std::log(h) - 1.0);
    for (const ChainCoefficient& c : chain.block(k).scale) {
      g[chain.Coordinate(c)] += dh * c.value;
    }
  }
  return g;
}

std::vector<double> ChainConjugateGradient(const ScExtChain& chain,
                                           std::span<const double> alpha,
                                           std::span<const double> g,
                                           double* max_value) {
  CheckDim(chain, g);
  std::vector<double> acc(g.begin(), g.end());
  std::vector<double> z(chain.dim(), 0.0);
  double value = 0.0;
  for (int k = chain.num_blocks() - 1; k >= 0; --k) {
    const int off = chain.offset(k);
    const int n = chain.size(k);
    double top = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double u = acc[off + i] / alpha[k];
      if (!std::isfinite(u)) {
        throw Error(ErrorKind::kOverflowGuard,
                    "non-finite exponent at chain coordinate " +
                        std::to_string(off + i));
      }
      top = std::max(top, u);
    }
    double partition = 0.0;
    for (int i = 0; i < n; ++i) partition += std::exp(acc[off + i] / alpha[k] - top);
    for (int i = 0; i < n; ++i) {
      z[off + i] = std::max(std::exp(acc[off + i] / alpha[k] - top) / partition,
                            kProbabilityFloor);
    }
    const double local =
        alpha[k] * (top + std::log(partition) - std::log(static_cast<double>(n)));
    if (chain.scaled(k)) {
      for (const ChainCoefficient& c : chain.block(k).scale) {
        acc[chain.Coordinate(c)] += local * c.value;
      }
    } else {
      value += local;
    }
  }
  for (int k = 0; k < chain.num_blocks(); ++k) {
    const double h = chain.Scale(k, z);
    for (int i = 0; i < chain.size(k); ++i) {
      double& v = z[chain.offset(k) + i];
      v = std::max(v * h, kProbabilityFloor);
    }
  }
  if (max_value) *max_value = value;
  return z;
}

namespace {

double ChainBestResponse(const ScExtChain& chain, std::span<const double> g,
                         std::vector<int>* best) {
  CheckDim(chain, g);
  std::vector<double> acc(g.begin(), g.end());
  if (best) best->assign(chain.num_blocks(), 0);
  double value = 0.0;
  for (int k = chain.num_blocks() - 1; k >= 0; --k) {
    const int off = chain.offset(k);
    int arg = 0;
    for (int i = 1; i < chain.size(k); ++i) {
      if (acc[off + i] > acc[off + arg]) arg = i;
    }
    const double top = acc[off + arg];
    if (best) (*best)[k] = arg;
    if (chain.scaled(k)) {
      for (const ChainCoefficient& c : chain.block(k).scale) {
        acc[chain.Coordinate(c)] += top * c.value;
      }
    } else {
      value += top;
    }
  }
  return value;
}

}  // namespace

ChainLinearMax ChainLinearMaximize(const ScExtChain& chain,
                                   std::span<const double> g) {
  std::vector<int> best;
  ChainBestResponse(chain, g, &best);
  ChainLinearMax out;
  out.vertex.assign(chain.dim(), 0.0);
  for (int k = 0; k < chain.num_blocks(); ++k) {
    out.vertex[chain.offset(k) + best[k]] = chain.Scale(k, out.vertex);
  }
  for (int s = 0; s < chain.dim(); ++s) out.value += g[s] * out.vertex[s];
  return out;
}

double ChainLinearMaximizeValue(const ScExtChain& chain,
                                std::span<const double> g) {
  return ChainBestResponse(chain, g, nullptr);
}

double ChainMaxL1(const ScExtChain& chain) {
  std::vector<double> ones(chain.dim(), 1.0);
  return ChainLinearMaximizeValue(chain, ones);
}

bool IsChainPoint(const ScExtChain& chain, std::span<const double> x, double tol) {
  if (static_cast<int>(x.size()) != chain.dim()) return false;
  for (double v : x) {
    if (!(v >= -tol)) return false;
  }
  for (int k = 0; k < chain.num_blocks(); ++k) {
    double mass = 0.0;
    for (int i = 0; i < chain.size(k); ++i) mass += x[chain.offset(k) + i];
    if (std::abs(mass - chain.Scale(k, x)) > tol) return false;
  }
  return true;
}

std::vector<double> SampleChainPoint(const ScExtChain& chain, Rng& rng) {
  std::vector<double> x(chain.dim(), 0.0);
  for (int k = 0; k < chain.num_blocks(); ++k) {
    std::span<double> local(x.data() + chain.offset(k), chain.size(k));
    const double h = chain.Scale(k, x);
    rng.Dirichlet(local);
    for (double& v : local) v *= h;
  }
  return x;
}

std::vector<double> UniformChainPoint(const ScExtChain& chain) {
  std::vector<double> x(chain.dim(), 0.0);
  for (int k = 0; k < chain.num_blocks(); ++k) {
    const double h = chain.Scale(k, x);
    for (int i = 0; i < chain.size(k); ++i) x[chain.offset(k) + i] = h / chain.size(k);
  }
  return x;
}

std::vector<std::vector<double>> EnumerateChainVertices(const ScExtChain& chain) {
  if (chain.num_blocks() > 10) {
    throw Error(ErrorKind::kInvalidParameter,
                "vertex enumeration is limited to 10 blocks");
  }
  double count = 1.0;
  for (int k = 0; k < chain.num_blocks(); ++k) count *= chain.size(k);
  if (count > 1e6) {
    throw Error(ErrorKind::kInvalidParameter,
                "vertex enumeration is limited to 10^6 points");
  }
  std::vector<std::vector<double>> out;
  std::vector<int> pick(chain.num_blocks(), 0);
  while (true) {
    std::vector<double> x(chain.dim(), 0.0);
    for (int k = 0; k < chain.num_blocks(); ++k) {
      x[chain.offset(k) + pick[k]] = chain.Scale(k, x);
    }
    out.push_back(std::move(x));
    int k = chain.num_blocks() - 1;
    while (k >= 0 && ++pick[k] == chain.size(k)) pick[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

ChainSetup ChainSetup::Make(const ScExtChain& chain, DgfKind kind, double scale) {
  if (kind == DgfKind::kDilatedEuclidean) {
    throw Error(ErrorKind::kInvalidParameter,
                "chains support only the entropy DGFs");
  }
  if (!(scale > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "DGF scale must be positive");
  }
  ChainWeights w = ComputeChainWeights(chain);
  ChainSetup s;
  s.kind = kind;
  s.scale = scale;
  s.alpha = kind == DgfKind::kDge ? std::move(w.alpha_dge) : std::move(w.alpha_dilated);
  s.max_l1 = ChainMaxL1(chain);
  return s;
}

ChainSetup ChainSetup::ForSolver(const ScExtChain& chain, DgfKind kind) {
  return Make(chain, kind, ChainMaxL1(chain));
}

double Value(const ChainSetup& setup, const ScExtChain& chain,
             std::span<const double> x) {
  CheckDim(chain, x);
  CheckNonNegative(x);
  const double v = setup.kind == DgfKind::kDge
                       ? ChainGlobalValue(chain, setup.alpha, x)
                       : ChainDilatedValue(chain, setup.alpha, x);
  return setup.scale * v;
}

std::vector<double> Gradient(const ChainSetup& setup, const ScExtChain& chain,
                             std::span<const double> x) {
  std::vector<double> g = setup.kind == DgfKind::kDge
                              ? ChainGlobalGradient(chain, setup.alpha, x)
                              : ChainDilatedGradient(chain, setup.alpha, x);
  for (double& v : g) v *= setup.scale;
  return g;
}

std::vector<double> ConjugateGradient(const ChainSetup& setup,
                                      const ScExtChain& chain,
                                      std::span<const double> g,
                                      double* max_value) {
  std::vector<double> h(g.begin(), g.end());
  for (double& v : h) v /= setup.scale;
  double value = 0.0;
  std::vector<double> z = ChainConjugateGradient(chain, setup.alpha, h, &value);
  if (max_value) *max_value = setup.scale * value;
  return z;
}

std::vector<double> Prox(const ChainSetup& setup, const ScExtChain& chain,
                         std::span<const double> center,
                         std::span<const double> g) {
  std::vector<double> shifted = Gradient(setup, chain, center);
  for (std::size_t s = 0; s < shifted.size(); ++s) shifted[s] -= g[s];
  return ConjugateGradient(setup, chain, shifted);
}

double Bregman(const ChainSetup& setup, const ScExtChain& chain,
               std::span<const double> x, std::span<const double> center) {
  const std::vector<double> grad = Gradient(setup, chain, center);
  double linear = 0.0;
  for (std::size_t s = 0; s < grad.size(); ++s) linear += grad[s] * (x[s] - center[s]);
  return Value(setup, chain, x) - Value(setup, chain, center) - linear;
}

double DiameterBound(const ChainSetup& setup, const ScExtChain& chain) {
  std::vector<double> g(chain.dim(), 0.0);
  double constant = 0.0;
  for (int k = 0; k < chain.num_blocks(); ++k) {
    const double weight = setup.alpha[k] * std::log(static_cast<double>(chain.size(k)));
    if (!chain.scaled(k)) {
      constant += weight;
      continue;
    }
    for (const ChainCoefficient& c : chain.block(k).scale) {
      g[chain.Coordinate(c)] += weight * c.value;
    }
  }
  return setup.scale * (constant + ChainLinearMaximizeValue(chain, g));
}

std::string SerializeChainFile(const ChainFile& file) {
  json doc = ChainToJson(file.chain);
  doc["version"] = kChainFormatVersion;
  if (file.opponent) doc["opponent"] = ChainToJson(*file.opponent);
  if (file.payoff) {
    json payoffs = json::array();
    for (const Triplet& e : file.payoff->entries()) {
      payoffs.push_back({{"row", e.row}, {"col", e.col}, {"value", e.value}});
    }
    doc["payoff"] = std::move(payoffs);
  }
  return doc.dump(1);
}

ChainFile ParseChainFile(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  const json& version = Field(doc, "version", "chain");
  if (!version.is_number_integer() || version.get<int>() != kChainFormatVersion) {
    throw Error(ErrorKind::kSchemaVersionMismatch,
                "chain file version " + version.dump() + ", expected " +
                    std::to_string(kChainFormatVersion));
  }
  ChainFile file;
  file.chain = ChainFromJson(doc, "chain");
  if (auto err = ValidateScales(file.chain, 0)) throw *err;
  const bool has_opponent = doc.contains("opponent");
  const bool has_payoff = doc.contains("payoff");
  if (has_opponent != has_payoff) {
    Fail("chain", "'opponent' and 'payoff' must be given together");
  }
  if (has_opponent) {
    file.opponent = ChainFromJson(doc["opponent"], "chain.opponent");
    if (auto err = ValidateScales(*file.opponent, 0)) throw *err;
    const json& payoffs = doc["payoff"];
    if (!payoffs.is_array()) Fail("chain.payoff", "expected an array");
    std::vector<Triplet> entries;
    for (std::size_t e = 0; e < payoffs.size(); ++e) {
      const std::string at = "chain.payoff[" + std::to_string(e) + "]";
      const json& value = Field(payoffs[e], "value", at);
      if (!value.is_number()) Fail(at + ".value", "expected a number");
      entries.push_back(Triplet{IntField(payoffs[e], "row", at),
                                IntField(payoffs[e], "col", at), value.get<double>()});
    }
    try {
      file.payoff = SparseMatrix(file.chain.dim(), file.opponent->dim(),
                                 std::move(entries));
    } catch (const Error& e) {
      Fail("chain.payoff", e.what());
    }
  }
  return file;
}

void SaveChainFile(const ChainFile& file, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
  out << SerializeChainFile(file) << '\n';
  if (!out) throw Error(ErrorKind::kIoError, "write failed: " + path.string());
}

ChainFile LoadChainFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseChainFile(buf.str());
}

ChainFile MatchingPennies() {
  ChainFile file;
  file.chain = ScExtChain::Build({ChainBlock{2, {}}});
  file.opponent = ScExtChain::Build({ChainBlock{2, {}}});
  file.payoff = SparseMatrix(2, 2, {{0, 0, 1.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 1.0}});
  return file;
}

}  // namespace efgfom

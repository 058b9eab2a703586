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


#include "efgfom/treeplex.h"

#include <algorithm>
#include <cmath>
#include <utility>

namespace efgfom {
namespace {

// Children lists and depth-first preorder over the input specs. Any decision
// point not reached from a root sits on a cycle.
struct Ordering {
  std::vector<int> preorder;  // input indices
};

std::optional<Error> CheckSpecs(const std::vector<DecisionPointSpec>& specs,
                                std::unordered_map<std::string, int>* ids,
                                Ordering* ordering) {
  ids->clear();
  for (int j = 0; j < static_cast<int>(specs.size()); ++j) {
    const DecisionPointSpec& s = specs[j];
    if (s.actions.empty()) {
      return Error(ErrorKind::kEmptyActionSet,
                   "decision point '" + s.id + "' (index " +
                       std::to_string(j) + ") has no actions");
    }
    if (!ids->emplace(s.id, j).second) {
      return Error(ErrorKind::kDuplicateParentClaim,
                   "decision point '" + s.id + "' (index " +
                       std::to_string(j) + ") is declared more than once");
    }
  }

  // roots and (parent, action) children, preserving input order
  std::vector<int> roots;
  std::vector<std::vector<std::vector<int>>> kids(specs.size());
  for (std::size_t j = 0; j < specs.size(); ++j) {
    kids[j].resize(specs[j].actions.size());
  }
  for (int j = 0; j < static_cast<int>(specs.size()); ++j) {
    const DecisionPointSpec& s = specs[j];
    if (!s.parent) {
      roots.push_back(j);
      continue;
    }
    auto it = ids->find(s.parent->decision_point);
    if (it == ids->end() || s.parent->action < 0 ||
        s.parent->action >=
            static_cast<int>(specs[it->second].actions.size())) {
      return Error(ErrorKind::kCyclicStructure,
                   "decision point '" + s.id + "' (index " +
                       std::to_string(j) + ") names parent sequence '" +
                       s.parent->decision_point + "/" +
                       std::to_string(s.parent->action) +
                       "', which does not exist; it cannot hang off the root");
    }
    kids[it->second][s.parent->action].push_back(j);
  }

  ordering->preorder.clear();
  std::vector<char> seen(specs.size(), 0);
  std::vector<int> stack(roots.rbegin(), roots.rend());
  while (!stack.empty()) {
    const int j = stack.back();
    stack.pop_back();
    seen[j] = 1;
    ordering->preorder.push_back(j);
    for (auto a = kids[j].rbegin(); a != kids[j].rend(); ++a) {
      for (auto c = a->rbegin(); c != a->rend(); ++c) stack.push_back(*c);
    }
  }
  for (int j = 0; j < static_cast<int>(specs.size()); ++j) {
    if (!seen[j]) {
      return Error(ErrorKind::kCyclicStructure,
                   "decision point '" + specs[j].id + "' (index " +
                       std::to_string(j) +
                       ") is not reachable from the empty sequence");
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Error> ValidateSpecs(const std::vector<DecisionPointSpec>& specs) {
  std::unordered_map<std::string, int> ids;
  Ordering ordering;
  return CheckSpecs(specs, &ids, &ordering);
}

Treeplex Treeplex::Build(const std::vector<DecisionPointSpec>& specs) {
  std::unordered_map<std::string, int> ids;
  Ordering ordering;
  if (auto err = CheckSpecs(specs, &ids, &ordering)) throw *err;

  Treeplex t;
  const int n = static_cast<int>(specs.size());
  t.decision_points_.resize(n);
  int next_sequence = 1;
  for (int k = 0; k < n; ++k) {
    const DecisionPointSpec& s = specs[ordering.preorder[k]];
    DecisionPoint& dp = t.decision_points_[k];
    dp.id = s.id;
    dp.actions = s.actions;
    dp.num_actions = static_cast<int>(s.actions.size());
    dp.first_sequence = next_sequence;
    next_sequence += dp.num_actions;
    t.index_.emplace(s.id, k);
    t.max_actions_ = std::max(t.max_actions_, dp.num_actions);
  }
  t.num_sequences_ = next_sequence;
  for (int k = 0; k < n; ++k) {
    const DecisionPointSpec& s = specs[ordering.preorder[k]];
    if (s.parent) {
      const DecisionPoint& parent =
          t.decision_points_[t.index_.at(s.parent->decision_point)];
      t.decision_points_[k].parent_sequence = parent.sequence(s.parent->action);
    }
  }

  t.owner_.assign(t.num_sequences_, -1);
  for (int k = 0; k < n; ++k) {
    const DecisionPoint& dp = t.decision_points_[k];
    for (int a = 0; a < dp.num_actions; ++a) t.owner_[dp.sequence(a)] = k;
  }

  t.child_start_.assign(t.num_sequences_ + 1, 0);
  for (const DecisionPoint& dp : t.decision_points_) {
    ++t.child_start_[dp.parent_sequence + 1];
  }
  for (int s = 0; s < t.num_sequences_; ++s) {
    t.child_start_[s + 1] += t.child_start_[s];
  }
  t.child_list_.resize(n);
  std::vector<int> fill(t.child_start_.begin(), t.child_start_.end() - 1);
  for (int k = 0; k < n; ++k) {
    t.child_list_[fill[t.decision_points_[k].parent_sequence]++] = k;
  }

  t.top_down_.resize(n);
  for (int k = 0; k < n; ++k) t.top_down_[k] = k;
  t.bottom_up_.assign(t.top_down_.rbegin(), t.top_down_.rend());
  return t;
}

std::optional<int> Treeplex::FindDecisionPoint(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Treeplex::SequenceIndex(std::string_view decision_point_id,
                            int action) const {
  auto j = FindDecisionPoint(decision_point_id);
  if (!j || action < 0 || action >= decision_points_[*j].num_actions) {
    throw Error(ErrorKind::kInvalidParameter,
                "unknown sequence '" + std::string(decision_point_id) + "/" +
                    std::to_string(action) + "'");
  }
  return decision_points_[*j].sequence(action);
}

std::string Treeplex::SequenceId(int sequence) const {
  if (sequence == kEmptySequence) return "";
  return decision_points_[owner_[sequence]].id + "/" +
         std::to_string(action_of(sequence));
}

std::vector<DecisionPointSpec> Treeplex::ToSpecs() const {
  std::vector<DecisionPointSpec> specs;
  specs.reserve(decision_points_.size());
  for (const DecisionPoint& dp : decision_points_) {
    DecisionPointSpec s{dp.id, std::nullopt, dp.actions};
    if (dp.parent_sequence != kEmptySequence) {
      s.parent = ParentRef{decision_points_[owner_[dp.parent_sequence]].id,
                           action_of(dp.parent_sequence)};
    }
    specs.push_back(std::move(s));
  }
  return specs;
}

std::optional<Error> Validate(const Treeplex& t) {
  int expected = 1;
  std::vector<int> claims(t.num_decision_points(), 0);
  for (int s = 0; s < t.num_sequences(); ++s) {
    for (int j : t.children(s)) ++claims[j];
  }
  for (int j = 0; j < t.num_decision_points(); ++j) {
    const DecisionPoint& dp = t.decision_point(j);
    if (dp.num_actions < 1) {
      return Error(ErrorKind::kEmptyActionSet,
                   "decision point index " + std::to_string(j));
    }
    if (claims[j] != 1) {
      return Error(ErrorKind::kDuplicateParentClaim,
                   "decision point index " + std::to_string(j) + " has " +
                       std::to_string(claims[j]) + " parent sequences");
    }
    // the parent sequence precedes all of this decision point's sequences
    if (dp.parent_sequence >= dp.first_sequence) {
      return Error(ErrorKind::kCyclicStructure,
                   "decision point index " + std::to_string(j) +
                       " appears before its parent in top-down order");
    }
    expected += dp.num_actions;
  }
  if (expected != t.num_sequences()) {
    return Error(ErrorKind::kCyclicStructure,
                 "sequence count " + std::to_string(t.num_sequences()) +
                     " != 1 + sum of action counts " +
                     std::to_string(expected));
  }
  return std::nullopt;
}

bool IsStrategy(const Treeplex& t, std::span<const double> x, double tol) {
  if (static_cast<int>(x.size()) != t.num_sequences()) return false;
  for (double v : x) {
    if (!(v >= -tol)) return false;
  }
  if (std::abs(x[kEmptySequence] - 1.0) > tol) return false;
  for (const DecisionPoint& dp : t.decision_points()) {
    double mass = 0.0;
    for (int a = 0; a < dp.num_actions; ++a) mass += x[dp.sequence(a)];
    if (std::abs(mass - x[dp.parent_sequence]) > tol) return false;
  }
  return true;
}

double MaxL1(const Treeplex& t) {
  // Nonnegative coordinates: the l1 norm is linear on Q.
  SequenceVector ones(t.num_sequences(), 1.0);
  return LinearMaximizeValue(t, ones);
}

int Depth(const Treeplex& t) {
  std::vector<int> below(t.num_decision_points(), 1);
  int depth = 0;
  for (int j : t.bottom_up_order()) {
    const DecisionPoint& dp = t.decision_point(j);
    for (int a = 0; a < dp.num_actions; ++a) {
      for (int c : t.children(dp.sequence(a))) {
        below[j] = std::max(below[j], 1 + below[c]);
      }
    }
  }
  for (int j : t.children(kEmptySequence)) depth = std::max(depth, below[j]);
  return depth;
}

namespace {

// Bottom-up DP; best[j] is the chosen action, returns the value at the root.
double BestResponse(const Treeplex& t, std::span<const double> g,
                    std::vector<int>* best) {
  std::vector<double> subtree(t.num_sequences());
  for (int s = 0; s < t.num_sequences(); ++s) subtree[s] = g[s];
  std::vector<double> dp_value(t.num_decision_points(), 0.0);
  if (best) best->assign(t.num_decision_points(), 0);
  for (int j : t.bottom_up_order()) {
    const DecisionPoint& dp = t.decision_point(j);
    double top = 0.0;
    int arg = 0;
    for (int a = 0; a < dp.num_actions; ++a) {
      const int s = dp.sequence(a);
      for (int c : t.children(s)) subtree[s] += dp_value[c];
      if (a == 0 || subtree[s] > top) {
        top = subtree[s];
        arg = a;
      }
    }
    dp_value[j] = top;
    if (best) (*best)[j] = arg;
  }
  double root = g[kEmptySequence];
  for (int c : t.children(kEmptySequence)) root += dp_value[c];
  return root;
}

}  // namespace

LinearMaxResult LinearMaximize(const Treeplex& t, std::span<const double> g) {
  std::vector<int> best;
  LinearMaxResult result;
  result.vertex.assign(t.num_sequences(), 0.0);
  BestResponse(t, g, &best);
  result.vertex[kEmptySequence] = 1.0;
  for (int j : t.top_down_order()) {
    const DecisionPoint& dp = t.decision_point(j);
    result.vertex[dp.sequence(best[j])] = result.vertex[dp.parent_sequence];
  }
  // Recompute from the vertex so value and vertex agree exactly.
  double value = 0.0;
  for (int s = 0; s < t.num_sequences(); ++s) value += g[s] * result.vertex[s];
  result.value = value;
  return result;
}

double LinearMaximizeValue(const Treeplex& t, std::span<const double> g) {
  return BestResponse(t, g, nullptr);
}

SequenceVector BehavioralToSequence(const Treeplex& t,
                                    std::span<const double> behavioral) {
  SequenceVector x(t.num_sequences(), 0.0);
  x[kEmptySequence] = 1.0;
  for (int j : t.top_down_order()) {
    const DecisionPoint& dp = t.decision_point(j);
    for (int a = 0; a < dp.num_actions; ++a) {
      x[dp.sequence(a)] = x[dp.parent_sequence] * behavioral[dp.sequence(a)];
    }
  }
  return x;
}

SequenceVector UniformStrategy(const Treeplex& t) {
  SequenceVector local(t.num_sequences(), 0.0);
  for (const DecisionPoint& dp : t.decision_points()) {
    for (int a = 0; a < dp.num_actions; ++a) {
      local[dp.sequence(a)] = 1.0 / dp.num_actions;
    }
  }
  return BehavioralToSequence(t, local);
}

SequenceVector SampleStrategy(const Treeplex& t, Rng& rng) {
  SequenceVector local(t.num_sequences(), 0.0);
  for (const DecisionPoint& dp : t.decision_points()) {
    rng.Dirichlet(std::span<double>(local).subspan(dp.first_sequence,
                                                    dp.num_actions));
  }
  return BehavioralToSequence(t, local);
}

}  // namespace efgfom

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


#ifndef EFGFOM_TREEPLEX_H_
#define EFGFOM_TREEPLEX_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "efgfom/error.h"
#include "efgfom/random.h"

namespace efgfom {

inline constexpr int kEmptySequence = 0;

// A vector indexed by sequence; entry 0 is the empty sequence.
using SequenceVector = std::vector<double>;

struct ParentRef {
  std::string decision_point;
  int action = 0;
};

// Input description of one decision point. Parents are named by decision point
// id and action index so that specs can be written in any order.
struct DecisionPointSpec {
  std::string id;
  std::optional<ParentRef> parent;  // nullopt: parent is the empty sequence
  std::vector<std::string> actions;
};

struct DecisionPoint {
  std::string id;
  int parent_sequence = kEmptySequence;
  int first_sequence = 0;
  int num_actions = 0;
  std::vector<std::string> actions;

  int sequence(int action) const { return first_sequence + action; }
};

// Sequence-form decision structure of one player.
//
// Decision points are stored in a canonical top-down order (depth-first
// preorder, roots and children in input order). Sequences are grouped by
// decision point in that same order, so every parent sequence index is smaller
// than the indices of the sequences below it. Immutable after Build().
class Treeplex {
 public:
  // Throws Error{EmptyActionSet | DuplicateParentClaim | CyclicStructure}.
  static Treeplex Build(const std::vector<DecisionPointSpec>& specs);

  int num_decision_points() const {
    return static_cast<int>(decision_points_.size());
  }
  int num_sequences() const { return num_sequences_; }

  const DecisionPoint& decision_point(int j) const {
    return decision_points_[j];
  }
  std::span<const DecisionPoint> decision_points() const {
    return decision_points_;
  }

  // Decision points whose parent sequence is `sequence`.
  std::span<const int> children(int sequence) const {
    return std::span<const int>(child_list_)
        .subspan(child_start_[sequence],
                 child_start_[sequence + 1] - child_start_[sequence]);
  }

  // -1 for the empty sequence.
  int decision_point_of(int sequence) const { return owner_[sequence]; }
  int action_of(int sequence) const {
    return sequence - decision_points_[owner_[sequence]].first_sequence;
  }

  std::span<const int> top_down_order() const { return top_down_; }
  std::span<const int> bottom_up_order() const { return bottom_up_; }

  std::optional<int> FindDecisionPoint(std::string_view id) const;
  // Throws InvalidParameter when the decision point or action is unknown.
  int SequenceIndex(std::string_view decision_point_id, int action) const;
  // "" for the empty sequence, otherwise "<decision point id>/<action index>".
  std::string SequenceId(int sequence) const;

  int max_actions() const { return max_actions_; }

  std::vector<DecisionPointSpec> ToSpecs() const;

 private:
  std::vector<DecisionPoint> decision_points_;
  int num_sequences_ = 1;
  int max_actions_ = 0;
  std::vector<int> owner_;
  std::vector<int> child_start_;
  std::vector<int> child_list_;
  std::vector<int> top_down_;
  std::vector<int> bottom_up_;
  std::unordered_map<std::string, int> index_;
};

// Returns the first violated structural invariant, or nullopt.
std::optional<Error> ValidateSpecs(const std::vector<DecisionPointSpec>& specs);
// Re-checks the invariants of a built treeplex (child disjointness, ordering,
// sequence count).
std::optional<Error> Validate(const Treeplex& t);

// x >= -tol, |x_empty - 1| <= tol and every flow constraint within tol.
bool IsStrategy(const Treeplex& t, std::span<const double> x, double tol);

// Largest l1 norm over the polytope.
double MaxL1(const Treeplex& t);

// Maximum number of decision points on a root-to-leaf path.
int Depth(const Treeplex& t);

struct LinearMaxResult {
  SequenceVector vertex;
  double value = 0.0;
};

// argmax_{x in Q} g.x over the vertices of Q. Ties go to the lowest action.
LinearMaxResult LinearMaximize(const Treeplex& t, std::span<const double> g);
// Support-function value only; no allocation of the vertex.
double LinearMaximizeValue(const Treeplex& t, std::span<const double> g);

// Converts local (per-decision-point) probabilities, laid out like a sequence
// vector with entry 0 ignored, into sequence form.
SequenceVector BehavioralToSequence(const Treeplex& t,
                                    std::span<const double> behavioral);

SequenceVector UniformStrategy(const Treeplex& t);

// Interior point: Dirichlet(1) at every decision point, pushed down the tree.
SequenceVector SampleStrategy(const Treeplex& t, Rng& rng);

}  // namespace efgfom

#endif  // EFGFOM_TREEPLEX_H_

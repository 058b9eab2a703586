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


#ifndef EFGFOM_TESTS_TEST_UTIL_H_
#define EFGFOM_TESTS_TEST_UTIL_H_

#include <functional>
#include <string>
#include <vector>

#include "efgfom/treeplex.h"

namespace efgfom::testing {

inline Treeplex SingleSimplex(int k) {
  std::vector<std::string> actions;
  for (int a = 0; a < k; ++a) actions.push_back("a" + std::to_string(a));
  return Treeplex::Build({DecisionPointSpec{"root", std::nullopt, actions}});
}

// `levels` decision points, each with two actions; action 0 continues.
inline Treeplex ChainTreeplex(int levels) {
  std::vector<DecisionPointSpec> specs;
  for (int l = 0; l < levels; ++l) {
    std::optional<ParentRef> parent;
    if (l > 0) parent = ParentRef{"d" + std::to_string(l - 1), 0};
    specs.push_back({"d" + std::to_string(l), parent, {"go", "stop"}});
  }
  return Treeplex::Build(specs);
}

// Pure strategies by direct recursion over decision points, independent of
// the library's vertex enumeration.
inline std::vector<SequenceVector> PureStrategies(const Treeplex& t) {
  std::vector<SequenceVector> out;
  std::function<void(std::vector<int>, SequenceVector)> rec =
      [&](std::vector<int> open, SequenceVector x) {
        if (open.empty()) {
          out.push_back(x);
          return;
        }
        const int j = open.back();
        open.pop_back();
        const DecisionPoint& dp = t.decision_point(j);
        for (int a = 0; a < dp.num_actions; ++a) {
          SequenceVector y = x;
          y[dp.sequence(a)] = 1.0;
          std::vector<int> next = open;
          for (int k = 0; k < t.num_decision_points(); ++k) {
            if (t.decision_point(k).parent_sequence == dp.sequence(a)) next.push_back(k);
          }
          rec(next, y);
        }
      };
  SequenceVector root(t.num_sequences(), 0.0);
  root[kEmptySequence] = 1.0;
  std::vector<int> open;
  for (int k = 0; k < t.num_decision_points(); ++k) {
    if (t.decision_point(k).parent_sequence == kEmptySequence) open.push_back(k);
  }
  rec(open, root);
  return out;
}

inline double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace efgfom::testing

#endif  // EFGFOM_TESTS_TEST_UTIL_H_

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


#include "efgfom/games.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "efgfom/error.h"
#include "efgfom/solver.h"
#include "test_util.h"

namespace efgfom {
namespace {

// Kuhn poker straight from the rules: cards 0 < 1 < 2, ante 1, bet 1.
// Strategies map an information set "P<i>:<card>:<history>" to the
// probability of the first action (check / call). Returns Player 2's
// expected payoff.
using Behavior = std::map<std::string, double>;

double KuhnShowdown(int c1, int c2, int pot_each) { return c2 > c1 ? pot_each : -pot_each; }

double KuhnValue(const Behavior& p1, const Behavior& p2) {
  double total = 0.0;
  for (int c1 = 0; c1 < 3; ++c1) {
    for (int c2 = 0; c2 < 3; ++c2) {
      if (c1 == c2) continue;
      const std::string k1 = "P1:" + std::to_string(c1) + ":";
      const std::string k2 = "P2:" + std::to_string(c2) + ":";
      const double check = p1.at(k1);
      // P1 checks
      const double p2_check = p2.at(k2 + "c");
      double v_check = p2_check * KuhnShowdown(c1, c2, 1);
      const double p1_call = p1.at(k1 + "cb");
      v_check += (1 - p2_check) * (p1_call * KuhnShowdown(c1, c2, 2) + (1 - p1_call) * 1.0);
      // P1 bets
      const double p2_call = p2.at(k2 + "b");
      const double v_bet = p2_call * KuhnShowdown(c1, c2, 2) + (1 - p2_call) * -1.0;
      total += (check * v_check + (1 - check) * v_bet) / 6.0;
    }
  }
  return total;
}

std::vector<std::string> Infosets(int player) {
  std::vector<std::string> out;
  for (int c = 0; c < 3; ++c) {
    const std::string base = "P" + std::to_string(player) + ":" + std::to_string(c) + ":";
    if (player == 1) {
      out.push_back(base);
      out.push_back(base + "cb");
    } else {
      out.push_back(base + "c");
      out.push_back(base + "b");
    }
  }
  return out;
}

SequenceVector ToSequence(const Treeplex& t, const Behavior& b) {
  SequenceVector local(t.num_sequences(), 0.0);
  for (const auto& [id, first] : b) {
    local[t.SequenceIndex(id, 0)] = first;
    local[t.SequenceIndex(id, 1)] = 1.0 - first;
  }
  return BehavioralToSequence(t, local);
}

std::vector<Behavior> PureBehaviors(int player) {
  const auto sets = Infosets(player);
  std::vector<Behavior> out;
  for (int mask = 0; mask < (1 << sets.size()); ++mask) {
    Behavior b;
    for (std::size_t i = 0; i < sets.size(); ++i) b[sets[i]] = (mask >> i) & 1;
    out.push_back(b);
  }
  return out;
}

TEST(Games, KuhnSizes) {
  const GameInstance g = GenerateKuhn();
  EXPECT_EQ(g.treeplex_x.num_decision_points(), 6);
  EXPECT_EQ(g.treeplex_y.num_decision_points(), 6);
  EXPECT_EQ(g.treeplex_x.num_sequences(), 13);
  EXPECT_EQ(g.treeplex_y.num_sequences(), 13);
  EXPECT_EQ(g.num_leaves.value(), 30);
}

TEST(Games, KuhnMaxEntry) {
  const GameInstance g = GenerateKuhn();
  double m = 0.0;
  for (const Triplet& e : g.payoff.entries()) m = std::max(m, std::abs(e.value));
  EXPECT_DOUBLE_EQ(m, 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(g.payoff.MaxAbs(), 2.0 / 6.0);
}

TEST(Games, KuhnExpectationMatchesRules) {
  const GameInstance g = GenerateKuhn();
  Behavior u1, u2;
  for (const auto& s : Infosets(1)) u1[s] = 0.5;
  for (const auto& s : Infosets(2)) u2[s] = 0.5;
  const double direct = KuhnValue(u1, u2);
  EXPECT_NEAR(g.payoff.Bilinear(ToSequence(g.treeplex_x, u1), ToSequence(g.treeplex_y, u2)),
              direct, 1e-15);
  // a few skewed behaviors too
  Behavior a = u1, b = u2;
  double p = 0.1;
  for (auto& [k, v] : a) v = (p += 0.13);
  for (auto& [k, v] : b) v = (p -= 0.11);
  EXPECT_NEAR(g.payoff.Bilinear(ToSequence(g.treeplex_x, a), ToSequence(g.treeplex_y, b)),
              KuhnValue(a, b), 1e-15);
}

TEST(Games, KuhnUniformGapMatchesBestResponses) {
  const GameInstance g = GenerateKuhn();
  Behavior u1, u2;
  for (const auto& s : Infosets(1)) u1[s] = 0.5;
  for (const auto& s : Infosets(2)) u2[s] = 0.5;
  double best_y = -1e300, best_x = 1e300;
  for (const Behavior& b : PureBehaviors(2)) best_y = std::max(best_y, KuhnValue(u1, b));
  for (const Behavior& b : PureBehaviors(1)) best_x = std::min(best_x, KuhnValue(b, u2));
  const auto p = ProblemFromGame(g, DgfKind::kDge);
  EXPECT_NEAR(SaddleGap(p, ToSequence(g.treeplex_x, u1), ToSequence(g.treeplex_y, u2)),
              best_y - best_x, 1e-12);
}

TEST(Games, Leduc) {
  const GameInstance g3 = GenerateLeduc(3);
  EXPECT_EQ(g3.treeplex_x.num_decision_points(), 144);
  EXPECT_EQ(g3.treeplex_x.num_sequences(), 337);
  EXPECT_EQ(g3.num_leaves.value(), 1116);
  EXPECT_EQ(GenerateLeduc(13).treeplex_x.num_sequences(), 6007);
  EXPECT_THROW(GenerateLeduc(1), Error);
}

TEST(Games, LeducIsZeroSumAndDealsSumToOne) {
  // With both players always calling down, only chance matters: expected
  // payoff is 0 by symmetry of the deal.
  const GameInstance g = GenerateLeduc(3);
  auto always_first = [](const Treeplex& t) {
    SequenceVector local(t.num_sequences(), 0.0);
    for (const DecisionPoint& dp : t.decision_points()) local[dp.sequence(0)] = 1.0;
    return BehavioralToSequence(t, local);
  };
  EXPECT_NEAR(g.payoff.Bilinear(always_first(g.treeplex_x), always_first(g.treeplex_y)),
              0.0, 1e-15);
}

TEST(Games, RoundTrip) {
  const GameInstance g = GenerateKuhn();
  const GameInstance h = ParseGame(SerializeGame(g));
  EXPECT_EQ(h.name, g.name);
  EXPECT_EQ(h.treeplex_x.num_sequences(), 13);
  EXPECT_EQ(h.num_leaves, g.num_leaves);
  auto sorted = [](const SparseMatrix& m) {
    std::vector<std::tuple<int, int, double>> v;
    for (const Triplet& e : m.entries()) v.emplace_back(e.row, e.col, e.value);
    std::sort(v.begin(), v.end());
    return v;
  };
  EXPECT_EQ(sorted(h.payoff), sorted(g.payoff));
  EXPECT_EQ(SerializeGame(h), SerializeGame(g));
}

TEST(Games, MalformedFiles) {
  const std::string text = SerializeGame(GenerateKuhn());
  try {
    ParseGame(text.substr(0, text.size() / 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParseError);
  }
  std::string wrong = text;
  const auto at = wrong.find("\"version\": 1");
  ASSERT_NE(at, std::string::npos);
  {
    wrong.replace(at, 12, "\"version\": 9");
    try {
      ParseGame(wrong);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kSchemaVersionMismatch);
    }
  }
}

TEST(Games, HandWrittenMatrixGame) {
  const std::string text = R"({
    "version": 1, "name": "one",
    "players": [
      {"decision_points": [{"id": "r", "parent_sequence": "", "actions": ["a"]}]},
      {"decision_points": [{"id": "c", "parent_sequence": "", "actions": ["b"]}]}
    ],
    "payoffs": [{"row": "r/0", "col": "c/0", "value": 1.5}]
  })";
  const GameInstance g = ParseGame(text);
  EXPECT_EQ(g.treeplex_x.num_sequences(), 2);
  EXPECT_EQ(g.payoff.nnz(), 1u);
  EXPECT_DOUBLE_EQ(g.payoff.MaxAbs(), 1.5);
}

}  // namespace
}  // namespace efgfom

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


#ifndef EFGFOM_GAMES_H_
#define EFGFOM_GAMES_H_

#include <filesystem>
#include <optional>
#include <string>

#include "efgfom/sparse_matrix.h"
#include "efgfom/treeplex.h"

namespace efgfom {

inline constexpr int kGameFormatVersion = 1;

// Two-player zero-sum game in sequence form: min_x max_y x^T A y, where
// A[s1][s2] is the second player's payoff at the leaf reached through the
// sequence pair (s1, s2), times the chance probability of that leaf.
struct GameInstance {
  std::string name;
  Treeplex treeplex_x;  // player 1, the minimizer
  Treeplex treeplex_y;  // player 2, the maximizer
  SparseMatrix payoff;
  // Terminal histories emitted by a generator (chance outcomes merged by
  // card rank). Loaded files carry it only if it was saved.
  std::optional<long> num_leaves;
};

// Three-card Kuhn poker: ante 1, one betting round with bet size 1.
GameInstance GenerateKuhn();

// Leduc poker with `ranks` ranks, two copies of each. Ante 1, two betting
// rounds with bet sizes 1 and 2 and at most two bets per round, a public card
// between rounds, pairs beat high cards. Throws InvalidParameter if ranks < 2.
GameInstance GenerateLeduc(int ranks);

// JSON game format; see README for the schema.
std::string SerializeGame(const GameInstance& game);
// Throws ParseError (with field context) or SchemaVersionMismatch.
GameInstance ParseGame(const std::string& text);

void SaveGame(const GameInstance& game, const std::filesystem::path& path);
GameInstance LoadGame(const std::filesystem::path& path);

}  // namespace efgfom

#endif  // EFGFOM_GAMES_H_

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

#include <boost/rational.hpp>

#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "json.hpp"

namespace efgfom {
namespace {

using Rational = boost::rational<long long>;
using json = nlohmann::json;

// Collects decision points and leaves while a generator walks the game tree.
class SequenceFormBuilder {
 public:
  // Returns the player's sequence for taking `action` at the decision point
  // `id`, registering the decision point on first sight.
  ParentRef Act(int player, const std::string& id,
                const std::optional<ParentRef>& parent,
                const std::vector<std::string>& actions, int action) {
    auto& seen = known_[player];
    if (seen.emplace(id).second) {
      specs_[player].push_back(DecisionPointSpec{id, parent, actions});
    }
    return ParentRef{id, action};
  }

  void AddLeaf(const std::optional<ParentRef>& seq_x,
               const std::optional<ParentRef>& seq_y, Rational chance,
               long payoff_y) {
    leaves_.push_back(Leaf{seq_x, seq_y, chance * Rational(payoff_y)});
  }

  GameInstance Finish(std::string name) {
    GameInstance g;
    g.name = std::move(name);
    g.treeplex_x = Treeplex::Build(specs_[0]);
    g.treeplex_y = Treeplex::Build(specs_[1]);
    std::map<std::pair<int, int>, Rational> cells;
    for (const Leaf& leaf : leaves_) {
      const int row = leaf.x ? g.treeplex_x.SequenceIndex(leaf.x->decision_point,
                                                          leaf.x->action)
                             : kEmptySequence;
      const int col = leaf.y ? g.treeplex_y.SequenceIndex(leaf.y->decision_point,
                                                          leaf.y->action)
                             : kEmptySequence;
      cells[{row, col}] += leaf.value;
    }
    std::vector<Triplet> entries;
    entries.reserve(cells.size());
    for (const auto& [rc, v] : cells) {
      entries.push_back(Triplet{rc.first, rc.second, boost::rational_cast<double>(v)});
    }
    g.payoff = SparseMatrix(g.treeplex_x.num_sequences(),
                            g.treeplex_y.num_sequences(), std::move(entries));
    g.num_leaves = static_cast<long>(leaves_.size());
    return g;
  }

 private:
  struct Leaf {
    std::optional<ParentRef> x;
    std::optional<ParentRef> y;
    Rational value;
  };
  std::array<std::vector<DecisionPointSpec>, 2> specs_;
  std::array<std::set<std::string>, 2> known_;
  std::vector<Leaf> leaves_;
};

// Rank-level poker with one or two betting rounds. Chance outcomes that only
// differ by card copy are merged, so leaves are counted per rank triple.
struct PokerRules {
  int ranks = 3;
  int copies = 1;
  int rounds = 1;
  std::array<int, 2> bet_size = {1, 2};
  int max_bets = 1;  // per round, the opening bet included
};

class PokerWalker {
 public:
  PokerWalker(const PokerRules& rules, SequenceFormBuilder& builder)
      : rules_(rules), builder_(builder) {}

  void Run() {
    const int deck = rules_.ranks * rules_.copies;
    for (int r1 = 0; r1 < rules_.ranks; ++r1) {
      for (int r2 = 0; r2 < rules_.ranks; ++r2) {
        const int left = rules_.copies - (r1 == r2 ? 1 : 0);
        if (left == 0) continue;
        State s;
        s.cards = {r1, r2};
        s.chance = Rational(rules_.copies, deck) * Rational(left, deck - 1);
        s.contrib = {1, 1};
        Betting(s, 0, "", 0);
      }
    }
  }

 private:
  struct State {
    std::array<int, 2> cards{};
    int board = -1;
    Rational chance{1};
    std::array<int, 2> contrib{};
    std::array<std::optional<ParentRef>, 2> last;
    std::string past;  // completed earlier-round histories and board
  };

  std::string InfosetId(const State& s, int player,
                        const std::string& history) const {
    return "P" + std::to_string(player + 1) + ":" +
           std::to_string(s.cards[player]) + ":" + s.past + history;
  }

  void Betting(State s, int round, const std::string& history, int bets) {
    const int player = static_cast<int>(history.size()) % 2;
    const bool facing = s.contrib[0] != s.contrib[1];
    std::vector<std::string> labels;
    std::vector<char> moves;
    if (!facing) {
      labels = {"check", "bet"};
      moves = {'c', 'b'};
    } else {
      labels.push_back("call");
      moves.push_back('c');
      if (bets < rules_.max_bets) {
        labels.push_back("raise");
        moves.push_back('r');
      }
      labels.push_back("fold");
      moves.push_back('f');
    }
    const std::string id = InfosetId(s, player, history);
    const std::optional<ParentRef> parent = s.last[player];
    for (int a = 0; a < static_cast<int>(moves.size()); ++a) {
      State next = s;
      next.last[player] = builder_.Act(player, id, parent, labels, a);
      const char m = moves[a];
      const std::string h = history + m;
      const int other = 1 - player;
      if (m == 'f') {
        const long payoff_y = player == 0 ? next.contrib[0] : -next.contrib[1];
        builder_.AddLeaf(next.last[0], next.last[1], next.chance, payoff_y);
      } else if (m == 'b' || m == 'r') {
        next.contrib[player] = next.contrib[other] + rules_.bet_size[round];
        Betting(next, round, h, bets + 1);
      } else if (facing || !history.empty()) {
        // call, or check behind: the round is over
        next.contrib[player] = next.contrib[other];
        EndRound(next, round, h);
      } else {
        Betting(next, round, h, bets);
      }
    }
  }

  void EndRound(State s, int round, const std::string& history) {
    if (round + 1 == rules_.rounds) {
      Showdown(s);
      return;
    }
    const int deck = rules_.ranks * rules_.copies - 2;
    for (int b = 0; b < rules_.ranks; ++b) {
      const int left = rules_.copies - (s.cards[0] == b) - (s.cards[1] == b);
      if (left <= 0) continue;
      State next = s;
      next.board = b;
      next.chance = s.chance * Rational(left, deck);
      next.past = s.past + history + "|" + std::to_string(b) + ":";
      Betting(next, round + 1, "", 0);
    }
  }

  void Showdown(const State& s) {
    auto strength = [&](int player) {
      const int card = s.cards[player];
      return (card == s.board ? rules_.ranks : 0) + card;
    };
    const int sx = strength(0);
    const int sy = strength(1);
    long payoff_y = 0;
    if (sy > sx) payoff_y = s.contrib[0];
    if (sx > sy) payoff_y = -s.contrib[1];
    builder_.AddLeaf(s.last[0], s.last[1], s.chance, payoff_y);
  }

  const PokerRules& rules_;
  SequenceFormBuilder& builder_;
};

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

std::optional<ParentRef> ParseSequenceRef(const std::string& ref,
                                          const std::string& where) {
  if (ref.empty()) return std::nullopt;
  const auto slash = ref.rfind('/');
  if (slash == std::string::npos || slash + 1 == ref.size()) {
    Fail(where, "sequence id '" + ref + "' is not of the form 'j/a'");
  }
  try {
    std::size_t used = 0;
    const int action = std::stoi(ref.substr(slash + 1), &used);
    if (used != ref.size() - slash - 1) throw std::invalid_argument(ref);
    return ParentRef{ref.substr(0, slash), action};
  } catch (const std::logic_error&) {
    Fail(where, "sequence id '" + ref + "' has a non-integer action");
  }
}

Treeplex ParsePlayer(const json& player, const std::string& where) {
  const json& dps = Field(player, "decision_points", where);
  if (!dps.is_array()) Fail(where + ".decision_points", "expected an array");
  std::vector<DecisionPointSpec> specs;
  for (std::size_t k = 0; k < dps.size(); ++k) {
    const std::string at = where + ".decision_points[" + std::to_string(k) + "]";
    const json& id = Field(dps[k], "id", at);
    const json& parent = Field(dps[k], "parent_sequence", at);
    const json& actions = Field(dps[k], "actions", at);
    if (!id.is_string()) Fail(at + ".id", "expected a string");
    if (!parent.is_string()) Fail(at + ".parent_sequence", "expected a string");
    if (!actions.is_array()) Fail(at + ".actions", "expected an array");
    DecisionPointSpec spec;
    spec.id = id.get<std::string>();
    spec.parent = ParseSequenceRef(parent.get<std::string>(), at + ".parent_sequence");
    for (const json& a : actions) {
      if (!a.is_string()) Fail(at + ".actions", "expected strings");
      spec.actions.push_back(a.get<std::string>());
    }
    specs.push_back(std::move(spec));
  }
  return Treeplex::Build(specs);
}

int ResolveSequence(const Treeplex& t, const json& ref, const std::string& where) {
  if (!ref.is_string()) Fail(where, "expected a sequence id string");
  auto parsed = ParseSequenceRef(ref.get<std::string>(), where);
  if (!parsed) return kEmptySequence;
  try {
    return t.SequenceIndex(parsed->decision_point, parsed->action);
  } catch (const Error&) {
    Fail(where, "unknown sequence '" + ref.get<std::string>() + "'");
  }
}

}  // namespace

GameInstance GenerateKuhn() {
  SequenceFormBuilder builder;
  PokerRules rules;
  rules.ranks = 3;
  rules.copies = 1;
  rules.rounds = 1;
  rules.bet_size = {1, 1};
  rules.max_bets = 1;
  PokerWalker(rules, builder).Run();
  return builder.Finish("kuhn");
}

GameInstance GenerateLeduc(int ranks) {
  if (ranks < 2) {
    throw Error(ErrorKind::kInvalidParameter,
                "leduc requires ranks >= 2, got " + std::to_string(ranks));
  }
  SequenceFormBuilder builder;
  PokerRules rules;
  rules.ranks = ranks;
  rules.copies = 2;
  rules.rounds = 2;
  rules.bet_size = {1, 2};
  rules.max_bets = 2;
  PokerWalker(rules, builder).Run();
  return builder.Finish("leduc" + std::to_string(ranks));
}

std::string SerializeGame(const GameInstance& game) {
  json doc;
  doc["version"] = kGameFormatVersion;
  doc["name"] = game.name;
  if (game.num_leaves) doc["leaves"] = *game.num_leaves;
  json players = json::array();
  for (const Treeplex* t : {&game.treeplex_x, &game.treeplex_y}) {
    json dps = json::array();
    for (const DecisionPoint& dp : t->decision_points()) {
      dps.push_back({{"id", dp.id},
                     {"parent_sequence", t->SequenceId(dp.parent_sequence)},
                     {"actions", dp.actions}});
    }
    players.push_back({{"decision_points", std::move(dps)}});
  }
  doc["players"] = std::move(players);
  json payoffs = json::array();
  for (const Triplet& e : game.payoff.entries()) {
    payoffs.push_back({{"row", game.treeplex_x.SequenceId(e.row)},
                       {"col", game.treeplex_y.SequenceId(e.col)},
                       {"value", e.value}});
  }
  doc["payoffs"] = std::move(payoffs);
  return doc.dump(1);
}

GameInstance ParseGame(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  const json& version = Field(doc, "version", "game");
  if (!version.is_number_integer() || version.get<int>() != kGameFormatVersion) {
    throw Error(ErrorKind::kSchemaVersionMismatch,
                "game file version " + version.dump() + ", expected " +
                    std::to_string(kGameFormatVersion));
  }
  GameInstance g;
  if (auto it = doc.find("name"); it != doc.end() && it->is_string()) {
    g.name = it->get<std::string>();
  }
  if (auto it = doc.find("leaves"); it != doc.end()) {
    if (!it->is_number_integer()) Fail("game.leaves", "expected an integer");
    g.num_leaves = it->get<long>();
  }
  const json& players = Field(doc, "players", "game");
  if (!players.is_array() || players.size() != 2) {
    Fail("game.players", "expected an array of two players");
  }
  g.treeplex_x = ParsePlayer(players[0], "game.players[0]");
  g.treeplex_y = ParsePlayer(players[1], "game.players[1]");
  const json& payoffs = Field(doc, "payoffs", "game");
  if (!payoffs.is_array()) Fail("game.payoffs", "expected an array");
  std::vector<Triplet> entries;
  entries.reserve(payoffs.size());
  for (std::size_t k = 0; k < payoffs.size(); ++k) {
    const std::string at = "game.payoffs[" + std::to_string(k) + "]";
    const json& value = Field(payoffs[k], "value", at);
    if (!value.is_number()) Fail(at + ".value", "expected a number");
    entries.push_back(
        Triplet{ResolveSequence(g.treeplex_x, Field(payoffs[k], "row", at), at + ".row"),
                ResolveSequence(g.treeplex_y, Field(payoffs[k], "col", at), at + ".col"),
                value.get<double>()});
  }
  try {
    g.payoff = SparseMatrix(g.treeplex_x.num_sequences(),
                            g.treeplex_y.num_sequences(), std::move(entries));
  } catch (const Error& e) {
    Fail("game.payoffs", e.what());
  }
  return g;
}

void SaveGame(const GameInstance& game, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
  out << SerializeGame(game) << '\n';
  if (!out) throw Error(ErrorKind::kIoError, "write failed: " + path.string());
}

GameInstance LoadGame(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseGame(buf.str());
}

}  // namespace efgfom

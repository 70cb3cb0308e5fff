#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zombie/table.hpp"

namespace zombie {

enum class PolicyType { optimal, table, simple, one_step, stop_at, always_roll };

struct PolicyKind {
  PolicyType type = PolicyType::optimal;
  int k = 0;  // stop_at only: bank once k brains are held

  /// Stable identifier: optimal, table, simple, onestep, stopat:<k>, alwaysroll.
  std::string id() const;
  static PolicyKind parse(std::string_view id);

  friend bool operator==(const PolicyKind&, const PolicyKind&) = default;
};

class UnknownPolicy : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Opponent {
  int score = 0;
  bool acts_before = false;  // already played in the current round
};

struct GameContext {
  int own_score = 0;
  std::vector<Opponent> opponents;
};

enum class Verdict { roll, stop };
std::string_view name(Verdict v);

struct Advice {
  Verdict verdict = Verdict::stop;
  ExactNumber bust_probability;
  /// -b * PE + EB * (1 - PE) with the recursive EB.
  double expected_value_of_continuing = 0;
  /// Expected banked brains when rolling once more and then playing optimally.
  double continuation_value = 0;
  /// Continue iff brains_banked <= threshold_used; empty means never stop.
  std::optional<int> threshold_used;
  std::optional<double> decision_value;
  std::string rationale;
  bool endgame = false;
};

inline constexpr int kRollAgain = std::numeric_limits<int>::max();

/// Stop-at value of the fixed rule list: bank once this many brains are held.
/// kRollAgain for the rows that say to keep rolling.
int simple_rule_lookup(const TurnState& state);

bool endgame_active(const GameContext& ctx);
/// Leader + 1 once an earlier player has reached 13, otherwise 13.
int endgame_target(const GameContext& ctx);

/// Shared decision engine. Construction runs the solvers and builds the
/// decision table; afterwards every member is read-only.
class Engine {
 public:
  explicit Engine(Execution exec = Execution::parallel, int brain_cap = 64);

  int brain_cap() const { return cap_; }
  const DecisionTable& table() const { return *table_; }

  /// The state must be legal except that the tally may sit below the aside
  /// brain dice (a what-if query on a table row).
  Advice advise(const PolicyKind& policy, const TurnState& state,
                const std::optional<GameContext>& ctx = std::nullopt) const;

  /// Throws InvalidState when the endgame is not active.
  Advice endgame_override(const TurnState& state, const GameContext& ctx) const;

  /// Verdict only; the simulator's hot path.
  bool should_roll(const PolicyKind& policy, const TurnState& state, const GameContext* ctx = nullptr) const;

  /// Threshold of a policy at a position; kRollAgain when unbounded.
  int threshold(const PolicyKind& policy, const TurnState& state) const;

  double recursive_brains(const TurnState& state) const;
  double continuation_value(const TurnState& state) const;

 private:
  int position_id(const TurnState& state) const;

  int cap_;
  std::unique_ptr<TurnSolver> recursive_;
  std::unique_ptr<TurnSolver> one_step_;
  std::unique_ptr<TurnSolver> optimal_;
  std::unique_ptr<DecisionTable> table_;
  std::vector<int> optimal_threshold_;
  std::vector<int> one_step_threshold_;
  std::vector<double> recursive_eb_;
  std::vector<double> bust_;
  // continuation value at (id, b) for b < cap
  std::vector<double> continuation_;
};

}  // namespace zombie

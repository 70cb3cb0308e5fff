#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "zombie/roll_probability.hpp"
#include "zombie/strategy.hpp"

namespace zombie {

/// Random stream: std::mt19937_64 seeded with one 64-bit value. Dice use
/// rejection sampling on the raw 64-bit output, so the sequence depends only on
/// the seed. Substreams are seeded with SplitMix64(seed ^ SplitMix64(index)).
class RngStream {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64/v1";

  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n), n > 0.
  std::uint64_t uniform(std::uint64_t n);
  /// Die side in [0, 6).
  int side() { return static_cast<int>(uniform(6)); }

  RngStream substream(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Rolls green dice first, then yellow, then red, one side per die.
RollOutcome roll_hand(RngStream& rng, const HandComposition& hand);

/// Draws `count` dice uniformly without replacement from the cup.
HandComposition draw_from_cup(RngStream& rng, const CupState& cup, int count);

struct RollRecord {
  TurnState before;  // state the hand was drawn from, after any replenish
  HandComposition hand;
  RollOutcome outcome;
  bool replenished = false;
};

struct Decision {
  int brains = 0;
  int shotguns = 0;
  Verdict verdict = Verdict::stop;
};

struct TurnRecord {
  std::vector<RollRecord> rolls;
  std::vector<Decision> decisions;
  bool busted = false;
  int banked = 0;        // 0 when busted
  int gross_brains = 0;  // brains shown on every roll that did not bust
  bool hit_cap = false;
};

struct TurnOptions {
  int brain_cap = 64;
  bool keep_rolls = true;
};

/// One turn under the rules engine. The first roll is always taken; the policy
/// decides before every later roll. Throws std::logic_error if a step breaks
/// dice conservation.
TurnRecord play_turn(RngStream& rng, const Engine& engine, const PolicyKind& policy,
                     const GameContext* ctx = nullptr, const TurnOptions& options = {});

struct GameOptions {
  int goal = 13;
  int max_tiebreakers = 100;
  int brain_cap = 64;
  bool endgame_rule = true;  // false: policies never see the score context
  bool keep_rolls = false;   // pass full roll records to on_turn
  std::function<void(int seat, const TurnRecord&)> on_turn;
};

struct GameRecord {
  std::vector<std::string> players;            // policy ids by seat
  std::vector<std::vector<int>> round_scores;  // cumulative scores after each round
  std::vector<int> final_scores;
  int winner = -1;
  int tiebreakers = 0;
  bool unresolved = false;  // tiebreak limit hit; winner is the first tied seat
  std::uint64_t turns = 0;

  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

/// 2 to 8 players in seat order. After the round in which someone reaches the
/// goal, the tied leaders play extra rounds until one leads alone.
GameRecord play_game(RngStream& rng, const Engine& engine, const std::vector<PolicyKind>& seats,
                     const GameOptions& options = {});

struct TournamentConfig {
  std::vector<PolicyKind> players;
  std::uint64_t games = 1000;
  std::uint64_t seed = 1;
  int brain_cap = 64;
  Execution exec = Execution::parallel;
  std::ostream* trace = nullptr;  // line-delimited JSON per turn; forces serial order
};

/// Integer tallies per entrant; merging is plain addition.
struct PolicyTally {
  std::uint64_t games = 0;
  std::uint64_t wins = 0;
  std::uint64_t turns = 0;
  std::uint64_t busts = 0;
  std::uint64_t cap_hits = 0;
  std::uint64_t brains = 0;
  std::uint64_t brains_sq = 0;
  std::uint64_t gross = 0;
  std::uint64_t gross_sq = 0;
  std::uint64_t score = 0;  // final game scores

  PolicyTally& operator+=(const PolicyTally& o);
};

struct PolicySummary {
  std::string policy;
  PolicyTally tally;
  double win_rate = 0, win_rate_se = 0;
  double mean_brains = 0, mean_brains_se = 0;
  double bust_rate = 0, bust_rate_se = 0;
  double mean_gross_brains = 0, mean_gross_brains_se = 0;
  double mean_final_score = 0;
};

struct TournamentSummary {
  std::uint64_t seed = 0;
  std::uint64_t games = 0;
  std::string algorithm{RngStream::kAlgorithm};
  bool single_player = false;  // games count independent turns
  std::uint64_t tiebreakers = 0;
  std::uint64_t unresolved = 0;
  std::vector<PolicySummary> policies;

  std::string to_json() const;
  std::string to_csv() const;
};

/// With one entrant, runs `games` independent turns from a fresh state.
/// Otherwise game g seats the entrants rotated left by g mod n.
/// Throws std::invalid_argument for an empty or oversized line-up or zero games.
TournamentSummary run_tournament(const Engine& engine, const TournamentConfig& config);

std::string trace_line(std::uint64_t game, int seat, const std::string& policy, const TurnRecord& turn);

}  // namespace zombie

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "zombie/dice.hpp"

namespace zombie {

/// Everything needed to describe a player's position mid-turn.
///
/// `brains_banked` is a tally, not a derived quantity: when the cup runs short
/// the set-aside brain dice go back into the cup but the brains they scored
/// stay counted. `aside_brains` therefore only tracks dice physically out.
struct TurnState {
  CupState cup = kFullCup;
  FootprintSet footprints;
  AsideDice aside_brains;
  AsideDice aside_shotguns;
  int shotguns = 0;
  int brains_banked = 0;

  static TurnState fresh() { return {}; }

  /// Dice available for the next hand without replenishing.
  int available() const { return cup.total() + footprints.total(); }
  bool needs_replenish() const { return available() < 3; }

  friend bool operator==(const TurnState&, const TurnState&) = default;
};

struct Violation {
  std::string code;     // stable identifier, e.g. "green overflow"
  std::string message;  // human readable detail
};

/// Every violated range or conservation rule; empty iff the state is legal.
/// A live state (one that can still roll) additionally has shotguns <= 2.
std::vector<Violation> validate_turn_state(const TurnState& state);

class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Brain dice set aside go back into the cup; footprints stay in hand and
/// shotgun dice stay out. The brain tally is unchanged.
/// Throws InvalidState when the cup and footprints already hold three dice.
TurnState replenish(const TurnState& state);

/// Returns the state itself, or its replenished form when the cup is short.
TurnState ready_to_roll(const TurnState& state);

/// Builds a full state from the six table parameters plus a shotgun count.
/// Dice that are neither in the cup nor footprints are set aside; `shotguns`
/// of them are assigned as shotguns red first, then yellow, then green, and
/// the rest are brains. `brains_banked` defaults to the number of aside brains.
/// Throws std::invalid_argument if the parameters cannot describe a state.
TurnState canonical_completion(const CupState& cup, const FootprintSet& footprints, int shotguns,
                               int brains_banked = -1);

std::string to_string(const TurnState& state);

}  // namespace zombie

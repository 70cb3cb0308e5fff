#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "zombie/dice.hpp"
#include "zombie/exact.hpp"

namespace zombie {

/// Raised when the cup cannot supply the dice needed to complete a hand.
/// Replenishing is the caller's job (see replenish()).
class NeedsReplenish : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probability of 0, 1, 2 or 3 of something on the next roll.
struct OutcomeDistribution {
  std::array<ExactNumber, 4> p{};

  const ExactNumber& operator[](int x) const { return p.at(static_cast<std::size_t>(x)); }
  ExactNumber& operator[](int x) { return p.at(static_cast<std::size_t>(x)); }
  ExactNumber total() const { return p[0] + p[1] + p[2] + p[3]; }
  ExactNumber mean() const { return p[1] + ExactNumber(2) * p[2] + ExactNumber(3) * p[3]; }
};

/// One joint result of rolling a hand.
struct RollOutcome {
  std::array<ColorSplit, 3> splits{};  // indexed by colour

  const ColorSplit& operator[](Color c) const { return splits[index(c)]; }
  ColorSplit& operator[](Color c) { return splits[index(c)]; }

  int brains() const { return splits[0].brains + splits[1].brains + splits[2].brains; }
  int shotguns() const { return splits[0].shotguns + splits[1].shotguns + splits[2].shotguns; }
  int footprints() const { return splits[0].footprints + splits[1].footprints + splits[2].footprints; }
  FootprintSet footprint_dice() const { return {splits[0].footprints, splits[1].footprints, splits[2].footprints}; }
  AsideDice brain_dice() const { return {splits[0].brains, splits[1].brains, splits[2].brains}; }
  AsideDice shotgun_dice() const { return {splits[0].shotguns, splits[1].shotguns, splits[2].shotguns}; }

  friend bool operator==(const RollOutcome&, const RollOutcome&) = default;
};

struct WeightedHand {
  HandComposition hand;
  ExactNumber draw_prob;
};

struct JointOutcome {
  HandComposition hand;
  RollOutcome outcome;
  ExactNumber prob;
};

enum class Category { brains, shotguns };

struct SplitTarget {
  Category category;
  int count;
};

/// Multinomial probability of `split` when rolling split.dice() dice of one colour.
ExactNumber color_roll_prob(Color color, const ColorSplit& split);

/// Probability that the next hand is `hand`: the footprints are rerolled and
/// the rest is drawn from the cup without replacement. Zero for hands that do
/// not contain the footprints or that the cup cannot supply.
/// Throws NeedsReplenish if the cup holds fewer dice than must be drawn.
ExactNumber hand_draw_prob(const CupState& cup, const FootprintSet& fp, const HandComposition& hand);

/// Hands with nonzero probability, in (green, yellow, red) lexicographic order.
std::vector<WeightedHand> enumerate_hands(const CupState& cup, const FootprintSet& fp);

/// All joint per-colour results of rolling `hand`, optionally restricted to those
/// with exactly `target.count` brains or shotguns.
std::vector<RollOutcome> enumerate_splits(const HandComposition& hand,
                                          std::optional<SplitTarget> target = std::nullopt);

/// Probability of a specific joint outcome of a known hand.
ExactNumber outcome_prob(const RollOutcome& outcome);

OutcomeDistribution brain_dist(const CupState& cup, const FootprintSet& fp);
OutcomeDistribution shotgun_dist(const CupState& cup, const FootprintSet& fp);

/// Probability that the next roll takes the shotgun total to three or more.
ExactNumber round_end_prob(const CupState& cup, const FootprintSet& fp, int shotguns);

/// Expected brains on the next roll alone (busting outcomes included).
ExactNumber expected_brains_next(const CupState& cup, const FootprintSet& fp);

/// Exhaustive weighted (hand, outcome) list for the next roll; sums to one.
std::vector<JointOutcome> joint_transition(const CupState& cup, const FootprintSet& fp);

}  // namespace zombie

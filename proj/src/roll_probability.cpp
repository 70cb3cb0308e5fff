#include "zombie/roll_probability.hpp"

#include <string>

namespace zombie {
namespace {

// All (brains, footprints, shotguns) with the given number of dice.
std::vector<ColorSplit> splits_of(int n) {
  std::vector<ColorSplit> out;
  for (int b = 0; b <= n; ++b)
    for (int f = 0; f <= n - b; ++f) out.push_back({b, f, n - b - f});
  return out;
}

// color_roll_prob for every colour and every split of up to three dice,
// indexed by [colour][brains][footprints][shotguns].
struct SplitTable {
  ExactNumber p[3][4][4][4];

  SplitTable() {
    for (Color c : kColors) {
      const FaceProbabilities fp = face_probabilities(c);
      for (int n = 0; n <= 3; ++n)
        for (const ColorSplit& s : splits_of(n)) {
          const BigInt m = multinomial_coeff(n, {s.brains, s.footprints, s.shotguns});
          p[index(c)][s.brains][s.footprints][s.shotguns] =
              ExactNumber(m, 1) * pow(fp.brain, static_cast<unsigned>(s.brains)) *
              pow(fp.footprint, static_cast<unsigned>(s.footprints)) *
              pow(fp.shotgun, static_cast<unsigned>(s.shotguns));
        }
    }
  }
};

const SplitTable& split_table() {
  static const SplitTable table;
  return table;
}

void check_feasible(const CupState& cup, const FootprintSet& fp) {
  if (fp.total() > 3 || fp.green < 0 || fp.yellow < 0 || fp.red < 0)
    throw std::invalid_argument("footprints must be nonnegative and at most three");
  if (cup.green < 0 || cup.yellow < 0 || cup.red < 0) throw std::invalid_argument("negative cup count");
  const int need = 3 - fp.total();
  if (cup.total() < need)
    throw NeedsReplenish("cup holds " + std::to_string(cup.total()) + " dice but " + std::to_string(need) +
                         " must be drawn");
}

}  // namespace

ExactNumber color_roll_prob(Color color, const ColorSplit& split) {
  if (split.brains < 0 || split.footprints < 0 || split.shotguns < 0 || split.dice() > 3)
    throw std::invalid_argument("color_roll_prob: split must be nonnegative with at most three dice");
  return split_table().p[index(color)][split.brains][split.footprints][split.shotguns];
}

ExactNumber hand_draw_prob(const CupState& cup, const FootprintSet& fp, const HandComposition& hand) {
  check_feasible(cup, fp);
  if (hand.total() != 3) throw std::invalid_argument("a hand has exactly three dice");
  const int need = 3 - fp.total();
  BigInt ways = 1;
  for (Color c : kColors) {
    const int drawn = hand[c] - fp[c];
    if (drawn < 0) return ExactNumber(0);  // hand lacks a footprint die that must be rerolled
    ways *= binomial(cup[c], drawn);
  }
  if (ways == 0) return ExactNumber(0);
  return ExactNumber(ways, binomial(cup.total(), need));
}

std::vector<WeightedHand> enumerate_hands(const CupState& cup, const FootprintSet& fp) {
  check_feasible(cup, fp);
  std::vector<WeightedHand> out;
  for (int g = 0; g <= 3; ++g)
    for (int y = 0; y <= 3 - g; ++y) {
      const HandComposition hand{g, y, 3 - g - y};
      ExactNumber p = hand_draw_prob(cup, fp, hand);
      if (!p.is_zero()) out.push_back({hand, std::move(p)});
    }
  return out;
}

std::vector<RollOutcome> enumerate_splits(const HandComposition& hand, std::optional<SplitTarget> target) {
  if (hand.green < 0 || hand.yellow < 0 || hand.red < 0 || hand.total() > 3)
    throw std::invalid_argument("enumerate_splits: invalid hand");
  std::vector<RollOutcome> out;
  for (const ColorSplit& g : splits_of(hand.green))
    for (const ColorSplit& y : splits_of(hand.yellow))
      for (const ColorSplit& r : splits_of(hand.red)) {
        RollOutcome o{{g, y, r}};
        if (target) {
          const int have = target->category == Category::brains ? o.brains() : o.shotguns();
          if (have != target->count) continue;
        }
        out.push_back(o);
      }
  return out;
}

ExactNumber outcome_prob(const RollOutcome& o) {
  ExactNumber p{1};
  for (Color c : kColors) p *= color_roll_prob(c, o[c]);
  return p;
}

std::vector<JointOutcome> joint_transition(const CupState& cup, const FootprintSet& fp) {
  std::vector<JointOutcome> out;
  for (const WeightedHand& wh : enumerate_hands(cup, fp))
    for (const RollOutcome& o : enumerate_splits(wh.hand)) out.push_back({wh.hand, o, wh.draw_prob * outcome_prob(o)});
  return out;
}

OutcomeDistribution brain_dist(const CupState& cup, const FootprintSet& fp) {
  OutcomeDistribution d;
  for (const WeightedHand& wh : enumerate_hands(cup, fp))
    for (int x = 0; x <= 3; ++x) {
      ExactNumber inner{0};
      for (const RollOutcome& o : enumerate_splits(wh.hand, SplitTarget{Category::brains, x})) inner += outcome_prob(o);
      d[x] += wh.draw_prob * inner;
    }
  return d;
}

OutcomeDistribution shotgun_dist(const CupState& cup, const FootprintSet& fp) {
  OutcomeDistribution d;
  for (const WeightedHand& wh : enumerate_hands(cup, fp))
    for (int x = 0; x <= 3; ++x) {
      ExactNumber inner{0};
      for (const RollOutcome& o : enumerate_splits(wh.hand, SplitTarget{Category::shotguns, x}))
        inner += outcome_prob(o);
      d[x] += wh.draw_prob * inner;
    }
  return d;
}

ExactNumber round_end_prob(const CupState& cup, const FootprintSet& fp, int shotguns) {
  if (shotguns < 0 || shotguns > 2) throw std::invalid_argument("round_end_prob: shotguns must be 0, 1 or 2");
  const OutcomeDistribution s = shotgun_dist(cup, fp);
  ExactNumber pe{0};
  for (int i = 3 - shotguns; i <= 3; ++i) pe += s[i];
  return pe;
}

ExactNumber expected_brains_next(const CupState& cup, const FootprintSet& fp) {
  return brain_dist(cup, fp).mean();
}

}  // namespace zombie

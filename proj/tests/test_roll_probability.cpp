#include <doctest.h>

#include <cmath>
#include <map>

#include "oracle.hpp"
#include "zombie/roll_probability.hpp"
#include "zombie/table.hpp"

using namespace zombie;

namespace {

std::vector<HandComposition> all_hands() {
  std::vector<HandComposition> out;
  for (int g = 0; g <= 3; ++g)
    for (int y = 0; y <= 3 - g; ++y) out.push_back({g, y, 3 - g - y});
  return out;
}

bool draw_feasible(const CupState& cup, const FootprintSet& fp) { return cup.total() + fp.total() >= 3; }

ExactNumber ratio(std::uint64_t a, std::uint64_t b) {
  return ExactNumber(BigInt(static_cast<unsigned long>(a)), BigInt(static_cast<unsigned long>(b)));
}

}  // namespace

TEST_CASE("color_roll_prob examples") {
  CHECK(color_roll_prob(Color::green, {0, 0, 1}) == ExactNumber(1, 6));
  CHECK(color_roll_prob(Color::red, {0, 0, 3}) == ExactNumber(1, 8));
  CHECK(color_roll_prob(Color::yellow, {1, 1, 1}) == ExactNumber(2, 9));
  CHECK_THROWS_AS(color_roll_prob(Color::red, {2, 1, 1}), std::invalid_argument);
}

TEST_CASE("yellow splits reduce to multinomial times (1/3)^n") {
  for (int n = 0; n <= 3; ++n)
    for (int b = 0; b <= n; ++b)
      for (int f = 0; b + f <= n; ++f)
        CHECK(color_roll_prob(Color::yellow, {b, f, n - b - f}) ==
              ExactNumber(multinomial_coeff(n, {b, f, n - b - f}), 1) * pow(ExactNumber(1, 3), static_cast<unsigned>(n)));
}

TEST_CASE("per-hand outcome probabilities match 6^3 side enumeration") {
  for (const HandComposition& hand : all_hands()) {
    // oracle: roll each physical die through its six sides
    std::map<std::array<int, 9>, std::uint64_t> counts;
    std::vector<Color> dice;
    for (Color c : kColors)
      for (int i = 0; i < hand[c]; ++i) dice.push_back(c);
    for (int a = 0; a < 216; ++a) {
      std::array<int, 9> key{};
      int x = a;
      for (Color c : dice) {
        const char f = oracle::sides(c)[x % 6];
        x /= 6;
        key[index(c) * 3 + (f == 'B' ? 0 : f == 'F' ? 1 : 2)]++;
      }
      ++counts[key];
    }
    const auto outcomes = enumerate_splits(hand);
    CHECK(outcomes.size() == counts.size());
    ExactNumber sum{0};
    for (const RollOutcome& o : outcomes) {
      std::array<int, 9> key{};
      for (Color c : kColors) {
        key[index(c) * 3] = o[c].brains;
        key[index(c) * 3 + 1] = o[c].footprints;
        key[index(c) * 3 + 2] = o[c].shotguns;
      }
      REQUIRE(counts.count(key));
      CHECK(outcome_prob(o) == ratio(counts[key], 216));
      sum += outcome_prob(o);
    }
    CHECK(sum == ExactNumber(1));
  }
}

TEST_CASE("hand_draw_prob matches labelled subset enumeration on every feasible cup") {
  for (const auto& [cup, fp] : table_keys()) {
    if (!draw_feasible(cup, fp)) {
      CHECK_THROWS_AS(hand_draw_prob(cup, fp, {1, 1, 1}), NeedsReplenish);
      continue;
    }
    ExactNumber sum{0};
    for (const HandComposition& hand : all_hands()) {
      const auto [hits, all] = oracle::draw_count(cup, fp, hand);
      const ExactNumber p = hand_draw_prob(cup, fp, hand);
      CHECK(p == ratio(hits, all));
      sum += p;
    }
    CHECK(sum == ExactNumber(1));
  }
}

TEST_CASE("hand_draw_prob examples") {
  CHECK(hand_draw_prob(kFullCup, {}, {1, 1, 1}) == ExactNumber(72, 286));
  CHECK(hand_draw_prob({4, 4, 3}, {2, 0, 0}, {1, 1, 1}).is_zero());
  CHECK(hand_draw_prob({0, 0, 3}, {}, {0, 0, 3}) == ExactNumber(1));
  CHECK_THROWS_AS(hand_draw_prob({1, 0, 0}, {}, {1, 1, 1}), NeedsReplenish);
  CHECK_THROWS_AS(hand_draw_prob(kFullCup, {}, {1, 1, 0}), std::invalid_argument);
}

TEST_CASE("enumerate_hands examples") {
  const auto full = enumerate_hands(kFullCup, {});
  CHECK(full.size() == 10);
  ExactNumber sum{0};
  for (const auto& h : full) sum += h.draw_prob;
  CHECK(sum == ExactNumber(1));

  const auto greens = enumerate_hands({3, 4, 3}, {3, 0, 0});
  REQUIRE(greens.size() == 1);
  CHECK(greens[0].hand == HandComposition{3, 0, 0});
  CHECK(greens[0].draw_prob == ExactNumber(1));

  const auto forced = enumerate_hands({1, 0, 0}, {0, 1, 1});
  REQUIRE(forced.size() == 1);
  CHECK(forced[0].hand == HandComposition{1, 1, 1});
  CHECK(forced[0].draw_prob == ExactNumber(1));
}

TEST_CASE("enumerate_splits examples") {
  const auto three_brains = enumerate_splits({1, 1, 1}, SplitTarget{Category::brains, 3});
  REQUIRE(three_brains.size() == 1);
  for (Color c : kColors) CHECK(three_brains[0][c] == ColorSplit{1, 0, 0});

  CHECK(enumerate_splits({3, 0, 0}).size() == 10);

  // two shotguns on one die of each colour: pick the non-shotgun colour, then brain or footprint
  const auto two_shotguns = enumerate_splits({1, 1, 1}, SplitTarget{Category::shotguns, 2});
  CHECK(two_shotguns.size() == 6);
  for (const auto& o : two_shotguns) CHECK(o.shotguns() == 2);
}

TEST_CASE("first-roll distributions") {
  const OutcomeDistribution b = brain_dist(kFullCup, {});
  CHECK(b[0].to_fixed(6) == "0.245144");
  CHECK(b[1].to_fixed(6) == "0.444056");
  CHECK(b[2].to_fixed(6) == "0.261072");
  CHECK(b[3].to_fixed(6) == "0.049728");
  const OutcomeDistribution s = shotgun_dist(kFullCup, {});
  CHECK(s[0].to_fixed(6) == "0.347449");
  CHECK(s[1].to_fixed(6) == "0.444833");
  CHECK(s[2].to_fixed(6) == "0.183372");
  CHECK(s[3].to_fixed(6) == "0.024346");
  CHECK(s[3] == ExactNumber(94, 3861));
}

TEST_CASE("closed-form distributions") {
  const OutcomeDistribution greens = brain_dist({3, 4, 3}, {3, 0, 0});
  CHECK(greens[0] == ExactNumber(1, 8));
  CHECK(greens[1] == ExactNumber(3, 8));
  CHECK(greens[2] == ExactNumber(3, 8));
  CHECK(greens[3] == ExactNumber(1, 8));

  const OutcomeDistribution reds = brain_dist({0, 0, 3}, {});
  for (int x = 0; x <= 3; ++x)
    CHECK(reds[x] == ExactNumber(binomial(3, x), 1) * pow(ExactNumber(1, 6), static_cast<unsigned>(x)) *
                         pow(ExactNumber(5, 6), static_cast<unsigned>(3 - x)));
  CHECK(shotgun_dist({0, 0, 3}, {})[3] == ExactNumber(1, 8));
}

TEST_CASE("round_end_prob examples") {
  const OutcomeDistribution s = shotgun_dist(kFullCup, {});
  CHECK(round_end_prob(kFullCup, {}, 0) == ExactNumber(94, 3861));
  CHECK(round_end_prob(kFullCup, {}, 1) == s[2] + s[3]);
  CHECK(round_end_prob(kFullCup, {}, 1).to_fixed(6) == "0.207718");
  CHECK(round_end_prob(kFullCup, {}, 2) == ExactNumber(1) - s[0]);
  CHECK(round_end_prob(kFullCup, {}, 2).to_fixed(6) == "0.652551");
  CHECK_THROWS_AS(round_end_prob(kFullCup, {}, 3), std::invalid_argument);
}

TEST_CASE("expected_brains_next examples") {
  CHECK(expected_brains_next(kFullCup, {}).to_fixed(6) == "1.115385");
  CHECK(std::abs(expected_brains_next(kFullCup, {}).to_double() - 1.115384) < 1e-6);
  CHECK(expected_brains_next({3, 4, 3}, {3, 0, 0}) == ExactNumber(3, 2));
  CHECK(expected_brains_next({0, 0, 3}, {}) == ExactNumber(1, 2));
}

TEST_CASE("joint transition examples") {
  const auto greens = joint_transition({3, 4, 3}, {3, 0, 0});
  CHECK(greens.size() == 10);
  for (const auto& j : greens) {
    const ColorSplit& g = j.outcome[Color::green];
    CHECK(j.prob == ExactNumber(multinomial_coeff(3, {g.brains, g.footprints, g.shotguns}), 1) *
                        pow(ExactNumber(1, 2), static_cast<unsigned>(g.brains)) *
                        pow(ExactNumber(1, 3), static_cast<unsigned>(g.footprints)) *
                        pow(ExactNumber(1, 6), static_cast<unsigned>(g.shotguns)));
  }
}

TEST_CASE("every feasible cup: normalization, marginals and the physical-dice oracle agree exactly") {
  int checked = 0;
  for (const auto& [cup, fp] : table_keys()) {
    if (!draw_feasible(cup, fp)) continue;
    const OutcomeDistribution b = brain_dist(cup, fp);
    const OutcomeDistribution s = shotgun_dist(cup, fp);
    CHECK(b.total() == ExactNumber(1));
    CHECK(s.total() == ExactNumber(1));

    OutcomeDistribution jb, js;
    ExactNumber jt{0};
    for (const JointOutcome& j : joint_transition(cup, fp)) {
      jb[j.outcome.brains()] += j.prob;
      js[j.outcome.shotguns()] += j.prob;
      jt += j.prob;
    }
    CHECK(jt == ExactNumber(1));
    for (int x = 0; x <= 3; ++x) {
      CHECK(jb[x] == b[x]);
      CHECK(js[x] == s[x]);
    }

    const oracle::RollCounts rc = oracle::roll_counts(cup, fp);
    for (int x = 0; x <= 3; ++x) {
      std::uint64_t nb = 0, ns = 0;
      for (int y = 0; y <= 3; ++y) {
        nb += rc.by_brains_shotguns[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
        ns += rc.by_brains_shotguns[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
      }
      CHECK(b[x] == ratio(nb, rc.total));
      CHECK(s[x] == ratio(ns, rc.total));
    }

    CHECK(round_end_prob(cup, fp, 0) < round_end_prob(cup, fp, 1));
    CHECK(round_end_prob(cup, fp, 1) < round_end_prob(cup, fp, 2));
    ++checked;
  }
  CHECK(checked > 1500);
}

TEST_CASE("short cups signal replenishment") {
  CHECK_THROWS_AS(brain_dist({1, 0, 0}, {0, 1, 0}), NeedsReplenish);
  CHECK_THROWS_AS(joint_transition({0, 0, 0}, {}), NeedsReplenish);
  CHECK_THROWS_AS(expected_brains_next({0, 1, 0}, {0, 0, 1}), NeedsReplenish);
}

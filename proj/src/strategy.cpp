#include "zombie/strategy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "zombie/roll_probability.hpp"

namespace zombie {

std::string PolicyKind::id() const {
  switch (type) {
    case PolicyType::optimal: return "optimal";
    case PolicyType::table: return "table";
    case PolicyType::simple: return "simple";
    case PolicyType::one_step: return "onestep";
    case PolicyType::stop_at: return "stopat:" + std::to_string(k);
    case PolicyType::always_roll: return "alwaysroll";
  }
  return "?";
}

PolicyKind PolicyKind::parse(std::string_view id) {
  if (id == "optimal") return {PolicyType::optimal};
  if (id == "table") return {PolicyType::table};
  if (id == "simple") return {PolicyType::simple};
  if (id == "onestep") return {PolicyType::one_step};
  if (id == "alwaysroll") return {PolicyType::always_roll};
  constexpr std::string_view prefix = "stopat:";
  if (id.substr(0, prefix.size()) == prefix) {
    const std::string_view digits = id.substr(prefix.size());
    int k = -1;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty() && k >= 0)
      return {PolicyType::stop_at, k};
  }
  throw UnknownPolicy("unknown policy '" + std::string(id) +
                      "' (expected optimal, table, simple, onestep, stopat:<k> or alwaysroll)");
}

std::string_view name(Verdict v) { return v == Verdict::roll ? "roll" : "stop"; }

namespace {

// The hand is forced to a single colour when footprints and the cup leave no choice.
bool must_roll_all(const TurnState& ready, Color c) {
  for (Color other : kColors)
    if (other != c && (ready.footprints[other] > 0 || (ready.cup[other] > 0 && ready.footprints.total() < 3)))
      return false;
  return true;
}

std::pair<int, const char*> simple_rule(const TurnState& state) {
  const TurnState ready = ready_to_roll(state);
  const CupState& c = ready.cup;
  const FootprintSet& f = ready.footprints;
  switch (state.shotguns) {
    case 0:
      return {kRollAgain, "no shotguns: keep rolling"};
    case 1:
      if (must_roll_all(ready, Color::red)) return {1, "three red dice: stop at 1"};
      if ((f.red == 2 && f.yellow == 1) || c.yellow > c.green) return {2, "red-yellow footprints or yellow-heavy cup: stop at 2"};
      if ((f.red == 2 && f.green == 1) || c.green > c.yellow) return {3, "red-green footprints or green-heavy cup: stop at 3"};
      if (must_roll_all(ready, Color::green)) return {kRollAgain, "three green dice: roll again"};
      if (f.green == 2) return {kRollAgain, "two green footprints: roll again"};
      return {2, "no rule matched: stop at 2"};
    default:
      if (f.green == 3) return {2, "three green footprints: stop at 2"};
      return {1, "two shotguns: stop at 1"};
  }
}

int below(double d) { return static_cast<int>(std::ceil(d)) - 1; }

}  // namespace

int simple_rule_lookup(const TurnState& state) {
  if (state.shotguns < 0 || state.shotguns > 2) throw std::invalid_argument("simple rules need 0, 1 or 2 shotguns");
  return simple_rule(state).first;
}

bool endgame_active(const GameContext& ctx) {
  return std::any_of(ctx.opponents.begin(), ctx.opponents.end(), [](const Opponent& o) {
    return o.acts_before ? o.score >= 13 : o.score >= 10;
  });
}

int endgame_target(const GameContext& ctx) {
  int leader = -1;
  for (const Opponent& o : ctx.opponents)
    if (o.acts_before && o.score >= 13) leader = std::max(leader, o.score);
  if (leader < 0) return 13;
  for (const Opponent& o : ctx.opponents) leader = std::max(leader, o.score);
  return leader + 1;
}

Engine::Engine(Execution exec, int brain_cap) : cap_(brain_cap) {
  recursive_ = std::make_unique<TurnSolver>(SolverConfig{DecisionMode::recursive, brain_cap}, exec);
  one_step_ = std::make_unique<TurnSolver>(SolverConfig{DecisionMode::one_step, brain_cap}, exec);
  optimal_ = std::make_unique<TurnSolver>(SolverConfig{DecisionMode::optimal, brain_cap}, exec);
  table_ = std::make_unique<DecisionTable>(generate_table(*recursive_, exec));
  optimal_->precompute();

  const PositionSpace& space = PositionSpace::instance();
  const int n = space.size();
  optimal_threshold_.resize(static_cast<std::size_t>(n));
  one_step_threshold_.resize(static_cast<std::size_t>(n));
  recursive_eb_.resize(static_cast<std::size_t>(n));
  bust_.resize(static_cast<std::size_t>(n));
  continuation_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(cap_), std::nan(""));
  for (int id = 0; id < n; ++id) {
    const Position& p = space[id];
    const auto i = static_cast<std::size_t>(id);
    optimal_threshold_[i] = optimal_->optimal_threshold(p);
    one_step_threshold_[i] = one_step_->stop_threshold(p);
    recursive_eb_[i] = recursive_->recursive_brains(p);
    bust_[i] = recursive_->bust_probability(p);
    for (int b = 0; b < cap_; ++b)
      continuation_[i * static_cast<std::size_t>(cap_) + static_cast<std::size_t>(b)] =
          optimal_->continuation_value(p, b);
  }
}

int Engine::position_id(const TurnState& state) const {
  const int id = PositionSpace::instance().id_of(Position::of(state));
  if (id < 0) throw InvalidState("not a live position: " + to_string(state));
  return id;
}

int Engine::threshold(const PolicyKind& policy, const TurnState& state) const {
  switch (policy.type) {
    case PolicyType::optimal:
      return optimal_threshold_[static_cast<std::size_t>(position_id(state))];
    case PolicyType::table: {
      const DecisionRow* row = table_->find(state.cup, state.footprints);
      if (!row || !row->feasible(state.shotguns)) throw InvalidState("no table entry for " + to_string(state));
      return below(*row->decision[static_cast<std::size_t>(state.shotguns)]);
    }
    case PolicyType::one_step:
      return one_step_threshold_[static_cast<std::size_t>(position_id(state))];
    case PolicyType::simple: {
      const int k = simple_rule_lookup(state);
      return k == kRollAgain ? kRollAgain : k - 1;
    }
    case PolicyType::stop_at:
      return policy.k - 1;
    case PolicyType::always_roll:
      return kRollAgain;
  }
  return -1;
}

bool Engine::should_roll(const PolicyKind& policy, const TurnState& state, const GameContext* ctx) const {
  if (state.brains_banked >= cap_) return false;
  if (ctx && endgame_active(*ctx)) return ctx->own_score + state.brains_banked < endgame_target(*ctx);
  const int t = threshold(policy, state);
  return t == kRollAgain || state.brains_banked <= t;
}

double Engine::recursive_brains(const TurnState& state) const {
  return recursive_eb_[static_cast<std::size_t>(position_id(state))];
}

double Engine::continuation_value(const TurnState& state) const {
  const int id = position_id(state);
  if (state.brains_banked >= cap_) return state.brains_banked;
  return continuation_[static_cast<std::size_t>(id) * static_cast<std::size_t>(cap_) +
                       static_cast<std::size_t>(state.brains_banked)];
}

Advice Engine::advise(const PolicyKind& policy, const TurnState& state, const std::optional<GameContext>& ctx) const {
  auto v = validate_turn_state(state);
  std::erase_if(v, [](const Violation& x) { return x.code == "brain tally"; });
  if (!v.empty()) throw InvalidState(v.front().code + ": " + v.front().message);
  const int id = position_id(state);
  const TurnState ready = ready_to_roll(state);
  const int b = state.brains_banked;

  Advice a;
  a.bust_probability = round_end_prob(ready.cup, ready.footprints, state.shotguns);
  const double pe = a.bust_probability.to_double();
  a.expected_value_of_continuing = -b * pe + recursive_eb_[static_cast<std::size_t>(id)] * (1 - pe);
  a.continuation_value = continuation_value(state);

  const int t = threshold(policy, state);
  if (t != kRollAgain) a.threshold_used = t;
  switch (policy.type) {
    case PolicyType::optimal:
      a.decision_value = t + 1;
      a.rationale = "optimal stopping threshold";
      break;
    case PolicyType::table:
      a.decision_value = table_->find(state.cup, state.footprints)->decision[static_cast<std::size_t>(state.shotguns)];
      a.rationale = "decision table row";
      break;
    case PolicyType::one_step:
      a.decision_value = one_step_->decision_point(Position::of(state));
      a.rationale = "one-step quotient";
      break;
    case PolicyType::simple:
      a.rationale = simple_rule(state).second;
      break;
    case PolicyType::stop_at:
      a.rationale = "fixed stop at " + std::to_string(policy.k);
      break;
    case PolicyType::always_roll:
      a.rationale = "always roll";
      break;
  }
  a.verdict = (!a.threshold_used || b <= *a.threshold_used) ? Verdict::roll : Verdict::stop;
  if (b >= cap_) {
    a.verdict = Verdict::stop;
    a.rationale = "brain cap reached";
  }
  if (ctx && endgame_active(*ctx)) {
    Advice e = endgame_override(state, *ctx);
    e.bust_probability = a.bust_probability;
    e.expected_value_of_continuing = a.expected_value_of_continuing;
    e.continuation_value = a.continuation_value;
    return e;
  }
  return a;
}

Advice Engine::endgame_override(const TurnState& state, const GameContext& ctx) const {
  if (!endgame_active(ctx)) throw InvalidState("endgame override requested outside the endgame");
  const int target = endgame_target(ctx);
  Advice a;
  a.endgame = true;
  a.threshold_used = target - ctx.own_score - 1;
  const bool short_of_target = ctx.own_score + state.brains_banked < target;
  a.verdict = short_of_target && state.brains_banked < cap_ ? Verdict::roll : Verdict::stop;
  a.rationale = short_of_target ? "endgame: chasing " + std::to_string(target)
                                : "endgame: " + std::to_string(target) + " banked";
  if (const int id = PositionSpace::instance().id_of(Position::of(state)); id >= 0) {
    const TurnState ready = ready_to_roll(state);
    a.bust_probability = round_end_prob(ready.cup, ready.footprints, state.shotguns);
  }
  return a;
}

}  // namespace zombie

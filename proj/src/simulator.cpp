#include "zombie/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

namespace zombie {

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t RngStream::uniform(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform: empty range");
  // reject the low 2^64 mod n values so every residue is equally likely
  const std::uint64_t floor = (0 - n) % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x < floor);
  return x % n;
}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(splitmix64(seed_ ^ splitmix64(index)));
}

RollOutcome roll_hand(RngStream& rng, const HandComposition& hand) {
  if (hand.green < 0 || hand.yellow < 0 || hand.red < 0) throw std::invalid_argument("roll_hand: negative hand");
  RollOutcome o;
  for (Color c : kColors) {
    ColorSplit& split = o.splits[index(c)];
    for (int i = 0; i < hand[c]; ++i) {
      switch (face_of_side(c, rng.side())) {
        case Face::brain: ++split.brains; break;
        case Face::footprint: ++split.footprints; break;
        case Face::shotgun: ++split.shotguns; break;
      }
    }
  }
  return o;
}

HandComposition draw_from_cup(RngStream& rng, const CupState& cup, int count) {
  if (count < 0 || count > cup.total()) throw std::invalid_argument("draw_from_cup: not enough dice in the cup");
  CupState left = cup;
  HandComposition drawn;
  for (int i = 0; i < count; ++i) {
    auto r = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(left.total())));
    for (Color c : kColors) {
      if (r < left[c]) {
        --left[c];
        ++drawn[c];
        break;
      }
      r -= left[c];
    }
  }
  return drawn;
}

namespace {

void check(const TurnState& s, const char* step) {
  if (auto v = validate_turn_state(s); !v.empty())
    throw std::logic_error(std::string("dice conservation broken after ") + step + ": " + v.front().message);
}

}  // namespace

TurnRecord play_turn(RngStream& rng, const Engine& engine, const PolicyKind& policy, const GameContext* ctx,
                     const TurnOptions& options) {
  TurnRecord rec;
  TurnState st;
  for (bool first = true;; first = false) {
    if (!first) {
      if (st.brains_banked >= options.brain_cap) {
        rec.hit_cap = true;
        break;
      }
      const bool roll = engine.should_roll(policy, st, ctx);
      rec.decisions.push_back({st.brains_banked, st.shotguns, roll ? Verdict::roll : Verdict::stop});
      if (!roll) break;
    }
    const bool replenished = st.needs_replenish();
    if (replenished) {
      st = replenish(st);
      check(st, "replenish");
    }
    const HandComposition drawn = draw_from_cup(rng, st.cup, 3 - st.footprints.total());
    HandComposition hand;
    for (Color c : kColors) hand[c] = st.footprints[c] + drawn[c];
    const RollOutcome o = roll_hand(rng, hand);
    if (options.keep_rolls) rec.rolls.push_back({st, hand, o, replenished});

    if (st.shotguns + o.shotguns() >= 3) {
      rec.busted = true;
      rec.banked = 0;
      return rec;
    }
    for (Color c : kColors) {
      st.cup[c] -= drawn[c];
      st.footprints[c] = o[c].footprints;
      st.aside_brains[c] += o[c].brains;
      st.aside_shotguns[c] += o[c].shotguns;
    }
    st.shotguns += o.shotguns();
    st.brains_banked += o.brains();
    rec.gross_brains += o.brains();
    check(st, "roll");
  }
  rec.banked = st.brains_banked;
  return rec;
}

GameRecord play_game(RngStream& rng, const Engine& engine, const std::vector<PolicyKind>& seats,
                     const GameOptions& options) {
  const int n = static_cast<int>(seats.size());
  if (n < 2 || n > 8) throw std::invalid_argument("a game needs 2 to 8 players, got " + std::to_string(n));
  GameRecord g;
  for (const auto& p : seats) g.players.push_back(p.id());
  std::vector<int> scores(static_cast<std::size_t>(n), 0);
  const TurnOptions turn_options{options.brain_cap, options.keep_rolls};

  auto take = [&](int seat, const GameContext& ctx) {
    const TurnRecord t = play_turn(rng, engine, seats[static_cast<std::size_t>(seat)],
                                     options.endgame_rule ? &ctx : nullptr, turn_options);
    scores[static_cast<std::size_t>(seat)] += t.banked;
    ++g.turns;
    if (options.on_turn) options.on_turn(seat, t);
  };

  for (;;) {
    for (int i = 0; i < n; ++i) {
      GameContext ctx{scores[static_cast<std::size_t>(i)], {}};
      for (int j = 0; j < n; ++j)
        if (j != i) ctx.opponents.push_back({scores[static_cast<std::size_t>(j)], j < i});
      take(i, ctx);
    }
    g.round_scores.push_back(scores);
    if (*std::max_element(scores.begin(), scores.end()) >= options.goal) break;
  }

  auto leaders_among = [&](const std::vector<int>& pool) {
    int best = -1;
    for (int s : pool) best = std::max(best, scores[static_cast<std::size_t>(s)]);
    std::vector<int> out;
    for (int s : pool)
      if (scores[static_cast<std::size_t>(s)] == best) out.push_back(s);
    return out;
  };
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  std::vector<int> leaders = leaders_among(all);

  // Tiebreak rounds: only players who already played this round count as rivals.
  while (leaders.size() > 1) {
    if (g.tiebreakers >= options.max_tiebreakers) {
      g.unresolved = true;
      break;
    }
    ++g.tiebreakers;
    for (std::size_t k = 0; k < leaders.size(); ++k) {
      GameContext ctx{scores[static_cast<std::size_t>(leaders[k])], {}};
      for (std::size_t j = 0; j < k; ++j) ctx.opponents.push_back({scores[static_cast<std::size_t>(leaders[j])], true});
      take(leaders[k], ctx);
    }
    g.round_scores.push_back(scores);
    leaders = leaders_among(leaders);
  }
  g.winner = leaders.front();
  g.final_scores = scores;
  return g;
}

PolicyTally& PolicyTally::operator+=(const PolicyTally& o) {
  games += o.games;
  wins += o.wins;
  turns += o.turns;
  busts += o.busts;
  cap_hits += o.cap_hits;
  brains += o.brains;
  brains_sq += o.brains_sq;
  gross += o.gross;
  gross_sq += o.gross_sq;
  score += o.score;
  return *this;
}

namespace {

void count_turn(PolicyTally& t, const TurnRecord& r) {
  ++t.turns;
  t.busts += r.busted;
  t.cap_hits += r.hit_cap;
  const auto b = static_cast<std::uint64_t>(r.banked);
  const auto gb = static_cast<std::uint64_t>(r.gross_brains);
  t.brains += b;
  t.brains_sq += b * b;
  t.gross += gb;
  t.gross_sq += gb * gb;
}

std::pair<double, double> mean_se(std::uint64_t sum, std::uint64_t sum_sq, std::uint64_t n) {
  if (n == 0) return {0, 0};
  const double m = static_cast<double>(sum) / static_cast<double>(n);
  const double var = std::max(0.0, static_cast<double>(sum_sq) / static_cast<double>(n) - m * m);
  return {m, std::sqrt(var / static_cast<double>(n))};
}

PolicySummary summarize(const std::string& id, const PolicyTally& t) {
  PolicySummary s;
  s.policy = id;
  s.tally = t;
  std::tie(s.win_rate, s.win_rate_se) = mean_se(t.wins, t.wins, t.games);
  std::tie(s.mean_brains, s.mean_brains_se) = mean_se(t.brains, t.brains_sq, t.turns);
  std::tie(s.bust_rate, s.bust_rate_se) = mean_se(t.busts, t.busts, t.turns);
  std::tie(s.mean_gross_brains, s.mean_gross_brains_se) = mean_se(t.gross, t.gross_sq, t.turns);
  s.mean_final_score = t.games ? static_cast<double>(t.score) / static_cast<double>(t.games) : 0;
  return s;
}

}  // namespace

std::string trace_line(std::uint64_t game, int seat, const std::string& policy, const TurnRecord& turn) {
  nlohmann::ordered_json j;
  j["game"] = game;
  j["seat"] = seat;
  j["policy"] = policy;
  j["busted"] = turn.busted;
  j["banked"] = turn.banked;
  j["gross_brains"] = turn.gross_brains;
  j["hit_cap"] = turn.hit_cap;
  auto rolls = nlohmann::ordered_json::array();
  for (const RollRecord& r : turn.rolls) {
    nlohmann::ordered_json x;
    x["replenished"] = r.replenished;
    x["hand"] = {{"r", r.hand.red}, {"y", r.hand.yellow}, {"g", r.hand.green}};
    x["brains"] = r.outcome.brains();
    x["footprints"] = r.outcome.footprints();
    x["shotguns"] = r.outcome.shotguns();
    rolls.push_back(std::move(x));
  }
  j["rolls"] = std::move(rolls);
  auto decisions = nlohmann::ordered_json::array();
  for (const Decision& d : turn.decisions)
    decisions.push_back({{"brains", d.brains}, {"shotguns", d.shotguns}, {"verdict", std::string(name(d.verdict))}});
  j["decisions"] = std::move(decisions);
  return j.dump();
}

TournamentSummary run_tournament(const Engine& engine, const TournamentConfig& config) {
  const std::size_t n = config.players.size();
  if (n == 0 || n > 8) throw std::invalid_argument("tournament needs 1 to 8 entrants");
  if (config.games == 0) throw std::invalid_argument("tournament needs at least one game");

  TournamentSummary summary;
  summary.seed = config.seed;
  summary.games = config.games;
  summary.single_player = n == 1;
  const RngStream root(config.seed);
  const bool serial = config.exec == Execution::serial || config.trace != nullptr;

  std::vector<PolicyTally> total(n);
  std::uint64_t tiebreakers = 0, unresolved = 0;
  std::mutex merge;

  auto run_range = [&](std::int64_t begin, std::int64_t end, std::int64_t step) {
    std::vector<PolicyTally> local(n);
    std::uint64_t local_tb = 0, local_unresolved = 0;
    for (std::int64_t gi = begin; gi < end; gi += step) {
      const auto game = static_cast<std::uint64_t>(gi);
      RngStream rng = root.substream(game);
      if (n == 1) {
        const TurnRecord t =
            play_turn(rng, engine, config.players[0], nullptr, {config.brain_cap, config.trace != nullptr});
        count_turn(local[0], t);
        if (config.trace) *config.trace << trace_line(game, 0, config.players[0].id(), t) << '\n';
        continue;
      }
      const std::size_t shift = game % n;
      std::vector<PolicyKind> seats(n);
      for (std::size_t j = 0; j < n; ++j) seats[j] = config.players[(j + shift) % n];
      GameOptions opts;
      opts.brain_cap = config.brain_cap;
      opts.keep_rolls = config.trace != nullptr;
      opts.on_turn = [&](int seat, const TurnRecord& t) {
        count_turn(local[(static_cast<std::size_t>(seat) + shift) % n], t);
        if (config.trace)
          *config.trace << trace_line(game, seat, seats[static_cast<std::size_t>(seat)].id(), t) << '\n';
      };
      const GameRecord g = play_game(rng, engine, seats, opts);
      for (std::size_t j = 0; j < n; ++j) {
        PolicyTally& t = local[(j + shift) % n];
        ++t.games;
        t.score += static_cast<std::uint64_t>(g.final_scores[j]);
      }
      ++local[(static_cast<std::size_t>(g.winner) + shift) % n].wins;
      local_tb += static_cast<std::uint64_t>(g.tiebreakers);
      local_unresolved += g.unresolved;
    }
    std::lock_guard lock(merge);
    for (std::size_t j = 0; j < n; ++j) total[j] += local[j];
    tiebreakers += local_tb;
    unresolved += local_unresolved;
  };

  const auto games = static_cast<std::int64_t>(config.games);
  if (serial) {
    run_range(0, games, 1);
  } else {
#pragma omp parallel
    {
      int threads = 1, me = 0;
#ifdef _OPENMP
      threads = omp_get_num_threads();
      me = omp_get_thread_num();
#endif
      run_range(me, games, threads);
    }
  }

  summary.tiebreakers = tiebreakers;
  summary.unresolved = unresolved;
  for (std::size_t j = 0; j < n; ++j) summary.policies.push_back(summarize(config.players[j].id(), total[j]));
  return summary;
}

std::string TournamentSummary::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["games"] = games;
  j["rng"] = algorithm;
  j["single_player"] = single_player;
  j["tiebreakers"] = tiebreakers;
  j["unresolved_ties"] = unresolved;
  auto arr = nlohmann::ordered_json::array();
  for (const PolicySummary& p : policies) {
    nlohmann::ordered_json x;
    x["policy"] = p.policy;
    x["games"] = p.tally.games;
    x["wins"] = p.tally.wins;
    x["win_rate"] = p.win_rate;
    x["win_rate_se"] = p.win_rate_se;
    x["turns"] = p.tally.turns;
    x["mean_brains_per_turn"] = p.mean_brains;
    x["mean_brains_per_turn_se"] = p.mean_brains_se;
    x["bust_rate"] = p.bust_rate;
    x["bust_rate_se"] = p.bust_rate_se;
    x["mean_gross_brains"] = p.mean_gross_brains;
    x["mean_gross_brains_se"] = p.mean_gross_brains_se;
    x["cap_hits"] = p.tally.cap_hits;
    x["mean_final_score"] = p.mean_final_score;
    arr.push_back(std::move(x));
  }
  j["policies"] = std::move(arr);
  return j.dump(2);
}

std::string TournamentSummary::to_csv() const {
  std::string out =
      "policy,games,wins,win_rate,win_rate_se,turns,mean_brains_per_turn,mean_brains_per_turn_se,bust_rate,"
      "bust_rate_se,mean_gross_brains,mean_gross_brains_se,cap_hits,mean_final_score\n";
  for (const PolicySummary& p : policies) {
    out += p.policy + ',' + std::to_string(p.tally.games) + ',' + std::to_string(p.tally.wins) + ',' +
           format_fixed(p.win_rate) + ',' + format_fixed(p.win_rate_se) + ',' + std::to_string(p.tally.turns) + ',' +
           format_fixed(p.mean_brains) + ',' + format_fixed(p.mean_brains_se) + ',' + format_fixed(p.bust_rate) + ',' +
           format_fixed(p.bust_rate_se) + ',' + format_fixed(p.mean_gross_brains) + ',' +
           format_fixed(p.mean_gross_brains_se) + ',' + std::to_string(p.tally.cap_hits) + ',' +
           format_fixed(p.mean_final_score) + '\n';
  }
  return out;
}

}  // namespace zombie

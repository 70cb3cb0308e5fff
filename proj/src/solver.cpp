#include "zombie/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace zombie {

std::string_view name(DecisionMode m) {
  switch (m) {
    case DecisionMode::one_step: return "onestep";
    case DecisionMode::recursive: return "recursive";
    case DecisionMode::optimal: return "optimal";
  }
  return "?";
}

DecisionMode parse_decision_mode(std::string_view text) {
  if (text == "onestep" || text == "one-step") return DecisionMode::one_step;
  if (text == "recursive") return DecisionMode::recursive;
  if (text == "optimal" || text == "dp") return DecisionMode::optimal;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected onestep, recursive or optimal)");
}

void SolverConfig::validate() const {
  if (brain_cap < 14) throw std::invalid_argument("brain cap must be at least 14, got " + std::to_string(brain_cap));
}

template <class Num>
std::shared_ptr<const TurnModel<Num>> shared_model() {
  static const std::shared_ptr<const TurnModel<Num>> model = std::make_shared<const TurnModel<Num>>();
  return model;
}

template std::shared_ptr<const TurnModel<double>> shared_model<double>();
template std::shared_ptr<const TurnModel<ExactNumber>> shared_model<ExactNumber>();

namespace {

bool is_zero(double x) { return x == 0.0; }
bool is_zero(const ExactNumber& x) { return x.is_zero(); }
double magnitude(double x) { return std::fabs(x); }
double magnitude(const ExactNumber& x) { return std::fabs(x.to_double()); }

// Solves (I - m) u = c in place; m is k x k row-major.
template <class Num>
std::vector<Num> solve_fixed_point(std::vector<Num> m, std::vector<Num> c) {
  const std::size_t k = c.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m[i * k + j] = (i == j ? Num(1) : Num(0)) - m[i * k + j];
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col; r < k; ++r)
      if (magnitude(m[r * k + col]) > magnitude(m[pivot * k + col])) pivot = r;
    if (is_zero(m[pivot * k + col])) throw std::runtime_error("singular replenishment system");
    if (pivot != col) {
      for (std::size_t j = 0; j < k; ++j) std::swap(m[col * k + j], m[pivot * k + j]);
      std::swap(c[col], c[pivot]);
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col || is_zero(m[r * k + col])) continue;
      const Num f = m[r * k + col] / m[col * k + col];
      for (std::size_t j = col; j < k; ++j) m[r * k + j] -= f * m[col * k + j];
      c[r] -= f * c[col];
    }
  }
  for (std::size_t i = 0; i < k; ++i) c[i] /= m[i * k + i];
  return c;
}

int fp_key(const FootprintSet& fp) { return fp.green * 16 + fp.yellow * 4 + fp.red; }

}  // namespace

template <class Num>
BasicTurnSolver<Num>::BasicTurnSolver(SolverConfig config, Execution exec)
    : config_(config), exec_(exec), model_(shared_model<Num>()) {
  config_.validate();
}

template <class Num>
int BasicTurnSolver<Num>::id_of(const Position& p) const {
  const int id = PositionSpace::instance().id_of(p);
  if (id < 0) throw std::invalid_argument("not a legal live position");
  return id;
}

template <class Num>
Num BasicTurnSolver<Num>::bust_probability(const Position& p) const {
  return model_->bust_prob(id_of(p));
}

// Always-roll expected brains. Between two replenishments the position graph
// is acyclic apart from the three-footprint self loop, so each block of equal
// shotgun dice reduces to one small linear system over its replenished
// ("entry") positions, one per footprint set.
template <class Num>
void BasicTurnSolver<Num>::solve_recursive_locked() {
  if (!recursive_.empty()) return;
  const PositionSpace& space = PositionSpace::instance();
  const int n = space.size();
  std::vector<Num> result(static_cast<std::size_t>(n), Num(0));

  std::vector<AsideDice> blocks;
  for (int s = 2; s >= 0; --s)
    for (int g = 0; g <= s; ++g)
      for (int y = 0; y <= s - g; ++y) blocks.push_back({g, y, s - g - y});

  std::vector<std::vector<int>> members(blocks.size());
  for (int id = 0; id < n; ++id)
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (space[id].shotgun_dice == blocks[b]) members[b].push_back(id);

  auto solve_block = [&](std::size_t bi) {
    const AsideDice& sh = blocks[bi];
    std::vector<int> entry_of_fp(64, -1);
    std::vector<int> entries;  // position ids
    for (int id : members[bi]) {
      const Position& p = space[id];
      if (p.needs_replenish()) continue;
      if (p.cup == Position{p.cup, p.footprints, sh}.ready_cup() && p.aside_brains().total() == 0) {
        entry_of_fp[fp_key(p.footprints)] = static_cast<int>(entries.size());
        entries.push_back(id);
      }
    }
    const std::size_t k = entries.size();
    // affine form per position: [constant, coefficient per entry]
    std::vector<std::vector<Num>> form(static_cast<std::size_t>(n));
    std::vector<char> done(static_cast<std::size_t>(n), 0);

    std::function<const std::vector<Num>&(int)> visit = [&](int id) -> const std::vector<Num>& {
      auto& f = form[static_cast<std::size_t>(id)];
      if (done[static_cast<std::size_t>(id)]) return f;
      const Position& p = space[id];
      f.assign(k + 1, Num(0));
      if (p.needs_replenish()) {
        f[1 + static_cast<std::size_t>(entry_of_fp[fp_key(p.footprints)])] = Num(1);
        done[static_cast<std::size_t>(id)] = 1;
        return f;
      }
      Num self{0};
      std::vector<Num> acc(k + 1, Num(0));
      for (const auto& t : model_->transitions(id)) {
        if (t.next == kBust) continue;
        if (t.next == id) {
          self += t.prob;
          continue;
        }
        acc[0] += t.prob * Num(t.brains);
        if (space[t.next].shotgun_dice == sh) {
          const std::vector<Num>& g = visit(t.next);
          for (std::size_t j = 0; j <= k; ++j)
            if (!is_zero(g[j])) acc[j] += t.prob * g[j];
        } else {
          acc[0] += t.prob * result[static_cast<std::size_t>(t.next)];
        }
      }
      if (!is_zero(self)) {
        const Num scale = Num(1) / (Num(1) - self);
        for (auto& x : acc) x *= scale;
      }
      f = std::move(acc);
      done[static_cast<std::size_t>(id)] = 1;
      return f;
    };

    std::vector<Num> m(k * k, Num(0)), c(k, Num(0));
    for (std::size_t i = 0; i < k; ++i) {
      const std::vector<Num>& f = visit(entries[i]);
      c[i] = f[0];
      for (std::size_t j = 0; j < k; ++j) m[i * k + j] = f[1 + j];
    }
    const std::vector<Num> u = solve_fixed_point(std::move(m), std::move(c));
    for (int id : members[bi]) {
      const std::vector<Num>& f = visit(id);
      Num v = f[0];
      for (std::size_t j = 0; j < k; ++j)
        if (!is_zero(f[1 + j])) v += f[1 + j] * u[j];
      result[static_cast<std::size_t>(id)] = v;
    }
  };

  // Blocks with more shotguns feed blocks with fewer; same-level blocks are independent.
  std::size_t begin = 0;
  for (int s = 2; s >= 0; --s) {
    std::size_t end = begin;
    while (end < blocks.size() && blocks[end].total() == s) ++end;
    const int lo = static_cast<int>(begin), hi = static_cast<int>(end);
    if (exec_ == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
      for (int bi = lo; bi < hi; ++bi) solve_block(static_cast<std::size_t>(bi));
    } else {
      for (int bi = lo; bi < hi; ++bi) solve_block(static_cast<std::size_t>(bi));
    }
    begin = end;
  }
  recursive_ = std::move(result);
}

template <class Num>
Num BasicTurnSolver<Num>::recursive_brains(const Position& p) {
  const int id = id_of(p);
  std::lock_guard lock(mu_);
  solve_recursive_locked();
  return recursive_[static_cast<std::size_t>(id)];
}

template <class Num>
Num BasicTurnSolver<Num>::continuation_locked(int id, int b) {
  const int cap = config_.brain_cap;
  Num rest{0};
  Num self{0};
  for (const auto& t : model_->transitions(id)) {
    if (t.next == kBust) continue;
    if (t.next == id && t.brains == 0) {
      self += t.prob;
      continue;
    }
    rest += t.prob * value_locked(t.next, std::min(b + t.brains, cap));
  }
  if (is_zero(self)) return rest;
  // Rolling three footprints again returns to this position with the same tally.
  const Num loop = rest / (Num(1) - self);
  if (loop > Num(b)) return loop;
  return rest + self * Num(b);
}

template <class Num>
const Num& BasicTurnSolver<Num>::value_locked(int id, int b) {
  const int cap = config_.brain_cap;
  if (values_.empty()) values_.resize(static_cast<std::size_t>(model_->size()) * static_cast<std::size_t>(cap + 1));
  auto& slot = values_[static_cast<std::size_t>(id) * static_cast<std::size_t>(cap + 1) + static_cast<std::size_t>(b)];
  if (slot) return *slot;
  if (b >= cap) {
    slot = Num(b);
    return *slot;
  }
  Num cont = continuation_locked(id, b);
  slot = cont > Num(b) ? std::move(cont) : Num(b);
  return *slot;
}

template <class Num>
TurnValue<Num> BasicTurnSolver<Num>::turn_value(const TurnState& state) {
  if (auto v = validate_turn_state(state); !v.empty()) throw std::invalid_argument("turn_value: " + v.front().message);
  if (state.brains_banked > config_.brain_cap)
    throw CapExceeded("brain tally " + std::to_string(state.brains_banked) + " exceeds the cap " +
                      std::to_string(config_.brain_cap));
  const int id = id_of(Position::of(state));
  std::lock_guard lock(mu_);
  return {value_locked(id, state.brains_banked)};
}

template <class Num>
Num BasicTurnSolver<Num>::continuation_value(const TurnState& state) {
  if (auto v = validate_turn_state(state); !v.empty())
    throw std::invalid_argument("continuation_value: " + v.front().message);
  if (state.brains_banked > config_.brain_cap) throw CapExceeded("brain tally exceeds the cap");
  const int id = id_of(Position::of(state));
  std::lock_guard lock(mu_);
  if (state.brains_banked >= config_.brain_cap) return Num(state.brains_banked);
  return continuation_locked(id, state.brains_banked);
}

template <class Num>
Num BasicTurnSolver<Num>::continuation_value(const Position& p, int brains) {
  if (brains < 0 || brains > config_.brain_cap) throw CapExceeded("brain tally outside [0, cap]");
  const int id = id_of(p);
  std::lock_guard lock(mu_);
  if (brains >= config_.brain_cap) return Num(brains);
  return continuation_locked(id, brains);
}

template <class Num>
int BasicTurnSolver<Num>::optimal_threshold(const Position& p) {
  const int id = id_of(p);
  std::lock_guard lock(mu_);
  if (thresholds_.empty()) thresholds_.resize(static_cast<std::size_t>(model_->size()));
  auto& slot = thresholds_[static_cast<std::size_t>(id)];
  if (slot) return *slot;
  int best = -1;
  for (int b = 0; b < config_.brain_cap; ++b)
    if (continuation_locked(id, b) > Num(b)) best = b;
  slot = best;
  return best;
}

template <class Num>
Num BasicTurnSolver<Num>::decision_point(const Position& p) {
  const int id = id_of(p);
  switch (config_.mode) {
    case DecisionMode::one_step: {
      const Num pe = model_->bust_prob(id);
      return model_->one_step_brains(id) * (Num(1) - pe) / pe;
    }
    case DecisionMode::recursive: {
      const Num pe = model_->bust_prob(id);
      return recursive_brains(p) * (Num(1) - pe) / pe;
    }
    case DecisionMode::optimal:
      return Num(optimal_threshold(p) + 1);
  }
  return Num(0);
}

template <class Num>
Num BasicTurnSolver<Num>::decision_point(const CupState& cup, const FootprintSet& fp, int shotguns) {
  return decision_point(Position::of(canonical_completion(cup, fp, shotguns)));
}

namespace {
int below(double d) { return static_cast<int>(std::ceil(d)) - 1; }
int below(const ExactNumber& d) { return static_cast<int>(largest_integer_below(d).get_si()); }
}  // namespace

template <class Num>
int BasicTurnSolver<Num>::stop_threshold(const Position& p) {
  if (config_.mode == DecisionMode::optimal) return optimal_threshold(p);
  return below(decision_point(p));
}

template <class Num>
int BasicTurnSolver<Num>::stop_threshold(const CupState& cup, const FootprintSet& fp, int shotguns) {
  return stop_threshold(Position::of(canonical_completion(cup, fp, shotguns)));
}

template <class Num>
void BasicTurnSolver<Num>::precompute() {
  {
    std::lock_guard lock(mu_);
    solve_recursive_locked();
  }
  if (config_.mode == DecisionMode::optimal) {
    const PositionSpace& space = PositionSpace::instance();
    for (int id = 0; id < space.size(); ++id) optimal_threshold(space[id]);
  }
}

template class BasicTurnSolver<double>;
template class BasicTurnSolver<ExactNumber>;

}  // namespace zombie

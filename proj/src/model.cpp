#include "zombie/model.hpp"

#include <algorithm>

#include "zombie/roll_probability.hpp"

namespace zombie {

AsideDice Position::aside_brains() const {
  AsideDice a;
  for (Color c : kColors) a[c] = total_of(c) - cup[c] - footprints[c] - shotgun_dice[c];
  return a;
}

CupState Position::ready_cup() const {
  if (!needs_replenish()) return cup;
  CupState c;
  for (Color col : kColors) c[col] = total_of(col) - footprints[col] - shotgun_dice[col];
  return c;
}

TurnState Position::with_brains(int brains_banked) const {
  TurnState s;
  s.cup = cup;
  s.footprints = footprints;
  s.aside_shotguns = shotgun_dice;
  s.aside_brains = aside_brains();
  s.shotguns = shotguns();
  s.brains_banked = brains_banked;
  return s;
}

Position Position::of(const TurnState& s) { return {s.cup, s.footprints, s.aside_shotguns}; }

std::size_t PositionSpace::key(const Position& p) {
  std::size_t k = 0;
  k = k * 7 + static_cast<std::size_t>(p.cup.green);
  k = k * 5 + static_cast<std::size_t>(p.cup.yellow);
  k = k * 4 + static_cast<std::size_t>(p.cup.red);
  k = k * 4 + static_cast<std::size_t>(p.footprints.green);
  k = k * 4 + static_cast<std::size_t>(p.footprints.yellow);
  k = k * 4 + static_cast<std::size_t>(p.footprints.red);
  k = k * 3 + static_cast<std::size_t>(p.shotgun_dice.green);
  k = k * 3 + static_cast<std::size_t>(p.shotgun_dice.yellow);
  k = k * 3 + static_cast<std::size_t>(p.shotgun_dice.red);
  return k;
}

PositionSpace::PositionSpace() : id_by_key_(7 * 5 * 4 * 4 * 4 * 4 * 3 * 3 * 3, -1) {
  for (int sg = 0; sg <= 2; ++sg)
    for (int sy = 0; sy <= 2 - sg; ++sy)
      for (int sr = 0; sr <= 2 - sg - sy; ++sr)
        for (int gc = 0; gc <= 6; ++gc)
          for (int yc = 0; yc <= 4; ++yc)
            for (int rc = 0; rc <= 3; ++rc)
              for (int gf = 0; gf <= 3; ++gf)
                for (int yf = 0; yf <= 3 - gf; ++yf)
                  for (int rf = 0; rf <= 3 - gf - yf; ++rf) {
                    const Position p{{gc, yc, rc}, {gf, yf, rf}, {sg, sy, sr}};
                    bool ok = true;
                    for (Color c : kColors) ok = ok && p.cup[c] + p.footprints[c] + p.shotgun_dice[c] <= total_of(c);
                    if (!ok) continue;
                    id_by_key_[key(p)] = static_cast<int>(positions_.size());
                    positions_.push_back(p);
                  }
}

const PositionSpace& PositionSpace::instance() {
  static const PositionSpace space;
  return space;
}

int PositionSpace::id_of(const Position& p) const {
  for (Color c : kColors) {
    if (p.cup[c] < 0 || p.footprints[c] < 0 || p.shotgun_dice[c] < 0) return -1;
    if (p.cup[c] + p.footprints[c] + p.shotgun_dice[c] > total_of(c)) return -1;
  }
  if (p.footprints.total() > 3 || p.shotguns() > 2) return -1;
  return id_by_key_[key(p)];
}

namespace {

std::size_t joint_key(const CupState& cup, const FootprintSet& fp) {
  return ((static_cast<std::size_t>(cup.green) * 5 + static_cast<std::size_t>(cup.yellow)) * 4 +
          static_cast<std::size_t>(cup.red)) * 64 +
         static_cast<std::size_t>(fp.green * 16 + fp.yellow * 4 + fp.red);
}

template <class Num>
std::vector<Transition<Num>> transitions_for(const Position& pos, const std::vector<JointOutcome>& joint) {
  const PositionSpace& space = PositionSpace::instance();
  const CupState cup = pos.ready_cup();
  std::vector<Transition<Num>> out;
  auto add = [&](int next, int brains, const ExactNumber& p) {
    for (auto& t : out)
      if (t.next == next && t.brains == brains) {
        t.prob += from_exact<Num>(p);
        return;
      }
    out.push_back({next, brains, from_exact<Num>(p)});
  };
  // Accumulate exactly first, then convert, so float models carry rounded exact sums.
  std::vector<Transition<ExactNumber>> exact;
  auto add_exact = [&](int next, int brains, const ExactNumber& p) {
    for (auto& t : exact)
      if (t.next == next && t.brains == brains) {
        t.prob += p;
        return;
      }
    exact.push_back({next, brains, p});
  };
  for (const JointOutcome& j : joint) {
    const RollOutcome& o = j.outcome;
    if (pos.shotguns() + o.shotguns() >= 3) {
      add_exact(kBust, o.brains(), j.prob);
      continue;
    }
    Position next;
    for (Color c : kColors) {
      next.cup[c] = cup[c] - (j.hand[c] - pos.footprints[c]);
      next.footprints[c] = o[c].footprints;
      next.shotgun_dice[c] = pos.shotgun_dice[c] + o[c].shotguns;
    }
    add_exact(space.id_of(next), o.brains(), j.prob);
  }
  for (const auto& t : exact) add(t.next, t.brains, t.prob);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.next != b.next ? a.next < b.next : a.brains < b.brains;
  });
  return out;
}

}  // namespace

template <class Num>
TurnModel<Num>::TurnModel(Execution exec) {
  const PositionSpace& space = PositionSpace::instance();
  const int n = space.size();

  // Joint outcome lists depend only on (ready cup, footprints); compute each once.
  std::vector<std::size_t> keys;
  std::vector<std::pair<CupState, FootprintSet>> params;
  std::vector<int> slot(7 * 5 * 4 * 64, -1);
  for (int id = 0; id < n; ++id) {
    const Position& p = space[id];
    const CupState cup = p.ready_cup();
    const std::size_t k = joint_key(cup, p.footprints);
    if (slot[k] < 0) {
      slot[k] = static_cast<int>(params.size());
      params.emplace_back(cup, p.footprints);
    }
  }
  std::vector<std::vector<JointOutcome>> joints(params.size());
  const int np = static_cast<int>(params.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < np; ++i) joints[i] = joint_transition(params[i].first, params[i].second);
  } else {
    for (int i = 0; i < np; ++i) joints[i] = joint_transition(params[i].first, params[i].second);
  }

  table_.resize(static_cast<std::size_t>(n));
  auto build = [&](int id) {
    const Position& p = space[id];
    const auto& joint = joints[static_cast<std::size_t>(slot[joint_key(p.ready_cup(), p.footprints)])];
    table_[static_cast<std::size_t>(id)] = transitions_for<Num>(p, joint);
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 32)
    for (int id = 0; id < n; ++id) build(id);
  } else {
    for (int id = 0; id < n; ++id) build(id);
  }
}

template <class Num>
Num TurnModel<Num>::bust_prob(int id) const {
  Num p{0};
  for (const auto& t : transitions(id))
    if (t.next == kBust) p += t.prob;
  return p;
}

template <class Num>
Num TurnModel<Num>::one_step_brains(int id) const {
  Num e{0};
  for (const auto& t : transitions(id)) e += t.prob * Num(t.brains);
  return e;
}

template class TurnModel<double>;
template class TurnModel<ExactNumber>;

}  // namespace zombie

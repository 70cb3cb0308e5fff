#pragma once

#include <cstdint>
#include <vector>

#include "zombie/exact.hpp"
#include "zombie/turn_state.hpp"

namespace zombie {

enum class Execution { serial, parallel };

/// A turn state without the brain tally: what is in the cup, what is held as
/// footprints and which shotgun dice are out. Aside brains are implied by
/// conservation.
struct Position {
  CupState cup;
  FootprintSet footprints;
  AsideDice shotgun_dice;

  int shotguns() const { return shotgun_dice.total(); }
  AsideDice aside_brains() const;
  bool needs_replenish() const { return cup.total() + footprints.total() < 3; }
  /// Cup after set-aside brains are returned; equal to `cup` when no replenish is due.
  CupState ready_cup() const;

  TurnState with_brains(int brains_banked) const;
  static Position of(const TurnState& state);

  friend bool operator==(const Position&, const Position&) = default;
};

/// Dense numbering of every legal live position (shotguns <= 2).
class PositionSpace {
 public:
  static const PositionSpace& instance();

  int size() const { return static_cast<int>(positions_.size()); }
  const Position& operator[](int id) const { return positions_[static_cast<std::size_t>(id)]; }
  /// -1 when the position is not legal or not live.
  int id_of(const Position& p) const;

 private:
  PositionSpace();
  static std::size_t key(const Position& p);

  std::vector<Position> positions_;
  std::vector<int> id_by_key_;
};

template <class Num>
struct Transition {
  int next;    // position id, or kBust
  int brains;  // brains shown on this roll (counted even when busting, for one-step EB)
  Num prob;
};

inline constexpr int kBust = -1;

/// Next-roll transitions for every position, merged by (successor, brains).
/// Replenishment is folded in: a position whose cup is short rolls from its
/// replenished cup.
template <class Num>
class TurnModel {
 public:
  explicit TurnModel(Execution exec = Execution::parallel);

  const std::vector<Transition<Num>>& transitions(int id) const { return table_[static_cast<std::size_t>(id)]; }
  int size() const { return static_cast<int>(table_.size()); }

  Num bust_prob(int id) const;
  /// Expected brains on the next roll including busting outcomes.
  Num one_step_brains(int id) const;

 private:
  std::vector<std::vector<Transition<Num>>> table_;
};

extern template class TurnModel<double>;
extern template class TurnModel<ExactNumber>;

/// Conversion helpers shared by the numeric templates.
template <class Num>
Num from_exact(const ExactNumber& x);
template <>
inline double from_exact<double>(const ExactNumber& x) { return x.to_double(); }
template <>
inline ExactNumber from_exact<ExactNumber>(const ExactNumber& x) { return x; }

inline double to_double(double x) { return x; }
inline double to_double(const ExactNumber& x) { return x.to_double(); }

}  // namespace zombie

#include "zombie/turn_state.hpp"

#include <algorithm>
#include <sstream>

namespace zombie {

std::vector<Violation> validate_turn_state(const TurnState& s) {
  std::vector<Violation> out;
  auto add = [&](std::string code, std::string msg) { out.push_back({std::move(code), std::move(msg)}); };

  for (Color c : kColors) {
    const std::string cn{name(c)};
    const int total = total_of(c);
    if (s.cup[c] < 0) add(cn + " underflow", cn + " cup count is negative");
    if (s.cup[c] > total) add(cn + " overflow", cn + " cup count " + std::to_string(s.cup[c]) + " exceeds " +
                                                    std::to_string(total));
    if (s.footprints[c] < 0) add(cn + " footprint underflow", cn + " footprint count is negative");
    if (s.aside_brains[c] < 0) add(cn + " aside brain underflow", cn + " aside brain count is negative");
    if (s.aside_shotguns[c] < 0) add(cn + " aside shotgun underflow", cn + " aside shotgun count is negative");
    const int held = s.cup[c] + s.footprints[c] + s.aside_brains[c] + s.aside_shotguns[c];
    if (held != total)
      add(cn + " conservation", cn + " dice account for " + std::to_string(held) + " of " + std::to_string(total));
  }
  if (s.footprints.total() > 3)
    add("footprint overflow", "at most three footprints can be held, got " + std::to_string(s.footprints.total()));
  if (s.shotguns != s.aside_shotguns.total())
    add("shotgun mismatch", "shotgun count " + std::to_string(s.shotguns) + " but " +
                                std::to_string(s.aside_shotguns.total()) + " shotgun dice set aside");
  if (s.shotguns < 0) add("shotgun underflow", "shotgun count is negative");
  if (s.shotguns > 2) add("not live", "three or more shotguns end the turn");
  if (s.brains_banked < 0) add("brain underflow", "brain tally is negative");
  if (s.brains_banked < s.aside_brains.total())
    add("brain tally", "brain tally " + std::to_string(s.brains_banked) + " is below the " +
                           std::to_string(s.aside_brains.total()) + " brain dice set aside");
  return out;
}

TurnState replenish(const TurnState& state) {
  if (!state.needs_replenish())
    throw InvalidState("replenish: cup and footprints already hold " + std::to_string(state.available()) +
                       " dice");
  TurnState next = state;
  for (Color c : kColors) {
    next.cup[c] += next.aside_brains[c];
    next.aside_brains[c] = 0;
  }
  return next;
}

TurnState ready_to_roll(const TurnState& state) {
  return state.needs_replenish() ? replenish(state) : state;
}

TurnState canonical_completion(const CupState& cup, const FootprintSet& fp, int shotguns, int brains_banked) {
  if (shotguns < 0 || shotguns > 2) throw std::invalid_argument("shotguns must be 0, 1 or 2");
  TurnState s;
  s.cup = cup;
  s.footprints = fp;
  s.shotguns = shotguns;
  int remaining = shotguns;
  for (Color c : {Color::red, Color::yellow, Color::green}) {
    const int outside = total_of(c) - cup[c] - fp[c];
    if (outside < 0)
      throw std::invalid_argument(std::string(name(c)) + ": cup plus footprints exceed the dice of that colour");
    const int sg = std::min(outside, remaining);
    s.aside_shotguns[c] = sg;
    s.aside_brains[c] = outside - sg;
    remaining -= sg;
  }
  if (remaining > 0) throw std::invalid_argument("not enough dice outside the cup for the shotgun count");
  s.brains_banked = brains_banked < 0 ? s.aside_brains.total() : brains_banked;
  if (auto v = validate_turn_state(s); !v.empty()) throw std::invalid_argument(v.front().message);
  return s;
}

std::string to_string(const TurnState& s) {
  std::ostringstream os;
  os << "cup(R" << s.cup.red << " Y" << s.cup.yellow << " G" << s.cup.green << ") fp(R" << s.footprints.red << " Y"
     << s.footprints.yellow << " G" << s.footprints.green << ") brains(R" << s.aside_brains.red << " Y"
     << s.aside_brains.yellow << " G" << s.aside_brains.green << ") shotguns(R" << s.aside_shotguns.red << " Y"
     << s.aside_shotguns.yellow << " G" << s.aside_shotguns.green << ") s=" << s.shotguns
     << " b=" << s.brains_banked;
  return os.str();
}

}  // namespace zombie

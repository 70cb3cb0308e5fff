#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "zombie/exact.hpp"

namespace zombie {

enum class Color : std::uint8_t { green = 0, yellow = 1, red = 2 };

inline constexpr std::array<Color, 3> kColors{Color::green, Color::yellow, Color::red};

enum class Face : std::uint8_t { brain = 0, footprint = 1, shotgun = 2 };

constexpr std::size_t index(Color c) { return static_cast<std::size_t>(c); }
std::string_view name(Color c);
std::string_view name(Face f);

/// Faces of one die, out of six.
struct FaceCounts {
  int brains;
  int footprints;
  int shotguns;
};

constexpr FaceCounts face_counts(Color c) {
  switch (c) {
    case Color::green: return {3, 2, 1};
    case Color::yellow: return {2, 2, 2};
    case Color::red: return {1, 2, 3};
  }
  return {0, 0, 0};
}

/// Face shown by side `side` (0..5) of a die of colour `c`; sides are laid out
/// brains first, then footprints, then shotguns.
constexpr Face face_of_side(Color c, int side) {
  const FaceCounts f = face_counts(c);
  if (side < f.brains) return Face::brain;
  if (side < f.brains + f.footprints) return Face::footprint;
  return Face::shotgun;
}

struct FaceProbabilities {
  ExactNumber brain;
  ExactNumber footprint;
  ExactNumber shotgun;
};

FaceProbabilities face_probabilities(Color c);

/// Dice in a box: 6 green, 4 yellow, 3 red.
inline constexpr int kTotalDice = 13;
constexpr int total_of(Color c) {
  switch (c) {
    case Color::green: return 6;
    case Color::yellow: return 4;
    case Color::red: return 3;
  }
  return 0;
}

/// Per-colour dice counts. The tag keeps cups, footprints and hands apart at
/// compile time while sharing the arithmetic.
template <class Tag>
struct DiceCounts {
  int green = 0;
  int yellow = 0;
  int red = 0;

  constexpr int& operator[](Color c) { return c == Color::green ? green : c == Color::yellow ? yellow : red; }
  constexpr int operator[](Color c) const { return c == Color::green ? green : c == Color::yellow ? yellow : red; }
  constexpr int total() const { return green + yellow + red; }

  friend constexpr bool operator==(const DiceCounts&, const DiceCounts&) = default;
  friend constexpr auto operator<=>(const DiceCounts&, const DiceCounts&) = default;
};

struct CupTag {};
struct FootprintTag {};
struct HandTag {};
struct AsideTag {};

using CupState = DiceCounts<CupTag>;
using FootprintSet = DiceCounts<FootprintTag>;
using HandComposition = DiceCounts<HandTag>;
using AsideDice = DiceCounts<AsideTag>;

inline constexpr CupState kFullCup{6, 4, 3};

/// Result of rolling the dice of one colour.
struct ColorSplit {
  int brains = 0;
  int footprints = 0;
  int shotguns = 0;

  constexpr int dice() const { return brains + footprints + shotguns; }
  constexpr int operator[](Face f) const {
    return f == Face::brain ? brains : f == Face::footprint ? footprints : shotguns;
  }
  friend constexpr bool operator==(const ColorSplit&, const ColorSplit&) = default;
};

/// n! / (x_1! ... x_k!). Throws std::invalid_argument when the parts do not sum to n
/// or any part is negative.
BigInt multinomial_coeff(int n, std::span<const int> parts);
BigInt multinomial_coeff(int n, std::initializer_list<int> parts);

BigInt binomial(int n, int k);

}  // namespace zombie

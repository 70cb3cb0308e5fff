#include "zombie/dice.hpp"

#include <stdexcept>
#include <string>

namespace zombie {

std::string_view name(Color c) {
  switch (c) {
    case Color::green: return "green";
    case Color::yellow: return "yellow";
    case Color::red: return "red";
  }
  return "?";
}

std::string_view name(Face f) {
  switch (f) {
    case Face::brain: return "brain";
    case Face::footprint: return "footprint";
    case Face::shotgun: return "shotgun";
  }
  return "?";
}

FaceProbabilities face_probabilities(Color c) {
  const FaceCounts f = face_counts(c);
  return {ExactNumber(f.brains, 6), ExactNumber(f.footprints, 6), ExactNumber(f.shotguns, 6)};
}

BigInt multinomial_coeff(int n, std::span<const int> parts) {
  if (n < 0) throw std::invalid_argument("multinomial_coeff: negative n");
  int sum = 0;
  for (int p : parts) {
    if (p < 0) throw std::invalid_argument("multinomial_coeff: negative part");
    sum += p;
  }
  if (sum != n)
    throw std::invalid_argument("multinomial_coeff: parts sum to " + std::to_string(sum) + ", expected " +
                                std::to_string(n));
  BigInt result;
  mpz_fac_ui(result.get_mpz_t(), static_cast<unsigned long>(n));
  for (int p : parts) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(p));
    result /= f;
  }
  return result;
}

BigInt multinomial_coeff(int n, std::initializer_list<int> parts) {
  return multinomial_coeff(n, std::span<const int>(parts.begin(), parts.size()));
}

BigInt binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace zombie

#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zombie/model.hpp"

namespace zombie {

/// How the decision quotient EB * (1 - PE) / PE is fed.
///  - one_step:  EB is the expected brains of the next roll alone.
///  - recursive: EB is the expected number of brains collected on every
///               future non-busting roll when rolling on until the turn busts.
///  - optimal:   no quotient; the threshold comes from the optimal-stopping
///               program (largest b whose continuation value beats b, plus one).
enum class DecisionMode { one_step, recursive, optimal };
enum class NumericMode { exact, floating };

std::string_view name(DecisionMode m);
DecisionMode parse_decision_mode(std::string_view text);

struct SolverConfig {
  DecisionMode mode = DecisionMode::recursive;
  int brain_cap = 64;  // B_MAX; stopping is forced at this tally
  NumericMode numeric = NumericMode::floating;

  void validate() const;
};

class CapExceeded : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

template <class Num>
struct TurnValue {
  Num value;  // expected banked brains at turn end under optimal play
};

/// Full-turn solver over the live position space.
///
/// All caches are filled under a mutex on first use; after `precompute()` the
/// object is read-only and can be shared between threads.
template <class Num>
class BasicTurnSolver {
 public:
  explicit BasicTurnSolver(SolverConfig config = {}, Execution exec = Execution::parallel);

  const SolverConfig& config() const { return config_; }
  const TurnModel<Num>& model() const { return *model_; }

  /// Fills every cache the config needs (recursive EB, and the optimal DP for
  /// every position and tally when the mode is `optimal`).
  void precompute();

  /// max(stop, continue) with bust worth zero; b above the cap throws CapExceeded.
  TurnValue<Num> turn_value(const TurnState& state);

  /// Value of rolling once more and then playing optimally.
  Num continuation_value(const TurnState& state);
  /// Same at a position with any tally in [0, cap].
  Num continuation_value(const Position& p, int brains);

  /// Expected brains gathered on non-busting rolls when never stopping.
  Num recursive_brains(const Position& p);

  Num bust_probability(const Position& p) const;

  /// Decision quotient for an explicit position under the configured mode.
  Num decision_point(const Position& p);
  Num decision_point(const CupState& cup, const FootprintSet& fp, int shotguns);

  /// Largest tally at which rolling on is advised; -1 when never.
  int stop_threshold(const Position& p);
  int stop_threshold(const CupState& cup, const FootprintSet& fp, int shotguns);

  /// Largest b in [0, cap) whose continuation value strictly exceeds b, or -1.
  int optimal_threshold(const Position& p);

 private:
  int id_of(const Position& p) const;
  void solve_recursive_locked();
  const Num& value_locked(int id, int b);
  Num continuation_locked(int id, int b);

  SolverConfig config_;
  Execution exec_;
  std::shared_ptr<const TurnModel<Num>> model_;

  std::mutex mu_;
  std::vector<Num> recursive_;  // by position id, empty until solved
  std::vector<std::optional<Num>> values_;  // (id, b) -> optimal value
  std::vector<std::optional<int>> thresholds_;
};

using TurnSolver = BasicTurnSolver<double>;
using ExactTurnSolver = BasicTurnSolver<ExactNumber>;

extern template class BasicTurnSolver<double>;
extern template class BasicTurnSolver<ExactNumber>;

/// Shared models; building one costs a few hundred milliseconds (exact: seconds).
template <class Num>
std::shared_ptr<const TurnModel<Num>> shared_model();

}  // namespace zombie

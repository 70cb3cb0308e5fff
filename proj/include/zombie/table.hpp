#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "zombie/solver.hpp"

namespace zombie {

/// One line of the decision table. A shotgun count that cannot occur for the
/// (cup, footprints) pair leaves its entry empty.
struct DecisionRow {
  CupState cup;
  FootprintSet footprints;
  std::array<std::optional<double>, 3> decision;

  bool feasible(int shotguns) const { return decision[static_cast<std::size_t>(shotguns)].has_value(); }
};

/// All (cup, footprints) pairs with per-colour cup + footprints within the
/// colour total and at most three footprints, ordered by red, yellow, green
/// cup counts and then by red, yellow, green footprints.
std::vector<std::pair<CupState, FootprintSet>> table_keys();

/// At least `shotguns` dice lie outside the cup and the footprints.
bool shotguns_feasible(const CupState& cup, const FootprintSet& fp, int shotguns);

class DecisionTable {
 public:
  DecisionTable(DecisionMode mode, std::vector<DecisionRow> rows);

  DecisionMode mode() const { return mode_; }
  const std::vector<DecisionRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  /// Number of feasible (cup, footprints, shotguns) combinations.
  std::size_t combinations() const;

  const DecisionRow* find(const CupState& cup, const FootprintSet& fp) const;

  /// FNV-1a 64 of the CSV rendering, as 16 hex digits.
  std::string checksum() const;

  std::string to_csv() const;
  std::string to_json(int shotguns_filter = -1) const;

 private:
  DecisionMode mode_;
  std::vector<DecisionRow> rows_;
  std::vector<int> index_;  // by (cup, fp) key, -1 when absent
};

inline constexpr const char* kTableHeader =
    "r_cup,y_cup,g_cup,r_fp,y_fp,g_fp,decision_sg0,decision_sg1,decision_sg2";

/// Evaluates every row with `solver` (whose mode picks the quotient). Rows are
/// independent; the parallel path splits them over OpenMP threads.
DecisionTable generate_table(TurnSolver& solver, Execution exec = Execution::parallel);

/// Exact decision values for one (cup, footprints) pair, for agreement checks.
std::array<std::optional<ExactNumber>, 3> exact_decisions(ExactTurnSolver& solver, const CupState& cup,
                                                          const FootprintSet& fp);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace zombie

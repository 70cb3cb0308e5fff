#include "zombie/table.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace zombie {
namespace {

int table_key(const CupState& cup, const FootprintSet& fp) {
  return ((cup.red * 5 + cup.yellow) * 7 + cup.green) * 64 + fp.red * 16 + fp.yellow * 4 + fp.green;
}

constexpr int kKeySpace = 4 * 5 * 7 * 64;

}  // namespace

std::vector<std::pair<CupState, FootprintSet>> table_keys() {
  std::vector<std::pair<CupState, FootprintSet>> keys;
  for (int rc = 0; rc <= 3; ++rc)
    for (int yc = 0; yc <= 4; ++yc)
      for (int gc = 0; gc <= 6; ++gc)
        for (int rf = 0; rf <= 3 - rc && rf <= 3; ++rf)
          for (int yf = 0; yf <= 4 - yc && rf + yf <= 3; ++yf)
            for (int gf = 0; gf <= 6 - gc && rf + yf + gf <= 3; ++gf)
              keys.push_back({CupState{gc, yc, rc}, FootprintSet{gf, yf, rf}});
  return keys;
}

bool shotguns_feasible(const CupState& cup, const FootprintSet& fp, int shotguns) {
  return shotguns >= 0 && shotguns <= 2 && kTotalDice - cup.total() - fp.total() >= shotguns;
}

DecisionTable::DecisionTable(DecisionMode mode, std::vector<DecisionRow> rows)
    : mode_(mode), rows_(std::move(rows)), index_(kKeySpace, -1) {
  for (std::size_t i = 0; i < rows_.size(); ++i) index_[table_key(rows_[i].cup, rows_[i].footprints)] = static_cast<int>(i);
}

std::size_t DecisionTable::combinations() const {
  std::size_t n = 0;
  for (const auto& r : rows_)
    for (const auto& d : r.decision) n += d.has_value();
  return n;
}

const DecisionRow* DecisionTable::find(const CupState& cup, const FootprintSet& fp) const {
  if (cup.red < 0 || cup.red > 3 || cup.yellow < 0 || cup.yellow > 4 || cup.green < 0 || cup.green > 6) return nullptr;
  if (fp.red < 0 || fp.yellow < 0 || fp.green < 0 || fp.total() > 3) return nullptr;
  const int i = index_[table_key(cup, fp)];
  return i < 0 ? nullptr : &rows_[static_cast<std::size_t>(i)];
}

std::string DecisionTable::to_csv() const {
  std::string out = kTableHeader;
  out += '\n';
  for (const auto& r : rows_) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%d", r.cup.red, r.cup.yellow, r.cup.green, r.footprints.red,
                  r.footprints.yellow, r.footprints.green);
    out += buf;
    for (const auto& d : r.decision) {
      out += ',';
      if (d) out += format_fixed(*d, 6);
    }
    out += '\n';
  }
  return out;
}

std::string DecisionTable::to_json(int shotguns_filter) const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows_) {
    if (shotguns_filter >= 0 && !r.feasible(shotguns_filter)) continue;
    nlohmann::ordered_json j;
    j["r_cup"] = r.cup.red;
    j["y_cup"] = r.cup.yellow;
    j["g_cup"] = r.cup.green;
    j["r_fp"] = r.footprints.red;
    j["y_fp"] = r.footprints.yellow;
    j["g_fp"] = r.footprints.green;
    for (int s = 0; s < 3; ++s) {
      if (shotguns_filter >= 0 && s != shotguns_filter) continue;
      const auto& d = r.decision[static_cast<std::size_t>(s)];
      const std::string key = "decision_sg" + std::to_string(s);
      if (d)
        j[key] = std::stod(format_fixed(*d, 6));
      else
        j[key] = nullptr;
    }
    arr.push_back(std::move(j));
  }
  return arr.dump();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string DecisionTable::checksum() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_csv())));
  return buf;
}

DecisionTable generate_table(TurnSolver& solver, Execution exec) {
  solver.precompute();
  const auto keys = table_keys();
  std::vector<DecisionRow> rows(keys.size());
  auto fill = [&](std::size_t i) {
    DecisionRow& row = rows[i];
    row.cup = keys[i].first;
    row.footprints = keys[i].second;
    for (int s = 0; s < 3; ++s)
      if (shotguns_feasible(row.cup, row.footprints, s))
        row.decision[static_cast<std::size_t>(s)] = solver.decision_point(row.cup, row.footprints, s);
  };
  const int n = static_cast<int>(keys.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < n; ++i) fill(static_cast<std::size_t>(i));
  } else {
    for (int i = 0; i < n; ++i) fill(static_cast<std::size_t>(i));
  }
  return DecisionTable(solver.config().mode, std::move(rows));
}

std::array<std::optional<ExactNumber>, 3> exact_decisions(ExactTurnSolver& solver, const CupState& cup,
                                                          const FootprintSet& fp) {
  std::array<std::optional<ExactNumber>, 3> out;
  for (int s = 0; s < 3; ++s)
    if (shotguns_feasible(cup, fp, s)) out[static_cast<std::size_t>(s)] = solver.decision_point(cup, fp, s);
  return out;
}

}  // namespace zombie

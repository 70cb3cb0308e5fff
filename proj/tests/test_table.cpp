#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "zombie/table.hpp"

using namespace zombie;

namespace {

const DecisionTable& recursive_table() {
  static TurnSolver solver({DecisionMode::recursive});
  static const DecisionTable t = generate_table(solver);
  return t;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("table keys and combination counts match a direct count") {
  std::size_t pairs = 0, combos = 0;
  for (int rc = 0; rc <= 3; ++rc)
    for (int yc = 0; yc <= 4; ++yc)
      for (int gc = 0; gc <= 6; ++gc)
        for (int rf = 0; rf <= 3; ++rf)
          for (int yf = 0; yf <= 3; ++yf)
            for (int gf = 0; gf <= 3; ++gf) {
              if (rc + rf > 3 || yc + yf > 4 || gc + gf > 6 || rf + yf + gf > 3) continue;
              ++pairs;
              const int outside = 13 - rc - yc - gc - rf - yf - gf;
              for (int s = 0; s <= 2; ++s) combos += outside >= s;
            }
  const DecisionTable& t = recursive_table();
  CHECK(table_keys().size() == pairs);
  CHECK(t.size() == pairs);
  CHECK(t.combinations() == combos);
  CHECK(pairs == 1650);
  CHECK(combos == 4851);
}

TEST_CASE("rows are ordered by red, yellow, green cup and then footprints") {
  const auto keys = table_keys();
  auto order = [](const std::pair<CupState, FootprintSet>& k) {
    return std::array<int, 6>{k.first.red, k.first.yellow, k.first.green, k.second.red, k.second.yellow, k.second.green};
  };
  for (std::size_t i = 1; i < keys.size(); ++i) CHECK(order(keys[i - 1]) < order(keys[i]));
}

TEST_CASE("csv layout and the sample row") {
  const DecisionTable& t = recursive_table();
  const auto csv = lines(t.to_csv());
  REQUIRE(csv.size() == t.size() + 1);
  CHECK(csv[0] == "r_cup,y_cup,g_cup,r_fp,y_fp,g_fp,decision_sg0,decision_sg1,decision_sg2");
  const auto it = std::find_if(csv.begin(), csv.end(), [](const std::string& l) { return l.rfind("2,3,1,1,0,1,", 0) == 0; });
  REQUIRE(it != csv.end());
  CHECK(*it == "2,3,1,1,0,1,77.901476,4.022816,0.179634");
  // an infeasible shotgun count renders empty: full cup, no footprints, no dice outside
  const auto full = std::find_if(csv.begin(), csv.end(), [](const std::string& l) { return l.rfind("3,4,6,0,0,0,", 0) == 0; });
  REQUIRE(full != csv.end());
  CHECK(full->substr(full->size() - 2) == ",,");
}

TEST_CASE("json and csv encode the same values") {
  const DecisionTable& t = recursive_table();
  const auto arr = nlohmann::json::parse(t.to_json());
  const auto csv = lines(t.to_csv());
  REQUIRE(arr.size() == t.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::vector<std::string> cells;
    std::stringstream ss(csv[i + 1]);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    cells.resize(9);
    const char* keys[] = {"r_cup", "y_cup", "g_cup", "r_fp", "y_fp", "g_fp"};
    for (int k = 0; k < 6; ++k) CHECK(std::to_string(arr[i][keys[k]].get<int>()) == cells[static_cast<std::size_t>(k)]);
    for (int s = 0; s < 3; ++s) {
      const auto& v = arr[i]["decision_sg" + std::to_string(s)];
      const std::string& cell = cells[static_cast<std::size_t>(6 + s)];
      if (v.is_null())
        CHECK(cell.empty());
      else
        CHECK(format_fixed(v.get<double>(), 6) == cell);
    }
  }
  const auto filtered = nlohmann::json::parse(t.to_json(2));
  for (const auto& row : filtered) {
    CHECK(row.contains("decision_sg2"));
    CHECK_FALSE(row.contains("decision_sg0"));
  }
}

TEST_CASE("serial and parallel generation agree byte for byte") {
  TurnSolver serial_solver({DecisionMode::recursive}, Execution::serial);
  const DecisionTable serial = generate_table(serial_solver, Execution::serial);
  CHECK(serial.to_csv() == recursive_table().to_csv());
  CHECK(serial.checksum() == recursive_table().checksum());
  CHECK(serial.checksum().size() == 16);
}

TEST_CASE("decision values are nonnegative and strictly decrease with shotguns") {
  for (DecisionMode mode : {DecisionMode::one_step, DecisionMode::recursive}) {
    TurnSolver solver({mode});
    const DecisionTable t = generate_table(solver);
    for (const DecisionRow& r : t.rows()) {
      for (const auto& d : r.decision)
        if (d) CHECK(*d >= 0);
      for (int s = 0; s < 2; ++s)
        if (r.feasible(s + 1)) CHECK(*r.decision[static_cast<std::size_t>(s)] > *r.decision[static_cast<std::size_t>(s + 1)]);
    }
  }
}

TEST_CASE("a full cup with no shotguns always rolls on through thirteen brains") {
  const DecisionRow* full = recursive_table().find(kFullCup, {});
  REQUIRE(full);
  CHECK(*full->decision[0] > 13);
}

TEST_CASE("exact and floating tables agree to 1e-9 relative on every row") {
  for (DecisionMode mode : {DecisionMode::one_step, DecisionMode::recursive}) {
    TurnSolver floating({mode});
    const DecisionTable t = generate_table(floating);
    ExactTurnSolver exact({mode});
    for (const DecisionRow& r : t.rows()) {
      const auto e = exact_decisions(exact, r.cup, r.footprints);
      for (int s = 0; s < 3; ++s) {
        const auto i = static_cast<std::size_t>(s);
        REQUIRE(e[i].has_value() == r.decision[i].has_value());
        if (!e[i]) continue;
        const double x = e[i]->to_double();
        CHECK(std::fabs(x - *r.decision[i]) <= 1e-9 * std::max(1.0, std::fabs(x)));
      }
    }
  }
}

TEST_CASE("find and feasibility helpers") {
  const DecisionTable& t = recursive_table();
  CHECK(t.find({7, 0, 0}, {}) == nullptr);
  CHECK(t.find({6, 4, 3}, {1, 0, 0}) == nullptr);
  CHECK(shotguns_feasible({0, 0, 0}, {}, 2));
  CHECK_FALSE(shotguns_feasible(kFullCup, {}, 1));
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

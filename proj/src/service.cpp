#include "zombie/service.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <httplib.h>

#include "zombie/roll_probability.hpp"
#include "zombie/simulator.hpp"

namespace zombie {
namespace {

template <class Counts>
Json counts_json(const Counts& c) {
  return Json{{"r", c.red}, {"y", c.yellow}, {"g", c.green}};
}

double rounded(double x) { return std::stod(format_fixed(x, 6)); }

class Reader {
 public:
  std::vector<Violation> violations;

  void fail(std::string code, std::string message) { violations.push_back({std::move(code), std::move(message)}); }

  std::optional<int> integer(const nlohmann::json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_number_integer()) {
      fail("type", path + " must be an integer");
      return std::nullopt;
    }
    const auto v = it->get<long long>();
    if (v < 0 || v > 1000000) {
      fail("range", path + " must be between 0 and 1000000");
      return std::nullopt;
    }
    return static_cast<int>(v);
  }

  template <class Counts>
  std::optional<Counts> counts(const nlohmann::json& obj, const std::string& key) {
    const auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_object()) {
      fail("type", key + " must be an object with r, y and g counts");
      return std::nullopt;
    }
    for (const auto& [k, _] : it->items())
      if (k != "r" && k != "y" && k != "g") fail("unknown field", key + "." + k + " is not a colour (use r, y, g)");
    Counts c;
    c.red = integer(*it, "r", key + ".r").value_or(0);
    c.yellow = integer(*it, "y", key + ".y").value_or(0);
    c.green = integer(*it, "g", key + ".g").value_or(0);
    return c;
  }
};

struct ParsedState {
  TurnState state;
  bool asides_assumed = false;
  bool what_if_tally = false;
  std::vector<Violation> state_violations;
};

const char* const kStateFields[] = {"cup", "footprints", "shotguns", "brains", "aside_brains", "aside_shotguns"};

// Shape problems go to the reader; rule violations of a well-formed state are returned.
ParsedState read_state(const nlohmann::json& body, Reader& rd) {
  ParsedState out;
  const CupState cup = rd.counts<CupState>(body, "cup").value_or(kFullCup);
  const FootprintSet fp = rd.counts<FootprintSet>(body, "footprints").value_or(FootprintSet{});
  const int shotguns = rd.integer(body, "shotguns", "shotguns").value_or(0);
  const std::optional<int> brains = rd.integer(body, "brains", "brains");
  const auto ab = rd.counts<AsideDice>(body, "aside_brains");
  const auto as = rd.counts<AsideDice>(body, "aside_shotguns");
  if (!rd.violations.empty()) return out;

  TurnState& s = out.state;
  s.cup = cup;
  s.footprints = fp;
  s.shotguns = shotguns;
  if (!ab && !as) {
    out.asides_assumed = true;
    try {
      s = canonical_completion(cup, fp, shotguns);
      if (brains) s.brains_banked = *brains;
      out.state_violations = validate_turn_state(s);
      std::erase_if(out.state_violations, [](const Violation& v) { return v.code == "brain tally"; });
      out.what_if_tally = s.brains_banked < s.aside_brains.total();
      return out;
    } catch (const std::invalid_argument&) {
      // fall through and report every rule the raw fields break
    }
  }
  for (Color c : kColors) {
    const int outside = total_of(c) - cup[c] - fp[c];
    s.aside_brains[c] = ab ? (*ab)[c] : outside - (as ? (*as)[c] : 0);
    s.aside_shotguns[c] = as ? (*as)[c] : outside - s.aside_brains[c];
  }
  s.brains_banked = brains.value_or(s.aside_brains.total());
  out.state_violations = validate_turn_state(s);
  return out;
}

Response json_response(int status, const Json& j) { return {status, j.dump()}; }

Response error_response(int status, const std::string& what, const std::vector<Violation>& v) {
  return json_response(status, Json{{"error", what}, {"violations", violations_json(v)}});
}

}  // namespace

Json state_json(const TurnState& s) {
  return Json{{"cup", counts_json(s.cup)},
              {"footprints", counts_json(s.footprints)},
              {"aside_brains", counts_json(s.aside_brains)},
              {"aside_shotguns", counts_json(s.aside_shotguns)},
              {"shotguns", s.shotguns},
              {"brains", s.brains_banked}};
}

Json fraction_json(const ExactNumber& x) { return Json{{"fraction", x.to_fraction()}, {"decimal", x.to_fixed(6)}}; }

Json violations_json(const std::vector<Violation>& violations) {
  Json arr = Json::array();
  for (const auto& v : violations) arr.push_back(Json{{"code", v.code}, {"message", v.message}});
  return arr;
}

AdviceRequest parse_advice_request(const nlohmann::json& body) {
  if (!body.is_object())
    throw RequestError(400, "malformed request", {{"type", "request body must be a JSON object"}});
  Reader rd;
  for (const auto& [k, _] : body.items()) {
    bool known = k == "policy" || k == "context";
    for (const char* f : kStateFields) known = known || k == f;
    if (!known) rd.fail("unknown field", k + " is not a request field");
  }
  ParsedState ps = read_state(body, rd);

  std::string policy = "optimal";
  if (const auto it = body.find("policy"); it != body.end()) {
    if (it->is_string())
      policy = it->get<std::string>();
    else
      rd.fail("type", "policy must be a string");
  }

  std::optional<GameContext> ctx;
  if (const auto it = body.find("context"); it != body.end() && !it->is_null()) {
    if (!it->is_object()) {
      rd.fail("type", "context must be an object");
    } else {
      GameContext g;
      g.own_score = rd.integer(*it, "own_score", "context.own_score").value_or(0);
      if (const auto op = it->find("opponents"); op != it->end()) {
        if (!op->is_array()) {
          rd.fail("type", "context.opponents must be an array");
        } else {
          for (std::size_t i = 0; i < op->size(); ++i) {
            const auto& o = (*op)[i];
            const std::string path = "context.opponents[" + std::to_string(i) + "]";
            if (!o.is_object()) {
              rd.fail("type", path + " must be an object");
              continue;
            }
            Opponent x;
            x.score = rd.integer(o, "score", path + ".score").value_or(0);
            if (const auto ab = o.find("acts_before"); ab != o.end()) {
              if (ab->is_boolean())
                x.acts_before = ab->get<bool>();
              else
                rd.fail("type", path + ".acts_before must be a boolean");
            }
            g.opponents.push_back(x);
          }
        }
      }
      ctx = g;
    }
  }
  if (!rd.violations.empty()) throw RequestError(400, "malformed request", rd.violations);

  AdviceRequest req;
  try {
    req.policy = PolicyKind::parse(policy);
  } catch (const UnknownPolicy& e) {
    throw RequestError(422, "unknown policy", {{"unknown policy", e.what()}});
  }
  if (!ps.state_violations.empty()) throw RequestError(400, "illegal state", ps.state_violations);
  req.state = ps.state;
  req.asides_assumed = ps.asides_assumed;
  req.what_if_tally = ps.what_if_tally;
  req.context = ctx;
  return req;
}

Json advice_json(const Advice& a, const AdviceRequest& req) {
  Json j;
  j["verdict"] = std::string(name(a.verdict));
  j["policy"] = req.policy.id();
  j["threshold_used"] = a.threshold_used ? Json(*a.threshold_used) : Json(nullptr);
  j["decision_value"] = a.decision_value ? Json(rounded(*a.decision_value)) : Json(nullptr);
  j["bust_probability"] = fraction_json(a.bust_probability);
  j["expected_value_of_continuing"] = rounded(a.expected_value_of_continuing);
  j["continuation_value"] = rounded(a.continuation_value);
  j["rationale"] = a.rationale;
  j["endgame"] = a.endgame;
  j["asides_assumed"] = req.asides_assumed;
  j["what_if_tally"] = req.what_if_tally;
  j["state"] = state_json(req.state);
  return j;
}

Response Service::advise(const std::string& body) const {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    return error_response(400, "malformed JSON", {{"json", e.what()}});
  }
  try {
    const AdviceRequest req = parse_advice_request(parsed);
    return json_response(200, advice_json(engine_.advise(req.policy, req.state, req.context), req));
  } catch (const RequestError& e) {
    return error_response(e.status(), e.what(), e.violations());
  } catch (const InvalidState& e) {
    return error_response(400, "illegal state", {{"state", e.what()}});
  }
}

Response Service::table(const std::optional<std::string>& shotguns) const {
  const DecisionTable& t = engine_.table();
  int s = -1;
  if (shotguns) {
    auto [ptr, ec] = std::from_chars(shotguns->data(), shotguns->data() + shotguns->size(), s);
    if (ec != std::errc() || ptr != shotguns->data() + shotguns->size() || s < 0 || s > 2)
      return error_response(400, "malformed query", {{"shotguns", "shotguns must be 0, 1 or 2"}});
  }
  Json j;
  j["mode"] = std::string(name(t.mode()));
  j["checksum"] = t.checksum();
  j["shotguns"] = s < 0 ? Json(nullptr) : Json(s);
  j["combinations"] = t.combinations();
  j["rows"] = Json::parse(t.to_json(s));
  return json_response(200, j);
}

Response Service::validate(const std::map<std::string, std::string>& params) const {
  static const std::map<std::string, std::pair<std::string, std::string>> fields = {
      {"r_cup", {"cup", "r"}},          {"y_cup", {"cup", "y"}},          {"g_cup", {"cup", "g"}},
      {"r_fp", {"footprints", "r"}},    {"y_fp", {"footprints", "y"}},    {"g_fp", {"footprints", "g"}},
      {"r_ab", {"aside_brains", "r"}},  {"y_ab", {"aside_brains", "y"}},  {"g_ab", {"aside_brains", "g"}},
      {"r_as", {"aside_shotguns", "r"}}, {"y_as", {"aside_shotguns", "y"}}, {"g_as", {"aside_shotguns", "g"}},
      {"shotguns", {"shotguns", ""}},   {"brains", {"brains", ""}}};
  std::vector<Violation> bad;
  nlohmann::json body = nlohmann::json::object();
  for (const auto& [k, v] : params) {
    const auto f = fields.find(k);
    if (f == fields.end()) {
      bad.push_back({"unknown field", k + " is not a state parameter"});
      continue;
    }
    long long x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      bad.push_back({"type", k + " must be an integer"});
      continue;
    }
    if (f->second.second.empty())
      body[f->second.first] = x;
    else
      body[f->second.first][f->second.second] = x;
  }
  if (!bad.empty()) return error_response(400, "malformed query", bad);
  Reader rd;
  ParsedState ps = read_state(body, rd);
  if (!rd.violations.empty()) return error_response(400, "malformed query", rd.violations);
  Json j;
  j["valid"] = ps.state_violations.empty();
  j["violations"] = violations_json(ps.state_violations);
  j["asides_assumed"] = ps.asides_assumed;
  j["what_if_tally"] = ps.what_if_tally;
  j["state"] = state_json(ps.state);
  return json_response(200, j);
}

Response Service::health() const {
  const DecisionTable& t = engine_.table();
  return json_response(200, Json{{"status", "ok"},
                                 {"version", kVersion},
                                 {"table_checksum", t.checksum()},
                                 {"table_rows", t.size()},
                                 {"table_combinations", t.combinations()},
                                 {"rng", std::string(RngStream::kAlgorithm)}});
}

std::unique_ptr<httplib::Server> make_http_server(const Service& service) {
  auto server = std::make_unique<httplib::Server>();
  auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server->Post("/api/advise", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.advise(req.body));
  });
  server->Get("/api/table", [&service, send](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> s;
    if (req.has_param("shotguns")) s = req.get_param_value("shotguns");
    send(res, service.table(s));
  });
  server->Get("/api/state/validate", [&service, send](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> params(req.params.begin(), req.params.end());
    send(res, service.validate(params));
  });
  server->Get("/api/health", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.health());
  });
  return server;
}

bool VerifyReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string VerifyReport::to_text() const {
  std::string out;
  for (const auto& c : checks)
    out += std::string(c.pass ? "PASS " : "FAIL ") + c.id + ": expected " + c.expected + ", computed " + c.computed + "\n";
  out += std::string("overall: ") + (pass() ? "PASS" : "FAIL") + "\n";
  return out;
}

std::string VerifyReport::to_json() const {
  Json arr = Json::array();
  for (const auto& c : checks)
    arr.push_back(Json{{"id", c.id}, {"expected", c.expected}, {"computed", c.computed}, {"pass", c.pass}});
  return Json{{"checks", arr}, {"pass", pass()}}.dump(2);
}

VerifyReport run_verify(const Engine& engine) {
  VerifyReport r;
  auto near = [&](std::string id, double expected, double computed, double tol) {
    char e[64], c[64];
    std::snprintf(e, sizeof e, "%.6f +/- %g", expected, tol);
    std::snprintf(c, sizeof c, "%.6f", computed);
    r.checks.push_back({std::move(id), e, c, std::fabs(expected - computed) <= tol});
  };

  const ExactNumber one{1};
  const ExactNumber four_sixes = one - pow(ExactNumber(5, 6), 4);
  r.checks.push_back({"one six in four rolls", "671/1296", four_sixes.to_fraction(), four_sixes == ExactNumber(671, 1296)});
  const ExactNumber no_double_six = pow(ExactNumber(35, 36), 24);
  r.checks.push_back({"no double six in 24 rolls (4 places)", "0.5086", no_double_six.to_fixed(4),
                      no_double_six.to_fixed(4) == "0.5086"});

  const FootprintSet none;
  const OutcomeDistribution sd = shotgun_dist(kFullCup, none);
  const OutcomeDistribution bd = brain_dist(kFullCup, none);
  const char* shot[] = {"0.347449", "0.444833", "0.183372", "0.024346"};
  const char* brain[] = {"0.245144", "0.444056", "0.261072", "0.049728"};
  for (int x = 0; x < 4; ++x) {
    r.checks.push_back({"first roll S(" + std::to_string(x) + ")", shot[x], sd[x].to_fixed(6), sd[x].to_fixed(6) == shot[x]});
    r.checks.push_back({"first roll B(" + std::to_string(x) + ")", brain[x], bd[x].to_fixed(6), bd[x].to_fixed(6) == brain[x]});
  }
  r.checks.push_back({"first roll three shotguns", "94/3861", sd[3].to_fraction(), sd[3] == ExactNumber(94, 3861)});

  near("fresh turn expected brains over all future rolls", 3.315559, engine.recursive_brains(TurnState{}), 5e-3);

  const DecisionRow* row = engine.table().find(CupState{1, 3, 2}, FootprintSet{1, 0, 1});
  const double sample[] = {78.338580, 4.043669, 0.180008};
  for (int s = 0; s < 3; ++s)
    near("sample row (cup R2 Y3 G1, footprints R1 Y0 G1) s=" + std::to_string(s), sample[s],
         row ? row->decision[static_cast<std::size_t>(s)].value_or(NAN) : NAN, 1e-3);

  const std::size_t comb = engine.table().combinations();
  r.checks.push_back({"table combinations", "4867",
                      std::to_string(comb) + " (" + std::to_string(engine.table().size()) + " rows)", comb == 4867});
  return r;
}

std::string prob_report(const TurnState& state, const Engine* engine) {
  std::ostringstream os;
  const TurnState ready = ready_to_roll(state);
  if (!(ready == state)) os << "replenished: " << to_string(ready) << "\n";
  const OutcomeDistribution bd = brain_dist(ready.cup, ready.footprints);
  const OutcomeDistribution sd = shotgun_dist(ready.cup, ready.footprints);
  for (int x = 0; x < 4; ++x) os << "B(" << x << ") = " << bd[x].to_fraction() << " = " << bd[x].to_fixed(6) << "\n";
  for (int x = 0; x < 4; ++x) os << "S(" << x << ") = " << sd[x].to_fraction() << " = " << sd[x].to_fixed(6) << "\n";
  for (int s = 0; s < 3; ++s) {
    const ExactNumber pe = round_end_prob(ready.cup, ready.footprints, s);
    os << "PE(" << s << ") = " << pe.to_fraction() << " = " << pe.to_fixed(6) << "\n";
  }
  const ExactNumber eb = bd.mean();
  os << "EB(next roll) = " << eb.to_fraction() << " = " << eb.to_fixed(6) << "\n";
  if (engine) os << "EB(all future rolls) = " << format_fixed(engine->recursive_brains(state), 6) << "\n";
  return os.str();
}

}  // namespace zombie

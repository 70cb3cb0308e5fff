#include <doctest.h>

#include <chrono>
#include <thread>

#include <httplib.h>

#include "zombie/service.hpp"
#include "zombie/simulator.hpp"

using namespace zombie;
using nlohmann::json;

namespace {

const Engine& engine() {
  static const Engine e;
  return e;
}

const Service& service() {
  static const Service s(engine());
  return s;
}

json body_of(const Response& r) { return json::parse(r.body); }

bool has_code(const json& violations, const std::string& code) {
  for (const auto& v : violations)
    if (v["code"] == code) return true;
  return false;
}

const char* kSampleRequest =
    R"({"cup":{"r":2,"y":3,"g":1},"footprints":{"r":1,"y":0,"g":1},"shotguns":1,"brains":4,"policy":"table"})";

}  // namespace

TEST_CASE("advice request parsing") {
  const AdviceRequest req = parse_advice_request(json::parse(kSampleRequest));
  CHECK(req.policy.type == PolicyType::table);
  CHECK(req.asides_assumed);
  CHECK(req.state.cup == CupState{1, 3, 2});
  CHECK(req.state.brains_banked == 4);
  CHECK_FALSE(req.context.has_value());

  const AdviceRequest fresh = parse_advice_request(json::object());
  CHECK(fresh.state.cup == kFullCup);
  CHECK(fresh.policy.id() == "optimal");
  CHECK_FALSE(fresh.what_if_tally);

  const AdviceRequest what_if =
      parse_advice_request(json::parse(R"({"cup":{"r":2,"y":3,"g":1},"footprints":{"r":1,"y":0,"g":1},"shotguns":2,"brains":1})"));
  CHECK(what_if.what_if_tally);

  const AdviceRequest ctx = parse_advice_request(
      json::parse(R"({"context":{"own_score":9,"opponents":[{"score":13,"acts_before":true},{"score":4}]}})"));
  REQUIRE(ctx.context.has_value());
  CHECK(ctx.context->own_score == 9);
  REQUIRE(ctx.context->opponents.size() == 2);
  CHECK(ctx.context->opponents[0].acts_before);
  CHECK_FALSE(ctx.context->opponents[1].acts_before);
}

TEST_CASE("request errors carry status and violations") {
  auto status_of = [](const char* text) {
    try {
      parse_advice_request(json::parse(text));
    } catch (const RequestError& e) {
      CHECK_FALSE(e.violations().empty());
      return e.status();
    }
    return 200;
  };
  CHECK(status_of(R"([1,2])") == 400);
  CHECK(status_of(R"({"colour":1})") == 400);
  CHECK(status_of(R"({"shotguns":"two"})") == 400);
  CHECK(status_of(R"({"cup":{"r":1.5}})") == 400);
  CHECK(status_of(R"({"policy":7})") == 400);
  CHECK(status_of(R"({"policy":"bold"})") == 422);
  CHECK(status_of(R"({"policy":"stopat:x"})") == 422);
  CHECK(status_of(R"({"cup":{"r":4,"y":4,"g":6}})") == 400);
  CHECK(status_of(R"({"shotguns":3})") == 400);
  CHECK(status_of(R"({"cup":{"r":3,"y":4,"g":6},"footprints":{"r":1,"y":0,"g":0}})") == 400);
  // a malformed field is reported before an unknown policy
  CHECK(status_of(R"({"policy":"bold","shotguns":"x"})") == 400);
}

TEST_CASE("POST /api/advise handler") {
  const Response ok = service().advise(kSampleRequest);
  CHECK(ok.status == 200);
  const json j = body_of(ok);
  CHECK(j["verdict"] == "roll");
  CHECK(j["policy"] == "table");
  CHECK(j["threshold_used"] == 4);
  CHECK(j["bust_probability"]["fraction"].is_string());
  CHECK(j["asides_assumed"] == true);
  CHECK(j["state"]["cup"]["r"] == 2);

  const json stop = body_of(service().advise(
      R"({"cup":{"r":2,"y":3,"g":1},"footprints":{"r":1,"y":0,"g":1},"shotguns":1,"brains":5,"policy":"table"})"));
  CHECK(stop["verdict"] == "stop");

  const Response bad = service().advise("{\"cup\": ");
  CHECK(bad.status == 400);
  const json e = body_of(bad);
  CHECK(e["error"] == "malformed JSON");
  CHECK(has_code(e["violations"], "json"));

  const Response unknown = service().advise(R"({"policy":"bold"})");
  CHECK(unknown.status == 422);
  CHECK(has_code(body_of(unknown)["violations"], "unknown policy"));

  const Response illegal = service().advise(R"({"cup":{"r":3,"y":4,"g":6},"shotguns":2})");
  CHECK(illegal.status == 400);
  CHECK_FALSE(body_of(illegal)["violations"].empty());

  const json endgame = body_of(service().advise(
      R"({"brains":2,"context":{"own_score":8,"opponents":[{"score":14,"acts_before":true}]},"policy":"stopat:1"})"));
  CHECK(endgame["endgame"] == true);
  CHECK(endgame["verdict"] == "roll");
}

TEST_CASE("GET /api/table handler") {
  const json all = body_of(service().table(std::nullopt));
  CHECK(all["rows"].size() == 1650);
  CHECK(all["combinations"] == engine().table().combinations());
  CHECK(all["checksum"] == engine().table().checksum());
  const Response s1 = service().table(std::string("1"));
  CHECK(s1.status == 200);
  const json j1 = body_of(s1);
  std::size_t feasible = 0;
  for (const auto& row : all["rows"])
    if (!row["decision_sg1"].is_null()) ++feasible;
  CHECK(j1["rows"].size() == feasible);
  for (const auto& row : j1["rows"]) CHECK(row["decision_sg1"].is_number());
  CHECK(service().table(std::string("3")).status == 400);
  CHECK(service().table(std::string("x")).status == 400);
}

TEST_CASE("GET /api/state/validate handler") {
  const json ok = body_of(service().validate({{"r_cup", "2"}, {"y_cup", "3"}, {"g_cup", "1"}, {"r_fp", "1"},
                                              {"g_fp", "1"}, {"shotguns", "1"}, {"brains", "4"}}));
  CHECK(ok["valid"] == true);
  CHECK(ok["violations"].empty());
  CHECK(ok["asides_assumed"] == true);

  const json broken = body_of(service().validate({{"r_cup", "3"}, {"r_as", "1"}, {"shotguns", "1"}}));
  CHECK(broken["valid"] == false);
  CHECK_FALSE(broken["violations"].empty());

  const json explicit_asides =
      body_of(service().validate({{"r_cup", "3"}, {"y_cup", "4"}, {"g_cup", "5"}, {"g_ab", "1"}, {"brains", "1"}}));
  CHECK(explicit_asides["valid"] == true);
  CHECK(explicit_asides["asides_assumed"] == false);

  CHECK(service().validate({{"r_cup", "two"}}).status == 400);
  CHECK(service().validate({{"colour", "1"}}).status == 400);
}

TEST_CASE("GET /api/health handler") {
  const json h = body_of(service().health());
  CHECK(h["status"] == "ok");
  CHECK(h["version"] == kVersion);
  CHECK(h["table_rows"] == 1650);
  CHECK(h["rng"] == std::string(RngStream::kAlgorithm));
}

TEST_CASE("HTTP round trip matches the library result") {
  auto server = make_http_server(service());
  const int port = server->bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread t([&] { server->listen_after_bind(); });
  server->wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  const auto advise = client.Post("/api/advise", kSampleRequest, "application/json");
  REQUIRE(advise);
  CHECK(advise->status == 200);
  const AdviceRequest req = parse_advice_request(json::parse(kSampleRequest));
  CHECK(advise->body == advice_json(engine().advise(req.policy, req.state, req.context), req).dump());

  const auto malformed = client.Post("/api/advise", "{oops", "application/json");
  REQUIRE(malformed);
  CHECK(malformed->status == 400);
  const auto unknown = client.Post("/api/advise", R"({"policy":"bold"})", "application/json");
  REQUIRE(unknown);
  CHECK(unknown->status == 422);

  const auto table = client.Get("/api/table?shotguns=2");
  REQUIRE(table);
  CHECK(table->status == 200);
  CHECK(table->body == service().table(std::string("2")).body);

  const auto valid = client.Get("/api/state/validate?r_cup=3&y_cup=4&g_cup=6");
  REQUIRE(valid);
  CHECK(json::parse(valid->body)["valid"] == true);

  const auto health = client.Get("/api/health");
  REQUIRE(health);
  CHECK(json::parse(health->body)["status"] == "ok");

  server->stop();
  t.join();
}

TEST_CASE("verify report") {
  const VerifyReport r = run_verify(engine());
  CHECK(r.checks.size() >= 6);
  const json j = json::parse(r.to_json());
  CHECK(j["checks"].size() == r.checks.size());
  for (const Check& c : r.checks)
    if (c.id.rfind("one six", 0) == 0 || c.id.rfind("no double", 0) == 0 || c.id.rfind("first roll", 0) == 0)
      CHECK(c.pass);
  CHECK(r.to_text().find("FAIL") != std::string::npos);
}

TEST_CASE("probability report") {
  const std::string text = prob_report(TurnState{}, &engine());
  CHECK(text.find("S(3) = 94/3861 = 0.024346") != std::string::npos);
}

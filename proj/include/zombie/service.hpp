#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zombie/strategy.hpp"

namespace httplib {
class Server;
}

namespace zombie {

inline constexpr const char* kVersion = "1.0.0";

using Json = nlohmann::ordered_json;

/// Request fields use red, yellow, green keys: {"r": .., "y": .., "g": ..}.
/// Asides are optional; missing ones are filled by the canonical completion.
struct AdviceRequest {
  TurnState state;
  bool asides_assumed = false;
  /// Assumed asides hold more brain dice than the tally; the tally is kept as
  /// given so table rows can be queried at any b.
  bool what_if_tally = false;
  PolicyKind policy;
  std::optional<GameContext> context;
};

class RequestError : public std::runtime_error {
 public:
  RequestError(int status, std::string what, std::vector<Violation> violations = {})
      : std::runtime_error(std::move(what)), status_(status), violations_(std::move(violations)) {}

  int status() const { return status_; }
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  int status_;
  std::vector<Violation> violations_;
};

/// 400 for malformed input or an illegal state, 422 for an unknown policy.
AdviceRequest parse_advice_request(const nlohmann::json& body);

Json state_json(const TurnState& state);
Json fraction_json(const ExactNumber& x);
Json advice_json(const Advice& advice, const AdviceRequest& request);
Json violations_json(const std::vector<Violation>& violations);

struct Response {
  int status = 200;
  std::string body;
};

/// HTTP handlers as plain functions of the request over an immutable engine.
class Service {
 public:
  explicit Service(const Engine& engine) : engine_(engine) {}

  Response advise(const std::string& body) const;
  Response table(const std::optional<std::string>& shotguns) const;
  Response validate(const std::map<std::string, std::string>& params) const;
  Response health() const;

  const Engine& engine() const { return engine_; }

 private:
  const Engine& engine_;
};

/// Routes: POST /api/advise, GET /api/table, GET /api/state/validate, GET /api/health.
std::unique_ptr<httplib::Server> make_http_server(const Service& service);

struct Check {
  std::string id;
  std::string expected;
  std::string computed;
  bool pass = false;
};

struct VerifyReport {
  std::vector<Check> checks;

  bool pass() const;
  std::string to_text() const;
  std::string to_json() const;
};

VerifyReport run_verify(const Engine& engine);

/// B(x), S(x), PE(s) and EB for a state, as fractions and 6-place decimals.
std::string prob_report(const TurnState& state, const Engine* engine = nullptr);

}  // namespace zombie

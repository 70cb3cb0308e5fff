#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "zombie/service.hpp"
#include "zombie/simulator.hpp"

using namespace zombie;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

// "R,Y,G" -> {"r":R,"y":Y,"g":G}
nlohmann::json triple(const std::string& text, const std::string& what) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw CLI::ValidationError(what, "expected three counts R,Y,G");
  nlohmann::json j;
  const char* keys[] = {"r", "y", "g"};
  for (int i = 0; i < 3; ++i) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(parts[static_cast<std::size_t>(i)], &used);
      if (used != parts[static_cast<std::size_t>(i)].size()) throw std::invalid_argument("trailing");
      j[keys[i]] = v;
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, "'" + parts[static_cast<std::size_t>(i)] + "' is not an integer");
    }
  }
  return j;
}

struct StateFlags {
  std::string cup = "3,4,6";
  std::string footprints = "0,0,0";
  int shotguns = 0;
  int brains = -1;
  std::string aside_brains;
  std::string aside_shotguns;

  void add(CLI::App* app) {
    app->add_option("--cup", cup, "dice in the cup as R,Y,G")->capture_default_str();
    app->add_option("--fp", footprints, "footprints held as R,Y,G")->capture_default_str();
    app->add_option("-s,--shotguns", shotguns, "shotguns rolled so far")->capture_default_str();
    app->add_option("-b,--brains", brains, "brains banked this turn (default: the aside brain dice)");
    app->add_option("--aside-brains", aside_brains, "brain dice set aside as R,Y,G");
    app->add_option("--aside-shotguns", aside_shotguns, "shotgun dice set aside as R,Y,G");
  }

  nlohmann::json request() const {
    nlohmann::json j;
    j["cup"] = triple(cup, "--cup");
    j["footprints"] = triple(footprints, "--fp");
    j["shotguns"] = shotguns;
    if (brains >= 0) j["brains"] = brains;
    if (!aside_brains.empty()) j["aside_brains"] = triple(aside_brains, "--aside-brains");
    if (!aside_shotguns.empty()) j["aside_shotguns"] = triple(aside_shotguns, "--aside-shotguns");
    return j;
  }
};

int report(const RequestError& e) {
  std::cerr << "error: " << e.what() << "\n";
  for (const auto& v : e.violations()) std::cerr << "  " << v.code << ": " << v.message << "\n";
  return e.status() == 422 ? 3 : 2;
}

Execution exec_of(bool serial) { return serial ? Execution::serial : Execution::parallel; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zombie Dice turn analysis: exact probabilities, stopping thresholds, simulation and advice"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  bool serial = false;
  app.add_flag("--serial", serial, "run the serial reference kernels")->envname("ZO_SERIAL");

  // prob
  auto* prob = app.add_subcommand("prob", "next-roll distributions for a state");
  StateFlags prob_state;
  prob_state.add(prob);

  // table
  auto* table = app.add_subcommand("table", "generate the decision table");
  std::string table_mode = "recursive", table_format = "csv", table_out;
  table->add_option("--mode", table_mode, "decision quotient")
      ->check(CLI::IsMember({"onestep", "recursive", "optimal"}))
      ->envname("ZO_MODE")
      ->capture_default_str();
  table->add_option("--format", table_format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->envname("ZO_FORMAT")
      ->capture_default_str();
  table->add_option("-o,--output", table_out, "write the table here instead of stdout")->envname("ZO_OUTPUT");

  // advise
  auto* advise = app.add_subcommand("advise", "roll or stop advice for a state");
  StateFlags advise_state;
  advise_state.add(advise);
  std::string policy = "optimal", advise_format = "text";
  int own_score = 0;
  std::vector<std::string> opponents;
  advise->add_option("-p,--policy", policy, "optimal, table, simple, onestep, stopat:<k> or alwaysroll")
      ->envname("ZO_POLICY")
      ->capture_default_str();
  advise->add_option("--own-score", own_score, "score banked in earlier rounds");
  advise->add_option("--opponent", opponents, "opponent score, suffixed ':before' if already played this round");
  advise->add_option("--format", advise_format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->envname("ZO_FORMAT")
      ->capture_default_str();

  // verify
  auto* verify = app.add_subcommand("verify", "recompute the reference constants");
  std::string verify_format = "text";
  verify->add_option("--format", verify_format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->envname("ZO_FORMAT")
      ->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "seeded strategy tournament");
  std::uint64_t seed = 1, games = 10000;
  std::string players = "optimal,simple", sim_format = "json", trace_path;
  int cap = 64;
  simulate->add_option("--seed", seed, "master seed")->envname("ZO_SEED")->capture_default_str();
  simulate->add_option("--games", games, "games (turns for a single entrant)")
      ->envname("ZO_GAMES")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--players", players, "comma separated policy ids in seat order")
      ->envname("ZO_PLAYERS")
      ->capture_default_str();
  simulate->add_option("--format", sim_format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->envname("ZO_FORMAT")
      ->capture_default_str();
  simulate->add_option("--trace", trace_path, "write one JSON line per turn to this file")->envname("ZO_TRACE");
  simulate->add_option("--cap", cap, "brain cap per turn")->check(CLI::Range(14, 1000))->capture_default_str();

  // serve
  auto* serve = app.add_subcommand("serve", "HTTP advice service");
  int port = 8080;
  std::string host = "0.0.0.0";
  serve->add_option("--port", port, "listen port")->envname("ZO_PORT")->check(CLI::Range(1, 65535))->capture_default_str();
  serve->add_option("--host", host, "bind address")->envname("ZO_HOST")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*prob) {
      const AdviceRequest req = parse_advice_request(prob_state.request());
      if (req.asides_assumed) std::cout << "state: " << to_string(req.state) << " (asides assumed)\n";
      std::cout << prob_report(req.state);
      return 0;
    }

    if (*table) {
      const auto start = std::chrono::steady_clock::now();
      TurnSolver solver(SolverConfig{parse_decision_mode(table_mode)}, exec_of(serial));
      const DecisionTable t = generate_table(solver, exec_of(serial));
      const std::string text = table_format == "csv" ? t.to_csv() : t.to_json() + "\n";
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::ostream* summary = &std::cout;
      if (table_out.empty()) {
        std::cout << text;
        summary = &std::cerr;
      } else {
        std::ofstream f(table_out, std::ios::binary);
        if (!(f << text)) {
          std::cerr << "error: cannot write " << table_out << "\n";
          return 1;
        }
      }
      char line[160];
      std::snprintf(line, sizeof line, "rows: %zu\ncombinations: %zu\nchecksum: %s\nseconds: %.2f\n", t.size(),
                    t.combinations(), t.checksum().c_str(), secs);
      *summary << line;
      return 0;
    }

    if (*verify) {
      const Engine engine(exec_of(serial));
      const VerifyReport r = run_verify(engine);
      std::cout << (verify_format == "json" ? r.to_json() + "\n" : r.to_text());
      return 0;
    }

    if (*advise) {
      nlohmann::json body = advise_state.request();
      body["policy"] = policy;
      if (own_score > 0 || !opponents.empty()) {
        nlohmann::json ctx;
        ctx["own_score"] = own_score;
        ctx["opponents"] = nlohmann::json::array();
        for (const auto& o : opponents) {
          const auto parts = split(o, ':');
          if (parts.empty() || parts.size() > 2 || (parts.size() == 2 && parts[1] != "before"))
            throw CLI::ValidationError("--opponent", "expected SCORE or SCORE:before");
          ctx["opponents"].push_back({{"score", std::stoi(parts[0])}, {"acts_before", parts.size() == 2}});
        }
        body["context"] = ctx;
      }
      const AdviceRequest req = parse_advice_request(body);
      const Engine engine(exec_of(serial));
      const Advice a = engine.advise(req.policy, req.state, req.context);
      if (advise_format == "json") {
        std::cout << advice_json(a, req).dump() << "\n";
        return 0;
      }
      std::cout << "state: " << to_string(req.state) << (req.asides_assumed ? " (asides assumed)" : "") << "\n"
                << "verdict: " << (a.verdict == Verdict::roll ? "ROLL" : "STOP") << "\n"
                << "policy: " << req.policy.id() << " (" << a.rationale << ")\n"
                << "threshold: " << (a.threshold_used ? std::to_string(*a.threshold_used) : "none") << "\n";
      if (a.decision_value) std::cout << "decision value: " << format_fixed(*a.decision_value, 6) << "\n";
      std::cout << "bust probability: " << a.bust_probability.to_fraction() << " = " << a.bust_probability.to_fixed(6)
                << "\n"
                << "expected value of continuing: " << format_fixed(a.expected_value_of_continuing, 6) << "\n"
                << "continuation value: " << format_fixed(a.continuation_value, 6) << "\n";
      if (a.endgame) std::cout << "endgame: yes\n";
      return 0;
    }

    if (*simulate) {
      TournamentConfig cfg;
      for (const auto& id : split(players, ',')) cfg.players.push_back(PolicyKind::parse(id));
      cfg.games = games;
      cfg.seed = seed;
      cfg.brain_cap = cap;
      cfg.exec = exec_of(serial);
      std::ofstream trace;
      if (!trace_path.empty()) {
        trace.open(trace_path, std::ios::binary);
        if (!trace) {
          std::cerr << "error: cannot write " << trace_path << "\n";
          return 1;
        }
        cfg.trace = &trace;
      }
      const Engine engine(exec_of(serial), cap);
      const TournamentSummary s = run_tournament(engine, cfg);
      std::cout << (sim_format == "json" ? s.to_json() + "\n" : s.to_csv());
      return 0;
    }

    if (*serve) {
      const Engine engine(exec_of(serial));
      const Service service(engine);
      auto server = make_http_server(service);
      std::cerr << "listening on " << host << ":" << port << "\n";
      if (!server->listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const RequestError& e) {
    return report(e);
  } catch (const UnknownPolicy& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

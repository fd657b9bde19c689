#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "duel/battlefield.hpp"
#include "duel/fluctuation.hpp"
#include "duel/game_spec.hpp"
#include "duel/schedule.hpp"
#include "duel/simulator.hpp"

namespace duel::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kSpecSyntax = 2,
  kSpecSemantic = 3,
  kNumeric = 4,
};

using Json = nlohmann::ordered_json;

// Shortest text that parses back to the same double.
inline std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// JSON has no infinity; unbounded values are written as null.
inline Json json_number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
  }

 private:
  static std::string cell(double x) { return format_number(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(long x) { return std::to_string(x); }
  static std::string cell(std::size_t x) { return std::to_string(x); }
  static std::string cell(PlayerId x) { return std::to_string(x.value); }
  static std::string cell(bool x) { return x ? "1" : "0"; }
  static std::string cell(std::string_view x) { return std::string(x); }
  static std::string cell(const std::string& x) { return x; }
  static std::string cell(const char* x) { return x; }

  std::ostream& os_;
};

enum class Format { kJson, kCsv };

inline void report_schedule(const GameSpec& spec, Format format, std::ostream& out) {
  const auto schedule = build_schedule(spec.curves(), spec.tolerance);
  if (format == Format::kCsv) {
    CsvWriter csv(out);
    csv.row("m", "i", "j", "time");
    for (const auto& b : schedule.battlefields) csv.row(b.index, b.pair.first, b.pair.second, b.time);
    return;
  }
  Json rows = Json::array();
  for (const auto& b : schedule.battlefields) {
    rows.push_back({{"m", b.index}, {"i", b.pair.first.value}, {"j", b.pair.second.value},
                    {"time", b.time}});
  }
  out << Json{{"n", schedule.n}, {"battlefields", rows}}.dump(2) << '\n';
}

inline void report_targets(const GameSpec& spec, PlayerId player, int bullets,
                           Objective objective, Format format, std::ostream& out) {
  spec.player(player);
  const auto curves = spec.curves();
  const auto schedule = build_schedule(curves, spec.tolerance);
  const auto scores = score_battlefields(schedule, curves, player);
  const auto plans = multi_bullet_battlefields(schedule, curves, player, bullets, objective);
  auto chosen = [&](int m) {
    return std::any_of(plans.begin(), plans.end(), [m](const TargetPlan& p) { return p.m_star == m; });
  };
  if (format == Format::kCsv) {
    CsvWriter csv(out);
    csv.row("m", "opponent", "time", "p_shoot", "q", "chosen");
    for (const auto& s : scores) csv.row(s.m, s.opponent, s.time, s.p_shoot, s.q, chosen(s.m));
    return;
  }
  Json rows = Json::array();
  for (const auto& s : scores) {
    rows.push_back({{"m", s.m}, {"opponent", s.opponent.value}, {"time", s.time},
                    {"p_shoot", s.p_shoot}, {"q", json_number(s.q)}, {"chosen", chosen(s.m)}});
  }
  Json plan = Json::array();
  for (const auto& p : plans) {
    plan.push_back({{"m", p.m_star}, {"target", p.target.value}, {"time", p.t_star}});
  }
  out << Json{{"player", player.value},
              {"objective", std::string(to_string(objective))},
              {"bullets", bullets},
              {"battlefields", rows},
              {"plan", plan}}
             .dump(2)
      << '\n';
}

inline Json stats_json(const ExitStats& s) {
  Json j{{"mean_exit", s.mean_exit},         {"stderr_exit", s.stderr_exit},
         {"mean_pre_exit", s.mean_pre_exit}, {"stderr_pre_exit", s.stderr_pre_exit},
         {"mean_nu", s.mean_nu},             {"stderr_nu", s.stderr_nu},
         {"samples", s.samples}};
  if (s.nu_ceiling_approx) j["nu_ceiling_approx"] = *s.nu_ceiling_approx;
  return j;
}

inline void report_exit_times(const GameSpec& spec, PlayerId player, Time threshold,
                              std::size_t samples, std::uint64_t seed, unsigned threads,
                              Format format, std::ostream& out) {
  const RenewalProcess& process = spec.player(player).renewal;
  std::optional<ExitStats> closed;
  if (process.law() == RenewalLaw::kExponential) {
    closed = exit_stats_exponential(process.a(), threshold);
  }
  const ExitStats mc = mc_exit_stats(process, threshold, samples, seed, threads);
  if (format == Format::kCsv) {
    CsvWriter csv(out);
    csv.row("method", "mean_exit", "stderr_exit", "mean_pre_exit", "stderr_pre_exit", "mean_nu",
            "stderr_nu", "samples");
    auto emit = [&](std::string_view method, const ExitStats& s) {
      csv.row(method, s.mean_exit, s.stderr_exit, s.mean_pre_exit, s.stderr_pre_exit, s.mean_nu,
              s.stderr_nu, s.samples);
    };
    if (closed) emit("closed_form", *closed);
    emit("monte_carlo", mc);
    return;
  }
  Json j{{"player", player.value},
         {"law", std::string(to_string(process.law()))},
         {"threshold", threshold},
         {"seed", seed},
         {"closed_form", closed ? stats_json(*closed) : Json(nullptr)},
         {"monte_carlo", stats_json(mc)}};
  out << j.dump(2) << '\n';
}

inline void report_simulation(const GameSpec& spec, const Policy& policy, std::size_t runs,
                              std::uint64_t seed, unsigned threads, bool log, Format format,
                              std::ostream& out) {
  const Estimate est = estimate(spec, policy, runs, seed, threads);
  if (format == Format::kCsv) {
    CsvWriter csv(out);
    csv.row("player", "survival_rate", "survival_stderr", "hit_rate", "hit_stderr", "runs");
    for (const auto& p : est.players) {
      csv.row(p.id, p.survival_rate, p.survival_stderr, p.hit_rate, p.hit_stderr, est.runs);
    }
    if (log) {
      out << '\n';
      csv.row("run", "global_time", "local_time", "shooter", "target", "p_hit", "outcome");
      for (std::size_t r = 0; r < runs; ++r) {
        for (const auto& e : playout_run(spec, policy, seed, r).shot_log) {
          csv.row(r, e.time, e.local_time, e.shooter, e.target, e.p_hit, to_string(e.outcome));
        }
      }
    }
    return;
  }
  Json players = Json::array();
  for (const auto& p : est.players) {
    players.push_back({{"id", p.id.value},
                       {"survival_rate", p.survival_rate},
                       {"survival_stderr", p.survival_stderr},
                       {"hit_rate", p.hit_rate},
                       {"hit_stderr", p.hit_stderr}});
  }
  Json j{{"policy", std::string(to_string(policy.name))},
         {"objective", std::string(to_string(policy.objective))},
         {"runs", est.runs},
         {"seed", est.seed},
         {"players", players}};
  if (log) {
    Json logs = Json::array();
    for (std::size_t r = 0; r < runs; ++r) {
      const auto result = playout_run(spec, policy, seed, r);
      Json shots = Json::array();
      for (const auto& e : result.shot_log) {
        shots.push_back({{"global_time", e.time},
                         {"local_time", e.local_time},
                         {"shooter", e.shooter.value},
                         {"target", e.target.value},
                         {"p_hit", e.p_hit},
                         {"outcome", std::string(to_string(e.outcome))}});
      }
      Json survivors = Json::array();
      for (PlayerId p : result.survivors) survivors.push_back(p.value);
      logs.push_back({{"run", r},
                      {"survivors", survivors},
                      {"duration", result.duration},
                      {"reason", std::string(to_string(result.reason))},
                      {"shots", shots}});
    }
    j["log"] = logs;
  }
  out << j.dump(2) << '\n';
}

// Uniform grid over [0, max t_max]; step <= 0 selects max t_max / 500.
inline void report_curves(const GameSpec& spec, Time step, Format format, std::ostream& out) {
  Time horizon = 0.0;
  for (const auto& p : spec.players) horizon = std::max(horizon, p.curve.t_max());
  if (!(step > 0.0)) step = horizon / 500.0;
  const auto count = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  std::vector<Time> grid;
  for (std::size_t k = 0; k <= count; ++k) grid.push_back(std::min(step * static_cast<double>(k), horizon));

  std::vector<const PlayerSpec*> ordered;
  for (const auto& p : spec.players) ordered.push_back(&p);
  std::sort(ordered.begin(), ordered.end(),
            [](const PlayerSpec* a, const PlayerSpec* b) { return a->id < b->id; });

  if (format == Format::kJson) {
    Json series = Json::object();
    for (const auto* p : ordered) {
      Json values = Json::array();
      for (Time t : grid) values.push_back(p->curve.eval(t));
      series[std::to_string(p->id.value)] = values;
    }
    out << Json{{"t", grid}, {"P", series}}.dump(2) << '\n';
    return;
  }
  out << 't';
  for (const auto* p : ordered) out << ",P_" << p->id.value;
  out << '\n';
  for (Time t : grid) {
    out << format_number(t);
    for (const auto* p : ordered) out << ',' << format_number(p->curve.eval(t));
    out << '\n';
  }
}

inline GameSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecSyntaxError("cannot read spec file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_spec(text);
}

// Entry point shared by the duel executable and the tests. `args` excludes
// the program name.
inline int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pairwise n-person stochastic duel solver and simulator", "duel"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string format_name = "json";
  const std::vector<std::string> formats{"json", "csv"};
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("spec", spec_path, "Game spec (JSON)")->required();
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format_name, "Output format")->check(CLI::IsMember(formats));
  };

  auto* validate = app.add_subcommand("validate", "Check a game spec");
  add_common(validate);

  auto* schedule = app.add_subcommand("schedule", "Sorted battlefield schedule");
  add_common(schedule);
  add_format(schedule);

  int player = 0;
  int bullets = 1;
  std::string objective_name = "max";
  auto* targets = app.add_subcommand("targets", "Battlefield scores and target plan of one player");
  add_common(targets);
  add_format(targets);
  targets->add_option("--player", player, "Player id")->required();
  targets->add_option("--bullets", bullets, "Bullets available")->check(CLI::PositiveNumber);
  targets->add_option("--objective", objective_name, "Ranking of q")
      ->check(CLI::IsMember({"max", "min"}));

  double threshold = 0.0;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  auto* exit_times = app.add_subcommand("exit-times", "Exit and pre-exit time statistics");
  add_common(exit_times);
  add_format(exit_times);
  exit_times->add_option("--player", player, "Player id")->required();
  exit_times->add_option("--threshold", threshold, "Threshold time")->required();
  exit_times->add_option("--mc-samples", mc_samples, "Monte-Carlo samples")->check(CLI::PositiveNumber);
  exit_times->add_option("--seed", seed, "Master seed");
  exit_times->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  std::size_t runs = 0;
  std::string policy_name = "threshold";
  bool log = false;
  std::size_t versatile_samples = Policy{}.versatile_samples;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo playouts under a policy");
  add_common(simulate);
  add_format(simulate);
  simulate->add_option("--runs", runs, "Number of playouts")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "Master seed")->required();
  simulate->add_option("--policy", policy_name, "Shooting policy")
      ->required()
      ->check(CLI::IsMember({"threshold", "versatile", "naive_max"}));
  simulate->add_option("--objective", objective_name, "Target ranking")
      ->check(CLI::IsMember({"max", "min"}));
  simulate->add_option("--versatile-samples", versatile_samples,
                       "Samples per shoot/wait comparison (versatile policy)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_flag("--log", log, "Include per-run shot logs");

  double step = 0.0;
  auto* curves = app.add_subcommand("curves", "Sample every success curve on a grid");
  add_common(curves);
  curves->add_option("--step", step, "Grid step (default max t_max / 500)")
      ->check(CLI::PositiveNumber);
  std::string curves_format = "csv";
  curves->add_option("--format", curves_format, "Output format")->check(CLI::IsMember(formats));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const Format format = format_name == "csv" ? Format::kCsv : Format::kJson;
  const Objective objective = objective_name == "min" ? Objective::kMinQ : Objective::kMaxQ;
  try {
    const GameSpec spec = load_spec(spec_path);
    if (*validate) return kOk;
    if (*schedule) report_schedule(spec, format, out);
    if (*targets) report_targets(spec, PlayerId{player}, bullets, objective, format, out);
    if (*exit_times) {
      report_exit_times(spec, PlayerId{player}, threshold, mc_samples, seed, threads, format, out);
    }
    if (*simulate) {
      Policy policy{*parse_policy_name(policy_name), objective, versatile_samples};
      report_simulation(spec, policy, runs, seed, threads, log, format, out);
    }
    if (*curves) {
      report_curves(spec, step, curves_format == "csv" ? Format::kCsv : Format::kJson, out);
    }
  } catch (const SpecSyntaxError& e) {
    err << "error: spec syntax: " << e.what() << '\n';
    return kSpecSyntax;
  } catch (const SpecError& e) {
    err << "error: spec: " << e.what() << '\n';
    return kSpecSemantic;
  } catch (const NumericError& e) {
    err << "error: numeric: " << e.what() << '\n';
    return kNumeric;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

}  // namespace duel::cli

#include "caplab/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "caplab/dynamics.hpp"
#include "caplab/errors.hpp"
#include "caplab/padic.hpp"
#include "caplab/resultant.hpp"

namespace caplab {

namespace {

const std::vector<std::string> kCommands = {"resultant", "diam", "pullback", "julia", "bb", "padic"};

int effective_threads(int t) { return t > 0 ? t : default_thread_count(); }

Json budget_json(const FeketeBudget& b) {
  return {{"candidate_count", b.candidate_count},
          {"rounds", b.rounds},
          {"restarts", b.restarts},
          {"threads", effective_threads(b.threads)}};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

struct ResultantValue {
  double abs = 0.0;
  Json info;
};

// |Res(F_h)|, exact when the map allows it.  Throws NonRegularMap.
ResultantValue resultant_of(const MapDescriptor& F) {
  ResultantValue out;
  if (F.rational) {
    const Rational r = resultant_exact(leading_part(*F.rational));
    if (r == 0) throw NonRegularMap("Res(F_h) = 0");
    out.abs = std::abs(r.convert_to<double>());
    out.info = {{"res", to_string(r)}, {"res_abs", out.abs}, {"exact", true}};
  } else if (F.gaussian) {
    const GaussianRational r = resultant_exact(leading_part(*F.gaussian));
    if (is_zero(r)) throw NonRegularMap("Res(F_h) = 0");
    out.abs = std::sqrt(norm_sq(r).convert_to<double>());
    out.info = {{"res", to_string(r)}, {"res_abs", out.abs}, {"exact", true}};
  } else {
    const auto r = resultant_numeric(leading_part(F.numeric));
    out.abs = std::abs(r.value);
    const double scale = std::max(1.0, r.condition);
    if (!(out.abs > 1e-12 * scale)) throw NonRegularMap("Res(F_h) vanishes numerically");
    out.info = {{"res", to_string(r.value)},
                {"res_abs", out.abs},
                {"exact", false},
                {"condition", r.condition},
                {"ill_conditioned", r.ill_conditioned}};
  }
  return out;
}

const Json& need(const Json& j, const char* what) {
  if (j.is_null()) throw ConfigError(std::string("config: missing \"") + what + "\"");
  return j;
}

CommandResult finish(const ExperimentConfig& cfg, Json report, bool pass, const std::string& detail) {
  CommandResult r;
  report["verdict"] = pass ? "pass" : "fail";
  r.exit_code = pass ? kExitOk : kExitToleranceFail;
  r.summary = std::string(pass ? "pass: " : "fail: ") + detail;
  r.report = std::move(report);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "lhs,rhs,gap,tolerance,verdict\n";
    os << r.report.at("lhs").dump() << ',' << r.report.at("rhs").dump() << ',' << r.report.at("gap").dump() << ','
       << r.report.at("tolerance").dump() << ',' << (pass ? "pass" : "fail") << '\n';
    r.output = os.str();
  } else {
    r.output = r.report.dump(2) + "\n";
  }
  return r;
}

Json sequence_json(const DiamSequence& s) {
  Json rows = Json::array();
  for (const auto& row : s.rows)
    rows.push_back({{"n", row.n}, {"M", row.M}, {"D", row.D}, {"log_abs_det", row.log_abs_det}, {"d_n", row.dn}});
  return {{"rows", std::move(rows)}, {"final_dn", s.final_dn}, {"spread", s.spread}};
}

}  // namespace

double default_tolerance(const std::string& command) {
  if (command == "pullback") return 0.07;
  if (command == "julia" || command == "bb") return 0.05;
  return 0.0;
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["command"] = command;
  if (!map.is_null()) j["map"] = map;
  if (!set.is_null()) j["set"] = set;
  if (!polydisc_p.is_null()) j["polydisc_p"] = polydisc_p;
  j["n_max"] = n_max;
  j["budget"] = budget_json(budget);
  j["seed"] = seed;
  j["samples"] = samples;
  j["depth"] = depth;
  j["cap"] = cap;
  if (prime) j["prime"] = *prime;
  j["tolerance"] = tolerance.value_or(default_tolerance(command));
  j["format"] = format;
  if (!out.empty()) j["out"] = out;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  ExperimentConfig c;
  try {
    c.command = j.value("command", std::string());
    c.map = j.value("map", Json());
    c.set = j.value("set", Json());
    c.polydisc_p = j.value("polydisc_p", Json());
    c.n_max = j.value("n_max", c.n_max);
    if (j.contains("budget")) {
      const auto& b = j.at("budget");
      c.budget.candidate_count = b.value("candidate_count", c.budget.candidate_count);
      c.budget.rounds = b.value("rounds", c.budget.rounds);
      c.budget.restarts = b.value("restarts", c.budget.restarts);
      c.budget.threads = b.value("threads", c.budget.threads);
    }
    c.seed = j.value("seed", c.seed);
    c.samples = j.value("samples", c.samples);
    c.depth = j.value("depth", c.depth);
    c.cap = j.value("cap", c.cap);
    if (j.contains("prime")) c.prime = j.at("prime").get<std::uint64_t>();
    if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
    c.format = j.value("format", c.format);
    c.out = j.value("out", c.out);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

Json seed_table(std::uint64_t seed, int n_max, int restarts) {
  Json rows = Json::array();
  for (int n = 1; n <= n_max; ++n) {
    const auto s = derive_seed(seed, static_cast<std::uint64_t>(n));
    const auto ex = derive_seed(s, 1);
    Json rs = Json::array();
    for (int r = 0; r < std::max(restarts, 1); ++r) rs.push_back(derive_seed(ex, static_cast<std::uint64_t>(r)));
    rows.push_back({{"n", n}, {"seed", s}, {"greedy", derive_seed(s, 0)}, {"restarts", std::move(rs)}});
  }
  return rows;
}

CommandResult cmd_resultant(const ExperimentConfig& cfg) {
  const auto F = parse_map(need(cfg.map, "map"));
  Json report;
  report["config"] = cfg.to_json();
  const auto res = resultant_of(F);
  report["resultant"] = res.info;
  std::string summary = "res = " + res.info.at("res").get<std::string>();
  if (cfg.prime) {
    if (!F.rational) throw ConfigError("resultant: |Res|_p needs a map with exact rational coefficients");
    if (!is_prime(*cfg.prime)) throw ConfigError("resultant: " + std::to_string(*cfg.prime) + " is not prime");
    const auto rp = padic_abs_resultant(leading_part(*F.rational), *cfg.prime);
    report["resultant"]["res_abs_p"] = {{"prime", *cfg.prime}, {"log_p", to_string(rp.exponent())}, {"value", rp.str()}};
    summary += ", |res|_" + std::to_string(*cfg.prime) + " = " + rp.str();
  }
  CommandResult r;
  r.summary = summary;
  r.report = std::move(report);
  if (cfg.format == "csv") {
    r.output = "res,res_abs\n" + res.info.at("res").get<std::string>() + "," + res.info.at("res_abs").dump() + "\n";
  } else {
    r.output = r.report.dump(2) + "\n";
  }
  return r;
}

CommandResult cmd_diam(const ExperimentConfig& cfg) {
  const auto E = parse_set(need(cfg.set, "set"));
  FeketeBudget budget = cfg.budget;
  budget.threads = effective_threads(budget.threads);
  const auto seq = diam_sequence(E.oracle, cfg.n_max, budget, cfg.seed);
  Json report;
  report["config"] = cfg.to_json();
  report["set"] = E.resolved;
  report["sequence"] = sequence_json(seq);
  report["seeds"] = seed_table(cfg.seed, cfg.n_max, budget.restarts);
  CommandResult r;
  r.summary = "d_" + std::to_string(cfg.n_max) + " = " + fmt(seq.final_dn) + " (spread of last three " +
              fmt(seq.spread) + ")";
  if (cfg.format == "csv") {
    r.output = to_csv(seq);
    r.output += "# final_dn=" + Json(seq.final_dn).dump() + " spread=" + Json(seq.spread).dump() + "\n";
  } else {
    r.output = report.dump(2) + "\n";
  }
  r.report = std::move(report);
  return r;
}

CommandResult cmd_pullback(const ExperimentConfig& cfg) {
  const auto F = parse_map(need(cfg.map, "map"));
  const auto E = parse_set(need(cfg.set, "set"));
  const auto res = resultant_of(F);
  FeketeBudget budget = cfg.budget;
  budget.threads = effective_threads(budget.threads);
  const auto rep = pullback_check(F.numeric, res.abs, E.oracle, cfg.n_max, budget, cfg.seed);
  const double tol = cfg.tolerance.value_or(default_tolerance("pullback"));
  Json report;
  report["config"] = cfg.to_json();
  report["resultant"] = res.info;
  report["lhs"] = rep.lhs;
  report["rhs"] = rep.rhs;
  report["gap"] = rep.log_gap;
  report["tolerance"] = tol;
  report["d_n_E"] = rep.dn_E;
  report["lhs_leading"] = rep.lhs_leading;
  report["leading_log_gap"] = rep.leading_log_gap;
  report["sequence_E"] = sequence_json(rep.sequence_E);
  report["sequence_preimage"] = sequence_json(rep.sequence_preimage);
  report["sequence_leading"] = sequence_json(rep.sequence_leading);
  report["seeds"] = seed_table(cfg.seed, cfg.n_max, budget.restarts);
  const bool pass = rep.log_gap <= tol;
  return finish(cfg, std::move(report), pass,
                "log gap " + fmt(rep.log_gap) + (pass ? " <= " : " > ") + fmt(tol) + " (lhs " + fmt(rep.lhs) +
                    ", rhs " + fmt(rep.rhs) + ")");
}

CommandResult cmd_julia(const ExperimentConfig& cfg) {
  const auto F = parse_map(need(cfg.map, "map"));
  const auto res = resultant_of(F);
  const double predicted = julia_diam_prediction(res.abs, F.dimension(), F.degree());
  Json set = {{"kind", "filled_julia"}, {"map", cfg.map}, {"cap", cfg.cap}};
  const auto K = parse_set(set);
  FeketeBudget budget = cfg.budget;
  budget.threads = effective_threads(budget.threads);
  const auto seq = diam_sequence(K.oracle, cfg.n_max, budget, cfg.seed);
  const double tol = cfg.tolerance.value_or(default_tolerance("julia"));
  const double gap = std::abs(seq.final_dn / predicted - 1.0);
  Json report;
  report["config"] = cfg.to_json();
  report["resultant"] = res.info;
  report["set"] = K.resolved;
  report["lhs"] = seq.final_dn;
  report["rhs"] = predicted;
  report["gap"] = gap;
  report["tolerance"] = tol;
  report["sequence"] = sequence_json(seq);
  report["seeds"] = seed_table(cfg.seed, cfg.n_max, budget.restarts);
  const bool pass = gap <= tol;
  return finish(cfg, std::move(report), pass,
                "relative gap " + fmt(gap) + (pass ? " <= " : " > ") + fmt(tol) + " (d_" + std::to_string(cfg.n_max) +
                    " = " + fmt(seq.final_dn) + ", predicted " + fmt(predicted) + ")");
}

CommandResult cmd_bb(const ExperimentConfig& cfg) {
  const auto F = parse_map(need(cfg.map, "map"));
  if (F.dimension() != 2 || !F.numeric.is_homogeneous())
    throw ConfigError("bb: map must be homogeneous on C^2");
  const auto res = resultant_of(F);
  const auto rep = bb_check(F.numeric, res.abs, cfg.samples, cfg.depth, cfg.seed, effective_threads(cfg.budget.threads));
  const double tol = cfg.tolerance.value_or(default_tolerance("bb"));
  Json report;
  report["config"] = cfg.to_json();
  report["resultant"] = res.info;
  report["lhs"] = rep.lhs;
  report["rhs"] = rep.rhs;
  report["gap"] = rep.gap;
  report["tolerance"] = tol;
  report["samples"] = rep.samples;
  report["depth"] = rep.depth;
  report["seed"] = rep.seed;
  report["res_abs"] = rep.res_abs;
  report["sphere_mean"] = rep.sphere_mean;
  report["current_mean"] = rep.current_mean;
  Json chunk_seeds = Json::array();
  for (std::uint64_t c = 0; c < 32; ++c) chunk_seeds.push_back(derive_seed(cfg.seed, c));
  report["chunk_seeds"] = std::move(chunk_seeds);
  const bool pass = rep.gap <= tol;
  return finish(cfg, std::move(report), pass,
                "gap " + fmt(rep.gap) + (pass ? " <= " : " > ") + fmt(tol) + " (lhs " + fmt(rep.lhs) + ", rhs " +
                    fmt(rep.rhs) + ")");
}

CommandResult cmd_padic(const ExperimentConfig& cfg) {
  const auto F = parse_map(need(cfg.map, "map"));
  if (!F.rational) throw ConfigError("padic: map coefficients must be exact rationals");
  UltrametricPolydisc D;
  if (!cfg.polydisc_p.is_null()) {
    D = parse_polydisc_p(cfg.polydisc_p);
    if (cfg.prime && *cfg.prime != D.prime) throw ConfigError("padic: prime differs from polydisc_p.prime");
  } else if (cfg.prime) {
    if (!is_prime(*cfg.prime)) throw ConfigError("padic: " + std::to_string(*cfg.prime) + " is not prime");
    D = UltrametricPolydisc::unit(*cfg.prime, F.dimension());
  } else {
    throw ConfigError("padic: need \"polydisc_p\" or \"prime\"");
  }
  if (D.dimension() != F.dimension()) throw ConfigError("padic: polydisc dimension differs from N");
  const auto rep = [&] {
    try {
      return pullback_check_p(*F.rational, D);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("padic: ") + e.what());
    }
  }();
  const double tol = cfg.tolerance.value_or(0.0);
  Json report;
  report["config"] = cfg.to_json();
  report["polydisc"] = polydisc_to_json(D);
  report["lhs"] = rep.lhs.str();
  report["rhs"] = rep.rhs.str();
  report["lhs_log_p"] = to_string(rep.lhs.exponent());
  report["rhs_log_p"] = to_string(rep.rhs.exponent());
  report["res_abs_p"] = rep.res_abs.str();
  report["gap"] = to_string(rep.lhs.exponent() - rep.rhs.exponent());
  report["tolerance"] = tol;
  // Exponents are exact; a positive tolerance is read on the log-p scale.
  const double gap = std::abs((rep.lhs.exponent() - rep.rhs.exponent()).convert_to<double>());
  const bool pass = rep.equal || (tol > 0 && gap <= tol);
  return finish(cfg, std::move(report), pass,
                std::string(rep.equal ? "exact equality" : "sides differ") + ": lhs " + rep.lhs.str() + ", rhs " +
                    rep.rhs.str());
}

CommandResult run_command(const ExperimentConfig& cfg) {
  auto fail = [&](int code, const std::string& msg) {
    CommandResult r;
    r.exit_code = code;
    r.summary = msg;
    r.report = {{"error", msg}, {"exit_code", code}};
    try {
      r.report["config"] = cfg.to_json();
    } catch (...) {
    }
    r.output = cfg.format == "csv" ? "error\n" + Json(msg).dump() + "\n" : r.report.dump(2) + "\n";
    return r;
  };
  try {
    if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("config: format must be csv or json");
    if (cfg.command == "resultant") return cmd_resultant(cfg);
    if (cfg.command == "diam") return cmd_diam(cfg);
    if (cfg.command == "pullback") return cmd_pullback(cfg);
    if (cfg.command == "julia") return cmd_julia(cfg);
    if (cfg.command == "bb") return cmd_bb(cfg);
    if (cfg.command == "padic") return cmd_padic(cfg);
    throw ConfigError("config: unknown command \"" + cfg.command + "\"");
  } catch (const NonRegularMap& e) {
    return fail(kExitNonRegular, std::string("non-regular: ") + e.what());
  } catch (const DegenerateOracle& e) {
    return fail(kExitDegenerate, std::string("degenerate: ") + e.what());
  } catch (const ConfigError& e) {
    return fail(kExitConfig, e.what());
  } catch (const PreconditionFailure& e) {
    return fail(kExitConfig, std::string("precondition: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(kExitConfig, std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kExitConfig, std::string("config: ") + e.what());
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"caplab: resultants, transfinite diameters and Green functions of regular polynomial maps"};
  app.require_subcommand(1);

  std::string config_file, out_file, format;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_max, threads;
  std::optional<double> tol;
  app.add_option("--config", config_file, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--out", out_file, "write output here instead of stdout");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "master seed");
  app.add_option("--n-max", n_max, "largest n for d_n");
  app.add_option("--tol", tol, "tolerance for the pass/fail verdict");
  app.add_option("--threads", threads, "worker threads (default: $CAPLAB_THREADS or hardware)");
  app.fallthrough();
  for (const auto& c : kCommands) app.add_subcommand(c, c + " experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  ExperimentConfig cfg;
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    try {
      cfg = ExperimentConfig::from_json(Json::parse(in));
    } catch (const std::exception& e) {
      std::cerr << "config: " << e.what() << '\n';
      return kExitConfig;
    }
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (!out_file.empty()) cfg.out = out_file;
  if (!format.empty()) cfg.format = format;
  if (seed) cfg.seed = *seed;
  if (n_max) cfg.n_max = *n_max;
  if (tol) cfg.tolerance = *tol;
  if (threads) cfg.budget.threads = *threads;

  const auto result = run_command(cfg);
  if (cfg.out.empty()) {
    std::cout << result.output;
  } else {
    std::ofstream os(cfg.out);
    if (!os) {
      std::cerr << "cannot write " << cfg.out << '\n';
      return kExitConfig;
    }
    os << result.output;
  }
  std::cerr << result.summary << '\n';
  return result.exit_code;
}

}  // namespace caplab

// Copyright 2026 The LinZero Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment runner: (seed x selector) cells on MatGame, one record per
// decision step, CSV or JSONL output with the resolved config echoed in the
// header.
//
// Every cell seeds the environment, the regret reference and the planner
// from the experiment seed alone, so selectors sharing a seed see the same
// environment noise (common random numbers).

#ifndef LINZERO_EXPERIMENT_HPP
#define LINZERO_EXPERIMENT_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "linzero/bandit.hpp"
#include "linzero/baselines.hpp"
#include "linzero/error.hpp"
#include "linzero/ini.hpp"
#include "linzero/matgame.hpp"
#include "linzero/mcts.hpp"
#include "linzero/regret.hpp"

namespace linzero {

enum class ExperimentMode { kBandit, kPlanning };
enum class OutputFormat { kCsv, kJsonl };

inline std::string to_string(ExperimentMode m) { return m == ExperimentMode::kBandit ? "bandit" : "planning"; }
inline std::string to_string(OutputFormat f) { return f == OutputFormat::kCsv ? "csv" : "jsonl"; }
inline std::string to_string(GreedyObjective g) {
  return g == GreedyObjective::kNodeScore ? "node_score" : "set_function";
}
inline std::string to_string(DesignTarget t) { return t == DesignTarget::kReward ? "reward" : "return"; }

inline OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "jsonl") return OutputFormat::kJsonl;
  throw ConfigError("output format must be csv or jsonl, got '" + s + "'");
}

/// Seed list: comma-separated integers and inclusive ranges "a..b".
inline std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || s.front() == '-') throw ConfigError("bad seed '" + s + "'");
    return v;
  };
  for (const auto& item : IniSection::split_list(text)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(number(item));
      continue;
    }
    const std::uint64_t lo = number(item.substr(0, dots));
    const std::uint64_t hi = number(item.substr(dots + 2));
    if (hi < lo || hi - lo > 1000000) throw ConfigError("bad seed range '" + item + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw ConfigError("seed list is empty");
  return out;
}

/// sqrt(n sum_{j<d} j^2): the norm of the per-coordinate MatGame payoff.
inline double matgame_theta_norm(const MatGameSpec& spec) {
  double s = 0.0;
  for (int j = 0; j < spec.actions; ++j) s += static_cast<double>(j) * j;
  return std::sqrt(spec.agents * s);
}

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::kBandit;
  std::vector<SelectorKind> selectors{SelectorKind::kLinUct};
  std::vector<std::uint64_t> seeds{0};
  int horizon = 500;
  int workers = 1;
  double delta = 0.01;
  std::optional<double> s_bound;  // empty: matgame_theta_norm
  MatGameSpec env;
  SearchConfig search;
  std::string output_path;
  OutputFormat format = OutputFormat::kCsv;

  double resolved_s_bound() const { return s_bound ? *s_bound : matgame_theta_norm(env); }

  LinUctOptions linuct_options() const {
    return {search.lambda, search.loss, delta, resolved_s_bound(), search.enumeration_cap};
  }

  void check() const {
    if (selectors.empty()) throw ConfigError("[experiment] selectors is empty");
    if (seeds.empty()) throw ConfigError("[experiment] seeds is empty");
    if (horizon < 1) throw ConfigError("[experiment] horizon must be >= 1");
    if (workers < 1) throw ConfigError("[experiment] workers must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("[experiment] delta must lie in (0, 1)");
    if (s_bound && !(*s_bound >= 0.0)) throw ConfigError("[experiment] s_bound must be non-negative");
    env.check();
    search.check();
  }

  static ExperimentConfig from_tree(const IniTree& tree) {
    reject_unknown_sections(tree, {"experiment", "env", "search", "output"});
    ExperimentConfig c;
    IniSection ex = section(tree, "experiment");
    const std::string mode = ex.get_string("mode", "bandit");
    if (mode == "bandit") {
      c.mode = ExperimentMode::kBandit;
    } else if (mode == "planning") {
      c.mode = ExperimentMode::kPlanning;
    } else {
      throw ConfigError("[experiment] mode must be bandit or planning, got '" + mode + "'");
    }
    c.selectors.clear();
    for (const auto& s : ex.get_list("selectors", {"linuct"})) c.selectors.push_back(parse_selector(s));
    c.seeds = parse_seeds(ex.get_string("seeds", "0"));
    c.horizon = ex.get<int>("horizon", c.horizon);
    c.workers = ex.get<int>("workers", c.workers);
    c.delta = ex.get<double>("delta", c.delta);
    const std::string s_bound = ex.get_string("s_bound", "auto");
    if (s_bound != "auto") {
      try {
        std::size_t used = 0;
        c.s_bound = std::stod(s_bound, &used);
        if (used != s_bound.size()) throw std::invalid_argument(s_bound);
      } catch (const std::exception&) {
        throw ConfigError("[experiment] s_bound must be a number or 'auto', got '" + s_bound + "'");
      }
    }
    ex.reject_unknown();

    c.env = read_matgame_section(section(tree, "env"));

    IniSection se = section(tree, "search");
    SearchConfig& s = c.search;
    s.num_simulations = se.get<int>("num_simulations", s.num_simulations);
    s.chi = se.get<int>("chi", s.chi);
    s.zeta = se.get<double>("zeta", s.zeta);
    s.gamma = se.get<double>("gamma", s.gamma);
    s.c1 = se.get<double>("c1", s.c1);
    s.c2 = se.get<double>("c2", s.c2);
    s.c_fixed = se.get<double>("c_fixed", s.c_fixed);
    s.loss.curvature_under = se.get<double>("f_plus", s.loss.curvature_under);
    s.loss.curvature_over = se.get<double>("f_minus", s.loss.curvature_over);
    s.lambda = se.get<double>("lambda", s.lambda);
    s.value_quantile = se.get<double>("value_quantile", s.value_quantile);
    s.decay_lambda = se.get<double>("decay_lambda", s.decay_lambda);
    s.max_depth = se.get<int>("max_depth", s.max_depth);
    const std::string dng = se.get_string("dng_objective", to_string(s.dng_objective));
    if (dng == "node_score") {
      s.dng_objective = GreedyObjective::kNodeScore;
    } else if (dng == "set_function") {
      s.dng_objective = GreedyObjective::kCoordinateRadius;
    } else {
      throw ConfigError("[search] dng_objective must be node_score or set_function, got '" + dng + "'");
    }
    const std::string target = se.get_string("design_target", to_string(s.design_target));
    if (target == "reward") {
      s.design_target = DesignTarget::kReward;
    } else if (target == "return") {
      s.design_target = DesignTarget::kReturn;
    } else {
      throw ConfigError("[search] design_target must be reward or return, got '" + target + "'");
    }
    s.normalize_q = se.get<bool>("normalize_q", s.normalize_q);
    s.enumeration_cap = se.get<std::uint64_t>("enumeration_cap", s.enumeration_cap);
    se.reject_unknown();

    IniSection out = section(tree, "output");
    c.output_path = out.get_string("path", "");
    c.format = parse_format(out.get_string("format", "csv"));
    out.reject_unknown();

    c.check();
    return c;
  }

  static ExperimentConfig from_file(const std::string& path) { return from_tree(read_ini_file(path)); }
  static ExperimentConfig from_string(const std::string& text) { return from_tree(read_ini_string(text)); }

  /// Fully resolved config. The output path and worker count are left out:
  /// they do not change the results.
  std::string to_ini() const {
    std::ostringstream o;
    o.precision(17);
    o << "[experiment]\nmode = " << to_string(mode) << "\nselectors = ";
    for (std::size_t i = 0; i < selectors.size(); ++i) o << (i ? "," : "") << to_string(selectors[i]);
    o << "\nseeds = ";
    for (std::size_t i = 0; i < seeds.size(); ++i) o << (i ? "," : "") << seeds[i];
    o << "\nhorizon = " << horizon << "\ndelta = " << delta
      << "\ns_bound = " << resolved_s_bound() << "\n";
    write_matgame_spec(o, env);
    o << "[search]\nnum_simulations = " << search.num_simulations << "\nchi = " << search.chi
      << "\nzeta = " << search.zeta << "\ngamma = " << search.gamma << "\nc1 = " << search.c1
      << "\nc2 = " << search.c2 << "\nc_fixed = " << search.c_fixed << "\nf_plus = " << search.loss.curvature_under
      << "\nf_minus = " << search.loss.curvature_over << "\nlambda = " << search.lambda
      << "\nvalue_quantile = " << search.value_quantile << "\ndecay_lambda = " << search.decay_lambda
      << "\nmax_depth = " << search.max_depth << "\ndng_objective = " << to_string(search.dng_objective)
      << "\ndesign_target = " << to_string(search.design_target)
      << "\nnormalize_q = " << (search.normalize_q ? "true" : "false")
      << "\nenumeration_cap = " << search.enumeration_cap << "\n[output]\nformat = " << to_string(format) << "\n";
    return o.str();
  }
};

struct StepRecord {
  std::uint64_t seed = 0;
  SelectorKind selector = SelectorKind::kLinUct;
  int step = 0;
  JointAction action;
  double reward = 0.0;
  double regret = 0.0;
  double cum_regret = 0.0;
  double beta = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();

  friend bool operator==(const StepRecord& a, const StepRecord& b) {
    auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
    return a.seed == b.seed && a.selector == b.selector && a.step == b.step && a.action == b.action &&
           same(a.reward, b.reward) && same(a.regret, b.regret) && same(a.cum_regret, b.cum_regret) &&
           same(a.beta, b.beta) && same(a.bound, b.bound);
  }
};

/// One (seed, selector) cell.
inline std::vector<StepRecord> run_cell(const ExperimentConfig& cfg, std::uint64_t seed, SelectorKind selector) {
  MatGameSpec spec = cfg.env;
  spec.seed = seed;
  MatGame env(spec);
  const ActionSpace space = spec.space();
  std::vector<StepRecord> out;
  out.reserve(cfg.horizon);
  double cum = 0.0;

  std::unique_ptr<BanditPolicy> policy;
  if (cfg.mode == ExperimentMode::kBandit) {
    policy = make_bandit(selector, space, cfg.linuct_options(), seed, cfg.search.c1, cfg.search.c2);
  }
  for (int t = 1; t <= cfg.horizon; ++t) {
    if (env.done()) env.reset();
    StepRecord rec;
    rec.seed = seed;
    rec.selector = selector;
    rec.step = t;
    if (policy) {
      rec.action = policy->choose();
    } else {
      const MatGameModel model(spec, spec.episode_length - env.step_count());
      rec.action = plan(model, cfg.search, selector, derive_seed(seed, static_cast<std::uint64_t>(t))).action;
    }
    rec.reward = env.step(rec.action).reward;
    rec.regret = env.sample_reference() - rec.reward;
    cum += rec.regret;
    rec.cum_regret = cum;
    if (policy) {
      policy->observe(rec.action, rec.reward);
      if (selector == SelectorKind::kLinUct) {
        rec.beta = policy->beta();
        rec.bound = bound_value(t, space.agents, space.actions_per_agent, cfg.search.loss.mu(), cfg.search.lambda,
                                rec.beta);
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

/// All cells, seed-major then selector order, on up to cfg.workers threads.
inline std::vector<StepRecord> run_cells(const ExperimentConfig& cfg) {
  cfg.check();
  const std::size_t cells = cfg.seeds.size() * cfg.selectors.size();
  std::vector<std::vector<StepRecord>> results(cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < cells; i = next++) {
      try {
        results[i] = run_cell(cfg, cfg.seeds[i / cfg.selectors.size()], cfg.selectors[i % cfg.selectors.size()]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(cfg.workers, cells);
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  std::vector<StepRecord> all;
  for (auto& r : results) all.insert(all.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  return all;
}

namespace detail {
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError("bad number '" + s + "' in results");
  return v;
}
}  // namespace detail

inline constexpr const char* kCsvColumns = "seed,selector,step,action,reward,regret,cum_regret,beta,bound";

inline void write_results(std::ostream& out, const ExperimentConfig& cfg, const std::vector<StepRecord>& records) {
  const std::string ini = cfg.to_ini();
  if (cfg.format == OutputFormat::kCsv) {
    out << "# linzero results\n";
    std::istringstream lines(ini);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
    out << kCsvColumns << '\n';
    for (const auto& r : records) {
      out << r.seed << ',' << to_string(r.selector) << ',' << r.step << ',' << r.action.to_string() << ','
          << detail::fmt(r.reward) << ',' << detail::fmt(r.regret) << ',' << detail::fmt(r.cum_regret) << ','
          << detail::fmt(r.beta) << ',' << detail::fmt(r.bound) << '\n';
    }
    return;
  }
  out << nlohmann::json{{"type", "header"}, {"config", ini}}.dump() << '\n';
  for (const auto& r : records) {
    nlohmann::json j{{"seed", r.seed},         {"selector", to_string(r.selector)},
                     {"step", r.step},         {"action", r.action.to_string()},
                     {"reward", r.reward},     {"regret", r.regret},
                     {"cum_regret", r.cum_regret}};
    j["beta"] = std::isnan(r.beta) ? nlohmann::json(nullptr) : nlohmann::json(r.beta);
    j["bound"] = std::isnan(r.bound) ? nlohmann::json(nullptr) : nlohmann::json(r.bound);
    out << j.dump() << '\n';
  }
}

struct ResultFile {
  ExperimentConfig config;
  std::vector<StepRecord> records;
};

inline ResultFile read_results(std::istream& in) {
  ResultFile file;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty results file");
  if (line.rfind("# linzero results", 0) == 0) {
    std::string ini;
    while (std::getline(in, line) && line.rfind("# ", 0) == 0) ini += line.substr(2) + '\n';
    if (line != kCsvColumns) throw ConfigError("results file lacks the CSV column header");
    file.config = ExperimentConfig::from_string(ini);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = IniSection::split_list(line);
      if (f.size() != 9) throw ConfigError("results row has " + std::to_string(f.size()) + " fields");
      StepRecord r;
      r.seed = std::stoull(f[0]);
      r.selector = parse_selector(f[1]);
      r.step = std::stoi(f[2]);
      r.action = JointAction::parse(f[3]);
      r.reward = detail::parse_double(f[4]);
      r.regret = detail::parse_double(f[5]);
      r.cum_regret = detail::parse_double(f[6]);
      r.beta = detail::parse_double(f[7]);
      r.bound = detail::parse_double(f[8]);
      file.records.push_back(std::move(r));
    }
    return file;
  }
  try {
    const auto header = nlohmann::json::parse(line);
    if (header.value("type", "") != "header") throw ConfigError("JSONL results lack a header line");
    file.config = ExperimentConfig::from_string(header.at("config").get<std::string>());
    auto num = [](const nlohmann::json& v) {
      return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    };
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      StepRecord r;
      r.seed = j.at("seed").get<std::uint64_t>();
      r.selector = parse_selector(j.at("selector").get<std::string>());
      r.step = j.at("step").get<int>();
      r.action = JointAction::parse(j.at("action").get<std::string>());
      r.reward = num(j.at("reward"));
      r.regret = num(j.at("regret"));
      r.cum_regret = num(j.at("cum_regret"));
      r.beta = num(j.at("beta"));
      r.bound = num(j.at("bound"));
      file.records.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed JSONL results: ") + e.what());
  }
  return file;
}

inline ResultFile read_results_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results file '" + path + "'");
  return read_results(in);
}

/// Checks the config, opens the output, then runs. Returns the records.
inline std::vector<StepRecord> run(const ExperimentConfig& cfg) {
  cfg.check();
  std::ofstream out;
  if (!cfg.output_path.empty()) {
    out.open(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write output '" + cfg.output_path + "'");
  }
  auto records = run_cells(cfg);
  if (out.is_open()) {
    write_results(out, cfg, records);
    out.flush();
    if (!out) throw IoError("write to '" + cfg.output_path + "' failed");
  }
  return records;
}

struct SummaryRow {
  int agents = 0;
  int actions = 0;
  std::string mode;
  int steps = 0;
  std::string selector;
  double mean = 0.0;
  double sd = 0.0;
  double regret_mean = 0.0;
  double regret_sd = 0.0;
};

/// Mean and sample sd of each seed's cumulative return and final regret, per
/// (agents, actions, mode, steps, selector) cell.
inline std::vector<SummaryRow> summarize(const std::vector<ResultFile>& files) {
  using Key = std::tuple<int, int, std::string, int, std::string>;
  std::map<Key, std::map<std::uint64_t, std::pair<double, double>>> cells;
  for (const auto& f : files) {
    for (const auto& r : f.records) {
      const Key key{f.config.env.agents, f.config.env.actions, to_string(f.config.env.mode), f.config.horizon,
                    to_string(r.selector)};
      auto& cell = cells[key][r.seed];
      cell.first += r.reward;
      cell.second = r.cum_regret;
    }
  }
  std::vector<SummaryRow> rows;
  for (const auto& [key, seeds] : cells) {
    std::vector<double> returns, regrets;
    for (const auto& [seed, v] : seeds) {
      returns.push_back(v.first);
      regrets.push_back(v.second);
    }
    const MeanSd ret = mean_sd(returns);
    const MeanSd reg = mean_sd(regrets);
    rows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key), std::get<4>(key), ret.mean,
                    ret.sd, reg.mean, reg.sd});
  }
  return rows;
}

inline void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "agents,actions,mode,steps,selector,mean,sd,regret_mean,regret_sd\n";
  for (const auto& r : rows) {
    out << r.agents << ',' << r.actions << ',' << r.mode << ',' << r.steps << ',' << r.selector << ','
        << detail::fmt(r.mean) << ',' << detail::fmt(r.sd) << ',' << detail::fmt(r.regret_mean) << ','
        << detail::fmt(r.regret_sd) << '\n';
  }
}

}  // namespace linzero

#endif  // LINZERO_EXPERIMENT_HPP

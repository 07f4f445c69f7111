#include "segpower/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "segpower/diagnostics.hpp"
#include "segpower/error.hpp"
#include "segpower/oracle.hpp"
#include "segpower/parallel.hpp"
#include "segpower/rng.hpp"

namespace segpower::cli {
namespace {

using json = nlohmann::ordered_json;

const std::vector<int> kDefaultGrid{3, 5, 8, 10, 15, 20, 30, 40, 50, 60};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Raw parse targets. Values are copied into RunConfig once the parse is done.
struct Parser {
  CLI::App app{"Welch TOST power and sample size via randomized Sobol' points",
               "segpower"};
  std::map<std::string, CLI::App*> subs;

  std::string config_path;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string output, csv, plot;

  double mu_diff = 0, sigma1 = 0, sigma2 = 0, sigma = 0, delta = 0, delta_l = 0, delta_u = 0;
  double alpha = 0.05, q = 1.0;
  double effect = 0, sigma_d1 = 0, sigma_d2 = 0, sigma_d = 0;
  int n1 = 0, n2 = 0;
  std::size_t m = 0;
  double target_power = 0.8, bound = 65536.0, tol = 1e-6;
  std::string engine = "segment", source = "sobol";
  bool compare_chow = false, with_naive = false;
  std::vector<std::string> scenarios;
  int n_max = 100, reps = 10;
  std::vector<int> grid;

  Parser() {
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    auto common = [&](CLI::App* s) {
      s->add_option("--config", config_path, "Flat key = value file (or a previous JSON result)");
      s->add_option("--seed", seed, "Seed for every random stream (required)");
      s->add_option("--threads", threads, "Worker threads; 0 uses all cores");
    };
    auto design = [&](CLI::App* s) {
      s->add_option("--mu-diff", mu_diff, "Anticipated mean difference mu1 - mu2");
      s->add_option("--sigma1", sigma1, "SD of group 1");
      s->add_option("--sigma2", sigma2, "SD of group 2");
      s->add_option("--sigma", sigma, "Common SD (sets sigma1 and sigma2)");
      s->add_option("--delta", delta, "Symmetric limits -delta, +delta");
      s->add_option("--delta-l", delta_l, "Lower equivalence limit");
      s->add_option("--delta-u", delta_u, "Upper equivalence limit");
      s->add_option("--alpha", alpha, "Size of each one-sided test, in (0, 0.5]");
      s->add_option("--q", q, "Allocation ratio n2 = q * n1");
    };
    auto curve_opts = [&](CLI::App* s) {
      s->add_option("--target-power", target_power, "Target power in (0, 1)");
      s->add_option("--bound", bound, "Largest sample size searched (B)");
      s->add_option("--tol", tol, "Root tolerance in n");
      s->add_option("--csv", csv, "Write the power curve as n,power rows");
      s->add_option("--plot", plot, "Write an SVG plot of the power curve");
    };

    auto* power = app.add_subcommand("power", "Power at fixed group sizes");
    common(power);
    design(power);
    power->add_option("--n1", n1, "Size of group 1");
    power->add_option("--n2", n2, "Size of group 2");
    power->add_option("--m", m, "Number of unit-cube points or naive replicates");
    power->add_option("--engine", engine, "segment (unit-cube mapping) or naive (raw data)");
    power->add_option("--source", source, "sobol or pseudorandom points (segment engine)");
    power->add_option("--output", output, "JSON result path (default stdout)");
    subs["power"] = power;

    auto* curve = app.add_subcommand("curve", "Power curve and recommended sample size");
    common(curve);
    design(curve);
    curve_opts(curve);
    curve->add_option("--m", m, "Number of unit-cube points");
    curve->add_option("--source", source, "sobol or pseudorandom points");
    curve->add_option("--output", output, "JSON result path (default stdout)");
    subs["curve"] = curve;

    auto* cross = app.add_subcommand("crossover", "Sample size for a 2x2 crossover design");
    common(cross);
    cross->add_option("--F,--drug-effect", effect, "Direct drug effect F_T - F_R");
    cross->add_option("--sigma-d1", sigma_d1, "SD of period differences, sequence 1");
    cross->add_option("--sigma-d2", sigma_d2, "SD of period differences, sequence 2");
    cross->add_option("--sigma-d", sigma_d, "Common SD of period differences");
    cross->add_option("--delta", delta, "Symmetric limits -delta, +delta");
    cross->add_option("--delta-l", delta_l, "Lower equivalence limit");
    cross->add_option("--delta-u", delta_u, "Upper equivalence limit");
    cross->add_option("--alpha", alpha, "Size of each one-sided test");
    cross->add_option("--q", q, "Allocation ratio between sequences");
    curve_opts(cross);
    cross->add_option("--m", m, "Number of unit-cube points");
    cross->add_flag("--compare-chow", compare_chow, "Also report the conservative closed-form n");
    cross->add_option("--output", output, "JSON result path (default stdout)");
    subs["crossover"] = cross;

    auto* diag = app.add_subcommand("diagnose", "Multiple-intersection and se-peak summaries");
    common(diag);
    design(diag);
    diag->add_option("--scenario", scenarios, "Built-in scenario name(s), or 'all'")->delimiter(',');
    diag->add_option("--n-max", n_max, "Largest n on the scan grid (custom design)");
    diag->add_option("--m", m, "Points per repetition");
    diag->add_option("--reps", reps, "Repetitions per scenario");
    diag->add_option("--csv", csv, "CSV output path (default stdout)");
    subs["diagnose"] = diag;

    auto* bench = app.add_subcommand("bench", "Replicated power estimates over a grid of n");
    common(bench);
    design(bench);
    bench->add_option("--grid", grid, "Comma-separated sample sizes")->delimiter(',');
    bench->add_option("--m", m, "Points (and naive replicates) per run");
    bench->add_option("--reps", reps, "Runs per sample size");
    bench->add_flag("--with-naive", with_naive, "Add naive-simulation columns");
    bench->add_option("--csv", csv, "CSV output path (default stdout)");
    subs["bench"] = bench;
  }

  void parse(std::vector<std::string> args) {
    std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back
    try {
      app.parse(args);
    } catch (const CLI::CallForHelp&) {
      throw HelpRequested(help_text());
    } catch (const CLI::CallForAllHelp&) {
      throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
      throw ConfigError(e.what());
    }
  }

  std::string help_text() const {
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) return sub->help();
    return app.help();
  }

  CLI::App* chosen() const {
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) return sub;
    return nullptr;
  }

  bool given(const std::string& flag) const {
    const auto* s = chosen();
    const auto* opt = s ? s->get_option_no_throw(flag) : nullptr;
    return opt && opt->count() > 0;
  }
};

std::vector<std::pair<std::string, std::string>> read_json_inputs(const std::string& path,
                                                                  const std::string& text,
                                                                  const std::string& subcommand) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + ": invalid JSON: " + e.what());
  }
  if (doc.contains("subcommand") && doc["subcommand"] != subcommand)
    throw ConfigError("config " + path + ": recorded subcommand " + doc["subcommand"].dump() +
                      " does not match '" + subcommand + "'");
  if (!doc.contains("inputs") || !doc["inputs"].is_object())
    throw ConfigError("config " + path + ": JSON config needs an \"inputs\" object");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, value] : doc["inputs"].items()) {
    std::string text_value;
    if (value.is_string()) {
      text_value = value.get<std::string>();
    } else if (value.is_array()) {
      for (const auto& v : value) {
        if (!text_value.empty()) text_value += ",";
        text_value += v.is_string() ? v.get<std::string>() : v.dump();
      }
    } else {
      text_value = value.dump();
    }
    out.emplace_back(key, text_value);
  }
  return out;
}

std::string file_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig to_run_config(const Parser& p) {
  const CLI::App* sub = p.chosen();
  RunConfig c;
  c.subcommand = sub->get_name();
  std::vector<std::string> problems;

  if (!p.given("--seed")) problems.push_back("--seed is required (no default seed)");
  c.seed = p.seed;
  c.threads = p.threads;
  c.output = p.output;
  c.csv = p.csv;
  c.plot = p.plot;

  auto limits = [&](double& lower, double& upper) {
    lower = p.delta_l;
    upper = p.delta_u;
    if (p.given("--delta")) {
      if (!p.given("--delta-l")) lower = -p.delta;
      if (!p.given("--delta-u")) upper = p.delta;
    }
    if (!p.given("--delta") && !(p.given("--delta-l") && p.given("--delta-u")))
      problems.push_back("equivalence limits are required (--delta or --delta-l and --delta-u)");
  };

  const bool uses_design = c.subcommand != "crossover" &&
                           !(c.subcommand == "diagnose" && !p.scenarios.empty());
  if (uses_design) {
    DesignSpec& d = c.design;
    d.mu_diff = p.mu_diff;
    d.sigma1 = p.given("--sigma1") || !p.given("--sigma") ? p.sigma1 : p.sigma;
    d.sigma2 = p.given("--sigma2") || !p.given("--sigma") ? p.sigma2 : p.sigma;
    d.alpha = p.alpha;
    d.q = p.q;
    if (!p.given("--mu-diff")) problems.push_back("--mu-diff is required");
    if (!p.given("--sigma1") && !p.given("--sigma")) problems.push_back("--sigma1 (or --sigma) is required");
    if (!p.given("--sigma2") && !p.given("--sigma")) problems.push_back("--sigma2 (or --sigma) is required");
    limits(d.delta_lower, d.delta_upper);
    const auto spec_problems =
        c.subcommand == "power" || c.subcommand == "bench" ? d.problems() : d.curve_problems();
    problems.insert(problems.end(), spec_problems.begin(), spec_problems.end());
  }

  if (c.subcommand == "crossover") {
    CrossoverSpec& x = c.crossover;
    x.F = p.effect;
    x.sigma_d1 = p.given("--sigma-d1") || !p.given("--sigma-d") ? p.sigma_d1 : p.sigma_d;
    x.sigma_d2 = p.given("--sigma-d2") || !p.given("--sigma-d") ? p.sigma_d2 : p.sigma_d;
    x.alpha = p.alpha;
    x.q = p.q;
    if (!p.given("--F")) problems.push_back("--F is required");
    if (!p.given("--sigma-d1") && !p.given("--sigma-d")) problems.push_back("--sigma-d1 (or --sigma-d) is required");
    if (!p.given("--sigma-d2") && !p.given("--sigma-d")) problems.push_back("--sigma-d2 (or --sigma-d) is required");
    limits(x.delta_lower, x.delta_upper);
    auto xp = x.problems();
    problems.insert(problems.end(), xp.begin(), xp.end());
    if (xp.empty() && !(x.delta_lower < x.F && x.F < x.delta_upper))
      problems.push_back("F must lie strictly between delta_lower and delta_upper");
    c.compare_chow = p.compare_chow;
    if (c.compare_chow && x.sigma_d1 != x.sigma_d2)
      problems.push_back("--compare-chow needs sigma-d1 equal to sigma-d2");
  }

  const std::map<std::string, std::size_t> default_m{
      {"power", 65536}, {"curve", 1024}, {"crossover", 1024}, {"diagnose", 1024}, {"bench", 65536}};
  c.m = p.given("--m") ? p.m : default_m.at(c.subcommand);
  if (c.m == 0) problems.push_back("m must be positive");

  if (c.subcommand == "power") {
    c.n1 = p.n1;
    c.n2 = p.n2;
    if (!p.given("--n1")) problems.push_back("--n1 is required");
    if (!p.given("--n2")) problems.push_back("--n2 is required");
    if (p.given("--n1") && c.n1 < 2) problems.push_back("n1 must be at least 2");
    if (p.given("--n2") && c.n2 < 2) problems.push_back("n2 must be at least 2");
    c.engine = p.engine;
    if (c.engine != "segment" && c.engine != "naive")
      problems.push_back("engine must be 'segment' or 'naive'");
  }
  if (c.subcommand == "power" || c.subcommand == "curve") {
    c.source = p.source;
    if (c.source != "sobol" && c.source != "pseudorandom")
      problems.push_back("source must be 'sobol' or 'pseudorandom'");
    if (c.engine == "naive" && p.given("--source"))
      problems.push_back("--source applies only to the segment engine");
  }
  if (c.subcommand == "curve" || c.subcommand == "crossover") {
    c.target_power = p.target_power;
    c.bound = p.bound;
    c.tol = p.tol;
    if (!(c.target_power > 0.0 && c.target_power < 1.0)) problems.push_back("target power must lie in (0, 1)");
    if (!(c.bound >= 2.0) || !std::isfinite(c.bound)) problems.push_back("bound must be finite and at least 2");
    if (!(c.tol > 0.0)) problems.push_back("tol must be positive");
  }
  if (c.subcommand == "diagnose") {
    c.reps = p.reps;
    c.n_max = p.n_max;
    if (c.reps < 1) problems.push_back("reps must be positive");
    for (const auto& name : p.scenarios) {
      if (name == "all") {
        for (const auto& s : builtin_scenarios()) c.scenarios.push_back(s.name);
        continue;
      }
      try {
        find_scenario(name);
        c.scenarios.push_back(name);
      } catch (const InvalidArgument& e) {
        problems.push_back(e.what());
      }
    }
    if (c.scenarios.empty() && c.n_max < 2) problems.push_back("n-max must be at least 2");
  }
  if (c.subcommand == "bench") {
    c.reps = p.reps;
    c.grid = p.given("--grid") ? p.grid : kDefaultGrid;
    c.with_naive = p.with_naive;
    if (c.reps < 2) problems.push_back("reps must be at least 2 to report an SD");
    for (int n : c.grid)
      if (n < 2) problems.push_back("grid sizes must be at least 2");
  }

  if (!problems.empty()) {
    std::string message = "configuration error:";
    for (const auto& pr : problems) message += "\n  - " + pr;
    throw ConfigError(message);
  }
  return c;
}

json design_json(const DesignSpec& d) {
  return json{{"mu-diff", d.mu_diff}, {"sigma1", d.sigma1},   {"sigma2", d.sigma2},
              {"delta-l", d.delta_lower}, {"delta-u", d.delta_upper}, {"alpha", d.alpha},
              {"q", d.q}};
}

json inputs_json(const RunConfig& c) {
  json in;
  if (c.subcommand == "crossover") {
    const auto& x = c.crossover;
    in = json{{"F", x.F},           {"sigma-d1", x.sigma_d1}, {"sigma-d2", x.sigma_d2},
              {"delta-l", x.delta_lower}, {"delta-u", x.delta_upper}, {"alpha", x.alpha},
              {"q", x.q}};
  } else {
    in = design_json(c.design);
  }
  if (c.subcommand == "power") {
    in["n1"] = c.n1;
    in["n2"] = c.n2;
    in["engine"] = c.engine;
    if (c.engine == "segment") in["source"] = c.source;
  }
  in["m"] = c.m;
  in["seed"] = c.seed;
  if (c.subcommand == "curve" || c.subcommand == "crossover") {
    in["target-power"] = c.target_power;
    in["bound"] = c.bound;
    in["tol"] = c.tol;
  }
  if (c.subcommand == "curve") in["source"] = c.source;
  if (c.subcommand == "crossover") in["compare-chow"] = c.compare_chow;
  return in;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file(path, content);
  }
}

json curve_json(const PowerCurve& curve) {
  json warnings = json::array();
  for (const auto& w : curve.warnings) warnings.push_back(w);
  return json{{"n_star_initial", curve.n_star_initial},
              {"n_star_final", curve.n_star_final},
              {"recommendation", {{"n1", curve.rec_n1}, {"n2", curve.rec_n2}}},
              {"power_at_n_star", curve.ecdf(curve.n_star_final)},
              {"reinitialized", curve.reinitialized},
              {"safeguard_rounds", curve.safeguard_rounds},
              {"censored", curve.censored_count()},
              {"warnings", warnings}};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void curve_files(const RunConfig& c, const PowerCurve& curve, const std::string& title) {
  if (!c.csv.empty()) write_file(c.csv, render_curve_csv(curve));
  if (!c.plot.empty()) write_file(c.plot, render_curve_svg(curve, title));
}

void run_diagnose(const RunConfig& c, std::ostream& out, std::ostream& log) {
  std::ostringstream csv;
  csv << "scenario,mu_diff,sigma1,sigma2,q,n_max,reps,m,prevalence_pct,departure_mean,"
         "duration_mean,argmax_mean,argmax_gt5_pct,argmax_gt10_pct\n";
  auto row = [&](const std::string& name, const DesignSpec& d, int n_max) {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioSummary s = summarize_scenario(d, n_max, c.m, c.reps, c.seed, c.threads, name);
    auto num = [](double v) { return std::isnan(v) ? std::string("NA") : format_number(v); };
    csv << name << ',' << format_number(d.mu_diff) << ',' << format_number(d.sigma1) << ','
        << format_number(d.sigma2) << ',' << format_number(d.q) << ',' << n_max << ',' << c.reps
        << ',' << c.m << ',' << num(100.0 * s.prevalence) << ',' << num(s.departure_mean) << ','
        << num(s.duration_mean) << ',' << num(s.argmax_mean) << ','
        << num(100.0 * s.frac_argmax_gt5) << ',' << num(100.0 * s.frac_argmax_gt10) << '\n';
    log << "diagnose " << name << ": " << format_number(seconds_since(start)) << " s\n";
  };
  if (c.scenarios.empty()) {
    row("custom", c.design, c.n_max);
  } else {
    for (const auto& name : c.scenarios) {
      const Scenario& s = find_scenario(name);
      row(s.name, s.spec, s.n_max);
    }
  }
  emit(c.csv, csv.str(), out);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  const double mu = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

void run_bench(const RunConfig& c, std::ostream& out, std::ostream& log) {
  std::ostringstream csv;
  csv << "n1,n2,segment_mean,segment_sd";
  if (c.with_naive) csv << ",naive_mean,naive_sd";
  csv << '\n';
  const std::uint64_t naive_seed = substream_seed(c.seed, 0x6e61697665ULL);
  for (int n : c.grid) {
    const int n2 = std::max(2, rounded_n2(c.design, n));
    std::vector<double> segment, naive;
    auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < c.reps; ++r)
      segment.push_back(empirical_power(c.design, n, n2, c.m, substream_seed(c.seed, r),
                                     {PointSource::sobol, c.threads})
                         .power);
    const double segment_time = seconds_since(start);
    csv << n << ',' << n2 << ',' << format_number(mean_of(segment)) << ','
        << format_number(sd_of(segment));
    log << "bench n=" << n << ": segment " << format_number(segment_time) << " s";
    if (c.with_naive) {
      start = std::chrono::steady_clock::now();
      for (int r = 0; r < c.reps; ++r)
        naive.push_back(naive_power(c.design, n, n2, c.m, substream_seed(naive_seed, r), c.threads).power);
      csv << ',' << format_number(mean_of(naive)) << ',' << format_number(sd_of(naive));
      log << ", naive " << format_number(seconds_since(start)) << " s";
    }
    csv << '\n';
    log << '\n';
  }
  emit(c.csv, csv.str(), out);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_flat_config(const std::string& path) {
  std::istringstream in(file_text(path));
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config " + path + ":" + std::to_string(number) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty())
      throw ConfigError("config " + path + ":" + std::to_string(number) + ": empty key");
    out.emplace_back(key, value);
  }
  return out;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  // First pass: command line alone, to find the subcommand, the config file
  // and which options were given explicitly.
  Parser first;
  first.parse(args);
  if (first.config_path.empty()) return to_run_config(first);

  const CLI::App* sub = first.chosen();
  const std::string text = file_text(first.config_path);
  const auto entries = trim(text).rfind('{', 0) == 0
                           ? read_json_inputs(first.config_path, text, sub->get_name())
                           : read_flat_config(first.config_path);

  std::vector<std::string> merged{sub->get_name()};
  std::vector<std::string> problems;
  for (const auto& [key, value] : entries) {
    const auto* opt = sub->get_option_no_throw("--" + key);
    if (!opt || key == "config" || key == "help") {
      problems.push_back("unknown key '" + key + "' in " + first.config_path + " for subcommand " +
                         sub->get_name());
      continue;
    }
    if (opt->count() > 0) continue;  // the command line wins
    merged.push_back("--" + key + "=" + value);
  }
  if (!problems.empty()) {
    std::string message = "configuration error:";
    for (const auto& pr : problems) message += "\n  - " + pr;
    throw ConfigError(message);
  }
  bool skipped_name = false;
  for (const auto& a : args) {
    if (!skipped_name && a == sub->get_name()) {
      skipped_name = true;
      continue;
    }
    merged.push_back(a);
  }

  Parser second;
  second.parse(merged);
  return to_run_config(second);
}

std::string render_curve_csv(const PowerCurve& curve) {
  std::ostringstream os;
  os << "n,power\n";
  for (const auto& [n, p] : curve.ecdf_steps()) os << format_number(n) << ',' << format_number(p) << '\n';
  return os.str();
}

std::string render_curve_svg(const PowerCurve& curve, const std::string& title) {
  const auto steps = curve.ecdf_steps();
  const double width = 640, height = 420, left = 70, right = 20, top = 40, bottom = 60;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  // Show the bulk of the curve: up to where it reaches 99.5% (or its end).
  double x_max = 10.0;
  for (const auto& [n, p] : steps) {
    x_max = n;
    if (p >= 0.995) break;
  }
  x_max = std::max(x_max, curve.n_star_final) * 1.1;
  const double x_min = 0.0;
  auto sx = [&](double n) { return left + plot_w * (std::min(n, x_max) - x_min) / (x_max - x_min); };
  auto sy = [&](double p) { return top + plot_h * (1.0 - p); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
     << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
     << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
     << top + plot_h << "\" stroke=\"black\"/>\n";

  // Ticks at 1, 2 or 5 times a power of ten.
  const double raw = (x_max - x_min) / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double step = raw / mag < 2 ? 2 * mag : raw / mag < 5 ? 5 * mag : 10 * mag;
  for (double t = 0.0; t <= x_max + 1e-9; t += step) {
    os << "<line x1=\"" << sx(t) << "\" y1=\"" << top + plot_h << "\" x2=\"" << sx(t) << "\" y2=\""
       << top + plot_h + 5 << "\" stroke=\"black\"/>";
    os << "<text x=\"" << sx(t) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">"
       << format_number(t) << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double p = i / 5.0;
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(p) << "\" x2=\"" << left << "\" y2=\""
       << sy(p) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << left - 8 << "\" y=\"" << sy(p) + 4 << "\" text-anchor=\"end\">"
       << format_number(p) << "</text>\n";
  }
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
     << "\" text-anchor=\"middle\">Sample size n (group 1)</text>\n";
  os << "<text transform=\"translate(18," << top + plot_h / 2
     << ") rotate(-90)\" text-anchor=\"middle\">Power</text>\n";

  os << "<line x1=\"" << left << "\" y1=\"" << sy(curve.target_power) << "\" x2=\"" << left + plot_w
     << "\" y2=\"" << sy(curve.target_power) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  os << "<line x1=\"" << sx(curve.n_star_final) << "\" y1=\"" << top << "\" x2=\""
     << sx(curve.n_star_final) << "\" y2=\"" << top + plot_h
     << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  double level = 0.0;
  os << sx(x_min) << ',' << sy(level);
  for (const auto& [n, p] : steps) {
    if (n > x_max) break;
    os << ' ' << sx(n) << ',' << sy(level) << ' ' << sx(n) << ',' << sy(p);
    level = p;
  }
  os << ' ' << sx(x_max) << ',' << sy(level) << "\"/>\n";
  os << "</svg>\n";
  return os.str();
}

void execute(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  json result{{"subcommand", c.subcommand}, {"inputs", inputs_json(c)}};
  const auto source = c.source == "pseudorandom" ? PointSource::pseudorandom : PointSource::sobol;
  const CurveOptions curve_options{c.bound, c.tol, c.threads, 3};

  if (c.subcommand == "power") {
    result["engine"] = c.engine;
    if (c.engine == "naive") {
      result["power"] = naive_power(c.design, c.n1, c.n2, c.m, c.seed, c.threads).power;
    } else {
      const auto est = empirical_power(c.design, c.n1, c.n2, c.m, c.seed, {source, c.threads});
      result["power"] = est.power;
      result["rejections"] = est.rejections;
    }
  } else if (c.subcommand == "curve") {
    const PowerCurve curve = power_curve(c.design, c.target_power, c.m, c.seed, curve_options, source);
    result.update(curve_json(curve));
    for (const auto& w : curve.warnings) log << "warning: " << w << '\n';
    curve_files(c, curve, "Power curve");
  } else if (c.subcommand == "crossover") {
    const auto rec = crossover_sample_size(c.crossover, c.target_power, c.m, c.seed, curve_options);
    result["mapped_design"] = design_json(to_two_group(c.crossover));
    result["n_per_sequence"] = rec.n_per_sequence;
    result["n_sequence2"] = rec.n_sequence2;
    result.update(curve_json(rec.curve));
    if (c.compare_chow)
      result["chow_n_per_sequence"] =
          chow_sample_size(c.crossover.F, c.crossover.sigma_d1, c.crossover.delta_upper,
                           c.crossover.alpha, 1.0 - c.target_power);
    for (const auto& w : rec.curve.warnings) log << "warning: " << w << '\n';
    curve_files(c, rec.curve, "Crossover power curve");
  } else if (c.subcommand == "diagnose") {
    run_diagnose(c, out, log);
    return;
  } else if (c.subcommand == "bench") {
    run_bench(c, out, log);
    return;
  }

  result["metadata"] = {{"elapsed_seconds", seconds_since(start)}, {"threads", resolve_threads(c.threads)}};
  emit(c.output, result.dump(2) + "\n", out);
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    execute(parse_config(args), out, err);
    return 0;
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const ConfigError& e) {
    err << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace segpower::cli

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "annulus/annulus.hpp"

namespace annulus::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using RawOptions = std::vector<std::pair<std::string, std::string*>>;

constexpr std::pair<Command, const char*> kCommandNames[] = {
    {Command::gamma, "gamma"},           {Command::areas, "areas"},
    {Command::moments, "moments"},       {Command::ck, "ck"},
    {Command::model_ck, "model-ck"},     {Command::avg_ck, "avg-ck"},
    {Command::pair_corr, "pair-corr"},   {Command::mixed_corr, "mixed-corr"},
    {Command::joint_hist, "joint-hist"}, {Command::sector_var, "sector-var"},
    {Command::equidist, "equidist"},     {Command::diag_rect, "diag-rect"},
    {Command::limit_dist, "limit-dist"},
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

json interval_json(const Interval& i) { return json::array({i.a, i.b}); }

GammaList load_gamma(const RunConfig& cfg) {
  if (!(cfg.radius > 1.0)) throw std::domain_error("--R must be given and exceed 1");
  return enumerate_gamma(cfg.radius);
}

std::int64_t single_k(const RunConfig& cfg) {
  if (cfg.k.size() != 1) throw std::invalid_argument("--k must be a single integer here");
  return cfg.k.front();
}

const std::vector<std::int64_t>& k_list(const RunConfig& cfg) {
  if (cfg.k.empty()) throw std::invalid_argument("--k is required");
  return cfg.k;
}

json estimate_json(std::int64_t k, const CorrelationEstimate& e) {
  return {{"k", k}, {"value", e.value}, {"stderr", e.std_error}, {"n", e.n}};
}

Report do_gamma(const RunConfig& cfg) {
  const auto gamma = load_gamma(cfg);
  Report rep;
  std::ostringstream csv;
  write_csv(gamma, csv);
  rep.csv = csv.str();
  json points = json::array();
  for (const auto& p : gamma.points()) {
    points.push_back({{"x", p.point.x},
                      {"y", p.point.y},
                      {"norm", p.norm},
                      {"r", p.r},
                      {"theta", p.theta},
                      {"index", p.index + 1}});
  }
  rep.json = {{"R", gamma.radius()},
              {"K", gamma.size()},
              {"calK", gamma.expected_count()},
              {"points", std::move(points)}};
  rep.summary = "K=" + std::to_string(gamma.size()) + " calK=" + fmt("%.6f", gamma.expected_count());
  return rep;
}

Report do_areas(const RunConfig& cfg) {
  const auto gamma = load_gamma(cfg);
  const auto series = area_series(gamma, cfg.threads);
  Report rep;
  std::ostringstream csv;
  csv << "index,x,y,r,theta,area\n";
  json values = json::array();
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    const auto& p = gamma[j];
    csv << j + 1 << ',' << p.point.x << ',' << p.point.y << ',' << num(p.r) << ','
        << num(p.theta) << ',' << num(series.values[j]) << '\n';
    values.push_back(series.values[j]);
  }
  rep.csv = csv.str();
  const auto mv = expectation_variance(series);
  rep.json = {{"R", gamma.radius()}, {"K", gamma.size()}, {"areas", std::move(values)}};
  rep.summary = "K=" + std::to_string(gamma.size()) + " E=" + fmt("%.9f", mv.mean) +
                " V=" + fmt("%.9f", mv.variance);
  return rep;
}

Report do_moments(const RunConfig& cfg) {
  const auto gamma = load_gamma(cfg);
  const auto series = area_series(gamma, cfg.threads);
  const auto mv = expectation_variance(series);
  Report rep;
  rep.json = {{"R", gamma.radius()},   {"K", gamma.size()},         {"calK", gamma.expected_count()},
              {"E", mv.mean},          {"V", mv.variance},          {"c0_ref", c0_constant()},
              {"E_minus_half", mv.mean - 0.5}, {"V_minus_c0", mv.variance - c0_constant()}};
  rep.csv = "R,K,E,V,c0_ref\n" + num(gamma.radius()) + ',' + std::to_string(gamma.size()) + ',' +
            num(mv.mean) + ',' + num(mv.variance) + ',' + num(c0_constant()) + '\n';
  rep.summary = "E=" + fmt("%.9f", mv.mean) + " V=" + fmt("%.9f", mv.variance) +
                " c0=" + fmt("%.9f", c0_constant());
  return rep;
}

Report do_ck(const RunConfig& cfg) {
  const auto gamma = load_gamma(cfg);
  const auto series = area_series(gamma, cfg.threads);
  Report rep;
  json list = json::array();
  std::string csv = "k,value,stderr,n\n";
  for (auto k : k_list(cfg)) {
    const auto e = empirical_ck(series, k);
    list.push_back(estimate_json(k, e));
    csv += std::to_string(k) + ',' + num(e.value) + ',' + num(e.std_error) + ',' +
           std::to_string(e.n) + '\n';
  }
  rep.csv = csv;
  rep.summary = "C_" + std::to_string(cfg.k.front()) + "=" + fmt("%.6f", list[0]["value"].get<double>()) +
                " (" + std::to_string(list.size()) + " lags)";
  rep.json = {{"R", gamma.radius()}, {"K", gamma.size()}, {"ck", std::move(list)}};
  return rep;
}

Report do_model_ck(const RunConfig& cfg) {
  const auto& ks = k_list(cfg);
  const auto k_max = *std::max_element(ks.begin(), ks.end());
  if (*std::min_element(ks.begin(), ks.end()) < 0) throw std::domain_error("--k must be >= 0");
  const auto all = model_ck_range(static_cast<int>(k_max), cfg.samples, cfg.seed,
                                  ModelCkOptions{cfg.threads});
  Report rep;
  json list = json::array();
  std::string csv = "k,n_samples,seed,estimate,stderr,n_used\n";
  for (auto k : ks) {
    const auto& e = all[static_cast<std::size_t>(k)];
    list.push_back({{"k", k},
                    {"n_samples", cfg.samples},
                    {"seed", cfg.seed},
                    {"estimate", e.value},
                    {"stderr", e.std_error},
                    {"n_used", e.n}});
    csv += std::to_string(k) + ',' + std::to_string(cfg.samples) + ',' + std::to_string(cfg.seed) +
           ',' + num(e.value) + ',' + num(e.std_error) + ',' + std::to_string(e.n) + '\n';
  }
  const auto& first = all[static_cast<std::size_t>(ks.front())];
  rep.summary = "model C_" + std::to_string(ks.front()) + "=" + fmt("%.6f", first.value) +
                " +- " + fmt("%.6f", first.std_error);
  rep.json = {{"results", std::move(list)}};
  rep.csv = csv;
  return rep;
}

Report do_avg_ck(const RunConfig& cfg) {
  const auto gamma = load_gamma(cfg);
  const auto series = area_series(gamma, cfg.threads);
  const double avg = ck_average(series, cfg.L);
  Report rep;
  rep.json = {{"R", gamma.radius()}, {"L", cfg.L}, {"average", avg}};
  rep.summary = "avg C_k (k<=" + std::to_string(cfg.L) + ")=" + fmt("%.6f", avg);
  rep.csv = "R,L,average\n" + num(gamma.radius()) + ',' + std::to_string(cfg.L) + ',' + num(avg) + '\n';
  if (cfg.with_model) {
    if (cfg.L > kMaxModelIndex) throw std::domain_error("--L above the model index limit");
    const auto model = model_ck_range(static_cast<int>(cfg.L), cfg.samples, cfg.seed,
                                      ModelCkOptions{cfg.threads});
    double sum = 0.0;
    for (std::size_t k = 1; k < model.size(); ++k) sum += model[k].value;
    const double model_avg = sum / static_cast<double>(cfg.L);
    rep.json["model_average"] = model_avg;
    rep.json["n_samples"] = cfg.samples;
    rep.json["seed"] = cfg.seed;
    rep.summary += " model=" + fmt("%.6f", model_avg);
  }
  return rep;
}

Report do_pair_corr(const RunConfig& cfg) {
  const auto gamma = load_gamma(cfg);
  const auto k = single_k(cfg);
  const Interval i1 = cfg.I1.value_or(Interval::full_radial());
  const Interval i2 = cfg.I2.value_or(Interval::full_radial());
  const Interval j = cfg.J.value_or(Interval::full_circle());
  const double count = pair_corr_count(gamma, k, i1, i2, j);
  const double main_term = i1.length() / std::sqrt(2.0) * (i2.length() / std::sqrt(2.0)) *
                           (j.length() / kTwoPi);
  Report rep;
  rep.json = {{"R", gamma.radius()},     {"k", k},         {"I1", interval_json(i1)},
              {"I2", interval_json(i2)}, {"J", interval_json(j)}, {"count", count},
              {"main_term", main_term}};
  rep.summary = "pair count=" + fmt("%.6f", count) + " main term=" + fmt("%.6f", main_term);
  rep.csv = "R,k,count,main_term\n" + num(gamma.radius()) + ',' + std::to_string(k) + ',' +
            num(count) + ',' + num(main_term) + '\n';
  return rep;
}

Report do_mixed_corr(const RunConfig& cfg) {
  const auto gamma = load_gamma(cfg);
  const auto series = area_series(gamma, cfg.threads);
  const auto k = single_k(cfg);
  const double value = mixed_corr_sum(gamma, series, k);
  const double partners = mean_pair_count(gamma, k);
  Report rep;
  rep.json = {{"R", gamma.radius()}, {"k", k}, {"value", value}, {"mean_pair_count", partners}};
  rep.summary = "mixed sum=" + fmt("%.6f", value);
  rep.csv = "R,k,value,mean_pair_count\n" + num(gamma.radius()) + ',' + std::to_string(k) + ',' +
            num(value) + ',' + num(partners) + '\n';
  return rep;
}

Report do_joint_hist(const RunConfig& cfg) {
  const auto gamma = load_gamma(cfg);
  const auto k = single_k(cfg);
  const auto hist = pair_joint_hist(gamma, k, cfg.bins);
  Report rep;
  rep.json = {{"R", gamma.radius()},
              {"k", k},
              {"bins", hist.bins},
              {"pairs", hist.pairs},
              {"chi_square", hist.chi_square.statistic},
              {"dof", hist.chi_square.dof},
              {"p_value", hist.chi_square.p_value},
              {"r_marginal_ks", hist.r_marginal.statistic},
              {"counts", hist.counts}};
  std::string csv = "i_r1,i_theta,i_r2,count\n";
  const int b = hist.bins;
  for (int a = 0; a < b; ++a) {
    for (int t = 0; t < b; ++t) {
      for (int c = 0; c < b; ++c) {
        csv += std::to_string(a) + ',' + std::to_string(t) + ',' + std::to_string(c) + ',' +
               std::to_string(hist.counts[(static_cast<std::size_t>(a) * b + t) * b + c]) + '\n';
      }
    }
  }
  rep.csv = csv;
  rep.summary = "pairs=" + std::to_string(hist.pairs) + " chi2 p=" + fmt("%.4g", hist.chi_square.p_value);
  return rep;
}

Report do_sector_var(const RunConfig& cfg) {
  const auto gamma = load_gamma(cfg);
  const Interval band = cfg.I.value_or(Interval::full_radial());
  double width;
  if (cfg.width) {
    width = *cfg.width;
  } else if (cfg.width_exponent) {
    width = std::pow(cfg.radius, *cfg.width_exponent);
  } else {
    throw std::invalid_argument("sector-var needs --width or --width-exp");
  }
  const auto grid = cfg.grid.value_or(default_sector_grid(cfg.radius));
  const double empirical = sector_variance_empirical(gamma, band, width, grid);
  const auto d = d_of_i(band, lambda_for_tail(cfg.tail));
  const double predicted = cfg.radius * width * d.value;
  const double ratio = predicted > 0 ? empirical / predicted : 0.0;
  Report rep;
  rep.json = {{"R", cfg.radius},     {"width", width},         {"I", interval_json(band)},
              {"grid", grid},        {"empirical", empirical}, {"predicted", predicted},
              {"ratio", ratio},      {"D", d.value},           {"D_tail_bound", d.tail_bound},
              {"lambda_max", d.lambda_max}};
  const auto counts = sector_counts(gamma, band, width, grid);
  const double expected = cfg.radius * width * band.length();
  std::string csv = "theta,count,deviation\n";
  for (std::int64_t g = 0; g < grid; ++g) {
    const double theta = static_cast<double>(g) * (kTwoPi / 4) / static_cast<double>(grid);
    csv += num(theta) + ',' + std::to_string(counts[g]) + ',' +
           num(static_cast<double>(counts[g]) - expected) + '\n';
  }
  rep.csv = csv;
  rep.summary = "variance=" + fmt("%.6f", empirical) + " predicted=" + fmt("%.6f", predicted) +
                " ratio=" + fmt("%.4f", ratio);
  return rep;
}

Report do_equidist(const RunConfig& cfg) {
  const auto gamma = load_gamma(cfg);
  const Interval band = cfg.I.value_or(Interval::full_radial());
  const auto check = equidist_count_check(gamma, cfg.c, cfg.d, band);
  Report rep;
  rep.json = {{"R", cfg.radius},
              {"c", cfg.c},
              {"d", cfg.d},
              {"I", interval_json(band)},
              {"count", check.count},
              {"main_term", check.main_term},
              {"normalized_error", check.normalized_error}};
  rep.csv = "R,c,d,count,main_term,normalized_error\n" + num(cfg.radius) + ',' + num(cfg.c) + ',' +
            num(cfg.d) + ',' + std::to_string(check.count) + ',' + num(check.main_term) + ',' +
            num(check.normalized_error) + '\n';
  rep.summary = "count=" + std::to_string(check.count) + " main=" + fmt("%.6f", check.main_term) +
                " normalized error=" + fmt("%.4f", check.normalized_error);
  return rep;
}

Report do_diag_rect(const RunConfig& cfg) {
  const auto gamma = load_gamma(cfg);
  const auto k = single_k(cfg);
  const auto diag = rect_approx_diagnostic(gamma, static_cast<int>(k), cfg.cprime);
  Report rep;
  rep.json = {{"R", cfg.radius},
              {"k", k},
              {"Cprime", cfg.cprime},
              {"frac_set_mismatch", diag.frac_set_mismatch},
              {"frac_order_mismatch", diag.frac_order_mismatch},
              {"max_area_gap", diag.max_area_gap},
              {"max_area_gap_times_R_over_k", diag.max_area_gap * cfg.radius / static_cast<double>(k)},
              {"kprime_min", diag.kprime.min},
              {"kprime_max", diag.kprime.max},
              {"kprime_mean", diag.kprime.mean},
              {"kprime_below_k", diag.kprime.below_k},
              {"matched", diag.matched}};
  rep.csv = "R,k,Cprime,frac_set_mismatch,frac_order_mismatch,max_area_gap,kprime_min,kprime_max\n" +
            num(cfg.radius) + ',' + std::to_string(k) + ',' + num(cfg.cprime) + ',' +
            num(diag.frac_set_mismatch) + ',' + num(diag.frac_order_mismatch) + ',' +
            num(diag.max_area_gap) + ',' + std::to_string(diag.kprime.min) + ',' +
            std::to_string(diag.kprime.max) + '\n';
  rep.summary = "set mismatch=" + fmt("%.4f", diag.frac_set_mismatch) +
                " order mismatch=" + fmt("%.4f", diag.frac_order_mismatch) +
                " max gap=" + fmt("%.3g", diag.max_area_gap);
  return rep;
}

Report do_limit_dist(const RunConfig& cfg) {
  const auto gamma = load_gamma(cfg);
  const auto series = area_series(gamma, cfg.threads);
  const auto ks = limit_distribution_test(series, cfg.samples, cfg.seed);
  Report rep;
  rep.json = {{"R", cfg.radius},
              {"n_model", cfg.samples},
              {"seed", cfg.seed},
              {"ks", ks.statistic},
              {"p_value", ks.p_value}};
  rep.csv = "R,n_model,seed,ks,p_value\n" + num(cfg.radius) + ',' + std::to_string(cfg.samples) +
            ',' + std::to_string(cfg.seed) + ',' + num(ks.statistic) + ',' + num(ks.p_value) + '\n';
  rep.summary = "KS=" + fmt("%.6f", ks.statistic) + " p=" + fmt("%.4g", ks.p_value);
  return rep;
}

Format default_format(Command command) {
  return command == Command::gamma || command == Command::areas ? Format::csv : Format::json;
}

// Options of one experiment subcommand, bound to `cfg`.
void add_run_options(CLI::App& sub, Command command, RunConfig& cfg, std::deque<std::string>& storage,
                     RawOptions& raw) {
  // Options that need custom parsing are captured as text first.
  auto text = [&](const std::string& name, const std::string& help) {
    auto& holder = storage.emplace_back();
    raw.emplace_back(name, &holder);
    sub.add_option(name, holder, help);
  };
  const bool needs_r = command != Command::model_ck;
  if (needs_r) sub.add_option("--R", cfg.radius, "circle radius R (> 1)")->required();
  sub.add_option("--out", cfg.out, "output file (default: $ANNULUS_OUT_DIR/<command>.<ext>)");
  text("--format", "csv or json");
  sub.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  switch (command) {
    case Command::ck:
    case Command::model_ck:
      text("--k", "lag(s): 3, 1..8 or 1,2,5");
      break;
    case Command::pair_corr:
    case Command::mixed_corr:
    case Command::joint_hist:
    case Command::diag_rect:
      text("--k", "window index k");
      break;
    default:
      break;
  }
  switch (command) {
    case Command::model_ck:
    case Command::limit_dist:
      text("--samples", "Monte Carlo sample count");
      sub.add_option("--seed", cfg.seed, "random seed");
      break;
    case Command::avg_ck:
      sub.add_option("--L", cfg.L, "number of lags averaged")->required();
      sub.add_flag("--model", cfg.with_model, "also average the random-model C_k");
      text("--samples", "Monte Carlo sample count for --model");
      sub.add_option("--seed", cfg.seed, "random seed for --model");
      break;
    case Command::pair_corr:
      text("--I1", "radial interval a,b for lambda");
      text("--I2", "radial interval a,b for mu");
      text("--J", "angular interval a,b (radians)");
      break;
    case Command::joint_hist:
      sub.add_option("--bins", cfg.bins, "bins per axis (4..64)");
      break;
    case Command::sector_var:
      text("--I", "radial interval a,b");
      sub.add_option("--width", cfg.width, "sector width in radians");
      sub.add_option("--width-exp", cfg.width_exponent, "sector width as R^e");
      text("--grid", "theta grid size");
      sub.add_option("--tail", cfg.tail, "tail bound target for D(I)");
      break;
    case Command::equidist:
      sub.add_option("--c", cfg.c, "window start (radians)")->required();
      sub.add_option("--d", cfg.d, "window end (radians)")->required();
      text("--I", "radial interval a,b");
      break;
    case Command::diag_rect:
      sub.add_option("--cprime", cfg.cprime, "rectangle length factor C'");
      break;
    default:
      break;
  }
}

void apply_raw(RunConfig& cfg, const RawOptions& raw) {
  for (const auto& [name, value] : raw) {
    if (value->empty()) continue;
    const std::string& v = *value;
    if (name == "--format") {
      if (v == "csv") {
        cfg.format = Format::csv;
      } else if (v == "json") {
        cfg.format = Format::json;
      } else {
        throw UsageError("--format must be csv or json");
      }
    } else if (name == "--k") {
      cfg.k = parse_k_list(v);
    } else if (name == "--samples") {
      cfg.samples = parse_count(v);
    } else if (name == "--grid") {
      cfg.grid = parse_count(v);
    } else if (name == "--I") {
      cfg.I = parse_interval(v);
    } else if (name == "--I1") {
      cfg.I1 = parse_interval(v);
    } else if (name == "--I2") {
      cfg.I2 = parse_interval(v);
    } else if (name == "--J") {
      cfg.J = parse_interval(v);
    }
  }
}

struct HelpRequested {
  std::string text;
};

struct Parsed {
  bool is_verify = false;
  std::string golden_dir;
  RunConfig config;
};

// Builds the full command-line interface and parses `args` (program name
// excluded). Help requests surface as CLI::CallForHelp.
Parsed parse_all(const std::vector<std::string>& args) {
  CLI::App app{"Lattice points near a circle: enumeration, boundary areas and their statistics",
               "annulus"};
  app.require_subcommand(1);
  Parsed parsed;
  std::deque<std::string> storage;
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [command, name] : kCommandNames) {
    auto* sub = app.add_subcommand(name, "run the " + std::string(name) + " experiment");
    subs.emplace_back(sub, command);
  }
  // Only the chosen subcommand parses, so exactly one of them writes config.
  std::vector<RawOptions> raw(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    add_run_options(*subs[i].first, subs[i].second, parsed.config, storage, raw[i]);
  }
  auto* verify_cmd = app.add_subcommand("verify", "rerun golden experiments and compare");
  parsed.golden_dir = "golden";
  verify_cmd->add_option("--golden", parsed.golden_dir, "directory of golden JSON records");

  if (!args.empty() && !args.front().empty() && args.front()[0] != '-' &&
      args.front() != "verify") {
    parse_command(args.front());
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream text;
    std::ostringstream ignored;
    app.exit(e, text, ignored);
    throw HelpRequested{text.str()};
  }

  if (verify_cmd->parsed()) {
    parsed.is_verify = true;
    return parsed;
  }
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i].first->parsed()) {
      parsed.config.command = subs[i].second;
      apply_raw(parsed.config, raw[i]);
    }
  }
  return parsed;
}

json resolve_pointer(const json& doc, const std::string& pointer) {
  return doc.at(json::json_pointer(pointer));
}

}  // namespace

std::string command_name(Command command) {
  for (const auto& [c, name] : kCommandNames) {
    if (c == command) return name;
  }
  return "unknown";
}

Command parse_command(const std::string& name) {
  for (const auto& [c, n] : kCommandNames) {
    if (name == n) return c;
  }
  std::string known;
  for (const auto& [c, n] : kCommandNames) known += std::string(known.empty() ? "" : ", ") + n;
  throw UsageError("unknown command '" + name + "'; expected one of " + known + ", verify");
}

std::vector<std::int64_t> parse_k_list(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    const auto v = parse_count(s);
    return v;
  };
  std::vector<std::int64_t> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const auto lo = to_int(text.substr(0, dots));
    const auto hi = to_int(text.substr(dots + 2));
    if (lo > hi) throw UsageError("k range '" + text + "' is empty");
    if (hi - lo > 1000000) throw UsageError("k range '" + text + "' is too long");
    for (auto k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(to_int(part));
  if (out.empty()) throw UsageError("k list '" + text + "' is empty");
  return out;
}

std::int64_t parse_count(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v) ||
      v != std::floor(v) || std::fabs(v) > 9e15) {
    throw UsageError("'" + text + "' is not an integer");
  }
  return static_cast<std::int64_t>(v);
}

Report execute(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::gamma: return do_gamma(cfg);
    case Command::areas: return do_areas(cfg);
    case Command::moments: return do_moments(cfg);
    case Command::ck: return do_ck(cfg);
    case Command::model_ck: return do_model_ck(cfg);
    case Command::avg_ck: return do_avg_ck(cfg);
    case Command::pair_corr: return do_pair_corr(cfg);
    case Command::mixed_corr: return do_mixed_corr(cfg);
    case Command::joint_hist: return do_joint_hist(cfg);
    case Command::sector_var: return do_sector_var(cfg);
    case Command::equidist: return do_equidist(cfg);
    case Command::diag_rect: return do_diag_rect(cfg);
    case Command::limit_dist: return do_limit_dist(cfg);
  }
  throw std::logic_error("unhandled command");
}

std::string output_path(const RunConfig& cfg, Format format) {
  if (!cfg.out.empty()) {
    const fs::path p(cfg.out);
    const char* dir = std::getenv("ANNULUS_OUT_DIR");
    if (p.is_relative() && dir != nullptr && *dir != '\0') return (fs::path(dir) / p).string();
    return cfg.out;
  }
  const char* dir = std::getenv("ANNULUS_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return {};
  const std::string ext = format == Format::csv ? ".csv" : ".json";
  return (fs::path(dir) / (command_name(cfg.command) + ext)).string();
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Report rep = execute(cfg);
    Format format = cfg.format.value_or(default_format(cfg.command));
    if (format == Format::csv && rep.csv.empty()) format = Format::json;
    const std::string path = output_path(cfg, format);
    if (!path.empty()) {
      const fs::path p(path);
      if (p.has_parent_path()) fs::create_directories(p.parent_path());
      std::ofstream file(p, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
      if (format == Format::csv) {
        file << rep.csv;
      } else {
        file << rep.json.dump(2) << '\n';
      }
      if (!file) throw std::runtime_error("failed writing '" + path + "'");
    }
    out << command_name(cfg.command) << ": " << rep.summary;
    if (!path.empty()) out << " -> " << path;
    out << '\n';
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

RunConfig parse_run_args(const std::vector<std::string>& args) {
  try {
    auto parsed = parse_all(args);
    if (parsed.is_verify) throw UsageError("verify is not an experiment");
    return parsed.config;
  } catch (const CLI::Error& e) {
    throw UsageError(e.what());
  } catch (const HelpRequested&) {
    throw UsageError("help requested");
  }
}

int verify(const std::string& golden_dir, std::ostream& out, std::ostream& err) {
  const fs::path dir(golden_dir);
  if (!fs::is_directory(dir)) {
    err << "error: golden directory '" << golden_dir << "' does not exist\n";
    return kValidationError;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    err << "error: no golden records in '" << golden_dir << "'\n";
    return kValidationError;
  }
  bool all_pass = true;
  char line[512];
  std::snprintf(line, sizeof line, "%-28s %-34s %22s %22s %10s  %s\n", "record", "field", "expected",
                "actual", "tolerance", "status");
  out << line;
  for (const auto& file : files) {
    json record;
    std::vector<std::string> args;
    try {
      std::ifstream in(file);
      record = json::parse(in);
      args = record.at("args").get<std::vector<std::string>>();
    } catch (const std::exception& e) {
      err << "error: malformed golden record " << file.filename().string() << ": " << e.what() << '\n';
      return kValidationError;
    }
    Report rep;
    try {
      rep = execute(parse_run_args(args));
    } catch (const std::exception& e) {
      err << "error: " << file.filename().string() << " failed to run: " << e.what() << '\n';
      all_pass = false;
      continue;
    }
    for (const auto& check : record.at("checks")) {
      const std::string pointer = check.at("field").get<std::string>();
      const double expected = check.at("expected").get<double>();
      const double tol = check.value("tolerance", 0.0);
      double actual = std::nan("");
      try {
        actual = resolve_pointer(rep.json, pointer).get<double>();
      } catch (const std::exception&) {
      }
      const bool pass = std::fabs(actual - expected) <= tol;
      all_pass = all_pass && pass;
      std::snprintf(line, sizeof line, "%-28s %-34s %22.15g %22.15g %10.3g  %s\n",
                    file.stem().string().c_str(), pointer.c_str(), expected, actual, tol,
                    pass ? "PASS" : "FAIL");
      out << line;
      if (!pass) {
        err << "mismatch in " << file.filename().string() << " at " << pointer << ": expected "
            << num(expected) << ", got " << num(actual) << " (diff " << num(actual - expected)
            << ", tolerance " << num(tol) << ")\n";
      }
    }
  }
  return all_pass ? kOk : kInternalError;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  Parsed parsed;
  try {
    parsed = parse_all(args);
  } catch (const HelpRequested& help) {
    out << help.text;
    return kOk;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  if (parsed.is_verify) return verify(parsed.golden_dir, out, err);
  return run(parsed.config, out, err);
}

}  // namespace annulus::cli

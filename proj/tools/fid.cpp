#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fid/dataio.hpp"
#include "fid/decision.hpp"
#include "fid/experiments.hpp"
#include "fid/models.hpp"
#include "fid/special.hpp"
#include "fid/version.hpp"

namespace {

using json = nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::map<std::string, double> parse_stats(
    const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw UsageError("--stat expects key=value, got '" + tok + "'");
      try {
        out[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
      } catch (const std::exception&) {
        throw UsageError("--stat '" + tok + "': not a number");
      }
    }
  }
  return out;
}

double need_stat(const std::map<std::string, double>& stats,
                 const std::string& key) {
  const auto it = stats.find(key);
  if (it == stats.end()) throw UsageError("missing required --stat " + key);
  return it->second;
}

struct SampleArgs {
  std::string model;
  std::vector<std::string> stats;
  std::string data_path;
  int n = 5;
  long m = 1000;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 1;
};

fid::FiducialDraws draw_for_model(const SampleArgs& a,
                                  std::map<std::string, double>& stats_used) {
  const auto stats = parse_stats(a.stats);
  fid::RandomStream stream(a.seed, 1);
  const auto m = static_cast<std::size_t>(a.m);
  if (a.model == "exponential") {
    const double mean = need_stat(stats, "mean");
    stats_used = {{"mean", mean}, {"n", static_cast<double>(a.n)}};
    return fid::fiducial_sample(fid::exponential_scale_model(a.n), {mean},
                                stream, m);
  }
  if (a.model == "uniform-interval") {
    const double lo = need_stat(stats, "min");
    const double hi = need_stat(stats, "max");
    stats_used = {{"min", lo}, {"max", hi}, {"n", static_cast<double>(a.n)}};
    return fid::fiducial_sample(fid::uniform_interval_model(a.n), {lo, hi},
                                stream, m);
  }
  if (a.model == "normal") {
    const double mean = need_stat(stats, "mean");
    const double sd = need_stat(stats, "sd");
    stats_used = {{"mean", mean}, {"sd", sd}, {"n", static_cast<double>(a.n)}};
    return fid::fiducial_sample(fid::normal_location_scale_model(a.n),
                                {mean, sd}, stream, m);
  }
  if (a.model == "gamma") {
    if (a.data_path.empty())
      throw UsageError("--model gamma requires --data with raw observations");
    const fid::Vec y = fid::read_values(a.data_path);
    stats_used = {{"n", static_cast<double>(y.size())}};
    return fid::gamma_fiducial_sample(y, m, stream);
  }
  if (a.model == "behrens-fisher") {
    fid::BehrensFisherData d;
    if (!a.data_path.empty()) {
      const auto [g1, g2] = fid::read_groups(a.data_path);
      auto summarize = [](const std::vector<double>& g, double& xbar,
                          double& s, int& n) {
        n = static_cast<int>(g.size());
        xbar = 0;
        for (double v : g) xbar += v;
        xbar /= n;
        double ss = 0;
        for (double v : g) ss += (v - xbar) * (v - xbar);
        s = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
      };
      summarize(g1, d.xbar1, d.s1, d.n1);
      summarize(g2, d.xbar2, d.s2, d.n2);
    } else {
      d.xbar1 = need_stat(stats, "mean1");
      d.s1 = need_stat(stats, "sd1");
      d.n1 = static_cast<int>(need_stat(stats, "n1"));
      d.xbar2 = need_stat(stats, "mean2");
      d.s2 = need_stat(stats, "sd2");
      d.n2 = static_cast<int>(need_stat(stats, "n2"));
    }
    stats_used = {{"mean1", d.xbar1}, {"sd1", d.s1},
                  {"n1", static_cast<double>(d.n1)}, {"mean2", d.xbar2},
                  {"sd2", d.s2}, {"n2", static_cast<double>(d.n2)}};
    return fid::behrens_fisher_draws(d, m, stream);
  }
  if (a.model == "octonion") {
    if (a.data_path.empty())
      throw UsageError("--model octonion requires --data with 8 coordinates");
    const fid::Vec x = fid::read_values(a.data_path);
    if (x.size() != 8)
      throw UsageError("octonion data must have exactly 8 values");
    return fid::fiducial_sample(fid::octonion_model(), x, stream, m);
  }
  throw UsageError("unknown model: " + a.model);
}

int cmd_sample(const SampleArgs& a) {
  fid::set_max_threads(a.threads);
  std::map<std::string, double> stats_used;
  const fid::FiducialDraws d = draw_for_model(a, stats_used);

  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + a.out);
  const std::size_t dim = d.draws.empty() ? 0 : d.draws[0].size();
  out << "draw_index";
  for (std::size_t k = 0; k < dim; ++k) out << ",comp_" << k;
  out << '\n';
  for (std::size_t j = 0; j < d.draws.size(); ++j) {
    out << j;
    for (std::size_t k = 0; k < dim; ++k) out << ',' << fmt(d.draws[j][k]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + a.out);

  json meta;
  meta["model"] = a.model;
  meta["stats"] = stats_used;
  meta["m"] = a.m;
  meta["seed"] = a.seed;
  meta["threads"] = a.threads;
  meta["version"] = fid::kVersion;
  meta["weights_uniform"] = true;
  std::ofstream mout(a.out + ".meta.json", std::ios::binary);
  if (!mout)
    throw std::runtime_error("cannot open for writing: " + a.out +
                             ".meta.json");
  mout << meta.dump(2) << '\n';
  return 0;
}

struct EstimateArgs {
  std::string model;
  std::string loss = "squared";
  std::vector<std::string> stats;
  std::string data_path;
  int n = 5;
  long m = 100000;
  std::uint64_t seed = 0;
  int threads = 1;
};

fid::LossKind loss_from_name(const std::string& name) {
  if (name == "squared") return fid::LossKind::squared_error;
  if (name == "log-squared") return fid::LossKind::log_squared;
  if (name == "octonion-relative") return fid::LossKind::octonion_relative;
  if (name == "bernoulli-arc") return fid::LossKind::bernoulli_arc_sq;
  if (name == "hellinger") return fid::LossKind::hellinger_sq;
  throw UsageError("unknown loss: " + name);
}

int cmd_estimate(const EstimateArgs& a) {
  fid::set_max_threads(a.threads);
  const auto stats = parse_stats(a.stats);
  const fid::InvariantLoss loss{loss_from_name(a.loss)};
  fid::RandomStream stream(a.seed, 2);
  const auto m = static_cast<std::size_t>(a.m);

  if (a.model == "exponential") {
    const double mean = need_stat(stats, "mean");
    const fid::FiducialDraws d = fid::fiducial_sample(
        fid::exponential_scale_model(a.n), {mean}, stream, m);
    const fid::Vec mc = fid::optimal_action(loss, d);
    std::cout << "estimate " << fmt(mc[0]) << '\n';
    if (loss.kind == fid::LossKind::log_squared) {
      const double cf = fid::exp_optimal_estimator(mean, a.n);
      std::cout << "closed_form " << fmt(cf) << '\n'
                << "gap " << fmt(mc[0] - cf) << '\n';
    }
    return 0;
  }
  if (a.model == "uniform-interval") {
    const double lo = need_stat(stats, "min");
    const double hi = need_stat(stats, "max");
    const fid::FiducialDraws d = fid::fiducial_sample(
        fid::uniform_interval_model(a.n), {lo, hi}, stream, m);
    const fid::Vec mc = fid::optimal_action(loss, d);
    std::cout << "estimate " << fmt(mc[0]) << '\n';
    if (loss.kind == fid::LossKind::squared_error) {
      const double cf = fid::uniform_optimal_estimator(lo, hi);
      std::cout << "closed_form " << fmt(cf) << '\n'
                << "gap " << fmt(mc[0] - cf) << '\n';
    }
    return 0;
  }
  if (a.model == "gamma") {
    if (a.data_path.empty())
      throw UsageError("--model gamma requires --data with raw observations");
    const fid::Vec y = fid::read_values(a.data_path);
    const fid::FiducialDraws d = fid::gamma_fiducial_sample(y, m, stream);
    const fid::Vec est =
        fid::gamma_log_estimator(d, [](const fid::Vec& t) { return t; });
    std::cout << "alpha " << fmt(est[0]) << '\n'
              << "beta " << fmt(est[1]) << '\n';
    return 0;
  }
  throw UsageError("unknown model: " + a.model);
}

struct ExperimentArgs {
  std::string name;
  std::string spec_path;
  std::string model;
  long reps = 0;
  long m = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::string format = "csv";
  int threads = 1;
};

int cmd_experiment(const ExperimentArgs& a) {
  fid::set_max_threads(a.threads);
  fid::ExperimentSpec spec;
  if (!a.spec_path.empty()) {
    try {
      spec = fid::parse_spec_file(a.spec_path);
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
  } else if (!a.name.empty()) {
    try {
      spec.kind = fid::experiment_from_name(a.name);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else {
    throw UsageError("experiment: give a name or --spec FILE");
  }
  if (!a.model.empty()) spec.model = a.model;
  if (a.reps > 0) spec.reps = a.reps;
  if (a.m > 0) spec.m = a.m;
  if (a.seed_set) spec.seed = a.seed;

  const fid::ExperimentReport report = fid::run_experiment(spec);
  for (const auto& c : report.cells) {
    std::cout << (c.pass ? "PASS" : "FAIL")
              << (c.negative_control ? " [negative control]" : "") << ' '
              << c.name << " estimate=" << fmt(c.estimate)
              << " tolerance=" << fmt(c.tolerance) << '\n';
  }
  if (!a.out.empty()) {
    const auto format = a.format == "json" ? fid::ReportFormat::json
                                           : fid::ReportFormat::csv;
    fid::emit_report(report, format, a.out);
  }
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fiducial samplers, equivariant estimators, and Monte Carlo "
               "verification experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fid::kVersion);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "draw from a fiducial distribution");
  sample->add_option("--model", sa.model, "model id: exponential, uniform-interval, normal, gamma, octonion, behrens-fisher")->required();
  sample->add_option("--stat", sa.stats, "inline sufficient statistics, key=value (repeatable or comma separated)");
  sample->add_option("--data", sa.data_path, "input data file");
  sample->add_option("--n", sa.n, "sample size behind the statistics");
  sample->add_option("--m", sa.m, "number of fiducial draws");
  sample->add_option("--seed", sa.seed, "random seed")->required();
  sample->add_option("--out", sa.out, "output CSV path")->required();
  sample->add_option("--threads", sa.threads, "worker thread cap");

  EstimateArgs ea;
  auto* estimate = app.add_subcommand("estimate", "optimal equivariant estimate under an invariant loss");
  estimate->add_option("--model", ea.model, "model id: exponential, uniform-interval, gamma")->required();
  estimate->add_option("--loss", ea.loss, "loss: squared, log-squared, octonion-relative, bernoulli-arc, hellinger");
  estimate->add_option("--stat", ea.stats, "inline sufficient statistics, key=value");
  estimate->add_option("--data", ea.data_path, "input data file");
  estimate->add_option("--n", ea.n, "sample size behind the statistics");
  estimate->add_option("--m", ea.m, "fiducial draws for the Monte Carlo minimizer");
  estimate->add_option("--seed", ea.seed, "random seed")->required();
  estimate->add_option("--threads", ea.threads, "worker thread cap");

  ExperimentArgs xa;
  auto* experiment = app.add_subcommand("experiment", "run a verification experiment and write a report");
  experiment->add_option("name", xa.name, "coverage, risk-equality, dominance, octonion-suite, behrens-fisher");
  experiment->add_option("--spec", xa.spec_path, "key = value spec file");
  experiment->add_option("--model", xa.model, "model id for coverage");
  experiment->add_option("--reps", xa.reps, "replications (0 = experiment default)");
  experiment->add_option("--m", xa.m, "fiducial draws per replication (0 = default)");
  experiment->add_option("--seed", xa.seed, "random seed")->required();
  experiment->add_option("--out", xa.out, "report output path");
  experiment->add_option("--format", xa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  experiment->add_option("--threads", xa.threads, "worker thread cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage problems exit 2; --help exits 0
  }

  try {
    if (sample->parsed()) return cmd_sample(sa);
    if (estimate->parsed()) return cmd_estimate(ea);
    xa.seed_set = true;  // --seed is a required flag on this subcommand
    return cmd_experiment(xa);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

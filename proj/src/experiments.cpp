#include "fid/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fid/algebra.hpp"
#include "fid/decision.hpp"
#include "fid/models.hpp"
#include "fid/special.hpp"
#include "fid/version.hpp"

namespace fid {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double get_param(const ExperimentSpec& spec, const std::string& key,
                 double fallback) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

double binomial_se(double p, long reps) {
  return std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(reps));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Timer {
  Clock::time_point start = Clock::now();
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

ExperimentReport make_report(const ExperimentSpec& spec) {
  ExperimentReport r;
  r.spec = spec;
  r.version = kVersion;
  return r;
}

// Coverage cells from per-replication CDF values p_r: one KS-uniformity cell
// and one central-interval coverage cell per nominal level.
void coverage_cells(ExperimentReport& rep, std::vector<double> pvals,
                    const std::vector<double>& levels, double ks_alpha,
                    const std::string& prefix) {
  const long reps = static_cast<long>(pvals.size());
  for (double level : levels) {
    const double lo = 0.5 * (1.0 - level);
    const double hi = 1.0 - lo;
    long covered = 0;
    for (double p : pvals)
      if (p > lo && p < hi) ++covered;
    const double cov = static_cast<double>(covered) / reps;
    const double se = binomial_se(level, reps);
    const double tol = std::max(0.01, 3.0 * se);
    ReportCell cell;
    cell.name = prefix + "coverage@" + fmt(level);
    cell.estimate = cov;
    cell.se = se;
    cell.tolerance = tol;
    cell.pass = std::fabs(cov - level) <= tol;
    cell.reps = reps;
    rep.cells.push_back(cell);
  }
  std::sort(pvals.begin(), pvals.end());
  const double ks = ks_statistic(pvals);
  const double crit = ks_critical_value(pvals.size(), ks_alpha);
  ReportCell cell;
  cell.name = prefix + "ks_uniform";
  cell.estimate = ks;
  cell.se = 0;
  cell.tolerance = crit;
  cell.pass = ks < crit;
  cell.reps = reps;
  rep.cells.push_back(cell);
}

}  // namespace

const char* experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::coverage: return "coverage";
    case ExperimentKind::risk_equality: return "risk-equality";
    case ExperimentKind::dominance: return "dominance";
    case ExperimentKind::octonion_suite: return "octonion-suite";
    case ExperimentKind::behrens_fisher: return "behrens-fisher";
  }
  return "unknown";
}

ExperimentKind experiment_from_name(const std::string& name) {
  if (name == "coverage") return ExperimentKind::coverage;
  if (name == "risk-equality" || name == "risk_equality")
    return ExperimentKind::risk_equality;
  if (name == "dominance") return ExperimentKind::dominance;
  if (name == "octonion-suite" || name == "octonion_suite")
    return ExperimentKind::octonion_suite;
  if (name == "behrens-fisher" || name == "behrens_fisher")
    return ExperimentKind::behrens_fisher;
  throw std::invalid_argument("unknown experiment: " + name);
}

bool ExperimentReport::all_pass() const {
  for (const auto& c : cells) {
    if (c.negative_control ? c.pass : !c.pass) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// coverage
// ---------------------------------------------------------------------------

ExperimentReport run_coverage(const ExperimentSpec& spec) {
  Timer timer;
  ExperimentReport rep = make_report(spec);
  RandomStream base(spec.seed, 101);

  if (spec.model == "exponential" || spec.model.empty()) {
    const int n = static_cast<int>(get_param(spec, "n", 5));
    const double beta = get_param(spec, "beta", 1.0);
    const long reps = spec.reps > 0 ? spec.reps : 10000;
    const long m = spec.m > 0 ? spec.m : 4000;
    const FiducialModel model = exponential_scale_model(n);
    std::vector<double> pvals(static_cast<std::size_t>(reps));
    std::vector<double> pvals_wrong(static_cast<std::size_t>(reps));
    for (long r = 0; r < reps; ++r) {
      RandomStream ds = base.substream(2 * static_cast<std::uint64_t>(r));
      const Vec x = model.relation(model.draw_u(ds), {beta});
      const FiducialDraws d = fiducial_sample(
          model, x, base.substream(2 * static_cast<std::uint64_t>(r) + 1),
          static_cast<std::size_t>(m));
      pvals[static_cast<std::size_t>(r)] = fiducial_cdf_at(d, 0, beta);
      // negative control: CDF evaluated at a mislocated parameter
      pvals_wrong[static_cast<std::size_t>(r)] =
          fiducial_cdf_at(d, 0, 1.25 * beta);
    }
    coverage_cells(rep, pvals, spec.levels, 0.01, "exponential/");
    std::sort(pvals_wrong.begin(), pvals_wrong.end());
    ReportCell nc;
    nc.name = "exponential/negative_control_ks_shifted_theta";
    nc.estimate = ks_statistic(pvals_wrong);
    nc.tolerance = ks_critical_value(pvals_wrong.size(), 0.01);
    nc.pass = nc.estimate < nc.tolerance;
    nc.reps = reps;
    nc.negative_control = true;
    rep.cells.push_back(nc);
  } else if (spec.model == "uniform-interval") {
    const int n = static_cast<int>(get_param(spec, "n", 4));
    const double theta = get_param(spec, "theta", 0.0);
    const long reps = spec.reps > 0 ? spec.reps : 10000;
    const long m = spec.m > 0 ? spec.m : 4000;
    const FiducialModel model = uniform_interval_model(n);
    std::vector<double> pvals(static_cast<std::size_t>(reps));
    for (long r = 0; r < reps; ++r) {
      RandomStream ds = base.substream(2 * static_cast<std::uint64_t>(r));
      const Vec x = model.relation(model.draw_u(ds), {theta});
      const FiducialDraws d = fiducial_sample(
          model, x, base.substream(2 * static_cast<std::uint64_t>(r) + 1),
          static_cast<std::size_t>(m));
      pvals[static_cast<std::size_t>(r)] = fiducial_cdf_at(d, 0, theta);
    }
    coverage_cells(rep, pvals, spec.levels, 0.01, "uniform-interval/");
  } else if (spec.model == "gamma") {
    const int n = static_cast<int>(get_param(spec, "n", 10));
    const double alpha = get_param(spec, "alpha", 2.0);
    const double beta = get_param(spec, "beta", 3.0);
    const long reps = spec.reps > 0 ? spec.reps : 500;
    const int inner_mc =
        static_cast<int>(get_param(spec, "inner_mc", 4000));
    std::vector<double> pvals(static_cast<std::size_t>(reps));
    for (long r = 0; r < reps; ++r) {
      RandomStream ds = base.substream(2 * static_cast<std::uint64_t>(r));
      Vec y(static_cast<std::size_t>(n));
      for (double& v : y) v = beta * ds.gamma(alpha);
      const double w = bartlett_statistic(y);
      // Under common random numbers the alpha-marginal fiducial CDF at the
      // true alpha equals 1 - F_hat_W(w; alpha).
      BartlettCdfEstimator est(
          n, inner_mc,
          base.substream(2 * static_cast<std::uint64_t>(r) + 1));
      pvals[static_cast<std::size_t>(r)] = 1.0 - est.cdf(w, alpha);
    }
    coverage_cells(rep, pvals, spec.levels, 0.05, "gamma-alpha/");
    rep.notes.push_back(
        "gamma alpha-marginal CDF evaluated directly from the Bartlett CDF "
        "estimate under common random numbers");
  } else {
    throw std::invalid_argument("run_coverage: unsupported model " +
                                spec.model);
  }
  rep.wall_seconds = timer.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// risk equality (direct vs fiducial risk for equivariant rules)
// ---------------------------------------------------------------------------

namespace {

struct EqualityCase {
  std::string name;
  FiducialModel model;
  DecisionRule rule;
  InvariantLoss loss;
  Vec theta_a, theta_b;
  bool negative_control = false;
};

void equality_cells(ExperimentReport& rep, const EqualityCase& cse,
                    std::size_t reps, std::size_t m, RandomStream stream) {
  const RiskEstimate rd =
      risk_direct(cse.model, cse.theta_a, cse.rule, cse.loss, reps,
                  stream.substream(1));
  const RiskEstimate rf =
      risk_fiducial(cse.model, cse.theta_a, cse.rule, cse.loss, reps, m,
                    stream.substream(2));
  {
    const double comb = std::sqrt(rd.se * rd.se + rf.se * rf.se);
    ReportCell cell;
    cell.name = cse.name + "/equality";
    cell.estimate = rd.value - rf.value;
    cell.se = comb;
    cell.tolerance = 4.0 * comb;
    cell.pass = std::fabs(cell.estimate) <= cell.tolerance;
    cell.reps = static_cast<long>(reps);
    cell.negative_control = cse.negative_control;
    rep.cells.push_back(cell);
  }
  if (!cse.negative_control) {
    const RiskEstimate rd_b =
        risk_direct(cse.model, cse.theta_b, cse.rule, cse.loss, reps,
                    stream.substream(3));
    const double comb = std::sqrt(rd.se * rd.se + rd_b.se * rd_b.se);
    ReportCell cell;
    cell.name = cse.name + "/risk_constancy";
    cell.estimate = rd.value - rd_b.value;
    cell.se = comb;
    cell.tolerance = 4.0 * comb;
    cell.pass = std::fabs(cell.estimate) <= cell.tolerance;
    cell.reps = static_cast<long>(reps);
    rep.cells.push_back(cell);
  }
}

}  // namespace

ExperimentReport run_risk_equality(const ExperimentSpec& spec) {
  Timer timer;
  ExperimentReport rep = make_report(spec);
  const auto reps =
      static_cast<std::size_t>(spec.reps > 0 ? spec.reps : 100000);
  const auto m = static_cast<std::size_t>(spec.m > 0 ? spec.m : 200);
  RandomStream base(spec.seed, 202);

  std::vector<EqualityCase> cases;
  {
    const int n = 5;
    EqualityCase c;
    c.name = "exponential-logsq-optimal";
    c.model = exponential_scale_model(n);
    const double factor = std::exp(std::log(static_cast<double>(n)) -
                                   digamma(static_cast<double>(n)));
    c.rule = {[factor](const Vec& x) -> Vec { return {x[0] * factor}; },
              "optimal"};
    c.loss = {LossKind::log_squared};
    c.theta_a = {1.0};
    c.theta_b = {2.7};
    cases.push_back(std::move(c));
  }
  {
    EqualityCase c;
    c.name = "uniform-squared-midrange";
    c.model = uniform_interval_model(4);
    c.rule = {[](const Vec& x) -> Vec {
                return {0.5 * (x[0] + x[1]) - 0.5};
              },
              "midrange-1/2"};
    c.loss = {LossKind::squared_error};
    c.theta_a = {0.0};
    c.theta_b = {1.5};
    cases.push_back(std::move(c));
  }
  {
    const int n = 3;
    EqualityCase c;
    c.name = "location-squared-mean";
    c.model = location_model(1, n);
    c.rule = {[n](const Vec& x) -> Vec {
                double s = 0;
                for (double v : x) s += v;
                return {s / n};
              },
              "mean"};
    c.loss = {LossKind::squared_error};
    c.theta_a = {0.0};
    c.theta_b = {2.0};
    cases.push_back(std::move(c));
  }
  {
    // non-equivariant under scaling: the additive offset breaks delta(cx) =
    // c delta(x), so the direct/fiducial risk equality must fail detectably
    EqualityCase c;
    c.name = "negative-control-offset-rule";
    c.model = exponential_scale_model(5);
    c.rule = {[](const Vec& x) -> Vec { return {x[0] + 0.5}; },
              "mean+0.5"};
    c.loss = {LossKind::log_squared};
    c.theta_a = {1.0};
    c.theta_b = {2.7};
    c.negative_control = true;
    cases.push_back(std::move(c));
  }

  for (std::size_t i = 0; i < cases.size(); ++i)
    equality_cells(rep, cases[i], reps, m, base.substream(i));

  // the location case has a known risk: variance of the mean of 3 Gaussians
  {
    const RiskEstimate rd = risk_direct(
        cases[2].model, cases[2].theta_a, cases[2].rule, cases[2].loss, reps,
        base.substream(90));
    ReportCell cell;
    cell.name = "location-squared-mean/risk_value";
    cell.estimate = rd.value;
    cell.se = rd.se;
    cell.tolerance = 4.0 * rd.se;
    cell.pass = std::fabs(rd.value - 1.0 / 3.0) <= cell.tolerance;
    cell.reps = static_cast<long>(reps);
    rep.cells.push_back(cell);
  }
  rep.wall_seconds = timer.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// dominance
// ---------------------------------------------------------------------------

ExperimentReport run_dominance(const ExperimentSpec& spec) {
  Timer timer;
  ExperimentReport rep = make_report(spec);
  const auto reps =
      static_cast<std::size_t>(spec.reps > 0 ? spec.reps : 1000000);
  RandomStream base(spec.seed, 303);

  // exponential, log_squared: optimal vs the plain mean, common random
  // numbers
  {
    const int n = 5;
    const double theta = 1.0;
    const double factor = std::exp(std::log(static_cast<double>(n)) -
                                   digamma(static_cast<double>(n)));
    RandomStream s = base.substream(0);
    double sum = 0, sum2 = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double x = theta * s.gamma(n) / n;
      const double lopt = std::pow(std::log(theta) - std::log(x * factor), 2);
      const double lmean = std::pow(std::log(theta) - std::log(x), 2);
      const double diff = lmean - lopt;
      sum += diff;
      sum2 += diff * diff;
    }
    const double nn = static_cast<double>(reps);
    const double margin = sum / nn;
    const double var =
        std::max(0.0, sum2 / nn - margin * margin) * nn / (nn - 1.0);
    const double se = std::sqrt(var / nn);
    ReportCell cell;
    cell.name = "exponential-logsq/optimal_vs_mean_margin";
    cell.estimate = margin;
    cell.se = se;
    cell.tolerance = 4.0 * se;
    cell.pass = margin > cell.tolerance;
    cell.reps = static_cast<long>(reps);
    rep.cells.push_back(cell);
  }

  // uniform interval, squared error: midrange - 1/2 vs min - E[U_(1)]
  {
    const int n = 4;
    const double theta = 0.0;
    const FiducialModel model = uniform_interval_model(n);
    RandomStream s = base.substream(1);
    double sum = 0, sum2 = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const Vec x = model.relation(model.draw_u(s), {theta});
      const double d1 = 0.5 * (x[0] + x[1]) - 0.5;
      const double d2 = x[0] - 1.0 / (n + 1);
      const double diff = (d2 - theta) * (d2 - theta) -
                          (d1 - theta) * (d1 - theta);
      sum += diff;
      sum2 += diff * diff;
    }
    const double nn = static_cast<double>(reps);
    const double margin = sum / nn;
    const double var =
        std::max(0.0, sum2 / nn - margin * margin) * nn / (nn - 1.0);
    const double se = std::sqrt(var / nn);
    ReportCell cell;
    cell.name = "uniform-squared/midrange_vs_min_margin";
    cell.estimate = margin;
    cell.se = se;
    cell.tolerance = 4.0 * se;
    cell.pass = margin > cell.tolerance;
    cell.reps = static_cast<long>(reps);
    rep.cells.push_back(cell);
  }

  // degenerate point-mass U: the fiducial-optimal octonion rule has zero risk
  {
    const FiducialModel model = octonion_model([](RandomStream&) -> Vec {
      Vec u(8, 0.0);
      u[0] = 1.0;
      return u;
    });
    const DecisionRule identity{[](const Vec& x) { return x; }, "identity"};
    const InvariantLoss loss{LossKind::octonion_relative};
    Vec theta(8, 0.0);
    theta[0] = 2.0;
    theta[3] = -1.0;
    const RiskEstimate rd =
        risk_direct(model, theta, identity, loss, 1000, base.substream(2));
    ReportCell cell;
    cell.name = "octonion-pointmass/all_rules_tie_at_zero";
    cell.estimate = rd.value;
    cell.se = rd.se;
    cell.tolerance = 1e-12;
    cell.pass = rd.value <= cell.tolerance;
    cell.reps = 1000;
    rep.cells.push_back(cell);
  }
  rep.wall_seconds = timer.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// octonion identity suite
// ---------------------------------------------------------------------------

ExperimentReport run_octonion_suite(const ExperimentSpec& spec) {
  Timer timer;
  ExperimentReport rep = make_report(spec);
  const auto reps =
      static_cast<std::size_t>(spec.reps > 0 ? spec.reps : 10000);
  RandomStream s = RandomStream(spec.seed, 404).substream(0);

  auto random_oct = [&s]() {
    CDElement e(3);
    for (int i = 0; i < 8; ++i) e[i] = s.normal();
    return e;
  };

  double v_norm = 0, v_alt = 0, v_inv = 0, v_div = 0;
  const CDElement unit = CDElement::unit(3);
  for (std::size_t r = 0; r < reps; ++r) {
    const CDElement x = random_oct();
    const CDElement y = random_oct();
    // norm multiplicativity
    const double nxy = cd_norm_sq(cd_mul(x, y));
    const double nx = cd_norm_sq(x), ny = cd_norm_sq(y);
    v_norm = std::max(v_norm, std::fabs(nxy - nx * ny) / (nx * ny));
    // alternativity, both forms
    const double sx = std::sqrt(cd_norm_sq(x)), sy = std::sqrt(cd_norm_sq(y));
    v_alt = std::max(
        v_alt, cd_dist(cd_mul(x, cd_mul(x, y)), cd_mul(cd_mul(x, x), y)) /
                   (sx * sx * sy));
    v_alt = std::max(
        v_alt, cd_dist(cd_mul(cd_mul(y, x), x), cd_mul(y, cd_mul(x, x))) /
                   (sx * sx * sy));
    // two-sided inverse
    v_inv = std::max(v_inv, cd_dist(cd_mul(x, cd_inv(x)), unit));
    v_inv = std::max(v_inv, cd_dist(cd_mul(cd_inv(x), x), unit));
    // right-division solvability
    v_div = std::max(v_div,
                     cd_dist(cd_mul(right_divide(x, y), y), x) / std::max(1.0, sx));
  }

  // exhaustive associator scan over basis triples; the witness magnitude is
  // exactly 2 for octonions
  double assoc_max = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) {
        const CDElement ei = CDElement::basis(3, i);
        const CDElement ej = CDElement::basis(3, j);
        const CDElement ek = CDElement::basis(3, k);
        const CDElement lhs = cd_mul(cd_mul(ei, ej), ek);
        const CDElement rhs = cd_mul(ei, cd_mul(ej, ek));
        for (int c = 0; c < 8; ++c)
          assoc_max = std::max(assoc_max, std::fabs(lhs[c] - rhs[c]));
      }

  auto push = [&](const std::string& name, double est, double tol,
                  bool pass) {
    ReportCell cell;
    cell.name = name;
    cell.estimate = est;
    cell.tolerance = tol;
    cell.pass = pass;
    cell.reps = static_cast<long>(reps);
    rep.cells.push_back(cell);
  };
  push("norm_multiplicativity_max_rel", v_norm, 1e-10, v_norm < 1e-10);
  push("alternativity_max_rel", v_alt, 1e-10, v_alt < 1e-10);
  push("two_sided_inverse_max", v_inv, 1e-10, v_inv < 1e-10);
  push("right_division_max_rel", v_div, 1e-10, v_div < 1e-10);
  push("associativity_witness_magnitude", assoc_max, 2.0,
       std::fabs(assoc_max - 2.0) < 1e-12);
  rep.wall_seconds = timer.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Behrens-Fisher grid
// ---------------------------------------------------------------------------

ExperimentReport run_behrens_fisher(const ExperimentSpec& spec) {
  Timer timer;
  ExperimentReport rep = make_report(spec);
  const long reps = spec.reps > 0 ? spec.reps : 20000;
  const auto m = static_cast<std::size_t>(spec.m > 0 ? spec.m : 800);
  RandomStream base(spec.seed, 505);
  rep.notes.push_back(
      "grid: n in {3,5,10} per group, variance ratio in {0.25,1,4}; verdicts "
      "read as consistent/inconsistent with conservative 0.95 coverage");

  const int sizes[] = {3, 5, 10};
  const double ratios[] = {0.25, 1.0, 4.0};
  std::uint64_t cell_index = 0;
  for (int n1 : sizes)
    for (int n2 : sizes)
      for (double ratio : ratios) {
        const double sigma1 = std::sqrt(ratio), sigma2 = 1.0;
        long covered = 0;
        RandomStream cs = base.substream(cell_index);
        for (long r = 0; r < reps; ++r) {
          RandomStream ds = cs.substream(2 * static_cast<std::uint64_t>(r));
          BehrensFisherData d;
          d.n1 = n1;
          d.n2 = n2;
          d.xbar1 = sigma1 * ds.normal() / std::sqrt(static_cast<double>(n1));
          d.s1 = sigma1 * ds.chi(n1 - 1) / std::sqrt(n1 - 1.0);
          d.xbar2 = sigma2 * ds.normal() / std::sqrt(static_cast<double>(n2));
          d.s2 = sigma2 * ds.chi(n2 - 1) / std::sqrt(n2 - 1.0);
          const FiducialDraws fd = behrens_fisher_draws(
              d, m, cs.substream(2 * static_cast<std::uint64_t>(r) + 1));
          const double p = fiducial_cdf_at(fd, 0, 0.0);  // true mu1-mu2 = 0
          if (p > 0.025 && p < 0.975) ++covered;
        }
        const double cov = static_cast<double>(covered) / reps;
        const double se = binomial_se(0.95, reps);
        ReportCell cell;
        cell.name = "n1=" + std::to_string(n1) + ",n2=" + std::to_string(n2) +
                    ",ratio=" + fmt(ratio);
        cell.estimate = cov;
        cell.se = se;
        cell.tolerance = 0.95 - 2.0 * se;
        cell.pass = cov >= cell.tolerance;
        cell.reps = reps;
        rep.cells.push_back(cell);
        ++cell_index;
      }
  rep.wall_seconds = timer.seconds();
  return rep;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::coverage: return run_coverage(spec);
    case ExperimentKind::risk_equality: return run_risk_equality(spec);
    case ExperimentKind::dominance: return run_dominance(spec);
    case ExperimentKind::octonion_suite: return run_octonion_suite(spec);
    case ExperimentKind::behrens_fisher: return run_behrens_fisher(spec);
  }
  throw std::invalid_argument("run_experiment: unknown kind");
}

// ---------------------------------------------------------------------------
// spec files and reports
// ---------------------------------------------------------------------------

ExperimentSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ExperimentSpec spec;
  std::string line;
  int line_no = 0;
  bool have_kind = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected key = value");
    const std::string key = t.substr(0, eq);
    const std::string value = t.substr(eq + 1);
    try {
      if (key == "experiment") {
        spec.kind = experiment_from_name(value);
        have_kind = true;
      } else if (key == "model") {
        spec.model = value;
      } else if (key == "reps") {
        spec.reps = std::stol(value);
      } else if (key == "m") {
        spec.m = std::stol(value);
      } else if (key == "seed") {
        spec.seed = std::stoull(value);
      } else if (key == "levels") {
        spec.levels.clear();
        std::stringstream ss(value);
        std::string tok;
        while (std::getline(ss, tok, ','))
          spec.levels.push_back(std::stod(tok));
      } else {
        spec.params[key] = std::stod(value);
      }
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": " + e.what());
    } catch (const std::out_of_range&) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": value out of range");
    }
  }
  if (!have_kind)
    throw std::runtime_error(path + ": missing 'experiment' key");
  return spec;
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  if (format == ReportFormat::csv) {
    out << "experiment,cell,estimate,se,tolerance,pass,reps,seed\n";
    for (const auto& c : report.cells) {
      out << experiment_name(report.spec.kind) << ',' << c.name << ','
          << fmt(c.estimate) << ',' << fmt(c.se) << ',' << fmt(c.tolerance)
          << ',' << (c.pass ? "true" : "false") << ',' << c.reps << ','
          << report.spec.seed << '\n';
    }
  } else {
    json j;
    j["experiment"] = experiment_name(report.spec.kind);
    j["version"] = report.version;
    json sp;
    sp["model"] = report.spec.model;
    sp["params"] = report.spec.params;
    sp["levels"] = report.spec.levels;
    sp["reps"] = report.spec.reps;
    sp["m"] = report.spec.m;
    sp["seed"] = report.spec.seed;
    j["spec"] = sp;
    j["notes"] = report.notes;
    json cells = json::array();
    for (const auto& c : report.cells) {
      json jc;
      jc["cell"] = c.name;
      jc["estimate"] = c.estimate;
      jc["se"] = c.se;
      jc["tolerance"] = c.tolerance;
      jc["pass"] = c.pass;
      jc["reps"] = c.reps;
      jc["negative_control"] = c.negative_control;
      cells.push_back(jc);
    }
    j["cells"] = cells;
    out << j.dump(2) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fid

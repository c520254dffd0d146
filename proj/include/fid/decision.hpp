#pragma once

#include <functional>
#include <string>

#include "fid/fidcore.hpp"

namespace fid {

enum class LossKind {
  squared_error,      // |theta - a|^2, translation invariant
  log_squared,        // (ln theta - ln a)^2, scale invariant
  octonion_relative,  // |theta - a|^2 / |theta|^2, invariant under unit-norm
                      // left multiplication
  bernoulli_arc_sq,   // squared arc distance on the (sqrt p, sqrt q) circle
  hellinger_sq,       // squared Hellinger-arc distance between Exp(theta) and
                      // Exp(a)
};

struct InvariantLoss {
  LossKind kind = LossKind::squared_error;
  double operator()(const Vec& theta, const Vec& a) const;
};

double loss_eval(const InvariantLoss& loss, const Vec& theta, const Vec& a);

/// |arcsin(sqrt p) - arcsin(sqrt a)|: Fisher-metric distance on the Bernoulli
/// parameter arc.
double bernoulli_arc_distance(double p, double a);

/// arccos of a precomputed affinity integral, clamped at 1e-12 tolerance.
double hellinger_distance(double affinity);

struct DecisionRule {
  std::function<Vec(const Vec& data)> estimate;
  std::string label;
};

/// Minimizer of the weighted average loss over the draws. Closed forms for
/// squared_error (weighted mean) and log_squared (geometric mean); other
/// kinds fall back to derivative-free minimization bracketed by the draw
/// range, coordinatewise for multivariate actions.
Vec optimal_action(const InvariantLoss& loss, const FiducialDraws& d);

/// xbar * exp(ln n - digamma(n)): optimal scale estimate under log_squared.
double exp_optimal_estimator(double xbar, int n);

/// (x_min + x_max)/2 - 1/2: optimal location under squared error for the
/// unit-width uniform model.
double uniform_optimal_estimator(double x_min, double x_max);

/// Componentwise exp(E ln h(draws)) for positive h.
Vec gamma_log_estimator(const FiducialDraws& d,
                        const std::function<Vec(const Vec&)>& h);

/// Optimal scalar c* for the octonion problem with delta(1) restricted to
/// real multiples of the unit: closed form
/// c* = mean(Re(T)/|T|^2) / mean(1/|T|^2) over draws T of U^{-1}.
double octonion_optimal_action(const FiducialDraws& draws_at_unit);

struct RiskEstimate {
  double value = 0;
  double se = 0;
};

/// Monte Carlo risk E gamma(theta, rule(X)) with X simulated at theta.
RiskEstimate risk_direct(const FiducialModel& model, const Vec& theta,
                         const DecisionRule& rule, const InvariantLoss& loss,
                         std::size_t reps, RandomStream stream);

/// Average over simulated data of the fiducial expected loss
/// E gamma(Theta^x, rule(x)); agrees with risk_direct for equivariant rules.
/// The reported SE is across data replications and so includes the inner
/// Monte Carlo noise.
RiskEstimate risk_fiducial(const FiducialModel& model, const Vec& theta,
                           const DecisionRule& rule, const InvariantLoss& loss,
                           std::size_t reps, std::size_t m,
                           RandomStream stream);

struct GroupActionSampler {
  std::function<Vec(RandomStream&)> draw_g;
  std::function<Vec(const Vec& g, const Vec& x)> act_data;
  std::function<Vec(const Vec& g, const Vec& a)> act_action;
};

/// Max over trials of the relative distance between rule(g x) and
/// g rule(x); a rule passes at 1e-9.
double equivariance_check(const DecisionRule& rule,
                          const GroupActionSampler& action,
                          const std::function<Vec(RandomStream&)>& data_sampler,
                          std::size_t trials, RandomStream stream);

/// Golden-section minimum of f on [lo, hi] to the given argument tolerance.
double golden_section_minimize(const std::function<double(double)>& f,
                               double lo, double hi, double tol = 1e-8);

inline constexpr double kEquivarianceTol = 1e-9;

}  // namespace fid

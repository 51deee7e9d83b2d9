#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tandem/pair_engine.hpp"

namespace tandem {

/// Monte-Carlo setup. With max_rounds > 1, pairs run the disagreement loop
/// with hint_target=both so both per-role gains take effect; max_rounds = 1
/// is the "hints off" configuration.
struct SimParams {
  int n_pairs = 1;
  double p_reason = 0.0;
  double p_numerical = 0.0;
  std::uint64_t wrong_space = 1;
  double hint_gain_gp = 0.0;
  double hint_gain_eq = 0.0;
  int max_rounds = 1;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One empirical rate with its sample size and binomial standard error.
struct RateEstimate {
  std::uint64_t count = 0;
  std::uint64_t total = 0;
  double value() const;
  double standard_error() const;
};

/// Empirical mirror of the paper-style metrics plus the analytic
/// quantities. The pair-level rates partition their total exactly.
struct SimReport {
  SimParams params;
  RateEstimate gp_accuracy;
  RateEstimate eq_accuracy;
  RateEstimate pair_match_correct_rate;
  RateEstimate pair_match_wrong_rate;
  RateEstimate pair_disagree_rate;
  RateEstimate pair_no_answer_rate;
  RateEstimate topology_accuracy;
  /// p_reason * p_numerical: the per-pair both-correct probability.
  double p_single = 0.0;
  /// n * p_single: reported as a diagnostic, never clamped; it exceeds 1
  /// exactly where the linear-sum formula stops being a probability.
  double p_total_linear = 0.0;
};

double analytic_p_single(double p_reason, double p_numerical);

/// Runs `trials` synthetic questions through the real pair loop and vote.
/// Deterministic for fixed params; trials may execute on several threads.
SimReport simulate(const SimParams& params);

/// One simulate per n, same base seed; per-n streams are derived inside
/// simulate, so sweep({n}) equals simulate with n_pairs = n.
std::vector<std::pair<int, SimReport>> sweep(const SimParams& params,
                                             const std::vector<int>& n_values);

}  // namespace tandem

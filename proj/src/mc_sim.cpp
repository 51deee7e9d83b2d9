#include "tandem/mc_sim.hpp"

#include <cmath>
#include <thread>

#include "tandem/cross_inference.hpp"

namespace tandem {
namespace {

struct Tally {
  std::uint64_t gp_correct = 0;
  std::uint64_t eq_correct = 0;
  std::uint64_t match_correct = 0;
  std::uint64_t match_wrong = 0;
  std::uint64_t disagree = 0;
  std::uint64_t no_answer = 0;
  std::uint64_t topology_correct = 0;

  Tally& operator+=(const Tally& rhs) {
    gp_correct += rhs.gp_correct;
    eq_correct += rhs.eq_correct;
    match_correct += rhs.match_correct;
    match_wrong += rhs.match_wrong;
    disagree += rhs.disagree;
    no_answer += rhs.no_answer;
    topology_correct += rhs.topology_correct;
    return *this;
  }
};

void run_trial(const SimParams& params, const PairConfig& pair_config,
               StochasticBackend& gp, StochasticBackend& eq,
               std::uint64_t trial, Tally& tally) {
  Question question;
  // Embedding n in the id derives independent streams per sweep point.
  question.id = "n" + std::to_string(params.n_pairs) + ":t" +
                std::to_string(trial);
  question.text = "synthetic trial " + std::to_string(trial);
  question.reference_answer = CanonicalAnswer(0);
  const CanonicalAnswer& reference = *question.reference_answer;

  AnswerMatrix matrix;
  for (int p = 0; p < params.n_pairs; ++p) {
    PairTranscript transcript = run_pair(question, gp, eq, pair_config, p);
    switch (classify(transcript, reference)) {
      case OutcomeClass::AgreedCorrect: ++tally.match_correct; break;
      case OutcomeClass::AgreedWrong: ++tally.match_wrong; break;
      case OutcomeClass::Disagreed: ++tally.disagree; break;
      case OutcomeClass::NoAnswer: ++tally.no_answer; break;
    }
    if (transcript.final_gp_answer &&
        answers_equal(*transcript.final_gp_answer, reference))
      ++tally.gp_correct;
    if (transcript.final_eq_answer &&
        answers_equal(*transcript.final_eq_answer, reference))
      ++tally.eq_correct;
    matrix.gp_answers.push_back(transcript.final_gp_answer);
    matrix.eq_answers.push_back(transcript.final_eq_answer);
  }
  try {
    if (answers_equal(select(matrix).answer, reference))
      ++tally.topology_correct;
  } catch (const NoAnswerAvailable&) {
    // Counts as a topology miss.
  }
}

}  // namespace

void SimParams::validate() const {
  auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (n_pairs < 1) throw std::invalid_argument("n_pairs must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (wrong_space < 1) throw std::invalid_argument("wrong_space must be >= 1");
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
  if (!probability(p_reason) || !probability(p_numerical) ||
      !probability(hint_gain_gp) || !probability(hint_gain_eq))
    throw std::invalid_argument("probabilities must lie in [0, 1]");
}

double RateEstimate::value() const {
  return total == 0 ? 0.0
                    : static_cast<double>(count) / static_cast<double>(total);
}

double RateEstimate::standard_error() const {
  if (total == 0) return 0.0;
  double p = value();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(total));
}

double analytic_p_single(double p_reason, double p_numerical) {
  return p_reason * p_numerical;
}

SimReport simulate(const SimParams& params) {
  params.validate();

  PairConfig pair_config;
  pair_config.max_rounds = params.max_rounds;
  pair_config.hint_target = HintTarget::Both;

  StochasticProfile gp_profile{params.p_reason, params.wrong_space,
                               params.hint_gain_gp, params.seed};
  StochasticProfile eq_profile{params.p_numerical, params.wrong_space,
                               params.hint_gain_eq, params.seed};
  StochasticBackend gp(gp_profile, "sim-gp");
  StochasticBackend eq(eq_profile, "sim-eq");

  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, params.trials));

  // Static partition; integer tallies make the reduction order-free.
  std::vector<Tally> tallies(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::uint64_t t = w; t < params.trials; t += workers)
        run_trial(params, pair_config, gp, eq, t, tallies[w]);
    });
  }
  for (std::thread& t : threads) t.join();

  Tally total;
  for (const Tally& t : tallies) total += t;

  SimReport report;
  report.params = params;
  std::uint64_t pair_events =
      params.trials * static_cast<std::uint64_t>(params.n_pairs);
  report.gp_accuracy = {total.gp_correct, pair_events};
  report.eq_accuracy = {total.eq_correct, pair_events};
  report.pair_match_correct_rate = {total.match_correct, pair_events};
  report.pair_match_wrong_rate = {total.match_wrong, pair_events};
  report.pair_disagree_rate = {total.disagree, pair_events};
  report.pair_no_answer_rate = {total.no_answer, pair_events};
  report.topology_accuracy = {total.topology_correct, params.trials};
  report.p_single = analytic_p_single(params.p_reason, params.p_numerical);
  report.p_total_linear = static_cast<double>(params.n_pairs) * report.p_single;
  return report;
}

std::vector<std::pair<int, SimReport>> sweep(const SimParams& params,
                                             const std::vector<int>& n_values) {
  if (n_values.empty())
    throw std::invalid_argument("sweep needs at least one n value");
  std::vector<std::pair<int, SimReport>> out;
  out.reserve(n_values.size());
  for (int n : n_values) {
    SimParams point = params;
    point.n_pairs = n;
    out.emplace_back(n, simulate(point));
  }
  return out;
}

}  // namespace tandem

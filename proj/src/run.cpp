#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "tandem/harness.hpp"
#include "tandem/http_backend.hpp"

namespace tandem {
namespace {

namespace fs = std::filesystem;

std::string resolve_path(const std::string& base_dir, const std::string& path) {
  if (path.empty() || base_dir.empty()) return path;
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_dir) / p).string();
}

PairConfig pair_config_from_json(const nlohmann::json& doc) {
  PairConfig config;
  if (doc.contains("max_rounds")) config.max_rounds = doc.at("max_rounds");
  if (doc.contains("hint_target"))
    config.hint_target =
        parse_hint_target(doc.at("hint_target").get<std::string>());
  if (doc.contains("step_limit")) config.step_limit = doc.at("step_limit");
  if (doc.contains("max_tokens")) config.max_tokens = doc.at("max_tokens");
  if (doc.contains("temperature")) config.temperature = doc.at("temperature");
  if (doc.contains("stop"))
    config.stop = doc.at("stop").get<std::vector<std::string>>();
  if (doc.contains("templates")) {
    const nlohmann::json& t = doc.at("templates");
    if (t.contains("gp_base")) config.templates.gp_base = t.at("gp_base");
    if (t.contains("eq_base")) config.templates.eq_base = t.at("eq_base");
    if (t.contains("gp_hint")) config.templates.gp_hint = t.at("gp_hint");
    if (t.contains("eq_hint")) config.templates.eq_hint = t.at("eq_hint");
  }
  return config;
}

BackendBinding binding_from_json(const nlohmann::json& doc,
                                 const std::string& base_dir) {
  BackendBinding binding;
  binding.role = parse_role(doc.at("role").get<std::string>());
  binding.pair_index = doc.at("pair").get<int>();
  binding.type = doc.at("type").get<std::string>();
  if (binding.type == "scripted") {
    binding.table_path =
        resolve_path(base_dir, doc.at("table").get<std::string>());
  } else if (binding.type == "stochastic") {
    binding.profile.p_correct = doc.value("p_correct", 0.0);
    binding.profile.wrong_space = doc.value("wrong_space", std::uint64_t{1});
    binding.profile.hint_gain = doc.value("hint_gain", 0.0);
    if (doc.contains("seed")) {
      binding.profile.seed = doc.at("seed").get<std::uint64_t>();
      binding.profile_has_seed = true;
    }
  } else if (binding.type == "http") {
    binding.http.endpoint = doc.at("endpoint").get<std::string>();
    binding.http.model = doc.value("model", std::string{});
    binding.http.timeout_ms = doc.value("timeout_ms", 30'000);
    binding.http.retries = doc.value("retries", 0);
    binding.http.max_in_flight = doc.value("max_in_flight", 4);
  } else {
    throw ConfigError("unknown backend type: " + binding.type);
  }
  return binding;
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& doc,
                               const std::string& base_dir) {
  RunConfig config;
  try {
    config.n_pairs = doc.at("n_pairs").get<int>();
    config.dataset_path =
        resolve_path(base_dir, doc.at("dataset").get<std::string>());
    config.results_path =
        resolve_path(base_dir, doc.at("results_output").get<std::string>());
    if (doc.contains("report_output"))
      config.report_path =
          resolve_path(base_dir, doc.at("report_output").get<std::string>());
    config.seed = doc.value("seed", std::uint64_t{0});
    config.concurrency = doc.value("concurrency", 8);
    if (doc.contains("pair")) config.pair = pair_config_from_json(doc.at("pair"));
    for (const nlohmann::json& b : doc.at("backends"))
      config.backends.push_back(binding_from_json(b, base_dir));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad run config: ") + e.what());
  }
  config.validate();
  return config;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return from_json(doc, fs::path(path).parent_path().string());
}

void RunConfig::validate() const {
  if (n_pairs < 1) throw ConfigError("n_pairs must be >= 1");
  if (concurrency < 1) throw ConfigError("concurrency must be >= 1");
  if (results_path.empty()) throw ConfigError("results_output is required");
  try {
    pair.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::vector<std::vector<int>> bound(2, std::vector<int>(n_pairs, 0));
  for (const BackendBinding& b : backends) {
    if (b.pair_index < 0 || b.pair_index >= n_pairs)
      throw ConfigError("backend binding pair index out of range: " +
                        std::to_string(b.pair_index));
    ++bound[b.role == Role::GP ? 0 : 1][b.pair_index];
  }
  for (int p = 0; p < n_pairs; ++p) {
    for (int r = 0; r < 2; ++r) {
      if (bound[r][p] == 0)
        throw ConfigError("no backend bound for (" +
                          std::string(r == 0 ? "gp" : "eq") + ", pair " +
                          std::to_string(p) + ")");
      if (bound[r][p] > 1)
        throw ConfigError("duplicate backend binding for (" +
                          std::string(r == 0 ? "gp" : "eq") + ", pair " +
                          std::to_string(p) + ")");
    }
  }
}

std::shared_ptr<Backend> make_backend(const BackendBinding& binding,
                                      std::uint64_t run_seed) {
  std::string id = binding.type + ":" + std::string(role_name(binding.role)) +
                   ":" + std::to_string(binding.pair_index);
  if (binding.type == "scripted")
    return ScriptedBackend::from_file(binding.table_path, id);
  if (binding.type == "stochastic") {
    StochasticProfile profile = binding.profile;
    if (!binding.profile_has_seed) profile.seed = run_seed;
    return std::make_shared<StochasticBackend>(profile, id);
  }
  if (binding.type == "http") {
    HttpBindingConfig http = binding.http;
    if (const char* endpoint = std::getenv(kEndpointOverrideEnv))
      http.endpoint = endpoint;
    return std::make_shared<HttpBackend>(http, id);
  }
  throw ConfigError("unknown backend type: " + binding.type);
}

RunReport run(const RunConfig& config) {
  config.validate();
  Dataset dataset = load_dataset(config.dataset_path);
  const std::size_t question_count = dataset.questions.size();
  const std::size_t n = static_cast<std::size_t>(config.n_pairs);

  // Backend handles per (role, pair).
  std::vector<std::shared_ptr<Backend>> gp_backends(n), eq_backends(n);
  for (const BackendBinding& binding : config.backends) {
    auto backend = make_backend(binding, config.seed);
    (binding.role == Role::GP ? gp_backends : eq_backends)[binding.pair_index] =
        std::move(backend);
  }

  std::ofstream results_out(config.results_path, std::ios::trunc);
  if (!results_out)
    throw RunError("cannot open results output: " + config.results_path);

  // Workers fill the transcript matrix; the coordinator below consumes
  // questions strictly in order once their per-question barrier clears.
  std::vector<std::vector<PairTranscript>> transcripts(
      question_count, std::vector<PairTranscript>(n));
  std::vector<std::size_t> pending(question_count, n);
  std::mutex mutex;
  std::condition_variable done_cv;
  std::size_t next_task = 0;  // linear index over question-major (q, p)
  std::string fatal_error;

  auto worker = [&] {
    for (;;) {
      std::size_t task;
      {
        std::lock_guard lock(mutex);
        if (next_task >= question_count * n) return;
        task = next_task++;
      }
      std::size_t q = task / n;
      std::size_t p = task % n;
      const Question& question = dataset.questions[q];
      PairTranscript transcript;
      try {
        transcript = run_pair(question, *gp_backends[p], *eq_backends[p],
                              config.pair, static_cast<int>(p));
      } catch (const BackendError& e) {
        transcript = PairTranscript{};
        transcript.question_id = question.id;
        transcript.backend_error = e.what();
      } catch (const std::exception& e) {
        // Anything else is a bug or environment failure; keep the barrier
        // accounting intact, then fail the run once all workers drain.
        transcript = PairTranscript{};
        transcript.question_id = question.id;
        transcript.backend_error = std::string("internal: ") + e.what();
        std::lock_guard lock(mutex);
        if (fatal_error.empty()) fatal_error = e.what();
      }
      {
        std::lock_guard lock(mutex);
        transcripts[q][p] = std::move(transcript);
        if (--pending[q] == 0) done_cv.notify_all();
      }
    }
  };

  std::size_t pool_size = std::min<std::size_t>(
      static_cast<std::size_t>(config.concurrency), question_count * n);
  std::vector<std::thread> pool;
  pool.reserve(pool_size);
  for (std::size_t i = 0; i < pool_size; ++i) pool.emplace_back(worker);

  std::vector<QuestionResult> results;
  results.reserve(question_count);
  for (std::size_t q = 0; q < question_count; ++q) {
    {
      std::unique_lock lock(mutex);
      done_cv.wait(lock, [&] { return pending[q] == 0; });
    }
    const Question& question = dataset.questions[q];
    QuestionResult result;
    result.question_id = question.id;
    result.reference = *question.reference_answer;
    result.transcripts = std::move(transcripts[q]);

    AnswerMatrix matrix;
    for (const PairTranscript& t : result.transcripts) {
      matrix.gp_answers.push_back(t.final_gp_answer);
      matrix.eq_answers.push_back(t.final_eq_answer);
      result.outcome_classes.push_back(classify(t, result.reference));
    }
    try {
      result.selection = select(matrix);
      result.topology_correct =
          answers_equal(result.selection->answer, result.reference);
    } catch (const NoAnswerAvailable&) {
      result.selection.reset();
      result.topology_correct = false;
    }

    results_out << question_result_to_json(result).dump() << "\n";
    results_out.flush();
    if (!results_out)
      throw RunError("failed writing results to " + config.results_path);
    results.push_back(std::move(result));
  }
  for (std::thread& t : pool) t.join();
  if (!fatal_error.empty()) throw RunError("worker failure: " + fatal_error);

  ReportConfigEcho echo;
  echo.n_pairs = config.n_pairs;
  echo.seed = config.seed;
  echo.max_rounds = config.pair.max_rounds;
  echo.hint_target = std::string(hint_target_name(config.pair.hint_target));
  echo.dataset = config.dataset_path;
  RunReport report = aggregate_results(results, config.n_pairs, echo);
  if (!config.report_path.empty()) write_report(report, config.report_path);
  return report;
}

}  // namespace tandem

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tandem/backend.hpp"
#include "tandem/cross_inference.hpp"
#include "tandem/pair_engine.hpp"

namespace tandem {

/// Configuration problems abort a run before any work starts (exit code 1).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime failures such as unwritable output paths (exit code 2).
struct RunError : std::runtime_error {
  explicit RunError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Dataset

struct Dataset {
  std::vector<Question> questions;
};

struct DatasetError : std::runtime_error {
  enum class Kind { ParseError, MissingMarker, DuplicateId };
  Kind kind;
  int line;  // 1-based; 0 when not line-specific

  DatasetError(Kind kind, int line, const std::string& what)
      : std::runtime_error(what), kind(kind), line(line) {}
};

/// Loads JSON-lines records {"question": string, "answer": string}; the
/// reference answer comes from the answer field's `####` marker. Records may
/// carry an optional "id"; otherwise ids are q1, q2, ... by line.
Dataset load_dataset(const std::string& path);

// ---------------------------------------------------------------------------
// Run configuration

/// Name of the environment variable that, when set, overrides every HTTP
/// backend endpoint in the run configuration.
inline constexpr const char* kEndpointOverrideEnv = "TANDEM_ENDPOINT";

struct HttpBindingConfig {
  std::string endpoint;
  std::string model;
  int timeout_ms = 30'000;
  int retries = 0;
  int max_in_flight = 4;
};

/// One (role, pair) slot bound to a backend. Exactly one of the per-type
/// payloads applies, keyed by `type`.
struct BackendBinding {
  Role role = Role::GP;
  int pair_index = 0;
  std::string type;  // "scripted" | "stochastic" | "http"

  std::string table_path;               // scripted
  StochasticProfile profile;            // stochastic (seed filled from run)
  bool profile_has_seed = false;
  HttpBindingConfig http;               // http
};

struct RunConfig {
  int n_pairs = 1;
  PairConfig pair;
  std::string dataset_path;
  std::string results_path;
  std::string report_path;  // empty: no report file
  std::uint64_t seed = 0;
  int concurrency = 8;
  std::vector<BackendBinding> backends;

  static RunConfig from_file(const std::string& path);
  static RunConfig from_json(const nlohmann::json& doc,
                             const std::string& base_dir);
  /// Throws ConfigError unless every (role, pair_index) is bound exactly
  /// once and the pair config validates.
  void validate() const;
};

/// Instantiates one binding. Scripted tables are loaded per call; stochastic
/// backends default their seed to the run seed.
std::shared_ptr<Backend> make_backend(const BackendBinding& binding,
                                      std::uint64_t run_seed);

// ---------------------------------------------------------------------------
// Results & report

struct QuestionResult {
  std::string question_id;
  CanonicalAnswer reference;
  std::vector<PairTranscript> transcripts;
  std::optional<Selection> selection;
  std::vector<OutcomeClass> outcome_classes;
  bool topology_correct = false;
};

/// Semantic echo of a run, kept free of execution knobs (the concurrency
/// cap must not change any output byte).
struct ReportConfigEcho {
  int n_pairs = 1;
  std::uint64_t seed = 0;
  int max_rounds = 1;
  std::string hint_target = "gp_only";
  std::string dataset = "";
};

/// Aggregated counts; every exposed rate is the exact ratio of a count to
/// its total. Vectors are indexed by pair.
struct RunReport {
  ReportConfigEcho config;
  std::uint64_t questions = 0;
  std::vector<std::uint64_t> gp_correct;
  std::vector<std::uint64_t> eq_correct;
  std::vector<std::uint64_t> agreed_correct;
  std::vector<std::uint64_t> agreed_wrong;
  std::vector<std::uint64_t> disagreed;
  std::vector<std::uint64_t> no_answer;
  std::vector<std::uint64_t> backend_failures;
  std::uint64_t topology_correct = 0;

  bool operator==(const RunReport&) const = default;
};

/// Executes the run: for every question all n pairs run concurrently, a
/// per-question barrier joins them, then the vote runs and the result is
/// appended to the results file. A backend failure marks that pair's
/// answers absent for the question; the run continues.
RunReport run(const RunConfig& config);

/// Pure aggregation used by run() and by `report` over persisted results.
RunReport aggregate_results(const std::vector<QuestionResult>& results,
                            int n_pairs, const ReportConfigEcho& echo);

// Serialization. JSON documents use stable (alphabetical) key order, so
// equal reports produce identical bytes.
nlohmann::json question_result_to_json(const QuestionResult& result);
QuestionResult question_result_from_json(const nlohmann::json& doc);
nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& doc);

void write_report(const RunReport& report, const std::string& path);
RunReport load_report(const std::string& path);

/// Reads a results file. A truncated or unparseable final line is ignored
/// (crash consistency); a malformed earlier line raises DatasetError.
std::vector<QuestionResult> load_results(const std::string& path);

/// Aligned text tables mirroring the per-role accuracy tables, the
/// agreement-class table and the topology line.
std::string render_tables(const RunReport& report);

}  // namespace tandem

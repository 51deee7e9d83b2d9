// Shared test fixtures: a temp-dir guard and the two-question, two-pair
// scripted run whose report is derived by hand in the harness tests and the
// acceptance suite.
#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "tandem/backend.hpp"
#include "tandem/harness.hpp"

namespace fixtures {

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::mt19937_64 rng(std::random_device{}());
    for (;;) {
      path_ = base / ("tandem-test-" + std::to_string(rng()));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------------------
// Scripted two-question fixture.
//
// candle (reference 8):
//   pair 0: GP round 0 ends in 6, EQ computes 8 -> mismatch, hinted GP round
//           1 ends in 8 -> Agreed after 2 rounds.
//   pair 1: both 8 in round 0 -> Agreed immediately, no hint prompts.
// downloads (reference 366):
//   pair 0: GP 420 then 426, EQ computes 366 -> Exhausted (426, 366).
//   pair 1: GP marker 366, EQ script 366 -> Agreed in round 0.

inline const char* kCandleGpRound0 =
    "The candle will have burned for 5-1 = 4 hours. After 4 hours, the candle "
    "will have melted 4 * 2 = 8. Thus, the candle will be 8 - 2 = 6 "
    "centimeters shorter.";
inline const char* kCandleGpRound1 =
    "Burning from 1:00 PM to 5:00 PM is a total of 5 - 1 = 4 hours. The "
    "candle will melt 4 * 2 =8 centimeters shorter.";
inline const char* kCandleEqScript = "hours = 5 - 1\nanswer = hours * 2";
inline const char* kCandleEqPair0 =
    "```\nhours = 5 - 1\nanswer = hours * 2\n```";
inline const char* kCandleGpPair1 =
    "The candle melts 2 centimeters per hour for 4 hours, so it is 8 "
    "centimeters shorter.";
inline const char* kCandleEqPair1 =
    "melt_rate = 2\nhours = 5 - 1\nanswer = melt_rate * hours";

inline const char* kDownloadsGpRound0 =
    "The number of downloads in the second month was 3*60=180 downloads. The "
    "number of downloads in the third month was 180*(100/100)=180 downloads. "
    "The total number of downloads over the three months is 60+180+180=420 "
    "downloads.";
inline const char* kDownloadsGpRound1 =
    "The number of downloads in the second month was 3*60= 180. In the third "
    "month, the number of downloads was 180*.7=126. In total, the number of "
    "downloads in the three months was 126+180+60=426";
inline const char* kDownloadsEqScript =
    "m = 3 * 60\nt = m * 7 / 10\nanswer = t + m + 60";
inline const char* kDownloadsEqPair0 =
    "```\nm = 3 * 60\nt = m * 7 / 10\nanswer = t + m + 60\n```";
inline const char* kDownloadsGpPair1 =
    "Second month: 3*60 = 180 downloads. Third month: 180 - 54 = 126 "
    "downloads. Total: 60 + 180 + 126 = 366. #### 366";
inline const char* kDownloadsEqPair1 = "answer = 366";

inline std::string fixture_dataset_jsonl() {
  nlohmann::json q1 = {
      {"id", "candle"},
      {"question",
       "A candle melts by 2 centimetres every hour that it burns. How many "
       "centimetres shorter will a candle be after burning from 1:00 PM to "
       "5:00 PM?"},
      {"answer",
       "The candle burns from 1:00 PM to 5:00 PM, which is 5 - 1 = 4 hours. "
       "It melts 2 centimeters per hour, so 4 * 2 = 8. #### 8"},
  };
  nlohmann::json q2 = {
      {"id", "downloads"},
      {"question",
       "A new program had 60 downloads in the first month. The number of "
       "downloads in the second month was three times as many as those in "
       "the first month but then reduced by 30% in the third month. How many "
       "downloads did the program have in total over the three months?"},
      {"answer",
       "Second month: 3 * 60 = 180. Third month: 180 * 0.7 = 126. Total: 60 "
       "+ 180 + 126 = 366. #### 366"},
  };
  return q1.dump() + "\n" + q2.dump() + "\n";
}

inline std::vector<tandem::ScriptedBackend::Entry> fixture_gp_entries(
    int pair) {
  using E = tandem::ScriptedBackend::Entry;
  if (pair == 0)
    return {
        E{"candle", tandem::Role::GP, 0, kCandleGpRound0},
        E{"candle", tandem::Role::GP, 1, kCandleGpRound1},
        E{"downloads", tandem::Role::GP, 0, kDownloadsGpRound0},
        E{"downloads", tandem::Role::GP, 1, kDownloadsGpRound1},
    };
  return {
      E{"candle", tandem::Role::GP, 0, kCandleGpPair1},
      E{"downloads", tandem::Role::GP, 0, kDownloadsGpPair1},
  };
}

inline std::vector<tandem::ScriptedBackend::Entry> fixture_eq_entries(
    int pair) {
  using E = tandem::ScriptedBackend::Entry;
  if (pair == 0)
    return {
        E{"candle", tandem::Role::EQ, 0, kCandleEqPair0},
        E{"downloads", tandem::Role::EQ, 0, kDownloadsEqPair0},
    };
  return {
      E{"candle", tandem::Role::EQ, 0, kCandleEqPair1},
      E{"downloads", tandem::Role::EQ, 0, kDownloadsEqPair1},
  };
}

/// One table file per (role, pair) binding; the table key carries no pair
/// component, so distinct pairs need distinct tables.
inline std::string fixture_table_json(tandem::Role role, int pair) {
  nlohmann::json table = nlohmann::json::array();
  auto entries = role == tandem::Role::GP ? fixture_gp_entries(pair)
                                          : fixture_eq_entries(pair);
  for (const auto& e : entries)
    table.push_back({{"question_id", e.question_id},
                     {"role", std::string(tandem::role_name(e.role))},
                     {"round", e.round},
                     {"text", e.text}});
  return table.dump(2);
}

/// Writes the dataset plus the four scripted tables and returns a full run
/// config pointing at them.
inline tandem::RunConfig fixture_run_config(const TempDir& dir,
                                            std::uint64_t seed,
                                            int concurrency) {
  write_file(dir.file("dataset.jsonl"), fixture_dataset_jsonl());
  tandem::RunConfig config;
  config.n_pairs = 2;
  config.dataset_path = dir.file("dataset.jsonl");
  config.results_path = dir.file("results-" + std::to_string(concurrency) +
                                 "-" + std::to_string(seed) + ".jsonl");
  config.seed = seed;
  config.concurrency = concurrency;
  config.pair.max_rounds = 2;
  config.pair.hint_target = tandem::HintTarget::GpOnly;
  for (int pair : {0, 1}) {
    for (tandem::Role role : {tandem::Role::GP, tandem::Role::EQ}) {
      std::string name = std::string(tandem::role_name(role)) +
                         std::to_string(pair) + ".json";
      write_file(dir.file(name), fixture_table_json(role, pair));
      tandem::BackendBinding binding;
      binding.role = role;
      binding.pair_index = pair;
      binding.type = "scripted";
      binding.table_path = dir.file(name);
      config.backends.push_back(binding);
    }
  }
  return config;
}

/// The hand-derived report for the fixture (see the arithmetic spelled out
/// in test_harness.cpp).
inline tandem::RunReport fixture_expected_report(const std::string& dataset_path,
                                                 std::uint64_t seed) {
  tandem::RunReport expected;
  expected.config.n_pairs = 2;
  expected.config.seed = seed;
  expected.config.max_rounds = 2;
  expected.config.hint_target = "gp_only";
  expected.config.dataset = dataset_path;
  expected.questions = 2;
  expected.gp_correct = {1, 2};
  expected.eq_correct = {2, 2};
  expected.agreed_correct = {1, 2};
  expected.agreed_wrong = {0, 0};
  expected.disagreed = {1, 0};
  expected.no_answer = {0, 0};
  expected.backend_failures = {0, 0};
  expected.topology_correct = 2;
  return expected;
}

}  // namespace fixtures

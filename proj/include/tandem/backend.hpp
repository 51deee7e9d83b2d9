#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tandem/answer.hpp"

namespace tandem {

enum class Role { GP, EQ };

std::string_view role_name(Role role);
Role parse_role(std::string_view text);

struct CompletionRequest {
  std::string prompt;
  int max_tokens = 512;
  double temperature = 0.7;
  std::vector<std::string> stop = {"\n\n"};
};

struct CompletionResponse {
  std::string text;
  std::string backend_id;
  std::chrono::milliseconds latency{0};
};

/// Where in the run a completion call sits. Scripted and stochastic backends
/// key their behavior on this; the HTTP backend ignores it.
struct CallContext {
  const Question* question = nullptr;
  Role role = Role::GP;
  int pair_index = 0;
  int round = 0;
};

struct BackendError : std::runtime_error {
  enum class Kind { Unreachable, Timeout, Protocol, ScriptMiss, MissingGroundTruth };

  Kind kind;
  explicit BackendError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind(kind) {}
};

/// A completion source. Implementations must be callable from any number of
/// workers concurrently.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual CompletionResponse complete(const CompletionRequest& request,
                                      const CallContext& context) = 0;
  virtual std::string id() const = 0;
};

// ---------------------------------------------------------------------------
// Deterministic RNG streams

/// splitmix64 finalizer; the whole stochastic path is built on it so results
/// are identical across platforms and worker schedules.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 usable bits.
  double next_unit();
  /// Uniform in [0, n); n >= 1.
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

/// One independent stream per (seed, question, role, pair, round); no shared
/// mutable RNG exists anywhere.
Rng derive_stream(std::uint64_t seed, std::string_view question_id, Role role,
                  int pair_index, int round);

// ---------------------------------------------------------------------------
// Scripted backend (exact test double)

/// Table of canned responses keyed by (question_id, role, round). Lookups
/// beyond the table are hard ScriptMiss errors, never silent repeats.
class ScriptedBackend : public Backend {
 public:
  struct Entry {
    std::string question_id;
    Role role;
    int round;
    std::string text;
  };

  /// `delay` is an injected per-call latency for exercising synchronization
  /// under skewed completion orders.
  explicit ScriptedBackend(std::vector<Entry> entries, std::string id = "scripted",
                           std::chrono::milliseconds delay = {});

  /// Loads the JSON array file format: [{question_id, role, round, text}].
  static std::shared_ptr<ScriptedBackend> from_file(
      const std::string& path, std::string id = "scripted",
      std::chrono::milliseconds delay = {});

  CompletionResponse complete(const CompletionRequest& request,
                              const CallContext& context) override;
  std::string id() const override { return id_; }

  /// Scripted entries never consumed by any complete() call; test support
  /// for proving exact round counts.
  std::vector<std::string> unused_keys() const;

 private:
  struct Slot {
    std::string text;
    // Consumption marker; lock-free so complete() stays wait-free.
    mutable std::atomic<bool> used{false};
  };

  std::string id_;
  std::unordered_map<std::string, Slot> table_;
  std::chrono::milliseconds delay_{0};

  static std::string key(std::string_view question_id, Role role, int round);
};

// ---------------------------------------------------------------------------
// Stochastic backend (Monte-Carlo model)

/// Error model for one role: correct with probability
/// min(1, p_correct + round * hint_gain), otherwise the emitted value is
/// reference + k with k uniform in {1..wrong_space}. The wrong-answer space
/// is shared across backends, so two wrong models collide with probability
/// 1/wrong_space.
struct StochasticProfile {
  double p_correct = 0.0;
  std::uint64_t wrong_space = 1;
  double hint_gain = 0.0;
  std::uint64_t seed = 0;
};

/// Emits prose ending in the value for GP, a one-line `answer = value`
/// script for EQ. Throws BackendError(MissingGroundTruth) when the question
/// has no reference answer.
std::string stochastic_emit(const StochasticProfile& profile,
                            const Question& question, Role role, int round,
                            Rng& rng);

class StochasticBackend : public Backend {
 public:
  StochasticBackend(StochasticProfile profile, std::string id = "stochastic")
      : profile_(profile), id_(std::move(id)) {}

  CompletionResponse complete(const CompletionRequest& request,
                              const CallContext& context) override;
  std::string id() const override { return id_; }

 private:
  StochasticProfile profile_;
  std::string id_;
};

}  // namespace tandem

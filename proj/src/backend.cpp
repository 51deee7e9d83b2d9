#include "tandem/backend.hpp"

#include <fstream>

#include <json.hpp>

namespace tandem {

std::string_view role_name(Role role) { return role == Role::GP ? "gp" : "eq"; }

Role parse_role(std::string_view text) {
  if (text == "gp" || text == "GP") return Role::GP;
  if (text == "eq" || text == "EQ") return Role::EQ;
  throw std::invalid_argument("unknown role: " + std::string(text));
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::next_below(std::uint64_t n) {
  // Multiply-shift map of the full 64-bit draw onto [0, n).
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

Rng derive_stream(std::uint64_t seed, std::string_view question_id, Role role,
                  int pair_index, int round) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ fnv1a64(question_id));
  h = mix64(h ^ (role == Role::GP ? 0x47ull : 0x45ull));
  h = mix64(h ^ static_cast<std::uint64_t>(pair_index));
  h = mix64(h ^ static_cast<std::uint64_t>(round));
  return Rng(h);
}

// ---------------------------------------------------------------------------
// ScriptedBackend

std::string ScriptedBackend::key(std::string_view question_id, Role role,
                                 int round) {
  std::string k(question_id);
  k.push_back('\x1f');
  k += role_name(role);
  k.push_back('\x1f');
  k += std::to_string(round);
  return k;
}

ScriptedBackend::ScriptedBackend(std::vector<Entry> entries, std::string id)
    : id_(std::move(id)) {
  for (Entry& e : entries) {
    Slot& slot = table_[key(e.question_id, e.role, e.round)];
    slot.text = std::move(e.text);
  }
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_file(
    const std::string& path, std::string id) {
  std::ifstream in(path);
  if (!in)
    throw BackendError(BackendError::Kind::Protocol,
                       "cannot open scripted table: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  std::vector<Entry> entries;
  for (const auto& item : doc) {
    entries.push_back(Entry{item.at("question_id").get<std::string>(),
                            parse_role(item.at("role").get<std::string>()),
                            item.at("round").get<int>(),
                            item.at("text").get<std::string>()});
  }
  return std::make_shared<ScriptedBackend>(std::move(entries), std::move(id));
}

CompletionResponse ScriptedBackend::complete(const CompletionRequest&,
                                             const CallContext& context) {
  if (context.question == nullptr)
    throw BackendError(BackendError::Kind::ScriptMiss,
                       "scripted backend called without a question context");
  auto it = table_.find(key(context.question->id, context.role, context.round));
  if (it == table_.end())
    throw BackendError(
        BackendError::Kind::ScriptMiss,
        "no scripted response for question '" + context.question->id +
            "', role " + std::string(role_name(context.role)) + ", round " +
            std::to_string(context.round));
  it->second.used.store(true, std::memory_order_relaxed);
  return CompletionResponse{it->second.text, id_, std::chrono::milliseconds(0)};
}

std::vector<std::string> ScriptedBackend::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, slot] : table_)
    if (!slot.used.load(std::memory_order_relaxed)) out.push_back(k);
  return out;
}

// ---------------------------------------------------------------------------
// StochasticBackend

std::string stochastic_emit(const StochasticProfile& profile,
                            const Question& question, Role role, int round,
                            Rng& rng) {
  if (!question.reference_answer)
    throw BackendError(BackendError::Kind::MissingGroundTruth,
                       "question '" + question.id + "' has no reference answer");
  const CanonicalAnswer& reference = *question.reference_answer;
  double p = profile.p_correct + static_cast<double>(round) * profile.hint_gain;
  if (p > 1.0) p = 1.0;
  CanonicalAnswer value = reference;
  if (!(rng.next_unit() < p)) {
    std::uint64_t offset = 1 + rng.next_below(profile.wrong_space);
    value = reference + Rational(static_cast<long long>(offset));
  }
  if (role == Role::GP)
    return "Working through the steps, the result is " + render(value) + ".";
  return "answer = " + render(value);
}

CompletionResponse StochasticBackend::complete(const CompletionRequest&,
                                               const CallContext& context) {
  if (context.question == nullptr)
    throw BackendError(BackendError::Kind::MissingGroundTruth,
                       "stochastic backend called without a question context");
  Rng rng = derive_stream(profile_.seed, context.question->id, context.role,
                          context.pair_index, context.round);
  std::string text = stochastic_emit(profile_, *context.question, context.role,
                                     context.round, rng);
  return CompletionResponse{std::move(text), id_, std::chrono::milliseconds(0)};
}

}  // namespace tandem

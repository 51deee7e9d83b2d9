#pragma once

#include <condition_variable>
#include <mutex>
#include <string>

#include "tandem/backend.hpp"
#include "tandem/harness.hpp"

namespace tandem {

/// Client for completion servers speaking HTTP POST /v1/completions with a
/// JSON body {model, prompt, max_tokens, temperature, stop} and a response
/// {choices: [{text}]}. Enforces a per-backend in-flight cap and retries
/// Unreachable/Timeout failures up to the configured count.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBindingConfig config, std::string id = "http");

  CompletionResponse complete(const CompletionRequest& request,
                              const CallContext& context) override;
  std::string id() const override { return id_; }

 private:
  HttpBindingConfig config_;
  std::string id_;

  std::mutex gate_mutex_;
  std::condition_variable gate_cv_;
  int in_flight_ = 0;

  CompletionResponse post_once(const CompletionRequest& request);
};

}  // namespace tandem

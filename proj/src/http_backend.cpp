#include "tandem/http_backend.hpp"

#include <chrono>

#include <httplib.h>
#include <json.hpp>

namespace tandem {
namespace {

BackendError::Kind classify_transport_error(httplib::Error err) {
  switch (err) {
    case httplib::Error::Connection:
    case httplib::Error::BindIPAddress:
    case httplib::Error::ProxyConnection:
      return BackendError::Kind::Unreachable;
    case httplib::Error::ConnectionTimeout:
    case httplib::Error::Read:
    case httplib::Error::Write:
      return BackendError::Kind::Timeout;
    default:
      return BackendError::Kind::Protocol;
  }
}

bool retryable(BackendError::Kind kind) {
  return kind == BackendError::Kind::Unreachable ||
         kind == BackendError::Kind::Timeout;
}

}  // namespace

HttpBackend::HttpBackend(HttpBindingConfig config, std::string id)
    : config_(std::move(config)), id_(std::move(id)) {
  if (config_.max_in_flight < 1)
    throw ConfigError("http backend max_in_flight must be >= 1");
}

CompletionResponse HttpBackend::post_once(const CompletionRequest& request) {
  httplib::Client client(config_.endpoint);
  auto timeout = std::chrono::milliseconds(config_.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  nlohmann::json body = {
      {"model", config_.model},
      {"prompt", request.prompt},
      {"max_tokens", request.max_tokens},
      {"temperature", request.temperature},
      {"stop", request.stop},
  };

  auto start = std::chrono::steady_clock::now();
  httplib::Result result =
      client.Post("/v1/completions", body.dump(), "application/json");
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);

  if (!result) {
    BackendError::Kind kind = classify_transport_error(result.error());
    std::string what = id_ + ": " + httplib::to_string(result.error()) +
                       " after " + std::to_string(elapsed.count()) + "ms";
    throw BackendError(kind, what);
  }
  if (result->status != 200)
    throw BackendError(BackendError::Kind::Protocol,
                       id_ + ": HTTP " + std::to_string(result->status));
  try {
    nlohmann::json doc = nlohmann::json::parse(result->body);
    std::string text = doc.at("choices").at(0).at("text").get<std::string>();
    return CompletionResponse{std::move(text), id_, elapsed};
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(BackendError::Kind::Protocol,
                       id_ + ": malformed completion response: " + e.what());
  }
}

CompletionResponse HttpBackend::complete(const CompletionRequest& request,
                                         const CallContext&) {
  {
    std::unique_lock lock(gate_mutex_);
    gate_cv_.wait(lock, [&] { return in_flight_ < config_.max_in_flight; });
    ++in_flight_;
  }
  struct Release {
    HttpBackend* self;
    ~Release() {
      {
        std::lock_guard lock(self->gate_mutex_);
        --self->in_flight_;
      }
      self->gate_cv_.notify_one();
    }
  } release{this};

  int attempts = config_.retries + 1;
  for (int attempt = 1;; ++attempt) {
    try {
      return post_once(request);
    } catch (const BackendError& e) {
      if (attempt >= attempts || !retryable(e.kind)) throw;
    }
  }
}

}  // namespace tandem

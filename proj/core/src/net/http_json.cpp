#include "net/http_json.hpp"

#include <httplib.h>

#include <thread>

#include "synthcoll/error.hpp"

namespace synthcoll::net {

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw PreconditionError("URL '" + url + "' has no scheme");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

HttpJsonClient::HttpJsonClient(const std::string& url, std::string bearer_token,
                               std::chrono::seconds timeout,
                               genclient::RetryPolicy retry)
    : bearer_(std::move(bearer_token)), timeout_(timeout), retry_(retry) {
  std::tie(scheme_host_port_, path_) = split_url(url);
  if (retry_.max_attempts < 1) retry_.max_attempts = 1;
}

nlohmann::json HttpJsonClient::post(const nlohmann::json& body) const {
  const std::string payload = body.dump();
  auto backoff = retry_.initial_backoff;
  std::string last_failure;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    httplib::Headers headers;
    if (!bearer_.empty()) {
      headers.emplace("Authorization", "Bearer " + bearer_);
    }
    auto res = client.Post(path_, headers, payload, "application/json");
    if (res) {
      const int status = res->status;
      if (status >= 200 && status < 300) {
        try {
          return nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
          throw ProviderError(status, std::string("invalid JSON reply: ") +
                                          res->body.substr(0, 200));
        }
      }
      if (status != 429 && status < 500) {
        throw ProviderError(status, res->body.substr(0, 200));
      }
      last_failure = "HTTP " + std::to_string(status);
    } else {
      last_failure = httplib::to_string(res.error());
    }
    if (attempt < retry_.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(static_cast<long long>(
          static_cast<double>(backoff.count()) * retry_.multiplier));
    }
  }
  throw TimeoutError("gave up on " + scheme_host_port_ + path_ + " after " +
                     std::to_string(retry_.max_attempts) +
                     " attempts (last failure: " + last_failure + ")");
}

}  // namespace synthcoll::net

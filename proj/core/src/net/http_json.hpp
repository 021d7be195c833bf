#pragma once

#include <chrono>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "synthcoll/genclient/provider.hpp"

namespace synthcoll::net {

/// POSTs JSON and parses a JSON reply, retrying HTTP 429, 5xx and transport
/// failures with exponential backoff. Other statuses raise ProviderError;
/// an exhausted budget raises TimeoutError.
class HttpJsonClient {
 public:
  HttpJsonClient(const std::string& url, std::string bearer_token,
                 std::chrono::seconds timeout, genclient::RetryPolicy retry);

  nlohmann::json post(const nlohmann::json& body) const;

 private:
  std::string scheme_host_port_;
  std::string path_;
  std::string bearer_;
  std::chrono::seconds timeout_;
  genclient::RetryPolicy retry_;
};

/// Splits "https://host:port/a/b" into ("https://host:port", "/a/b").
std::pair<std::string, std::string> split_url(const std::string& url);

}  // namespace synthcoll::net

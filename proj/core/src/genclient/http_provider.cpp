#include "net/http_json.hpp"
#include "synthcoll/error.hpp"
#include "synthcoll/genclient/provider.hpp"

namespace synthcoll::genclient {

using nlohmann::json;

HttpProvider::HttpProvider(HttpProviderOptions options)
    : options_(std::move(options)) {
  if (options_.base_url.empty()) {
    throw PreconditionError("http provider needs a base_url");
  }
  if (options_.model.empty()) {
    throw PreconditionError("http provider needs a model");
  }
}

GenResponse HttpProvider::do_generate(const GenRequest& request) const {
  std::string url = options_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  url += "/chat/completions";
  const net::HttpJsonClient client(url, options_.api_key, options_.timeout,
                                   options_.retry);
  const json body = {
      {"model", options_.model},
      {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
      {"temperature", request.temperature},
      {"max_tokens", request.max_output_tokens},
  };
  const json reply = client.post(body);

  GenResponse out;
  try {
    const auto& message = reply.at("choices").at(0).at("message");
    if (message.contains("content") && message.at("content").is_string()) {
      out.text = message.at("content").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ProviderError(200, std::string("reply has no choices[0].message: ") +
                                 reply.dump().substr(0, 200));
  }
  out.model_id = reply.contains("model") && reply.at("model").is_string()
                     ? reply.at("model").get<std::string>()
                     : options_.model;
  const json* usage = reply.contains("usage") && reply.at("usage").is_object()
                          ? &reply.at("usage")
                          : nullptr;
  if (usage && usage->contains("prompt_tokens") &&
      usage->contains("completion_tokens")) {
    out.usage.prompt_tokens = usage->at("prompt_tokens").get<std::uint64_t>();
    out.usage.completion_tokens =
        usage->at("completion_tokens").get<std::uint64_t>();
  } else {
    out.usage.prompt_tokens = estimate_tokens(request.prompt);
    out.usage.completion_tokens = estimate_tokens(out.text);
    out.usage_estimated = true;
  }
  if (out.text.empty()) out.usage.completion_tokens = 0;
  return out;
}

}  // namespace synthcoll::genclient

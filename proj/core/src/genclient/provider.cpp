#include "synthcoll/genclient/provider.hpp"

#include "synthcoll/error.hpp"
#include "synthcoll/text/utf8.hpp"

namespace synthcoll::genclient {

std::uint64_t estimate_tokens(std::string_view text) noexcept {
  const std::uint64_t chars = text::utf8_length(text);
  return (chars + 3) / 4;
}

GenResponse Provider::generate(const GenRequest& request) const {
  if (request.prompt.empty()) {
    throw PreconditionError("generation prompt must not be empty");
  }
  if (request.max_output_tokens == 0) {
    throw PreconditionError("max_output_tokens must be positive");
  }
  if (request.temperature < 0) {
    throw PreconditionError("temperature must be non-negative");
  }
  GenResponse response = do_generate(request);
  if (response.text.empty() && response.usage.completion_tokens != 0) {
    throw InvariantError("empty completion reported non-zero tokens");
  }
  return response;
}

}  // namespace synthcoll::genclient

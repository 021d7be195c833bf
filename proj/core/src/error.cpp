#include "synthcoll/error.hpp"

namespace synthcoll {

ParseError::ParseError(const std::string& what, std::size_t line,
                       std::size_t offset)
    : Error(what), line_(line), offset_(offset) {}

ProviderError::ProviderError(int status, const std::string& body_excerpt)
    : Error("provider returned HTTP " + std::to_string(status) + ": " +
            body_excerpt),
      status_(status),
      body_(body_excerpt) {}

}  // namespace synthcoll

#include <algorithm>
#include <regex>
#include <unordered_set>

#include "synthcoll/genclient/provider.hpp"
#include "synthcoll/random.hpp"
#include "synthcoll/text/analyzer.hpp"
#include "synthcoll/text/lexicon.hpp"
#include "synthcoll/text/stopwords.hpp"
#include "synthcoll/text/utf8.hpp"

namespace synthcoll::genclient {

namespace {

// Words contributed by the prompt templates themselves; they would otherwise
// leak into every generated document as "topical" terms.
const std::unordered_set<std::string>& template_words() {
  static const std::unordered_set<std::string> words = {
      "can",      "you",    "write",   "long",     "text",    "title",
      "about",    "within", "scope",   "subtopics", "related", "please",
      "specific", "possible", "generate", "variants", "next",   "sentence",
      "filling",  "mask",   "example", "news",     "article", "document",
      "topic",    "any",    "me",      "description"};
  return words;
}

class Sampler {
 public:
  Sampler(std::uint64_t seed, std::vector<std::string> topical)
      : rng_(seed), topical_(std::move(topical)) {}

  // Skewed toward the head of the vocabulary so that frequent words recur,
  // as in natural text.
  std::string_view vocab_word() {
    const auto vocab = text::mock_vocabulary();
    const double u = rng_.unit();
    const auto idx = static_cast<std::size_t>(u * u * u *
                                              static_cast<double>(vocab.size()));
    return vocab[std::min(idx, vocab.size() - 1)];
  }

  std::string word(double topical_share) {
    if (!topical_.empty() && rng_.unit() < topical_share) {
      return topical_[rng_.below(topical_.size())];
    }
    return std::string(vocab_word());
  }

  std::uint64_t below(std::uint64_t n) { return rng_.below(n); }

  bool has_topical() const noexcept { return !topical_.empty(); }

 private:
  SplitMix64 rng_;
  std::vector<std::string> topical_;
};

std::string capitalise(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') {
    w[0] = static_cast<char>(w[0] - 'a' + 'A');
  }
  return w;
}

std::vector<std::string> topical_words(std::string_view prompt) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  const auto& fw = text::function_words();
  for (const auto token : text::tokenize(prompt)) {
    std::string lower = text::to_lower(token);
    if (lower.size() < 3 || fw.contains(lower) ||
        template_words().contains(lower) ||
        std::isdigit(static_cast<unsigned char>(lower[0]))) {
      continue;
    }
    if (seen.insert(lower).second) out.push_back(std::move(lower));
  }
  return out;
}

std::string phrase(Sampler& s, std::size_t words, double topical_share) {
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) out += ' ';
    out += s.word(topical_share);
  }
  return out;
}

std::string numbered_list(Sampler& s, std::size_t count) {
  std::string out;
  for (std::size_t i = 1; i <= count; ++i) {
    out += std::to_string(i) + ". The " + phrase(s, 1 + s.below(2), 0.0) +
           " of " + phrase(s, 2 + s.below(2), 0.6) + "\n";
  }
  return out;
}

std::string variant_list(Sampler& s, std::size_t count,
                         const std::string& masked) {
  std::string out;
  for (std::size_t i = 1; i <= count; ++i) {
    std::string v;
    std::size_t pos = 0;
    for (std::size_t hit = masked.find("[MASK]"); hit != std::string::npos;
         hit = masked.find("[MASK]", pos)) {
      v.append(masked, pos, hit - pos);
      v += phrase(s, 1 + s.below(2), 0.0);
      pos = hit + 6;
    }
    v.append(masked, pos);
    out += std::to_string(i) + ") " + v + "\n";
  }
  return out;
}

std::string document(Sampler& s, std::size_t body_words) {
  std::string out = "Title: ";
  const std::size_t title_words = 3 + s.below(4);
  for (std::size_t i = 0; i < title_words; ++i) {
    if (i) out += ' ';
    out += capitalise(s.word(0.6));
  }
  out += "\n\n";
  std::size_t written = 0;
  std::size_t sentences_in_paragraph = 0;
  while (written < body_words) {
    const std::size_t len =
        std::min<std::size_t>(8 + s.below(13), body_words - written);
    for (std::size_t i = 0; i < len; ++i) {
      std::string w = s.word(0.3);
      if (i == 0) {
        w = capitalise(std::move(w));
      } else {
        out += ' ';
      }
      out += w;
    }
    out += '.';
    written += len;
    if (written >= body_words) break;
    if (++sentences_in_paragraph == 5) {
      out += "\n\n";
      sentences_in_paragraph = 0;
    } else {
      out += ' ';
    }
  }
  return out;
}

}  // namespace

MockProvider::MockProvider(MockOptions options) : options_(std::move(options)) {}

GenResponse MockProvider::do_generate(const GenRequest& request) const {
  std::uint64_t seed = fnv1a64(options_.seed_salt);
  seed = fnv1a64("\x1f", seed);
  seed = fnv1a64(request.prompt, seed);
  seed = fnv1a64("\x1f" + std::to_string(request.max_output_tokens), seed);

  static const std::regex subtopics_re(R"(write (\d+) subtopics)");
  static const std::regex variants_re(
      R"(generate (\d+) variants of the next sentence by filling \[MASK\]: ([^\n]*))");
  std::smatch m;
  GenResponse out;
  out.model_id = options_.model_id;

  if (std::regex_search(request.prompt, m, variants_re)) {
    Sampler s(seed, {});
    out.text = variant_list(s, std::stoul(m[1].str()), m[2].str());
  } else if (std::regex_search(request.prompt, m, subtopics_re)) {
    Sampler s(seed, topical_words(request.prompt));
    out.text = numbered_list(s, std::stoul(m[1].str()));
  } else {
    Sampler s(seed, topical_words(request.prompt));
    // ~0.75 words per token keeps the reply inside the budget.
    const std::size_t cap =
        std::max<std::size_t>(1, request.max_output_tokens * 3 / 4);
    out.text = document(s, std::min(options_.body_words, cap));
  }
  out.usage.prompt_tokens = estimate_tokens(request.prompt);
  out.usage.completion_tokens = estimate_tokens(out.text);
  return out;
}

}  // namespace synthcoll::genclient

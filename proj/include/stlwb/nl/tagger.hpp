#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stlwb::nl {

enum class Tag { Verb, Noun, Adj, Adv, Conj, Prep, Num, Other };

const char* tag_name(Tag t);

struct TaggedToken {
  std::string token;
  Tag tag;
  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

class NlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lowercased word tokens. Letters, digits and apostrophes form words;
/// everything else separates them.
std::vector<std::string> tokenize(std::string_view text);

/// Lowercases, tokenizes and re-joins with single spaces.
std::string normalize_phrase(std::string_view text);

/// Rule-based tagging from built-in word lists. A word that is normally a verb
/// is read as a noun right after a determiner or adjective ("the light").
/// Throws NlError when the text has no tokens.
std::vector<TaggedToken> tag_tokens(std::string_view utterance);

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct SplitResult {
  std::vector<TaggedToken> tokens;
  std::vector<Span> verb_phrases;
  std::vector<std::string> conjunctions;
  std::vector<std::string> adverbs;

  std::string phrase(std::size_t i) const;
  std::vector<std::string> phrases() const;
};

/// Cuts the token stream into verb phrases. Conjunctions close the current
/// phrase; adjacent conjunctions are reported as one ("and then"). Adverbs are
/// reported separately and left out of the phrases. A verb opens a new phrase
/// when the current one already has a verb that is not immediately before it.
/// Words ahead of the first verb ("don't") join the phrase that follows.
/// Throws NlError when there is no verb.
SplitResult split(const std::vector<TaggedToken>& tokens);

}  // namespace stlwb::nl

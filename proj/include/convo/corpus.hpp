#ifndef CONVO_CORPUS_HPP
#define CONVO_CORPUS_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "convo/message.hpp"

namespace convo {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseIssue {
    std::size_t line = 0;
    std::string detail;
};

struct ParseOptions {
    bool lenient = false;  // skip malformed records instead of throwing
};

// Streaming parse of the line-delimited corpus format (one conversation per
// line). Messages come out sorted by (timestamp_ms, comment_id). In lenient
// mode malformed records are skipped and reported through `issues`.
Corpus parse_corpus(const std::string& path, SourceKind kind,
                    const ParseOptions& opts = {},
                    std::vector<ParseIssue>* issues = nullptr);
Corpus parse_corpus(std::istream& in, SourceKind kind,
                    const ParseOptions& opts = {},
                    std::vector<ParseIssue>* issues = nullptr);

void serialize_corpus(const Corpus& corpus, std::ostream& out);
void serialize_corpus(const Corpus& corpus, const std::string& path);

// Digest of the normalised (case-folded, whitespace-collapsed) concatenation
// of all message texts; the duplicate key used by deduplicate().
std::string content_digest(const Conversation& conversation);

// Keeps the first conversation per content digest; group labels of dropped
// duplicates are merged into the survivor.
Corpus deduplicate(const Corpus& corpus);

// Rule-based sentence splitting over message.text. Terminators . ! ? end a
// sentence; a single period after a known abbreviation does not; dots inside
// an ellipsis run do not split it (the run stays with the preceding
// sentence). Empty text leaves `sentences` empty.
std::vector<std::string> split_sentences(const std::string& text);
void split_sentences(Message& message);

// Lowercased tokens with punctuation split off; @mentions, #hashtags, URLs
// and emoticons survive as single tokens.
std::vector<std::string> tokenize(const std::string& sentence);

}  // namespace convo

#endif

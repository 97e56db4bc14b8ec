#ifndef CONVO_ANNOTATE_HPP
#define CONVO_ANNOTATE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "convo/dialogue.hpp"
#include "convo/message.hpp"
#include "convo/sentiment.hpp"

namespace convo {

// Per-message annotations, parallel to message.sentences.
struct MessageAnnotation {
    std::vector<DialogueActTag> sentence_tags;
    std::vector<double> tag_scores;       // posterior of each winning tag
    std::vector<double> sentence_values;  // raw sentiment per sentence
    double message_value = 0.0;
    bool has_tags = false;
    bool has_sentiment = false;
};

struct AnnotatedConversation {
    Conversation conversation;
    std::vector<MessageAnnotation> annotations;  // parallel to messages
};

struct AnnotatedCorpus {
    SourceKind source_kind = SourceKind::Forum;
    std::vector<AnnotatedConversation> conversations;

    static AnnotatedCorpus from_corpus(Corpus corpus);
};

// Fills sentences where missing and tags every sentence.
void apply_tags(AnnotatedCorpus& corpus, const DaModel& model);
// Scores every sentence and message.
void apply_sentiment(AnnotatedCorpus& corpus, const Lexicon& lexicon,
                     const SentimentConfig& cfg);

// Same line-delimited format as the plain corpus, with per-message
// "tags" / "tag_scores" / "sentence_values" / "message_value" fields.
void write_annotated(const AnnotatedCorpus& corpus, std::ostream& out);
void write_annotated(const AnnotatedCorpus& corpus, const std::string& path);
AnnotatedCorpus read_annotated(const std::string& path, SourceKind kind);
AnnotatedCorpus read_annotated(std::istream& in, SourceKind kind);

}  // namespace convo

#endif

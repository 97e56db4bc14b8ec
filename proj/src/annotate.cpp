#include "convo/annotate.hpp"

#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "convo/corpus.hpp"

namespace convo {

using nlohmann::json;

AnnotatedCorpus AnnotatedCorpus::from_corpus(Corpus corpus) {
    AnnotatedCorpus out;
    out.source_kind = corpus.source_kind;
    out.conversations.reserve(corpus.conversations.size());
    for (auto& c : corpus.conversations) {
        AnnotatedConversation ac;
        ac.conversation = std::move(c);
        ac.annotations.resize(ac.conversation.messages.size());
        out.conversations.push_back(std::move(ac));
    }
    return out;
}

void apply_tags(AnnotatedCorpus& corpus, const DaModel& model) {
    for (auto& ac : corpus.conversations) {
        for (std::size_t i = 0; i < ac.conversation.messages.size(); ++i) {
            Message& m = ac.conversation.messages[i];
            if (m.sentences.empty()) split_sentences(m);
            MessageAnnotation& ann = ac.annotations[i];
            ann.sentence_tags.clear();
            ann.tag_scores.clear();
            for (const auto& sentence : m.sentences) {
                auto tagged = model.tag_sentence(sentence);
                ann.sentence_tags.push_back(tagged.tag);
                ann.tag_scores.push_back(tagged.score);
            }
            ann.has_tags = true;
        }
    }
}

void apply_sentiment(AnnotatedCorpus& corpus, const Lexicon& lexicon,
                     const SentimentConfig& cfg) {
    for (auto& ac : corpus.conversations) {
        for (std::size_t i = 0; i < ac.conversation.messages.size(); ++i) {
            Message& m = ac.conversation.messages[i];
            if (m.sentences.empty()) split_sentences(m);
            MessageAnnotation& ann = ac.annotations[i];
            ann.sentence_values.clear();
            double sum = 0.0;
            for (const auto& sentence : m.sentences) {
                double v = score_sentence(lexicon, tokenize(sentence), cfg).value;
                ann.sentence_values.push_back(v);
                sum += v;
            }
            ann.message_value =
                m.sentences.empty() ? 0.0 : sum / static_cast<double>(m.sentences.size());
            ann.has_sentiment = true;
        }
    }
}

void write_annotated(const AnnotatedCorpus& corpus, std::ostream& out) {
    for (const auto& ac : corpus.conversations) {
        const auto& c = ac.conversation;
        json j;
        j["id"] = c.id;
        j["groups"] = c.groups;
        json msgs = json::array();
        for (std::size_t i = 0; i < c.messages.size(); ++i) {
            const Message& m = c.messages[i];
            const MessageAnnotation& ann = ac.annotations[i];
            json mj;
            mj["poster"] = m.poster;
            mj["timestamp_ms"] = m.timestamp_ms;
            mj["references"] = m.references;
            mj["thread_id"] = m.thread_id;
            mj["comment_id"] = m.comment_id;
            mj["text"] = m.text;
            mj["sentences"] = m.sentences;
            if (ann.has_tags) {
                json tags = json::array();
                for (auto t : ann.sentence_tags) tags.push_back(tag_name(t));
                mj["tags"] = std::move(tags);
                mj["tag_scores"] = ann.tag_scores;
            }
            if (ann.has_sentiment) {
                mj["sentence_values"] = ann.sentence_values;
                mj["message_value"] = ann.message_value;
            }
            msgs.push_back(std::move(mj));
        }
        j["messages"] = std::move(msgs);
        out << j.dump() << '\n';
    }
}

void write_annotated(const AnnotatedCorpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_annotated(corpus, out);
}

AnnotatedCorpus read_annotated(std::istream& in, SourceKind kind) {
    // reuse the plain parser for structure, then pick up annotation fields
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    std::istringstream base_stream(content);
    Corpus base = parse_corpus(base_stream, kind);
    AnnotatedCorpus out = AnnotatedCorpus::from_corpus(std::move(base));

    std::istringstream lines(content);
    std::string line;
    std::size_t conv_idx = 0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        auto& ac = out.conversations.at(conv_idx++);
        // messages were re-sorted by the parser; index annotations by comment_id
        std::map<std::int64_t, const json*> by_id;
        for (const auto& mj : j.at("messages"))
            by_id[mj.at("comment_id").get<std::int64_t>()] = &mj;
        for (std::size_t i = 0; i < ac.conversation.messages.size(); ++i) {
            const json& mj = *by_id.at(ac.conversation.messages[i].comment_id);
            MessageAnnotation& ann = ac.annotations[i];
            if (mj.contains("tags")) {
                for (const auto& t : mj.at("tags"))
                    ann.sentence_tags.push_back(tag_from_name(t.get<std::string>()));
                if (mj.contains("tag_scores"))
                    ann.tag_scores = mj.at("tag_scores").get<std::vector<double>>();
                ann.has_tags = true;
            }
            if (mj.contains("sentence_values")) {
                ann.sentence_values = mj.at("sentence_values").get<std::vector<double>>();
                ann.message_value = mj.value("message_value", 0.0);
                ann.has_sentiment = true;
            }
        }
    }
    return out;
}

AnnotatedCorpus read_annotated(const std::string& path, SourceKind kind) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open annotated corpus file: " + path);
    return read_annotated(in, kind);
}

}  // namespace convo

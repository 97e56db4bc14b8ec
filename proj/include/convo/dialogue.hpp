#ifndef CONVO_DIALOGUE_HPP
#define CONVO_DIALOGUE_HPP

#include <array>
#include <bitset>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "convo/message.hpp"

namespace convo {

// Chat dialogue-act tag set. The order is the tie-break order for argmax
// (Statement first, the majority class).
enum class DialogueActTag : std::uint8_t {
    Statement,
    Emphasis,
    ynQuestion,
    whQuestion,
    Continuer,
    Reject,
    Emotion,
    Accept,
    Greet,
    nAnswer,
    yAnswer,
    Bye,
    Clarify,
    Other,
};

inline constexpr std::size_t kNumTags = 14;

const std::string& tag_name(DialogueActTag tag);
// Labels outside the tag set map to Other (the caller may warn).
DialogueActTag tag_from_name(const std::string& name, bool* known = nullptr);

struct TaggedSentence {
    std::string sentence;
    DialogueActTag tag = DialogueActTag::Statement;
    double score = 0.0;  // posterior of the winning tag
};

struct MessageDaSet {
    std::int64_t comment_id = 0;
    std::set<DialogueActTag> tag_set;
    std::bitset<kNumTags> one_hot;
};

// Multinomial Naive Bayes with add-one smoothing over tokens plus surface
// feature pseudo-tokens (sentence-initial wh-word, terminal ?, terminal !,
// all-caps token, emoticon).
class DaModel {
public:
    static DaModel train(const std::vector<std::pair<std::string, DialogueActTag>>& labeled);

    TaggedSentence tag_sentence(const std::string& sentence) const;
    // posterior over all 14 tags; untrainable tags get probability 0
    std::array<double, kNumTags> posteriors(const std::string& sentence) const;
    MessageDaSet tag_message(const Message& message) const;

    bool trainable(DialogueActTag tag) const { return class_count_[static_cast<std::size_t>(tag)] > 0; }
    std::size_t vocabulary_size() const { return vocab_.size(); }
    double prior(DialogueActTag tag) const;

    void save(std::ostream& out) const;
    void save(const std::string& path) const;
    static DaModel load(std::istream& in);
    static DaModel load(const std::string& path);

    // feature pseudo-tokens appended to a sentence's token list
    static std::vector<std::string> featurize(const std::string& sentence);

private:
    std::unordered_map<std::string, std::size_t> vocab_;  // token -> index
    std::vector<std::string> vocab_order_;                // index -> token
    std::array<std::uint64_t, kNumTags> class_count_{};   // training examples per class
    std::array<std::uint64_t, kNumTags> token_total_{};   // token occurrences per class
    std::vector<std::array<std::uint64_t, kNumTags>> token_count_;  // per vocab index
    std::uint64_t total_examples_ = 0;
};

struct DaEvaluation {
    double accuracy = 0.0;
    struct PerClass {
        double precision = 0.0;
        double recall = 0.0;
        double f1 = 0.0;
    };
    std::array<PerClass, kNumTags> per_class{};
    std::array<std::array<std::uint64_t, kNumTags>, kNumTags> confusion{};  // [gold][pred]
};

DaEvaluation evaluate_da(const DaModel& model,
                         const std::vector<std::pair<std::string, DialogueActTag>>& held_out);

// training/eval file: one example per line, "<tag>\t<sentence>"
std::vector<std::pair<std::string, DialogueActTag>> read_labeled_sentences(
    const std::string& path, std::size_t* unknown_labels = nullptr);

}  // namespace convo

#endif

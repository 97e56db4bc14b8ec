#ifndef CONVO_SENTIMENT_HPP
#define CONVO_SENTIMENT_HPP

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "convo/message.hpp"

namespace convo {

enum class Polarity { Negative, Neutral, Positive };

const std::string& polarity_name(Polarity p);

struct SentimentScore {
    double value = 0.0;
    Polarity polarity = Polarity::Neutral;
};

struct SentimentConfig {
    double epsilon = 0.25;  // neutral band half-width
    int negation_window = 3;
    int intensifier_window = 2;
};

Polarity bucket(double value, double epsilon);

// Valence lexicon plus valence shifters. File format, one entry per line:
//   <term>\t<valence>     signed real
//   <term>\tNEG           negator
//   <term>\tINT:<mult>    intensifier, mult > 1
//   <term>\tDIM:<mult>    diminisher, 0 < mult < 1
struct Lexicon {
    std::unordered_map<std::string, double> valence;
    std::unordered_set<std::string> negators;
    std::unordered_map<std::string, double> intensifiers;
    std::unordered_map<std::string, double> diminishers;

    static Lexicon load(const std::string& path, std::vector<std::string>* warnings = nullptr);
    static Lexicon load(std::istream& in, std::vector<std::string>* warnings = nullptr);
};

// Shifter-aware sentence score: each sentiment-bearing token contributes its
// valence, flipped once per negator in the preceding window and scaled by the
// nearest preceding intensifier/diminisher; the sum is normalised by the
// square root of the number of sentiment-bearing tokens.
SentimentScore score_sentence(const Lexicon& lexicon, const std::vector<std::string>& tokens,
                              const SentimentConfig& cfg = {});

// Mean of per-sentence values over message.sentences.
SentimentScore score_message(const Lexicon& lexicon, const Message& message,
                             const SentimentConfig& cfg = {});

}  // namespace convo

#endif

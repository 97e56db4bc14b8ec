#include "convo/sentiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "convo/corpus.hpp"

namespace convo {

const std::string& polarity_name(Polarity p) {
    static const std::string names[] = {"Negative", "Neutral", "Positive"};
    return names[static_cast<int>(p)];
}

Polarity bucket(double value, double epsilon) {
    if (value < -epsilon) return Polarity::Negative;
    if (value > epsilon) return Polarity::Positive;
    return Polarity::Neutral;
}

Lexicon Lexicon::load(std::istream& in, std::vector<std::string>* warnings) {
    Lexicon lex;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                                     ": expected <term>\\t<value>");
        std::string term = line.substr(0, tab);
        std::string value = line.substr(tab + 1);
        auto warn_dup = [&](const char* what) {
            if (warnings)
                warnings->push_back("line " + std::to_string(lineno) + ": duplicate " +
                                    what + " '" + term + "', last wins");
        };
        if (value == "NEG") {
            if (lex.intensifiers.count(term) || lex.diminishers.count(term))
                throw std::runtime_error("lexicon line " + std::to_string(lineno) + ": '" +
                                         term + "' already a multiplier shifter");
            if (!lex.negators.insert(term).second) warn_dup("negator");
        } else if (value.rfind("INT:", 0) == 0 || value.rfind("DIM:", 0) == 0) {
            bool intensifier = value[0] == 'I';
            double mult = 0.0;
            try {
                mult = std::stod(value.substr(4));
            } catch (const std::exception&) {
                throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                                         ": bad multiplier '" + value + "'");
            }
            if (mult <= 0.0)
                throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                                         ": multiplier must be positive");
            if (intensifier && mult <= 1.0)
                throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                                         ": intensifier multiplier must exceed 1");
            if (!intensifier && mult >= 1.0)
                throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                                         ": diminisher multiplier must be below 1");
            if (lex.negators.count(term) ||
                (intensifier ? lex.diminishers.count(term) : lex.intensifiers.count(term)))
                throw std::runtime_error("lexicon line " + std::to_string(lineno) + ": '" +
                                         term + "' already in another shifter class");
            auto& map = intensifier ? lex.intensifiers : lex.diminishers;
            if (map.count(term)) warn_dup(intensifier ? "intensifier" : "diminisher");
            map[term] = mult;
        } else {
            double v = 0.0;
            try {
                v = std::stod(value);
            } catch (const std::exception&) {
                throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                                         ": bad valence '" + value + "'");
            }
            if (lex.valence.count(term)) warn_dup("term");
            lex.valence[term] = v;
        }
    }
    if (lex.valence.empty())
        throw std::runtime_error("lexicon has no valence terms");
    return lex;
}

Lexicon Lexicon::load(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
    return load(in, warnings);
}

SentimentScore score_sentence(const Lexicon& lexicon, const std::vector<std::string>& tokens,
                              const SentimentConfig& cfg) {
    double sum = 0.0;
    std::size_t bearing = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto it = lexicon.valence.find(tokens[i]);
        if (it == lexicon.valence.end()) continue;
        ++bearing;
        double v = it->second;
        std::size_t neg_from = (i >= static_cast<std::size_t>(cfg.negation_window))
                                   ? i - cfg.negation_window
                                   : 0;
        for (std::size_t k = neg_from; k < i; ++k)
            if (lexicon.negators.count(tokens[k])) v = -v;
        std::size_t mult_from = (i >= static_cast<std::size_t>(cfg.intensifier_window))
                                    ? i - cfg.intensifier_window
                                    : 0;
        for (std::size_t k = i; k-- > mult_from;) {  // nearest first
            auto iit = lexicon.intensifiers.find(tokens[k]);
            if (iit != lexicon.intensifiers.end()) {
                v *= iit->second;
                break;
            }
            auto dit = lexicon.diminishers.find(tokens[k]);
            if (dit != lexicon.diminishers.end()) {
                v *= dit->second;
                break;
            }
        }
        sum += v;
    }
    SentimentScore score;
    score.value = bearing ? sum / std::sqrt(static_cast<double>(bearing)) : 0.0;
    score.polarity = bucket(score.value, cfg.epsilon);
    return score;
}

SentimentScore score_message(const Lexicon& lexicon, const Message& message,
                             const SentimentConfig& cfg) {
    SentimentScore score;
    if (message.sentences.empty()) return score;  // Neutral, flagged by caller
    double sum = 0.0;
    for (const auto& sentence : message.sentences)
        sum += score_sentence(lexicon, tokenize(sentence), cfg).value;
    score.value = sum / static_cast<double>(message.sentences.size());
    score.polarity = bucket(score.value, cfg.epsilon);
    return score;
}

}  // namespace convo

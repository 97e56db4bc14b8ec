#ifndef CONVO_FACTORS_HPP
#define CONVO_FACTORS_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "convo/annotate.hpp"
#include "convo/metrics.hpp"
#include "convo/sentiment.hpp"
#include "convo/threading.hpp"

namespace convo {

enum class Trajectory { Increase, Decrease, NoChange, Neg2Pos, Pos2Neg };

const std::string& trajectory_name(Trajectory t);

// Cross-polarity Neg->Pos / Pos->Neg swaps take the named transition
// categories; every other movement is compared numerically.
Trajectory classify_op_trajectory(const SentimentScore& op_initial,
                                  const SentimentScore& op_final);

struct ConditionFlags {
    bool c1_op_sentiment_increased = false;
    bool c2_post_has_negative_statement = false;
    bool c3_negative_statement_comment = false;
    bool c3_positive_statement_comment = false;
};

struct FactorFlags {
    bool universality = false;  // C1 and C2 and C3_neg
    bool hope = false;          // C1 and C2 and C3_pos
    bool altruism = false;      // C1 and C2 and C3_pos
};

FactorFlags evaluate_factors(const ConditionFlags& flags);

struct ThreadAnalysis {
    std::string conversation_id;
    std::size_t thread_index = 0;
    std::vector<std::int64_t> message_ids;
    bool defined = false;  // OP appears >= 2 times in the thread
    double op_initial = 0.0;
    double op_final = 0.0;
    Polarity op_initial_polarity = Polarity::Neutral;
    Polarity op_final_polarity = Polarity::Neutral;
    Trajectory trajectory = Trajectory::NoChange;
    ConditionFlags conditions;
    FactorFlags factors;
};

enum class ReplyPairing { Root, Parent };

struct AnalysisOptions {
    double epsilon = 0.25;
    ReplyPairing pairing = ReplyPairing::Root;
};

std::vector<ThreadAnalysis> analyze_conversation(const AnnotatedConversation& conversation,
                                                 const AnalysisOptions& opts);

struct TrajectoryDistribution {
    std::array<std::size_t, 5> counts{};  // Trajectory enum order
    std::size_t undefined = 0;
    std::array<double, 5> percent{};      // over defined threads
};

TrajectoryDistribution trajectory_distribution(const std::vector<ThreadAnalysis>& analyses);

// row -> polarity percentages, rows summing to 100 when non-empty
struct PolarityMatrix {
    std::array<std::array<std::size_t, 3>, 3> counts{};
    std::array<std::array<double, 3>, 3> percent{};
    std::array<bool, 3> row_defined{};
};

struct WelchRecord {
    std::string compared_share;  // "positive" or "negative"
    WelchResult result;
    bool computed = false;  // false when a bucket has < 2 conversations
    bool significant = false;
};

struct FactorReport {
    std::string corpus_label;
    std::size_t conversation_count = 0;
    std::size_t message_count = 0;
    std::size_t thread_count = 0;

    TrajectoryDistribution trajectory;
    std::map<std::string, double> da_sentence_percent;  // tag -> percent
    std::map<std::string, std::size_t> da_sentence_counts;
    std::map<std::string, double> structure_posts;     // tag-set row -> percent
    std::map<std::string, double> structure_comments;
    std::array<double, 3> statement_sentiment_posts{};     // Neg, Neu, Pos percent
    std::array<double, 3> statement_sentiment_comments{};
    PolarityMatrix reply_conditional;        // post polarity -> comment polarity
    PolarityMatrix final_op_conditional;     // comment polarity -> final OP polarity
    std::vector<WelchRecord> welch;          // Negative-post vs Positive-post buckets
    std::map<std::string, double> condition_rates;  // flag -> percent of defined threads

    std::vector<ThreadAnalysis> analyses;
};

// tag set canonical row name, e.g. "Statement+Reject" (tags in enum order)
std::string tag_set_row(const std::set<DialogueActTag>& tags);

// Polarity percentages over sentences tagged Statement. `any` reports whether
// at least one Statement sentence was seen (the distribution is all-zero
// otherwise).
std::array<double, 3> statement_sentiment(const std::vector<TaggedSentence>& tagged,
                                          const std::vector<SentimentScore>& scores,
                                          bool* any = nullptr);

FactorReport analyze_corpus(const AnnotatedCorpus& corpus, const AnalysisOptions& opts);

// report.json, tables/*.csv, conditions.csv under out_dir; deterministic
void emit_report(const FactorReport& report, const std::string& out_dir);

}  // namespace convo

#endif

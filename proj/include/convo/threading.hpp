#ifndef CONVO_THREADING_HPP
#define CONVO_THREADING_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "convo/message.hpp"
#include "convo/metrics.hpp"

namespace convo {

// Parent assignment per comment; the root post (comment_id 0) has no parent.
struct ReplyTree {
    std::string conversation_id;
    std::map<std::int64_t, std::int64_t> parent;            // comment_id -> parent id
    std::map<std::int64_t, std::vector<std::int64_t>> children;  // ordered by timestamp

    void rebuild_children();
};

// One root-to-leaf path through a ReplyTree.
struct Thread {
    std::string conversation_id;
    std::vector<std::int64_t> message_ids;  // message_ids[0] == 0
};

struct GoldAnnotation {
    std::string conversation_id;
    // one parent map per annotator (1 or 2)
    std::vector<std::map<std::int64_t, std::int64_t>> annotators;
};

// Heuristic tree construction. Each comment gets the first matching rule:
//   R1 the immediately preceding message has the same poster -> attach to it
//   R2 an explicit reference resolves to an earlier message of that user ->
//      attach to that user's most recent earlier message (first listed
//      reference that resolves wins)
//   R3 an earlier message shares the comment's thread_id -> attach to the
//      most recent such message
//   R4 otherwise attach to the original post
ReplyTree build_tree(const Conversation& conversation);

std::vector<Thread> tree_to_threads(const ReplyTree& tree,
                                    const Conversation& conversation);

enum class BaselineKind { Majority, Random };

// Majority: everything hangs off the root. Random: each comment picks a
// uniformly random earlier message, reproducible from the seed.
ReplyTree baseline_tree(const Conversation& conversation, BaselineKind kind,
                        std::uint64_t seed);

struct ExtractionMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Accuracy over per-comment parent matches; P/R/F1 over non-root edges,
// micro-averaged across conversations. `annotator` selects which gold
// annotation to score against.
ExtractionMetrics evaluate_extraction(const std::vector<ReplyTree>& predicted,
                                      const std::vector<GoldAnnotation>& gold,
                                      std::size_t annotator = 0);

struct AgreementResult {
    double percent_agreement = 0.0;
    double kappa = 0.0;
};

// Turn-level agreement between two annotators over parent assignments,
// pooled across conversations; kappa from each annotator's marginal
// parent-label distribution.
AgreementResult inter_annotator_agreement(const std::vector<GoldAnnotation>& gold);

// trees file: one JSON record per line {conversation_id, parents{child: parent}}
void write_trees(const std::vector<ReplyTree>& trees, std::ostream& out);
void write_trees(const std::vector<ReplyTree>& trees, const std::string& path);
std::vector<ReplyTree> read_trees(const std::string& path);

// gold file: {conversation_id, annotators: [{child: parent}, ...]}
std::vector<GoldAnnotation> read_gold(const std::string& path);
void write_gold(const std::vector<GoldAnnotation>& gold, const std::string& path);

}  // namespace convo

#endif

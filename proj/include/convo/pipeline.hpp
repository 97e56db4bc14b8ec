#ifndef CONVO_PIPELINE_HPP
#define CONVO_PIPELINE_HPP

#include <cstdint>
#include <string>

#include "convo/factors.hpp"
#include "convo/message.hpp"

namespace convo {

struct PipelineConfig {
    std::string corpus_path;
    SourceKind kind = SourceKind::Forum;
    std::string lexicon_path;
    std::string model_path;  // trained model, or empty when train_path is set
    std::string train_path;  // labeled sentences to train on
    std::string out_dir;
    double epsilon = 0.25;
    int negation_window = 3;
    int intensifier_window = 2;
    ReplyPairing pairing = ReplyPairing::Root;
    bool dedup = true;
    bool lenient = false;
    int jobs = 1;
};

// ingest -> dedup -> thread extraction -> tagging -> sentiment -> analysis ->
// report. Writes intermediates (corpus.jsonl, trees.jsonl, annotated.jsonl)
// and the report files under out_dir. Output is deterministic for a given
// config and input, independent of `jobs`.
FactorReport run_pipeline(const PipelineConfig& config);

}  // namespace convo

#endif

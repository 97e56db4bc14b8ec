#include "convo/pipeline.hpp"

#include <filesystem>
#include <stdexcept>

#include "convo/annotate.hpp"
#include "convo/corpus.hpp"
#include "convo/dialogue.hpp"
#include "convo/sentiment.hpp"
#include "convo/threading.hpp"

namespace convo {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void stage_error(const std::string& stage, const std::string& what) {
    throw std::runtime_error("stage '" + stage + "': " + what);
}

}  // namespace

FactorReport run_pipeline(const PipelineConfig& config) {
    if (config.corpus_path.empty()) stage_error("config", "no corpus path given");
    if (config.lexicon_path.empty()) stage_error("config", "no lexicon path given");
    if (config.model_path.empty() && config.train_path.empty())
        stage_error("config", "need either a trained model or a training file");
    if (config.out_dir.empty()) stage_error("config", "no output directory given");
    for (const std::string& p :
         {config.corpus_path, config.lexicon_path, config.model_path, config.train_path})
        if (!p.empty() && !fs::exists(p)) stage_error("config", "no such file: " + p);
    fs::create_directories(config.out_dir);

    Corpus corpus;
    try {
        corpus = parse_corpus(config.corpus_path, config.kind, {config.lenient});
    } catch (const std::exception& e) {
        stage_error("ingest", e.what());
    }
    if (config.dedup) corpus = deduplicate(corpus);
    for (auto& c : corpus.conversations)
        for (auto& m : c.messages) split_sentences(m);
    serialize_corpus(corpus, (fs::path(config.out_dir) / "corpus.jsonl").string());

    std::vector<ReplyTree> trees;
    trees.reserve(corpus.conversations.size());
    for (const auto& c : corpus.conversations) trees.push_back(build_tree(c));
    write_trees(trees, (fs::path(config.out_dir) / "trees.jsonl").string());

    DaModel model = [&] {
        try {
            if (!config.model_path.empty()) return DaModel::load(config.model_path);
            auto labeled = read_labeled_sentences(config.train_path);
            DaModel m = DaModel::train(labeled);
            m.save((fs::path(config.out_dir) / "da.model").string());
            return m;
        } catch (const std::exception& e) {
            stage_error("dialogue-acts", e.what());
        }
    }();

    Lexicon lexicon = [&] {
        try {
            return Lexicon::load(config.lexicon_path);
        } catch (const std::exception& e) {
            stage_error("sentiment", e.what());
        }
    }();
    SentimentConfig scfg{config.epsilon, config.negation_window, config.intensifier_window};

    AnnotatedCorpus annotated = AnnotatedCorpus::from_corpus(std::move(corpus));
    apply_tags(annotated, model);
    apply_sentiment(annotated, lexicon, scfg);
    write_annotated(annotated, (fs::path(config.out_dir) / "annotated.jsonl").string());

    AnalysisOptions opts{config.epsilon, config.pairing};
    FactorReport report = analyze_corpus(annotated, opts);
    emit_report(report, config.out_dir);
    return report;
}

}  // namespace convo

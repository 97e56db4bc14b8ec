#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "convo/annotate.hpp"
#include "convo/corpus.hpp"
#include "convo/dialogue.hpp"
#include "convo/factors.hpp"
#include "convo/pipeline.hpp"
#include "convo/sentiment.hpp"
#include "convo/threading.hpp"

namespace {

using namespace convo;

SourceKind parse_kind(const std::string& kind) {
    if (kind == "forum") return SourceKind::Forum;
    if (kind == "twitter") return SourceKind::Twitter;
    throw CLI::ValidationError("--kind", "expected 'forum' or 'twitter'");
}

int cmd_ingest(const std::string& input, const std::string& kind, bool dedup,
               const std::string& out, bool lenient) {
    std::vector<ParseIssue> issues;
    Corpus corpus = parse_corpus(input, parse_kind(kind), {lenient}, &issues);
    for (const auto& issue : issues)
        std::cerr << "warning: line " << issue.line << ": " << issue.detail << "\n";
    if (dedup) corpus = deduplicate(corpus);
    for (auto& c : corpus.conversations)
        for (auto& m : c.messages) split_sentences(m);
    serialize_corpus(corpus, out);
    std::cout << "ingested " << corpus.conversations.size() << " conversations\n";
    return 0;
}

int cmd_threads(const std::string& input, const std::string& kind, const std::string& out) {
    Corpus corpus = parse_corpus(input, parse_kind(kind));
    std::vector<ReplyTree> trees;
    for (const auto& c : corpus.conversations) trees.push_back(build_tree(c));
    write_trees(trees, out);
    std::cout << "extracted trees for " << trees.size() << " conversations\n";
    return 0;
}

int cmd_eval_threads(const std::string& pred_path, const std::string& gold_path,
                     const std::string& baseline, const std::string& corpus_path,
                     const std::string& kind, std::uint64_t seed, std::size_t annotator,
                     bool agreement) {
    std::vector<GoldAnnotation> gold = read_gold(gold_path);
    if (agreement) {
        auto r = inter_annotator_agreement(gold);
        std::printf("percent_agreement %.6f\nkappa %.6f\n", r.percent_agreement, r.kappa);
        return 0;
    }
    std::vector<ReplyTree> trees;
    if (!baseline.empty()) {
        if (corpus_path.empty())
            throw CLI::ValidationError("--input", "--baseline needs the corpus");
        BaselineKind bk;
        if (baseline == "majority")
            bk = BaselineKind::Majority;
        else if (baseline == "random")
            bk = BaselineKind::Random;
        else
            throw CLI::ValidationError("--baseline", "expected 'majority' or 'random'");
        Corpus corpus = parse_corpus(corpus_path, parse_kind(kind));
        for (const auto& c : corpus.conversations)
            trees.push_back(baseline_tree(c, bk, seed));
    } else {
        trees = read_trees(pred_path);
    }
    auto m = evaluate_extraction(trees, gold, annotator);
    std::printf("accuracy %.6f\nprecision %.6f\nrecall %.6f\nf1 %.6f\n", m.accuracy,
                m.precision, m.recall, m.f1);
    return 0;
}

int cmd_train_da(const std::string& train, const std::string& out) {
    std::size_t unknown = 0;
    auto labeled = read_labeled_sentences(train, &unknown);
    if (unknown)
        std::cerr << "warning: " << unknown << " labels outside the tag set mapped to Other\n";
    DaModel model = DaModel::train(labeled);
    model.save(out);
    std::cout << "trained on " << labeled.size() << " sentences, vocabulary "
              << model.vocabulary_size() << "\n";
    return 0;
}

int cmd_eval_da(const std::string& model_path, const std::string& test) {
    DaModel model = DaModel::load(model_path);
    auto held_out = read_labeled_sentences(test);
    auto eval = evaluate_da(model, held_out);
    std::printf("accuracy %.6f\n", eval.accuracy);
    for (std::size_t c = 0; c < kNumTags; ++c) {
        std::uint64_t support = 0;
        for (std::size_t o = 0; o < kNumTags; ++o) support += eval.confusion[c][o];
        if (!support) continue;
        std::printf("%-12s P %.4f R %.4f F1 %.4f (n=%llu)\n",
                    tag_name(static_cast<DialogueActTag>(c)).c_str(),
                    eval.per_class[c].precision, eval.per_class[c].recall,
                    eval.per_class[c].f1, static_cast<unsigned long long>(support));
    }
    return 0;
}

int cmd_tag(const std::string& model_path, const std::string& corpus_path,
            const std::string& kind, const std::string& out) {
    DaModel model = DaModel::load(model_path);
    AnnotatedCorpus corpus = read_annotated(corpus_path, parse_kind(kind));
    apply_tags(corpus, model);
    write_annotated(corpus, out);
    return 0;
}

int cmd_score(const std::string& lexicon_path, const std::string& corpus_path,
              const std::string& kind, const std::string& out, const SentimentConfig& cfg) {
    std::vector<std::string> warnings;
    Lexicon lexicon = Lexicon::load(lexicon_path, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: lexicon " << w << "\n";
    AnnotatedCorpus corpus = read_annotated(corpus_path, parse_kind(kind));
    apply_sentiment(corpus, lexicon, cfg);
    write_annotated(corpus, out);
    return 0;
}

int cmd_analyze(const std::string& corpus_path, const std::string& kind,
                const std::string& out_dir, const std::string& pair_with, double epsilon) {
    AnalysisOptions opts;
    opts.epsilon = epsilon;
    if (pair_with == "parent")
        opts.pairing = ReplyPairing::Parent;
    else if (pair_with != "root")
        throw CLI::ValidationError("--pair-with", "expected 'root' or 'parent'");
    AnnotatedCorpus corpus = read_annotated(corpus_path, parse_kind(kind));
    FactorReport report = analyze_corpus(corpus, opts);
    emit_report(report, out_dir);
    std::cout << "analyzed " << report.conversation_count << " conversations, "
              << report.thread_count << " threads\n";
    return 0;
}

int cmd_report(const std::string& report_path) {
    std::ifstream in(report_path);
    if (!in) throw std::runtime_error("cannot open report file: " + report_path);
    nlohmann::json j;
    in >> j;
    std::cout << "corpus: " << j.value("corpus", std::string("?")) << "\n"
              << "conversations: " << j.value("conversations", 0) << "\n"
              << "messages: " << j.value("messages", 0) << "\n"
              << "threads: " << j.value("threads", 0) << "\n\n";
    if (j.contains("trajectory")) {
        std::cout << "OP sentiment trajectory (% of defined threads):\n";
        for (const auto& [name, pct] : j["trajectory"]["percent"].items())
            std::printf("  %-9s %6.2f\n", name.c_str(), pct.get<double>());
        std::cout << "  undefined " << j["trajectory"]["undefined"].get<std::size_t>()
                  << " threads\n\n";
    }
    if (j.contains("condition_rates")) {
        std::cout << "condition satisfaction (% of defined threads):\n";
        for (const auto& [name, pct] : j["condition_rates"].items())
            std::printf("  %-32s %6.2f\n", name.c_str(), pct.get<double>());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conversation thread, dialogue-act and sentiment analytics"};
    app.require_subcommand(1);

    std::string input, out, out_dir, kind = "forum", model_path, lexicon_path, train_path;
    std::string pred_path, gold_path, baseline, pair_with = "root", corpus_path, test_path;
    std::string report_path;
    bool dedup = false, lenient = false, agreement = false;
    std::uint64_t seed = 0;
    std::size_t annotator = 1;
    double epsilon = 0.25;
    int neg_window = 3, int_window = 2, jobs = 1;

    auto* ingest = app.add_subcommand("ingest", "parse, validate and de-duplicate a corpus");
    ingest->add_option("--input", input)->required();
    ingest->add_option("--kind", kind, "forum|twitter");
    ingest->add_flag("--dedup", dedup);
    ingest->add_option("--out", out)->required();
    ingest->add_flag("--lenient", lenient, "skip malformed records instead of failing");

    auto* threads = app.add_subcommand("threads", "extract reply trees");
    threads->add_option("--input", input)->required();
    threads->add_option("--kind", kind);
    threads->add_option("--out", out)->required();

    auto* evalt = app.add_subcommand("eval-threads", "evaluate trees against gold");
    evalt->add_option("--pred", pred_path);
    evalt->add_option("--gold", gold_path)->required();
    evalt->add_option("--baseline", baseline, "majority|random");
    evalt->add_option("--input", corpus_path, "corpus, needed with --baseline");
    evalt->add_option("--kind", kind);
    evalt->add_option("--seed", seed);
    evalt->add_option("--annotator", annotator, "gold annotator to score against (1-based)");
    evalt->add_flag("--agreement", agreement, "report inter-annotator agreement instead");

    auto* train = app.add_subcommand("train-da", "train the dialogue-act model");
    train->add_option("--train", train_path)->required();
    train->add_option("--out", out)->required();

    auto* evald = app.add_subcommand("eval-da", "evaluate the dialogue-act model");
    evald->add_option("--model", model_path)->required();
    evald->add_option("--test", test_path)->required();

    auto* tag = app.add_subcommand("tag", "tag corpus sentences with dialogue acts");
    tag->add_option("--model", model_path)->required();
    tag->add_option("--corpus", corpus_path)->required();
    tag->add_option("--kind", kind);
    tag->add_option("--out", out)->required();

    auto* score = app.add_subcommand("score", "score corpus sentiment");
    score->add_option("--lexicon", lexicon_path)->required();
    score->add_option("--corpus", corpus_path)->required();
    score->add_option("--kind", kind);
    score->add_option("--out", out)->required();
    score->add_option("--epsilon", epsilon);
    score->add_option("--neg-window", neg_window);
    score->add_option("--int-window", int_window);

    auto* analyze = app.add_subcommand("analyze", "run the condition battery");
    analyze->add_option("--corpus", corpus_path, "tagged and scored corpus")->required();
    analyze->add_option("--kind", kind);
    analyze->add_option("--out-dir", out_dir)->required();
    analyze->add_option("--pair-with", pair_with, "root|parent");
    analyze->add_option("--epsilon", epsilon);

    auto* report = app.add_subcommand("report", "render report.json as text");
    report->add_option("--report", report_path)->required();

    auto* run = app.add_subcommand("run", "full pipeline");
    run->add_option("--corpus", corpus_path)->required();
    run->add_option("--kind", kind);
    run->add_option("--lexicon", lexicon_path)->required();
    run->add_option("--model", model_path);
    run->add_option("--train", train_path);
    run->add_option("--out-dir", out_dir)->required();
    run->add_option("--epsilon", epsilon);
    run->add_option("--neg-window", neg_window);
    run->add_option("--int-window", int_window);
    run->add_option("--pair-with", pair_with);
    run->add_flag("--no-dedup", dedup, "skip de-duplication")->default_val(false);
    run->add_flag("--lenient", lenient);
    run->add_option("--jobs", jobs, "parallelism bound (output is canonical regardless)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*ingest) return cmd_ingest(input, kind, dedup, out, lenient);
        if (*threads) return cmd_threads(input, kind, out);
        if (*evalt)
            return cmd_eval_threads(pred_path, gold_path, baseline, corpus_path, kind, seed,
                                    annotator ? annotator - 1 : 0, agreement);
        if (*train) return cmd_train_da(train_path, out);
        if (*evald) return cmd_eval_da(model_path, test_path);
        if (*tag) return cmd_tag(model_path, corpus_path, kind, out);
        if (*score)
            return cmd_score(lexicon_path, corpus_path, kind, out,
                             {epsilon, neg_window, int_window});
        if (*analyze) return cmd_analyze(corpus_path, kind, out_dir, pair_with, epsilon);
        if (*report) return cmd_report(report_path);
        if (*run) {
            PipelineConfig cfg;
            cfg.corpus_path = corpus_path;
            cfg.kind = parse_kind(kind);
            cfg.lexicon_path = lexicon_path;
            cfg.model_path = model_path;
            cfg.train_path = train_path;
            cfg.out_dir = out_dir;
            cfg.epsilon = epsilon;
            cfg.negation_window = neg_window;
            cfg.intensifier_window = int_window;
            cfg.pairing = pair_with == "parent" ? ReplyPairing::Parent : ReplyPairing::Root;
            cfg.dedup = !dedup;  // flag is --no-dedup
            cfg.lenient = lenient;
            cfg.jobs = jobs;
            FactorReport r = run_pipeline(cfg);
            std::cout << "analyzed " << r.conversation_count << " conversations, "
                      << r.thread_count << " threads; report in " << out_dir << "\n";
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        // input problems exit 2, internal problems 1
        bool input_error = msg.find("cannot open") != std::string::npos ||
                           msg.find("no such file") != std::string::npos ||
                           msg.find("file line") != std::string::npos ||
                           msg.find("stage '") != std::string::npos;
        return input_error ? 2 : 1;
    }
    return 1;
}

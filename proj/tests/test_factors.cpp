#include <doctest.h>

#include <sstream>

#include "convo/factors.hpp"

using namespace convo;

namespace {

SentimentScore sc(double v, double eps = 0.25) { return {v, bucket(v, eps)}; }

// builds a message with one sentence per (tag, value) pair
Message fx_msg(const std::string& poster, std::int64_t ts, std::int64_t thread_id,
               std::int64_t comment_id) {
    Message m;
    m.poster = poster;
    m.timestamp_ms = ts;
    m.thread_id = thread_id;
    m.comment_id = comment_id;
    return m;
}

MessageAnnotation fx_ann(std::vector<std::pair<DialogueActTag, double>> sentences) {
    MessageAnnotation ann;
    double sum = 0.0;
    for (const auto& [tag, value] : sentences) {
        ann.sentence_tags.push_back(tag);
        ann.tag_scores.push_back(1.0);
        ann.sentence_values.push_back(value);
        sum += value;
    }
    ann.message_value = sentences.empty() ? 0.0 : sum / sentences.size();
    ann.has_tags = true;
    ann.has_sentiment = true;
    return ann;
}

void add_msg(AnnotatedConversation& ac, Message m,
             std::vector<std::pair<DialogueActTag, double>> sentences) {
    for (std::size_t i = 0; i < sentences.size(); ++i)
        m.sentences.push_back("s" + std::to_string(i));
    ac.conversation.messages.push_back(std::move(m));
    ac.annotations.push_back(fx_ann(std::move(sentences)));
}

}  // namespace

TEST_CASE("classify_op_trajectory") {
    CHECK(classify_op_trajectory(sc(-1.0), sc(1.0)) == Trajectory::Neg2Pos);
    CHECK(classify_op_trajectory(sc(1.0), sc(-1.0)) == Trajectory::Pos2Neg);
    CHECK(classify_op_trajectory(sc(1.0), sc(1.0)) == Trajectory::NoChange);
    // within-Neutral numeric movement counts as Increase
    CHECK(classify_op_trajectory(sc(0.1), sc(0.2)) == Trajectory::Increase);
    CHECK(classify_op_trajectory(sc(0.2), sc(0.1)) == Trajectory::Decrease);
    // Neutral -> Positive is a numeric increase, not a named transition
    CHECK(classify_op_trajectory(sc(0.0), sc(1.0)) == Trajectory::Increase);
    CHECK(classify_op_trajectory(sc(-1.0), sc(0.0)) == Trajectory::Increase);
    CHECK(classify_op_trajectory(sc(0.0), sc(-1.0)) == Trajectory::Decrease);
    // cross-polarity swap wins over the numeric comparison direction
    CHECK(classify_op_trajectory(sc(-0.3), sc(0.3)) == Trajectory::Neg2Pos);
}

TEST_CASE("factor conjunction table, all 16 combinations") {
    for (int mask = 0; mask < 16; ++mask) {
        ConditionFlags c;
        c.c1_op_sentiment_increased = mask & 1;
        c.c2_post_has_negative_statement = mask & 2;
        c.c3_negative_statement_comment = mask & 4;
        c.c3_positive_statement_comment = mask & 8;
        FactorFlags f = evaluate_factors(c);
        CHECK(f.universality == (c.c1_op_sentiment_increased &&
                                 c.c2_post_has_negative_statement &&
                                 c.c3_negative_statement_comment));
        CHECK(f.hope == (c.c1_op_sentiment_increased &&
                         c.c2_post_has_negative_statement &&
                         c.c3_positive_statement_comment));
        CHECK(f.altruism == f.hope);  // indistinguishable under this approximation
    }
}

TEST_CASE("analyze_conversation: hope and altruism fixture") {
    // OP posts a negative statement, a commenter replies with a positive
    // statement, OP returns with a higher score
    AnnotatedConversation ac;
    ac.conversation.id = "hopeful";
    add_msg(ac, fx_msg("op", 0, 0, 0), {{DialogueActTag::Statement, -1.0}});
    add_msg(ac, fx_msg("helper", 10, 1, 1), {{DialogueActTag::Statement, 1.0}});
    add_msg(ac, fx_msg("op", 20, 1, 2), {{DialogueActTag::Statement, 0.5}});

    auto analyses = analyze_conversation(ac, {});
    REQUIRE(analyses.size() == 1);
    const auto& a = analyses[0];
    CHECK(a.defined);
    CHECK(a.op_initial == doctest::Approx(-1.0));
    CHECK(a.op_final == doctest::Approx(0.5));
    CHECK(a.trajectory == Trajectory::Neg2Pos);  // 0.5 clears the neutral band
    CHECK(a.conditions.c1_op_sentiment_increased);
    CHECK(a.conditions.c2_post_has_negative_statement);
    CHECK(!a.conditions.c3_negative_statement_comment);
    CHECK(a.conditions.c3_positive_statement_comment);
    CHECK(a.factors.hope);
    CHECK(a.factors.altruism);
    CHECK(!a.factors.universality);
}

TEST_CASE("analyze_conversation: neutral-only post blocks all factors") {
    AnnotatedConversation ac;
    ac.conversation.id = "neutral-post";
    add_msg(ac, fx_msg("op", 0, 0, 0), {{DialogueActTag::Statement, 0.0}});
    add_msg(ac, fx_msg("u", 10, 1, 1), {{DialogueActTag::Statement, -1.0}});
    add_msg(ac, fx_msg("op", 20, 1, 2), {{DialogueActTag::Statement, 1.0}});
    auto analyses = analyze_conversation(ac, {});
    REQUIRE(analyses.size() == 1);
    CHECK(analyses[0].conditions.c1_op_sentiment_increased);
    CHECK(!analyses[0].conditions.c2_post_has_negative_statement);
    CHECK(!analyses[0].factors.universality);
    CHECK(!analyses[0].factors.hope);
    CHECK(!analyses[0].factors.altruism);
}

TEST_CASE("analyze_conversation: decreasing OP sentiment blocks all factors") {
    AnnotatedConversation ac;
    ac.conversation.id = "decline";
    add_msg(ac, fx_msg("op", 0, 0, 0), {{DialogueActTag::Statement, -0.5}});
    add_msg(ac, fx_msg("u", 10, 1, 1), {{DialogueActTag::Statement, 1.0}});
    add_msg(ac, fx_msg("op", 20, 1, 2), {{DialogueActTag::Statement, -2.0}});
    auto analyses = analyze_conversation(ac, {});
    REQUIRE(analyses.size() == 1);
    CHECK(!analyses[0].conditions.c1_op_sentiment_increased);
    CHECK(!analyses[0].factors.universality);
    CHECK(!analyses[0].factors.hope);
}

TEST_CASE("analyze_conversation: OP never returns -> undefined") {
    AnnotatedConversation ac;
    ac.conversation.id = "one-shot";
    add_msg(ac, fx_msg("op", 0, 0, 0), {{DialogueActTag::Statement, -1.0}});
    add_msg(ac, fx_msg("u", 10, 1, 1), {{DialogueActTag::Statement, 1.0}});
    auto analyses = analyze_conversation(ac, {});
    REQUIRE(analyses.size() == 1);
    CHECK(!analyses[0].defined);
    auto dist = trajectory_distribution(analyses);
    CHECK(dist.undefined == 1);
    for (auto c : dist.counts) CHECK(c == 0);
}

TEST_CASE("trajectory_distribution counts and percentages") {
    std::vector<ThreadAnalysis> analyses;
    auto mk = [&](Trajectory t, bool defined = true) {
        ThreadAnalysis a;
        a.defined = defined;
        a.trajectory = t;
        analyses.push_back(a);
    };
    SUBCASE("all Neg2Pos") {
        for (int i = 0; i < 4; ++i) mk(Trajectory::Neg2Pos);
        auto d = trajectory_distribution(analyses);
        CHECK(d.percent[static_cast<int>(Trajectory::Neg2Pos)] == doctest::Approx(100.0));
        CHECK(d.counts[static_cast<int>(Trajectory::Neg2Pos)] == 4);
    }
    SUBCASE("empty input") {
        auto d = trajectory_distribution({});
        for (auto p : d.percent) CHECK(p == 0.0);
        CHECK(d.undefined == 0);
    }
    SUBCASE("mixed hand-labeled fixture of 10 threads") {
        mk(Trajectory::Increase);
        mk(Trajectory::Increase);
        mk(Trajectory::Increase);
        mk(Trajectory::Decrease);
        mk(Trajectory::Decrease);
        mk(Trajectory::NoChange);
        mk(Trajectory::Neg2Pos);
        mk(Trajectory::Neg2Pos);
        mk(Trajectory::Pos2Neg);
        mk(Trajectory::Increase, false);
        auto d = trajectory_distribution(analyses);
        CHECK(d.undefined == 1);
        CHECK(d.counts[static_cast<int>(Trajectory::Increase)] == 3);
        CHECK(d.percent[static_cast<int>(Trajectory::Increase)] ==
              doctest::Approx(100.0 / 3.0));
        CHECK(d.percent[static_cast<int>(Trajectory::Pos2Neg)] ==
              doctest::Approx(100.0 / 9.0));
        double total = 0;
        for (auto p : d.percent) total += p;
        CHECK(total == doctest::Approx(100.0).epsilon(1e-9));
    }
}

TEST_CASE("statement_sentiment distribution") {
    std::vector<TaggedSentence> tagged = {
        {"a", DialogueActTag::Statement, 1.0},
        {"b", DialogueActTag::Statement, 1.0},
        {"c", DialogueActTag::whQuestion, 1.0},
        {"d", DialogueActTag::Statement, 1.0},
        {"e", DialogueActTag::Statement, 1.0},
    };
    std::vector<SentimentScore> scores = {sc(-1.0), sc(0.0), sc(5.0), sc(1.0), sc(2.0)};
    bool any = false;
    auto dist = statement_sentiment(tagged, scores, &any);
    CHECK(any);
    // question sentence excluded: 1 Neg, 1 Neu, 2 Pos
    CHECK(dist[0] == doctest::Approx(25.0));
    CHECK(dist[1] == doctest::Approx(25.0));
    CHECK(dist[2] == doctest::Approx(50.0));

    SUBCASE("all positive") {
        std::vector<TaggedSentence> t2 = {{"a", DialogueActTag::Statement, 1.0}};
        auto d2 = statement_sentiment(t2, {sc(2.0)}, &any);
        CHECK(d2[2] == doctest::Approx(100.0));
    }
    SUBCASE("no statements flags empty") {
        std::vector<TaggedSentence> t2 = {{"a", DialogueActTag::Greet, 1.0}};
        auto d2 = statement_sentiment(t2, {sc(2.0)}, &any);
        CHECK(!any);
        CHECK(d2[0] + d2[1] + d2[2] == 0.0);
    }
}

TEST_CASE("analyze_corpus: single negative post with one positive comment") {
    AnnotatedCorpus corpus;
    AnnotatedConversation ac;
    ac.conversation.id = "c";
    add_msg(ac, fx_msg("op", 0, 0, 0), {{DialogueActTag::Statement, -1.0}});
    add_msg(ac, fx_msg("u", 10, 1, 1), {{DialogueActTag::Statement, 1.0}});
    corpus.conversations.push_back(std::move(ac));
    FactorReport report = analyze_corpus(corpus, {});
    // reply conditional: Negative post row = (0, 0, 100)
    auto row = report.reply_conditional.percent[0];
    CHECK(row[0] == 0.0);
    CHECK(row[1] == 0.0);
    CHECK(row[2] == doctest::Approx(100.0));
    CHECK(report.reply_conditional.counts[0][2] == 1);
    // rows sum to 100 or are empty
    for (std::size_t r = 0; r < 3; ++r) {
        double total = 0;
        for (double v : report.reply_conditional.percent[r]) total += v;
        if (report.reply_conditional.row_defined[r])
            CHECK(total == doctest::Approx(100.0).epsilon(1e-9));
        else
            CHECK(total == 0.0);
    }
}

TEST_CASE("analyze_corpus: final-OP conditional fixture") {
    // OP always ends Positive; comments of every polarity
    AnnotatedCorpus corpus;
    AnnotatedConversation ac;
    ac.conversation.id = "c";
    add_msg(ac, fx_msg("op", 0, 0, 0), {{DialogueActTag::Statement, -1.0}});
    add_msg(ac, fx_msg("u1", 10, 1, 1), {{DialogueActTag::Statement, -2.0}});
    add_msg(ac, fx_msg("u2", 20, 1, 2), {{DialogueActTag::Statement, 0.0}});
    add_msg(ac, fx_msg("u3", 30, 1, 3), {{DialogueActTag::Statement, 2.0}});
    add_msg(ac, fx_msg("op", 40, 1, 4), {{DialogueActTag::Statement, 1.5}});
    corpus.conversations.push_back(std::move(ac));
    FactorReport report = analyze_corpus(corpus, {});
    for (std::size_t r = 0; r < 3; ++r) {
        REQUIRE(report.final_op_conditional.row_defined[r]);
        CHECK(report.final_op_conditional.percent[r][2] == doctest::Approx(100.0));
    }
    CHECK(report.trajectory.counts[static_cast<int>(Trajectory::Neg2Pos)] == 1);
}

TEST_CASE("analyze_corpus: structure rows and da distribution") {
    AnnotatedCorpus corpus;
    AnnotatedConversation ac;
    ac.conversation.id = "c";
    add_msg(ac, fx_msg("op", 0, 0, 0), {{DialogueActTag::Statement, 0.0}});
    add_msg(ac, fx_msg("u1", 10, 1, 1),
            {{DialogueActTag::Statement, 0.0}, {DialogueActTag::Reject, 0.0}});
    add_msg(ac, fx_msg("u2", 20, 1, 2),
            {{DialogueActTag::Greet, 0.0}, {DialogueActTag::Bye, 0.0}});
    add_msg(ac, fx_msg("op", 30, 1, 3), {{DialogueActTag::Statement, 0.0}});
    corpus.conversations.push_back(std::move(ac));
    FactorReport report = analyze_corpus(corpus, {});

    CHECK(report.structure_posts.at("Statement") == doctest::Approx(100.0));
    CHECK(report.structure_comments.at("Statement+Reject") == doctest::Approx(100.0 / 3.0));
    CHECK(report.structure_comments.at("other") == doctest::Approx(100.0 / 3.0));
    CHECK(report.structure_comments.at("Statement") == doctest::Approx(100.0 / 3.0));

    // 6 sentences total: 3 Statement, 1 Reject, 1 Greet, 1 Bye
    double total = 0;
    for (const auto& [tag, pct] : report.da_sentence_percent) total += pct;
    CHECK(total == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(report.da_sentence_counts.at("Statement") == 3);
}

TEST_CASE("tag_set_row canonical naming") {
    CHECK(tag_set_row({DialogueActTag::Statement}) == "Statement");
    CHECK(tag_set_row({DialogueActTag::Reject, DialogueActTag::Statement}) ==
          "Statement+Reject");
    CHECK(tag_set_row({DialogueActTag::whQuestion, DialogueActTag::ynQuestion}) ==
          "ynQuestion+whQuestion");
}

TEST_CASE("analyze_corpus on an empty corpus does not crash") {
    AnnotatedCorpus corpus;
    FactorReport report = analyze_corpus(corpus, {});
    CHECK(report.conversation_count == 0);
    CHECK(report.thread_count == 0);
    CHECK(report.trajectory.undefined == 0);
    emit_report(report, "empty_report_dir");
}

TEST_CASE("adding a conversation leaves existing analyses untouched") {
    AnnotatedCorpus corpus;
    AnnotatedConversation ac;
    ac.conversation.id = "c1";
    add_msg(ac, fx_msg("op", 0, 0, 0), {{DialogueActTag::Statement, -1.0}});
    add_msg(ac, fx_msg("u", 10, 1, 1), {{DialogueActTag::Statement, 1.0}});
    add_msg(ac, fx_msg("op", 20, 1, 2), {{DialogueActTag::Statement, 1.0}});
    corpus.conversations.push_back(ac);
    FactorReport before = analyze_corpus(corpus, {});

    AnnotatedConversation extra;
    extra.conversation.id = "c2";
    add_msg(extra, fx_msg("op2", 0, 0, 0), {{DialogueActTag::Greet, 2.0}});
    corpus.conversations.push_back(std::move(extra));
    FactorReport after = analyze_corpus(corpus, {});

    REQUIRE(after.analyses.size() == before.analyses.size() + 1);
    for (std::size_t i = 0; i < before.analyses.size(); ++i) {
        CHECK(after.analyses[i].conversation_id == before.analyses[i].conversation_id);
        CHECK(after.analyses[i].trajectory == before.analyses[i].trajectory);
        CHECK(after.analyses[i].op_initial == before.analyses[i].op_initial);
        CHECK(after.analyses[i].factors.hope == before.analyses[i].factors.hope);
    }
}

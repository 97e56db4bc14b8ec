#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "convo/corpus.hpp"
#include "convo/dialogue.hpp"

using namespace convo;
using Labeled = std::vector<std::pair<std::string, DialogueActTag>>;

TEST_CASE("tag names round-trip; unknown maps to Other") {
    for (std::size_t i = 0; i < kNumTags; ++i) {
        auto tag = static_cast<DialogueActTag>(i);
        bool known = false;
        CHECK(tag_from_name(tag_name(tag), &known) == tag);
        CHECK(known);
    }
    bool known = true;
    CHECK(tag_from_name("Bogus", &known) == DialogueActTag::Other);
    CHECK(!known);
}

TEST_CASE("train: separable toy problem") {
    Labeled data = {{"hello there", DialogueActTag::Greet},
                    {"bye now", DialogueActTag::Bye}};
    DaModel model = DaModel::train(data);
    CHECK(model.tag_sentence("hello").tag == DialogueActTag::Greet);
    CHECK(model.tag_sentence("bye").tag == DialogueActTag::Bye);
    CHECK(evaluate_da(model, data).accuracy == 1.0);
}

TEST_CASE("train: class priors equal empirical label frequencies") {
    Labeled data = {{"a b", DialogueActTag::Statement},
                    {"c d", DialogueActTag::Statement},
                    {"e f", DialogueActTag::Greet},
                    {"g", DialogueActTag::Statement}};
    DaModel model = DaModel::train(data);
    CHECK(model.prior(DialogueActTag::Statement) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(model.prior(DialogueActTag::Greet) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(model.prior(DialogueActTag::Bye) == 0.0);
    CHECK(!model.trainable(DialogueActTag::Bye));
}

TEST_CASE("wh-question toy set with hand-computed posterior") {
    Labeled data = {{"what is that", DialogueActTag::whQuestion},
                    {"where did he go", DialogueActTag::whQuestion},
                    {"who was there", DialogueActTag::whQuestion},
                    {"i went home", DialogueActTag::Statement},
                    {"he was tired", DialogueActTag::Statement},
                    {"it is over", DialogueActTag::Statement}};
    DaModel model = DaModel::train(data);
    auto tagged = model.tag_sentence("where is he");
    CHECK(tagged.tag == DialogueActTag::whQuestion);

    // oracle: multinomial NB posterior computed by hand on the toy counts.
    // query tokens: where, is, he, <F:wh-initial>.
    // wh class: 10 word occurrences + 3 wh-initial features = 13 tokens;
    //   where=1, is=1, he=1, wh-initial=3.
    // Statement class: 9 tokens; where=0, is=1, he=1, wh-initial=0.
    double v = static_cast<double>(model.vocabulary_size());
    double wh = std::log(0.5) + std::log((1.0 + 1) / (13.0 + v)) +
                std::log((1.0 + 1) / (13.0 + v)) + std::log((1.0 + 1) / (13.0 + v)) +
                std::log((3.0 + 1) / (13.0 + v));
    double st = std::log(0.5) + std::log((0.0 + 1) / (9.0 + v)) +
                std::log((1.0 + 1) / (9.0 + v)) + std::log((1.0 + 1) / (9.0 + v)) +
                std::log((0.0 + 1) / (9.0 + v));
    double expected = std::exp(wh) / (std::exp(wh) + std::exp(st));
    auto post = model.posteriors("where is he");
    CHECK(post[static_cast<std::size_t>(DialogueActTag::whQuestion)] ==
          doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("terminal-? feature pushes toward ynQuestion") {
    Labeled data = {{"did you sleep well?", DialogueActTag::ynQuestion},
                    {"have you eaten today?", DialogueActTag::ynQuestion},
                    {"are you feeling better?", DialogueActTag::ynQuestion},
                    {"i slept badly", DialogueActTag::Statement},
                    {"i ate nothing", DialogueActTag::Statement},
                    {"i feel fine now", DialogueActTag::Statement}};
    DaModel model = DaModel::train(data);
    CHECK(model.tag_sentence("Have you talked to him about this?").tag ==
          DialogueActTag::ynQuestion);
}

TEST_CASE("posteriors form a distribution; argmax score at least 1/14") {
    Labeled data = {{"yes", DialogueActTag::yAnswer},
                    {"no", DialogueActTag::nAnswer},
                    {"hello", DialogueActTag::Greet},
                    {"i think so", DialogueActTag::Statement}};
    DaModel model = DaModel::train(data);
    std::mt19937 rng(3);
    std::vector<std::string> words = {"yes", "no", "hello", "i",    "think",
                                      "so",  "zzz", "what",  "????", "WOW"};
    for (int iter = 0; iter < 300; ++iter) {
        std::uniform_int_distribution<std::size_t> len(0, 6), pick(0, words.size() - 1);
        std::string s;
        std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i) s += words[pick(rng)] + " ";
        auto post = model.posteriors(s);
        double sum = 0.0;
        for (double p : post) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        auto tagged = model.tag_sentence(s);
        CHECK(tagged.score >= 1.0 / 14.0 - 1e-12);
    }
}

TEST_CASE("tie-break: no overlap and uniform priors gives Statement") {
    Labeled data = {{"alpha", DialogueActTag::Reject}, {"beta", DialogueActTag::Statement},
                    {"gamma", DialogueActTag::Emotion}};
    DaModel model = DaModel::train(data);
    // one token each, same vocabulary size per class: posteriors tie, enum
    // order picks Statement
    CHECK(model.tag_sentence("unseen words only").tag == DialogueActTag::Statement);
}

TEST_CASE("training insensitive to example order") {
    Labeled data = {{"what time is it", DialogueActTag::whQuestion},
                    {"fine thanks", DialogueActTag::Statement},
                    {"see you later", DialogueActTag::Bye},
                    {"hello friend", DialogueActTag::Greet},
                    {"yes of course", DialogueActTag::yAnswer}};
    DaModel a = DaModel::train(data);
    std::mt19937 rng(11);
    std::shuffle(data.begin(), data.end(), rng);
    DaModel b = DaModel::train(data);
    std::ostringstream sa, sb;
    a.save(sa);
    b.save(sb);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("save/load round trip preserves behaviour") {
    Labeled data = {{"how are you today?", DialogueActTag::whQuestion},
                    {"i am very sad", DialogueActTag::Statement},
                    {"WOW !!", DialogueActTag::Emphasis},
                    {"hello :)", DialogueActTag::Greet}};
    DaModel model = DaModel::train(data);
    std::string path = "da_roundtrip.model";
    model.save(path);
    DaModel back = DaModel::load(path);
    for (const auto& s : {"how is he", "i am sad", "WOW", "hello", "???"}) {
        auto p1 = model.posteriors(s);
        auto p2 = back.posteriors(s);
        for (std::size_t c = 0; c < kNumTags; ++c)
            CHECK(p1[c] == doctest::Approx(p2[c]).epsilon(1e-12));
    }
    std::ostringstream s1, s2;
    model.save(s1);
    back.save(s2);
    CHECK(s1.str() == s2.str());
}

TEST_CASE("tag_message: set semantics over sentences") {
    Labeled data = {{"i felt sad", DialogueActTag::Statement},
                    {"he felt the same", DialogueActTag::Statement},
                    {"it's true", DialogueActTag::Accept},
                    {"true enough", DialogueActTag::Accept}};
    DaModel model = DaModel::train(data);

    Message m;
    m.comment_id = 3;
    m.text = "It's true. I felt the same.";
    split_sentences(m);
    REQUIRE(m.sentences.size() == 2);
    MessageDaSet set = model.tag_message(m);
    CHECK(set.tag_set == std::set<DialogueActTag>{DialogueActTag::Accept,
                                                  DialogueActTag::Statement});
    CHECK(set.one_hot.count() == 2);
    CHECK(set.one_hot[static_cast<std::size_t>(DialogueActTag::Accept)]);

    SUBCASE("one sentence, one bit") {
        Message one;
        one.text = "I felt sad";
        split_sentences(one);
        auto s = model.tag_message(one);
        CHECK(s.tag_set.size() == 1);
        CHECK(s.one_hot.count() == 1);
    }
    SUBCASE("three identical tags collapse to a singleton set") {
        Message rep;
        rep.text = "i felt sad. he felt the same. i felt sad again.";
        split_sentences(rep);
        REQUIRE(rep.sentences.size() == 3);
        auto s = model.tag_message(rep);
        CHECK(s.tag_set == std::set<DialogueActTag>{DialogueActTag::Statement});
    }
    SUBCASE("no sentences gives empty set") {
        Message empty;
        auto s = model.tag_message(empty);
        CHECK(s.tag_set.empty());
        CHECK(s.one_hot.none());
    }
}

TEST_CASE("evaluate_da: degenerate predictors") {
    // all-one-class predictor on a balanced two-class set scores 0.5
    Labeled train = {{"common word mix", DialogueActTag::Statement},
                     {"common word blend", DialogueActTag::Statement},
                     {"common word stew", DialogueActTag::Greet}};
    DaModel model = DaModel::train(train);
    Labeled balanced = {{"common word", DialogueActTag::Statement},
                        {"common word", DialogueActTag::Greet},
                        {"common mix", DialogueActTag::Statement},
                        {"common mix", DialogueActTag::Greet}};
    auto eval = evaluate_da(model, balanced);
    CHECK(eval.accuracy == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(evaluate_da(model, {}), std::invalid_argument);
}

TEST_CASE("empty training set throws") {
    CHECK_THROWS_AS(DaModel::train({}), std::invalid_argument);
}

TEST_CASE("labeled sentence file: tabs required, unknown labels counted") {
    const char* path = "labeled_test.tsv";
    {
        std::ofstream out(path);
        out << "Statement\ti feel fine\n";
        out << "MadeUpTag\tstrange label\n";
        out << "Greet\thello\n";
    }
    std::size_t unknown = 0;
    auto data = read_labeled_sentences(path, &unknown);
    REQUIRE(data.size() == 3);
    CHECK(unknown == 1);
    CHECK(data[1].second == DialogueActTag::Other);
    {
        std::ofstream out(path);
        out << "Statement no tab here\n";
    }
    CHECK_THROWS_AS(read_labeled_sentences(path), std::runtime_error);
}

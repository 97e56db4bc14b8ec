#include "convo/dialogue.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "convo/corpus.hpp"
#include "convo/metrics.hpp"

namespace convo {

namespace {

const std::array<std::string, kNumTags> kTagNames = {
    "Statement", "Emphasis", "ynQuestion", "whQuestion", "Continuer",
    "Reject",    "Emotion",  "Accept",     "Greet",      "nAnswer",
    "yAnswer",   "Bye",      "Clarify",    "Other"};

bool is_wh_word(const std::string& tok) {
    return tok == "what" || tok == "who" || tok == "where" || tok == "when" ||
           tok == "why" || tok == "how" || tok == "which" || tok == "whose" ||
           tok == "whom";
}

bool looks_like_emoticon(const std::string& tok) {
    if (tok.size() < 2 || tok.size() > 4) return false;
    bool has_eye = tok.find(':') != std::string::npos ||
                   tok.find(';') != std::string::npos ||
                   tok.find('=') != std::string::npos;
    bool has_mouth = tok.find(')') != std::string::npos ||
                     tok.find('(') != std::string::npos ||
                     tok.find('D') != std::string::npos ||
                     tok.find('P') != std::string::npos ||
                     tok.find('/') != std::string::npos;
    return (has_eye && has_mouth) || tok == "<3";
}

}  // namespace

const std::string& tag_name(DialogueActTag tag) {
    return kTagNames[static_cast<std::size_t>(tag)];
}

DialogueActTag tag_from_name(const std::string& name, bool* known) {
    for (std::size_t i = 0; i < kNumTags; ++i) {
        if (kTagNames[i] == name) {
            if (known) *known = true;
            return static_cast<DialogueActTag>(i);
        }
    }
    if (known) *known = false;
    return DialogueActTag::Other;
}

std::vector<std::string> DaModel::featurize(const std::string& sentence) {
    std::vector<std::string> tokens = tokenize(sentence);
    std::vector<std::string> features;
    if (!tokens.empty() && is_wh_word(tokens.front())) features.push_back("<F:wh-initial>");
    bool qmark = false, bang = false, emoticon = false;
    for (const auto& t : tokens) {
        if (!t.empty() && t[0] == '?') qmark = true;
        if (!t.empty() && t[0] == '!') bang = true;
        if (looks_like_emoticon(t)) emoticon = true;
    }
    if (qmark) features.push_back("<F:qmark>");
    if (bang) features.push_back("<F:bang>");
    if (emoticon) features.push_back("<F:emoticon>");
    // all-caps flag has to look at the raw sentence (tokenize lowercases)
    std::istringstream ss(sentence);
    std::string raw;
    while (ss >> raw) {
        std::size_t letters = 0, upper = 0;
        for (unsigned char ch : raw) {
            if (std::isalpha(ch)) {
                ++letters;
                if (std::isupper(ch)) ++upper;
            }
        }
        if (letters >= 2 && letters == upper) {
            features.push_back("<F:allcaps>");
            break;
        }
    }
    tokens.insert(tokens.end(), features.begin(), features.end());
    return tokens;
}

DaModel DaModel::train(const std::vector<std::pair<std::string, DialogueActTag>>& labeled) {
    if (labeled.empty()) throw std::invalid_argument("DaModel::train: empty training set");
    DaModel m;
    // two passes keep the vocabulary order stable under example shuffling
    std::vector<std::vector<std::string>> featurized;
    featurized.reserve(labeled.size());
    for (const auto& [sentence, tag] : labeled) featurized.push_back(featurize(sentence));

    std::vector<std::string> all_tokens;
    for (const auto& toks : featurized)
        all_tokens.insert(all_tokens.end(), toks.begin(), toks.end());
    std::sort(all_tokens.begin(), all_tokens.end());
    all_tokens.erase(std::unique(all_tokens.begin(), all_tokens.end()), all_tokens.end());
    for (const auto& tok : all_tokens) {
        m.vocab_.emplace(tok, m.vocab_order_.size());
        m.vocab_order_.push_back(tok);
    }
    m.token_count_.assign(m.vocab_.size(), {});

    for (std::size_t i = 0; i < labeled.size(); ++i) {
        std::size_t cls = static_cast<std::size_t>(labeled[i].second);
        ++m.class_count_[cls];
        ++m.total_examples_;
        for (const auto& tok : featurized[i]) {
            std::size_t idx = m.vocab_.at(tok);
            ++m.token_count_[idx][cls];
            ++m.token_total_[cls];
        }
    }
    return m;
}

double DaModel::prior(DialogueActTag tag) const {
    if (total_examples_ == 0) return 0.0;
    return static_cast<double>(class_count_[static_cast<std::size_t>(tag)]) /
           static_cast<double>(total_examples_);
}

std::array<double, kNumTags> DaModel::posteriors(const std::string& sentence) const {
    std::array<double, kNumTags> post{};
    std::vector<std::size_t> token_ids;
    for (const auto& tok : featurize(sentence)) {
        auto it = vocab_.find(tok);
        if (it != vocab_.end()) token_ids.push_back(it->second);  // OOV tokens skipped
    }

    std::array<double, kNumTags> log_post;
    double max_lp = -std::numeric_limits<double>::infinity();
    const double v = static_cast<double>(vocab_.size());
    for (std::size_t c = 0; c < kNumTags; ++c) {
        if (class_count_[c] == 0) {
            log_post[c] = -std::numeric_limits<double>::infinity();
            continue;
        }
        double lp = std::log(static_cast<double>(class_count_[c]) /
                             static_cast<double>(total_examples_));
        double denom = static_cast<double>(token_total_[c]) + v;
        for (std::size_t idx : token_ids)
            lp += std::log((static_cast<double>(token_count_[idx][c]) + 1.0) / denom);
        log_post[c] = lp;
        max_lp = std::max(max_lp, lp);
    }
    double z = 0.0;
    for (std::size_t c = 0; c < kNumTags; ++c)
        if (std::isfinite(log_post[c])) z += std::exp(log_post[c] - max_lp);
    for (std::size_t c = 0; c < kNumTags; ++c)
        post[c] = std::isfinite(log_post[c]) ? std::exp(log_post[c] - max_lp) / z : 0.0;
    return post;
}

TaggedSentence DaModel::tag_sentence(const std::string& sentence) const {
    auto post = posteriors(sentence);
    std::size_t best = 0;
    for (std::size_t c = 1; c < kNumTags; ++c)
        if (post[c] > post[best]) best = c;  // strict: ties keep the earlier tag
    return {sentence, static_cast<DialogueActTag>(best), post[best]};
}

MessageDaSet DaModel::tag_message(const Message& message) const {
    MessageDaSet set;
    set.comment_id = message.comment_id;
    for (const auto& sentence : message.sentences) {
        auto tagged = tag_sentence(sentence);
        set.tag_set.insert(tagged.tag);
        set.one_hot.set(static_cast<std::size_t>(tagged.tag));
    }
    return set;
}

void DaModel::save(std::ostream& out) const {
    // counts, not probabilities, so save/load round-trips exactly
    out << "damodel 1\n";
    out << "classes " << kNumTags << "\n";
    for (std::size_t c = 0; c < kNumTags; ++c)
        out << kTagNames[c] << " " << class_count_[c] << " " << token_total_[c] << "\n";
    out << "vocab " << vocab_order_.size() << "\n";
    for (std::size_t i = 0; i < vocab_order_.size(); ++i) {
        out << vocab_order_[i];
        for (std::size_t c = 0; c < kNumTags; ++c) out << " " << token_count_[i][c];
        out << "\n";
    }
}

void DaModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open model output file: " + path);
    save(out);
}

DaModel DaModel::load(std::istream& in) {
    DaModel m;
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "damodel" || version != 1)
        throw std::runtime_error("not a recognised model file");
    std::string kw;
    std::size_t n = 0;
    in >> kw >> n;
    if (kw != "classes" || n != kNumTags)
        throw std::runtime_error("model file: bad class block");
    for (std::size_t c = 0; c < kNumTags; ++c) {
        std::string name;
        in >> name >> m.class_count_[c] >> m.token_total_[c];
        if (name != kTagNames[c]) throw std::runtime_error("model file: class order mismatch");
        m.total_examples_ += m.class_count_[c];
    }
    in >> kw >> n;
    if (kw != "vocab") throw std::runtime_error("model file: bad vocab block");
    m.token_count_.assign(n, {});
    m.vocab_order_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string tok;
        in >> tok;
        for (std::size_t c = 0; c < kNumTags; ++c) in >> m.token_count_[i][c];
        if (!in) throw std::runtime_error("model file: truncated vocab block");
        m.vocab_.emplace(tok, i);
        m.vocab_order_.push_back(tok);
    }
    return m;
}

DaModel DaModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return load(in);
}

DaEvaluation evaluate_da(const DaModel& model,
                         const std::vector<std::pair<std::string, DialogueActTag>>& held_out) {
    if (held_out.empty()) throw std::invalid_argument("evaluate_da: empty held-out set");
    DaEvaluation eval;
    std::size_t correct = 0;
    for (const auto& [sentence, gold] : held_out) {
        auto pred = model.tag_sentence(sentence).tag;
        ++eval.confusion[static_cast<std::size_t>(gold)][static_cast<std::size_t>(pred)];
        if (pred == gold) ++correct;
    }
    eval.accuracy = static_cast<double>(correct) / static_cast<double>(held_out.size());
    for (std::size_t c = 0; c < kNumTags; ++c) {
        std::uint64_t tp = eval.confusion[c][c], fp = 0, fn = 0;
        for (std::size_t o = 0; o < kNumTags; ++o) {
            if (o == c) continue;
            fp += eval.confusion[o][c];
            fn += eval.confusion[c][o];
        }
        auto prf = precision_recall_f1(tp, fp, fn);
        eval.per_class[c] = {prf.precision, prf.recall, prf.f1};
    }
    return eval;
}

std::vector<std::pair<std::string, DialogueActTag>> read_labeled_sentences(
    const std::string& path, std::size_t* unknown_labels) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open labeled sentence file: " + path);
    std::vector<std::pair<std::string, DialogueActTag>> out;
    std::string line;
    std::size_t lineno = 0, unknown = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("labeled file line " + std::to_string(lineno) +
                                     ": expected <tag>\\t<sentence>");
        bool known = false;
        DialogueActTag tag = tag_from_name(line.substr(0, tab), &known);
        if (!known) ++unknown;
        out.emplace_back(line.substr(tab + 1), tag);
    }
    if (unknown_labels) *unknown_labels = unknown;
    return out;
}

}  // namespace convo

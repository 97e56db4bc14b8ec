#include "convo/factors.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace convo {

using nlohmann::json;

const std::string& trajectory_name(Trajectory t) {
    static const std::string names[] = {"Increase", "Decrease", "NoChange", "Neg2Pos",
                                        "Pos2Neg"};
    return names[static_cast<int>(t)];
}

Trajectory classify_op_trajectory(const SentimentScore& op_initial,
                                  const SentimentScore& op_final) {
    if (op_initial.polarity == Polarity::Negative && op_final.polarity == Polarity::Positive)
        return Trajectory::Neg2Pos;
    if (op_initial.polarity == Polarity::Positive && op_final.polarity == Polarity::Negative)
        return Trajectory::Pos2Neg;
    if (op_final.value > op_initial.value) return Trajectory::Increase;
    if (op_final.value < op_initial.value) return Trajectory::Decrease;
    return Trajectory::NoChange;
}

FactorFlags evaluate_factors(const ConditionFlags& flags) {
    FactorFlags f;
    bool base = flags.c1_op_sentiment_increased && flags.c2_post_has_negative_statement;
    f.universality = base && flags.c3_negative_statement_comment;
    f.hope = base && flags.c3_positive_statement_comment;
    f.altruism = base && flags.c3_positive_statement_comment;
    return f;
}

namespace {

bool has_polarised_statement(const Message& msg, const MessageAnnotation& ann,
                             Polarity wanted, double epsilon) {
    for (std::size_t s = 0; s < ann.sentence_tags.size(); ++s) {
        if (ann.sentence_tags[s] != DialogueActTag::Statement) continue;
        if (s < ann.sentence_values.size() &&
            bucket(ann.sentence_values[s], epsilon) == wanted)
            return true;
    }
    (void)msg;
    return false;
}

void require_annotated(const AnnotatedConversation& ac) {
    for (const auto& ann : ac.annotations)
        if (!ann.has_tags || !ann.has_sentiment)
            throw std::runtime_error("conversation '" + ac.conversation.id +
                                     "' is not fully tagged and scored");
}

}  // namespace

std::vector<ThreadAnalysis> analyze_conversation(const AnnotatedConversation& ac,
                                                 const AnalysisOptions& opts) {
    require_annotated(ac);
    const Conversation& conv = ac.conversation;
    std::map<std::int64_t, std::size_t> index_by_id;
    for (std::size_t i = 0; i < conv.messages.size(); ++i)
        index_by_id[conv.messages[i].comment_id] = i;

    ReplyTree tree = build_tree(conv);
    std::vector<Thread> threads = tree_to_threads(tree, conv);
    const std::string& op = conv.root().poster;

    std::vector<ThreadAnalysis> out;
    for (std::size_t t = 0; t < threads.size(); ++t) {
        ThreadAnalysis a;
        a.conversation_id = conv.id;
        a.thread_index = t;
        a.message_ids = threads[t].message_ids;

        std::vector<std::size_t> op_msgs;
        for (auto id : a.message_ids) {
            std::size_t i = index_by_id.at(id);
            if (conv.messages[i].poster == op) op_msgs.push_back(i);
        }
        a.defined = op_msgs.size() >= 2;
        if (!a.defined) {
            out.push_back(std::move(a));
            continue;
        }
        a.op_initial = ac.annotations[op_msgs.front()].message_value;
        a.op_final = ac.annotations[op_msgs.back()].message_value;
        a.op_initial_polarity = bucket(a.op_initial, opts.epsilon);
        a.op_final_polarity = bucket(a.op_final, opts.epsilon);
        a.trajectory = classify_op_trajectory({a.op_initial, a.op_initial_polarity},
                                              {a.op_final, a.op_final_polarity});

        a.conditions.c1_op_sentiment_increased = a.op_final > a.op_initial;
        std::size_t root_idx = index_by_id.at(0);
        a.conditions.c2_post_has_negative_statement = has_polarised_statement(
            conv.messages[root_idx], ac.annotations[root_idx], Polarity::Negative,
            opts.epsilon);
        for (auto id : a.message_ids) {
            if (id == 0) continue;
            std::size_t i = index_by_id.at(id);
            if (conv.messages[i].poster == op) continue;  // comments by other users
            if (has_polarised_statement(conv.messages[i], ac.annotations[i],
                                        Polarity::Negative, opts.epsilon))
                a.conditions.c3_negative_statement_comment = true;
            if (has_polarised_statement(conv.messages[i], ac.annotations[i],
                                        Polarity::Positive, opts.epsilon))
                a.conditions.c3_positive_statement_comment = true;
        }
        a.factors = evaluate_factors(a.conditions);
        out.push_back(std::move(a));
    }
    return out;
}

std::array<double, 3> statement_sentiment(const std::vector<TaggedSentence>& tagged,
                                          const std::vector<SentimentScore>& scores,
                                          bool* any) {
    if (tagged.size() != scores.size())
        throw std::invalid_argument("statement_sentiment: list length mismatch");
    std::array<std::size_t, 3> counts{};
    std::size_t total = 0;
    for (std::size_t i = 0; i < tagged.size(); ++i) {
        if (tagged[i].tag != DialogueActTag::Statement) continue;
        ++counts[static_cast<std::size_t>(scores[i].polarity)];
        ++total;
    }
    if (any) *any = total > 0;
    std::array<double, 3> out{};
    if (total)
        for (std::size_t i = 0; i < 3; ++i)
            out[i] = 100.0 * static_cast<double>(counts[i]) / static_cast<double>(total);
    return out;
}

TrajectoryDistribution trajectory_distribution(const std::vector<ThreadAnalysis>& analyses) {
    TrajectoryDistribution dist;
    std::size_t defined = 0;
    for (const auto& a : analyses) {
        if (!a.defined) {
            ++dist.undefined;
            continue;
        }
        ++defined;
        ++dist.counts[static_cast<std::size_t>(a.trajectory)];
    }
    if (defined)
        for (std::size_t i = 0; i < dist.counts.size(); ++i)
            dist.percent[i] =
                100.0 * static_cast<double>(dist.counts[i]) / static_cast<double>(defined);
    return dist;
}

std::string tag_set_row(const std::set<DialogueActTag>& tags) {
    std::string row;
    for (auto t : tags) {  // std::set orders by enum value, Statement first
        if (!row.empty()) row += "+";
        row += tag_name(t);
    }
    return row;
}

namespace {

// Collapse a tag set onto the reported rows: the four singletons, the
// Statement+X pairs, everything else as "other".
std::string reported_row(const std::set<DialogueActTag>& tags) {
    using T = DialogueActTag;
    if (tags.size() == 1) {
        T t = *tags.begin();
        if (t == T::Statement || t == T::Emphasis || t == T::ynQuestion ||
            t == T::whQuestion)
            return tag_name(t);
        return "other";
    }
    if (tags.size() == 2 && tags.count(T::Statement)) {
        T other = *std::find_if(tags.begin(), tags.end(),
                                [](T t) { return t != T::Statement; });
        if (other == T::Emphasis || other == T::Continuer || other == T::ynQuestion ||
            other == T::whQuestion || other == T::Accept || other == T::Reject)
            return "Statement+" + tag_name(other);
    }
    return "other";
}

std::size_t pol_index(Polarity p) { return static_cast<std::size_t>(p); }

void finish_matrix(PolarityMatrix& m) {
    for (std::size_t r = 0; r < 3; ++r) {
        std::size_t total = m.counts[r][0] + m.counts[r][1] + m.counts[r][2];
        m.row_defined[r] = total > 0;
        for (std::size_t c = 0; c < 3; ++c)
            m.percent[r][c] =
                total ? 100.0 * static_cast<double>(m.counts[r][c]) / static_cast<double>(total)
                      : 0.0;
    }
}

}  // namespace

FactorReport analyze_corpus(const AnnotatedCorpus& corpus, const AnalysisOptions& opts) {
    FactorReport report;
    report.corpus_label = corpus.source_kind == SourceKind::Twitter ? "twitter" : "forum";
    report.conversation_count = corpus.conversations.size();

    std::map<std::string, std::size_t> da_counts;
    std::size_t sentence_total = 0;
    std::map<std::string, std::size_t> structure_posts, structure_comments;
    std::size_t post_sets = 0, comment_sets = 0;
    std::array<std::size_t, 3> stmt_posts{}, stmt_comments{};
    std::array<std::vector<double>, 3> bucket_pos_share, bucket_neg_share;

    for (const auto& ac : corpus.conversations) {
        require_annotated(ac);
        const auto& conv = ac.conversation;
        report.message_count += conv.messages.size();

        ReplyTree tree;
        if (opts.pairing == ReplyPairing::Parent) tree = build_tree(conv);
        std::map<std::int64_t, std::size_t> index_by_id;
        for (std::size_t i = 0; i < conv.messages.size(); ++i)
            index_by_id[conv.messages[i].comment_id] = i;

        Polarity root_pol = bucket(ac.annotations[0].message_value, opts.epsilon);
        std::array<std::size_t, 3> comment_pol_counts{};

        for (std::size_t i = 0; i < conv.messages.size(); ++i) {
            const Message& m = conv.messages[i];
            const MessageAnnotation& ann = ac.annotations[i];
            bool is_post = m.is_root();

            for (std::size_t s = 0; s < ann.sentence_tags.size(); ++s) {
                ++da_counts[tag_name(ann.sentence_tags[s])];
                ++sentence_total;
                if (ann.sentence_tags[s] == DialogueActTag::Statement &&
                    s < ann.sentence_values.size()) {
                    Polarity p = bucket(ann.sentence_values[s], opts.epsilon);
                    ++(is_post ? stmt_posts : stmt_comments)[pol_index(p)];
                }
            }
            if (!ann.sentence_tags.empty()) {
                std::set<DialogueActTag> tags(ann.sentence_tags.begin(),
                                              ann.sentence_tags.end());
                std::string row = reported_row(tags);
                if (is_post) {
                    ++structure_posts[row];
                    ++post_sets;
                } else {
                    ++structure_comments[row];
                    ++comment_sets;
                }
            }
            if (!is_post) {
                Polarity cp = bucket(ann.message_value, opts.epsilon);
                ++comment_pol_counts[pol_index(cp)];
                Polarity row_pol = root_pol;
                if (opts.pairing == ReplyPairing::Parent) {
                    std::int64_t parent_id = tree.parent.at(m.comment_id);
                    row_pol = bucket(ac.annotations[index_by_id.at(parent_id)].message_value,
                                     opts.epsilon);
                }
                ++report.reply_conditional.counts[pol_index(row_pol)][pol_index(cp)];
            }
        }

        std::size_t n_comments =
            comment_pol_counts[0] + comment_pol_counts[1] + comment_pol_counts[2];
        if (n_comments > 0) {
            bucket_pos_share[pol_index(root_pol)].push_back(
                100.0 * static_cast<double>(comment_pol_counts[pol_index(Polarity::Positive)]) /
                static_cast<double>(n_comments));
            bucket_neg_share[pol_index(root_pol)].push_back(
                100.0 * static_cast<double>(comment_pol_counts[pol_index(Polarity::Negative)]) /
                static_cast<double>(n_comments));
        }

        auto analyses = analyze_conversation(ac, opts);
        const std::string& op = conv.root().poster;
        for (const auto& a : analyses) {
            if (a.defined) {
                for (auto id : a.message_ids) {
                    if (id == 0) continue;
                    std::size_t i = index_by_id.at(id);
                    if (conv.messages[i].poster == op) continue;
                    Polarity cp = bucket(ac.annotations[i].message_value, opts.epsilon);
                    ++report.final_op_conditional
                          .counts[pol_index(cp)][pol_index(a.op_final_polarity)];
                }
            }
            report.analyses.push_back(a);
        }
        report.thread_count += analyses.size();
    }

    for (const auto& [tag, n] : da_counts) {
        report.da_sentence_counts[tag] = n;
        report.da_sentence_percent[tag] =
            sentence_total ? 100.0 * static_cast<double>(n) / static_cast<double>(sentence_total)
                           : 0.0;
    }
    for (const auto& [row, n] : structure_posts)
        report.structure_posts[row] =
            100.0 * static_cast<double>(n) / static_cast<double>(post_sets);
    for (const auto& [row, n] : structure_comments)
        report.structure_comments[row] =
            100.0 * static_cast<double>(n) / static_cast<double>(comment_sets);

    auto pct3 = [](const std::array<std::size_t, 3>& counts) {
        std::array<double, 3> out{};
        std::size_t total = counts[0] + counts[1] + counts[2];
        if (total)
            for (std::size_t i = 0; i < 3; ++i)
                out[i] = 100.0 * static_cast<double>(counts[i]) / static_cast<double>(total);
        return out;
    };
    report.statement_sentiment_posts = pct3(stmt_posts);
    report.statement_sentiment_comments = pct3(stmt_comments);

    finish_matrix(report.reply_conditional);
    finish_matrix(report.final_op_conditional);

    report.trajectory = trajectory_distribution(report.analyses);

    const auto& neg_pos = bucket_pos_share[pol_index(Polarity::Negative)];
    const auto& pos_pos = bucket_pos_share[pol_index(Polarity::Positive)];
    const auto& neg_neg = bucket_neg_share[pol_index(Polarity::Negative)];
    const auto& pos_neg = bucket_neg_share[pol_index(Polarity::Positive)];
    auto add_welch = [&](const char* label, const std::vector<double>& a,
                         const std::vector<double>& b) {
        WelchRecord rec;
        rec.compared_share = label;
        if (a.size() >= 2 && b.size() >= 2) {
            rec.result = welch_t(a, b);
            rec.computed = true;
            rec.significant = rec.result.defined && rec.result.p < 0.01;
        }
        report.welch.push_back(std::move(rec));
    };
    add_welch("positive", neg_pos, pos_pos);
    add_welch("negative", neg_neg, pos_neg);

    std::size_t defined = 0;
    std::size_t c1 = 0, c2 = 0, c3n = 0, c3p = 0, uni = 0, hope = 0, alt = 0;
    for (const auto& a : report.analyses) {
        if (!a.defined) continue;
        ++defined;
        c1 += a.conditions.c1_op_sentiment_increased;
        c2 += a.conditions.c2_post_has_negative_statement;
        c3n += a.conditions.c3_negative_statement_comment;
        c3p += a.conditions.c3_positive_statement_comment;
        uni += a.factors.universality;
        hope += a.factors.hope;
        alt += a.factors.altruism;
    }
    auto rate = [&](std::size_t n) {
        return defined ? 100.0 * static_cast<double>(n) / static_cast<double>(defined) : 0.0;
    };
    report.condition_rates["c1_op_sentiment_increased"] = rate(c1);
    report.condition_rates["c2_post_has_negative_statement"] = rate(c2);
    report.condition_rates["c3_negative_statement_comment"] = rate(c3n);
    report.condition_rates["c3_positive_statement_comment"] = rate(c3p);
    report.condition_rates["universality"] = rate(uni);
    report.condition_rates["hope"] = rate(hope);
    report.condition_rates["altruism"] = rate(alt);
    return report;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void write_matrix_csv(const PolarityMatrix& m, const std::string& row_header,
                      const std::string& path) {
    std::ofstream out(path);
    out << row_header << ",Negative,Neutral,Positive,count\n";
    static const char* kRows[] = {"Negative", "Neutral", "Positive"};
    for (std::size_t r = 0; r < 3; ++r) {
        std::size_t total = m.counts[r][0] + m.counts[r][1] + m.counts[r][2];
        out << kRows[r];
        for (std::size_t c = 0; c < 3; ++c) out << "," << fmt(m.percent[r][c]);
        out << "," << total << "\n";
    }
}

json matrix_to_json(const PolarityMatrix& m) {
    json j;
    static const char* kRows[] = {"Negative", "Neutral", "Positive"};
    for (std::size_t r = 0; r < 3; ++r) {
        json row;
        for (std::size_t c = 0; c < 3; ++c) {
            row["percent"][kRows[c]] = m.percent[r][c];
            row["counts"][kRows[c]] = m.counts[r][c];
        }
        row["defined"] = m.row_defined[r];
        j[kRows[r]] = std::move(row);
    }
    return j;
}

}  // namespace

void emit_report(const FactorReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "tables");

    json j;
    j["corpus"] = report.corpus_label;
    j["conversations"] = report.conversation_count;
    j["messages"] = report.message_count;
    j["threads"] = report.thread_count;
    {
        json traj;
        for (std::size_t i = 0; i < 5; ++i) {
            traj["counts"][trajectory_name(static_cast<Trajectory>(i))] =
                report.trajectory.counts[i];
            traj["percent"][trajectory_name(static_cast<Trajectory>(i))] =
                report.trajectory.percent[i];
        }
        traj["undefined"] = report.trajectory.undefined;
        j["trajectory"] = std::move(traj);
    }
    j["da_sentence_percent"] = report.da_sentence_percent;
    j["da_sentence_counts"] = report.da_sentence_counts;
    j["structure_posts"] = report.structure_posts;
    j["structure_comments"] = report.structure_comments;
    j["statement_sentiment"]["posts"] = report.statement_sentiment_posts;
    j["statement_sentiment"]["comments"] = report.statement_sentiment_comments;
    j["reply_conditional"] = matrix_to_json(report.reply_conditional);
    j["final_op_conditional"] = matrix_to_json(report.final_op_conditional);
    {
        json w = json::array();
        for (const auto& rec : report.welch) {
            json e;
            e["compared_share"] = rec.compared_share;
            e["computed"] = rec.computed;
            if (rec.computed) {
                e["defined"] = rec.result.defined;
                e["t"] = rec.result.t;
                e["df"] = rec.result.df;
                e["p"] = rec.result.p;
                e["significant_at_0.01"] = rec.significant;
            }
            w.push_back(std::move(e));
        }
        j["welch"] = std::move(w);
    }
    j["condition_rates"] = report.condition_rates;

    {
        std::ofstream out(fs::path(out_dir) / "report.json");
        if (!out) throw std::runtime_error("cannot write report.json under " + out_dir);
        out << j.dump(2) << '\n';
    }
    {
        std::ofstream out(fs::path(out_dir) / "conditions.csv");
        out << "conversation_id,thread_index,defined,op_initial,op_final,trajectory,"
               "c1,c2,c3_neg,c3_pos,universality,hope,altruism\n";
        for (const auto& a : report.analyses) {
            out << a.conversation_id << "," << a.thread_index << "," << (a.defined ? 1 : 0);
            if (a.defined) {
                out << "," << fmt(a.op_initial) << "," << fmt(a.op_final) << ","
                    << trajectory_name(a.trajectory) << ","
                    << a.conditions.c1_op_sentiment_increased << ","
                    << a.conditions.c2_post_has_negative_statement << ","
                    << a.conditions.c3_negative_statement_comment << ","
                    << a.conditions.c3_positive_statement_comment << ","
                    << a.factors.universality << "," << a.factors.hope << ","
                    << a.factors.altruism;
            } else {
                out << ",,,,,,,,,,";
            }
            out << "\n";
        }
    }
    {
        std::ofstream out(fs::path(out_dir) / "tables" / "trajectory.csv");
        out << "trajectory,count,percent\n";
        for (std::size_t i = 0; i < 5; ++i)
            out << trajectory_name(static_cast<Trajectory>(i)) << ","
                << report.trajectory.counts[i] << "," << fmt(report.trajectory.percent[i])
                << "\n";
        out << "undefined," << report.trajectory.undefined << ",\n";
    }
    {
        std::ofstream out(fs::path(out_dir) / "tables" / "da_sentences.csv");
        out << "tag,count,percent\n";
        for (const auto& [tag, pct] : report.da_sentence_percent)
            out << tag << "," << report.da_sentence_counts.at(tag) << "," << fmt(pct) << "\n";
    }
    {
        std::ofstream out(fs::path(out_dir) / "tables" / "structure.csv");
        out << "tag_set,posts_percent,comments_percent\n";
        std::set<std::string> rows;
        for (const auto& [row, _] : report.structure_posts) rows.insert(row);
        for (const auto& [row, _] : report.structure_comments) rows.insert(row);
        for (const auto& row : rows) {
            auto p = report.structure_posts.find(row);
            auto c = report.structure_comments.find(row);
            out << row << "," << (p != report.structure_posts.end() ? fmt(p->second) : "")
                << "," << (c != report.structure_comments.end() ? fmt(c->second) : "")
                << "\n";
        }
    }
    {
        std::ofstream out(fs::path(out_dir) / "tables" / "statement_sentiment.csv");
        out << "scope,Negative,Neutral,Positive\n";
        out << "posts";
        for (double v : report.statement_sentiment_posts) out << "," << fmt(v);
        out << "\ncomments";
        for (double v : report.statement_sentiment_comments) out << "," << fmt(v);
        out << "\n";
    }
    write_matrix_csv(report.reply_conditional, "post_polarity",
                     (fs::path(out_dir) / "tables" / "reply_conditional.csv").string());
    write_matrix_csv(report.final_op_conditional, "comment_polarity",
                     (fs::path(out_dir) / "tables" / "final_op_conditional.csv").string());
    {
        std::ofstream out(fs::path(out_dir) / "tables" / "welch.csv");
        out << "compared_share,computed,t,df,p,significant_at_0.01\n";
        for (const auto& rec : report.welch) {
            out << rec.compared_share << "," << (rec.computed ? 1 : 0);
            if (rec.computed && rec.result.defined)
                out << "," << fmt(rec.result.t) << "," << fmt(rec.result.df) << ","
                    << fmt(rec.result.p) << "," << (rec.significant ? 1 : 0);
            else if (rec.computed)
                out << ",undefined,,," << (rec.significant ? 1 : 0);
            else
                out << ",,,,";
            out << "\n";
        }
    }
}

}  // namespace convo

#include "convo/threading.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace convo {

using nlohmann::json;

void ReplyTree::rebuild_children() {
    children.clear();
    for (const auto& [child, par] : parent) children[par].push_back(child);
    // parent map iterates in comment_id order; reorder each child list by the
    // order the comments appear in the conversation (timestamp order is the
    // caller's message order, which insertion below preserves).
}

ReplyTree build_tree(const Conversation& conversation) {
    ReplyTree tree;
    tree.conversation_id = conversation.id;
    const auto& msgs = conversation.messages;

    // per-user most recent message index seen so far
    std::unordered_map<std::string, std::size_t> last_by_user;
    // per-thread_id most recent message index seen so far
    std::unordered_map<std::int64_t, std::size_t> last_by_thread;

    for (std::size_t i = 0; i < msgs.size(); ++i) {
        const Message& m = msgs[i];
        if (i > 0) {
            std::int64_t parent_id = 0;  // R4 default: the original post
            bool assigned = false;

            // R1: continuation of the poster's immediately preceding message
            if (msgs[i - 1].poster == m.poster) {
                parent_id = msgs[i - 1].comment_id;
                assigned = true;
            }
            // R2: first listed reference that resolves to an earlier message
            if (!assigned) {
                for (const auto& ref : m.references) {
                    auto it = last_by_user.find(ref);
                    if (it != last_by_user.end()) {
                        parent_id = msgs[it->second].comment_id;
                        assigned = true;
                        break;
                    }
                }
            }
            // R3: most recent earlier message with the same thread_id
            if (!assigned) {
                auto it = last_by_thread.find(m.thread_id);
                if (it != last_by_thread.end()) {
                    parent_id = msgs[it->second].comment_id;
                    assigned = true;
                }
            }
            tree.parent[m.comment_id] = parent_id;
            tree.children[parent_id].push_back(m.comment_id);
        }
        last_by_user[m.poster] = i;
        last_by_thread[m.thread_id] = i;
    }
    return tree;
}

std::vector<Thread> tree_to_threads(const ReplyTree& tree, const Conversation& conversation) {
    // leaf = node with no children; one thread per leaf, ordered by leaf
    // position in the conversation (timestamp order)
    std::vector<Thread> threads;
    for (const Message& m : conversation.messages) {
        auto it = tree.children.find(m.comment_id);
        bool is_leaf = (it == tree.children.end() || it->second.empty());
        if (!is_leaf) continue;
        std::vector<std::int64_t> path;
        std::int64_t cur = m.comment_id;
        path.push_back(cur);
        while (cur != 0) {
            auto pit = tree.parent.find(cur);
            if (pit == tree.parent.end())
                throw std::runtime_error("tree_to_threads: dangling node " +
                                         std::to_string(cur));
            cur = pit->second;
            path.push_back(cur);
        }
        std::reverse(path.begin(), path.end());
        threads.push_back({tree.conversation_id, std::move(path)});
    }
    return threads;
}

ReplyTree baseline_tree(const Conversation& conversation, BaselineKind kind,
                        std::uint64_t seed) {
    ReplyTree tree;
    tree.conversation_id = conversation.id;
    const auto& msgs = conversation.messages;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 1; i < msgs.size(); ++i) {
        std::int64_t parent_id = 0;
        if (kind == BaselineKind::Random) {
            std::uniform_int_distribution<std::size_t> pick(0, i - 1);
            parent_id = msgs[pick(rng)].comment_id;
        }
        tree.parent[msgs[i].comment_id] = parent_id;
        tree.children[parent_id].push_back(msgs[i].comment_id);
    }
    return tree;
}

ExtractionMetrics evaluate_extraction(const std::vector<ReplyTree>& predicted,
                                      const std::vector<GoldAnnotation>& gold,
                                      std::size_t annotator) {
    std::unordered_map<std::string, const GoldAnnotation*> gold_by_id;
    for (const auto& g : gold) gold_by_id[g.conversation_id] = &g;

    std::size_t correct = 0, total = 0;
    std::size_t tp = 0, pred_edges = 0, gold_edges = 0;
    for (const auto& tree : predicted) {
        auto it = gold_by_id.find(tree.conversation_id);
        if (it == gold_by_id.end())
            throw std::runtime_error("evaluate_extraction: no gold annotation for '" +
                                     tree.conversation_id + "'");
        const auto& ann = it->second->annotators;
        if (annotator >= ann.size())
            throw std::runtime_error("evaluate_extraction: gold for '" +
                                     tree.conversation_id + "' has no annotator " +
                                     std::to_string(annotator + 1));
        const auto& gold_parent = ann[annotator];
        if (gold_parent.size() != tree.parent.size())
            throw std::runtime_error("evaluate_extraction: comment id mismatch in '" +
                                     tree.conversation_id + "'");
        for (const auto& [child, par] : tree.parent) {
            auto git = gold_parent.find(child);
            if (git == gold_parent.end())
                throw std::runtime_error("evaluate_extraction: comment " +
                                         std::to_string(child) + " missing from gold of '" +
                                         tree.conversation_id + "'");
            ++total;
            if (git->second == par) {
                ++correct;
                if (par != 0) ++tp;
            }
            if (par != 0) ++pred_edges;
            if (git->second != 0) ++gold_edges;
        }
    }
    ExtractionMetrics m;
    m.accuracy = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
    auto prf = precision_recall_f1(tp, pred_edges - tp, gold_edges - tp);
    m.precision = prf.precision;
    m.recall = prf.recall;
    m.f1 = prf.f1;
    return m;
}

AgreementResult inter_annotator_agreement(const std::vector<GoldAnnotation>& gold) {
    ConfusionCounts<std::int64_t> counts;
    for (const auto& g : gold) {
        if (g.annotators.size() < 2)
            throw std::runtime_error("inter_annotator_agreement: '" + g.conversation_id +
                                     "' needs 2 annotators");
        const auto& a = g.annotators[0];
        const auto& b = g.annotators[1];
        if (a.size() != b.size())
            throw std::runtime_error("inter_annotator_agreement: annotator coverage "
                                     "mismatch in '" + g.conversation_id + "'");
        for (const auto& [child, pa] : a) {
            auto it = b.find(child);
            if (it == b.end())
                throw std::runtime_error("inter_annotator_agreement: comment " +
                                         std::to_string(child) +
                                         " missing from annotator 2 in '" +
                                         g.conversation_id + "'");
            counts.add(pa, it->second);
        }
    }
    AgreementResult r;
    r.percent_agreement = counts.observed_agreement();
    auto kappa = cohen_kappa(counts);
    r.kappa = kappa.value_or(1.0);
    return r;
}

void write_trees(const std::vector<ReplyTree>& trees, std::ostream& out) {
    for (const auto& tree : trees) {
        json j;
        j["conversation_id"] = tree.conversation_id;
        json parents = json::object();
        for (const auto& [child, par] : tree.parent)
            parents[std::to_string(child)] = par;
        j["parents"] = std::move(parents);
        out << j.dump() << '\n';
    }
}

void write_trees(const std::vector<ReplyTree>& trees, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open trees output file: " + path);
    write_trees(trees, out);
}

std::vector<ReplyTree> read_trees(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trees file: " + path);
    std::vector<ReplyTree> trees;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            ReplyTree tree;
            tree.conversation_id = j.at("conversation_id").get<std::string>();
            for (const auto& [child, par] : j.at("parents").items())
                tree.parent[std::stoll(child)] = par.get<std::int64_t>();
            tree.rebuild_children();
            trees.push_back(std::move(tree));
        } catch (const std::exception& e) {
            throw std::runtime_error("trees file line " + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
    return trees;
}

std::vector<GoldAnnotation> read_gold(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open gold file: " + path);
    std::vector<GoldAnnotation> gold;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            GoldAnnotation g;
            g.conversation_id = j.at("conversation_id").get<std::string>();
            for (const auto& ann : j.at("annotators")) {
                std::map<std::int64_t, std::int64_t> parents;
                for (const auto& [child, par] : ann.items())
                    parents[std::stoll(child)] = par.get<std::int64_t>();
                g.annotators.push_back(std::move(parents));
            }
            gold.push_back(std::move(g));
        } catch (const std::exception& e) {
            throw std::runtime_error("gold file line " + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
    return gold;
}

void write_gold(const std::vector<GoldAnnotation>& gold, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open gold output file: " + path);
    for (const auto& g : gold) {
        json j;
        j["conversation_id"] = g.conversation_id;
        json anns = json::array();
        for (const auto& ann : g.annotators) {
            json m = json::object();
            for (const auto& [child, par] : ann) m[std::to_string(child)] = par;
            anns.push_back(std::move(m));
        }
        j["annotators"] = std::move(anns);
        out << j.dump() << '\n';
    }
}

}  // namespace convo

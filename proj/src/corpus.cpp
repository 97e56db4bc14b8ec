#include "convo/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace convo {

using nlohmann::json;

namespace {

Message parse_message(const json& j) {
    Message m;
    m.poster = j.at("poster").get<std::string>();
    m.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
    m.thread_id = j.at("thread_id").get<std::int64_t>();
    m.comment_id = j.at("comment_id").get<std::int64_t>();
    m.text = j.at("text").get<std::string>();
    if (j.contains("references"))
        m.references = j.at("references").get<std::vector<std::string>>();
    if (j.contains("sentences"))
        m.sentences = j.at("sentences").get<std::vector<std::string>>();
    return m;
}

Conversation parse_conversation(const json& j) {
    Conversation c;
    c.id = j.at("id").get<std::string>();
    if (j.contains("groups"))
        c.groups = j.at("groups").get<std::vector<std::string>>();
    if (!j.contains("messages") || !j.at("messages").is_array())
        throw ParseError("conversation '" + c.id + "': missing messages array");
    for (const auto& mj : j.at("messages")) c.messages.push_back(parse_message(mj));
    return c;
}

void validate_conversation(Conversation& c) {
    if (c.messages.empty())
        throw ParseError("conversation '" + c.id + "': no messages");
    std::unordered_set<std::int64_t> ids;
    std::size_t roots = 0;
    for (const auto& m : c.messages) {
        if (!ids.insert(m.comment_id).second)
            throw ParseError("conversation '" + c.id + "': duplicate comment_id " +
                             std::to_string(m.comment_id));
        if (m.comment_id == 0) ++roots;
        for (const auto& r : m.references)
            if (r == m.poster)
                throw ParseError("conversation '" + c.id + "': comment " +
                                 std::to_string(m.comment_id) + " references its own poster");
    }
    if (roots != 1)
        throw ParseError("conversation '" + c.id + "': missing original post (comment_id 0)");
    std::stable_sort(c.messages.begin(), c.messages.end(),
                     [](const Message& a, const Message& b) {
                         if (a.timestamp_ms != b.timestamp_ms)
                             return a.timestamp_ms < b.timestamp_ms;
                         return a.comment_id < b.comment_id;
                     });
    if (!c.messages.front().is_root())
        throw ParseError("conversation '" + c.id +
                         "': a comment predates the original post");
}

json message_to_json(const Message& m) {
    json j;
    j["poster"] = m.poster;
    j["timestamp_ms"] = m.timestamp_ms;
    j["references"] = m.references;
    j["thread_id"] = m.thread_id;
    j["comment_id"] = m.comment_id;
    j["text"] = m.text;
    if (!m.sentences.empty()) j["sentences"] = m.sentences;
    return j;
}

}  // namespace

Corpus parse_corpus(std::istream& in, SourceKind kind, const ParseOptions& opts,
                    std::vector<ParseIssue>* issues) {
    Corpus corpus;
    corpus.source_kind = kind;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            Conversation c = parse_conversation(j);
            validate_conversation(c);
            if (kind == SourceKind::Twitter && c.messages.size() < 4)
                throw ParseError("conversation '" + c.id +
                                 "': Twitter conversations need >= 4 messages");
            corpus.conversations.push_back(std::move(c));
        } catch (const std::exception& e) {
            if (issues) issues->push_back({lineno, e.what()});
            if (!opts.lenient)
                throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return corpus;
}

Corpus parse_corpus(const std::string& path, SourceKind kind, const ParseOptions& opts,
                    std::vector<ParseIssue>* issues) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open corpus file: " + path);
    return parse_corpus(in, kind, opts, issues);
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
    for (const auto& c : corpus.conversations) {
        json j;
        j["id"] = c.id;
        j["groups"] = c.groups;
        json msgs = json::array();
        for (const auto& m : c.messages) msgs.push_back(message_to_json(m));
        j["messages"] = std::move(msgs);
        out << j.dump() << '\n';
    }
}

void serialize_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    serialize_corpus(corpus, out);
}

std::string content_digest(const Conversation& conversation) {
    // Normalised text: case-folded, runs of whitespace collapsed to one space.
    std::string norm;
    for (const auto& m : conversation.messages) {
        bool in_space = !norm.empty();
        for (unsigned char ch : m.text) {
            if (std::isspace(ch)) {
                in_space = true;
            } else {
                if (in_space && !norm.empty()) norm.push_back(' ');
                in_space = false;
                norm.push_back(static_cast<char>(std::tolower(ch)));
            }
        }
    }
    // FNV-1a 64-bit, hex-encoded; collisions are checked nowhere because the
    // digest only keys an in-memory map during deduplication.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : norm) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf) + ":" + std::to_string(norm.size());
}

Corpus deduplicate(const Corpus& corpus) {
    Corpus out;
    out.source_kind = corpus.source_kind;
    std::unordered_map<std::string, std::size_t> seen;  // digest -> index in out
    for (const auto& c : corpus.conversations) {
        std::string digest = content_digest(c);
        auto it = seen.find(digest);
        if (it == seen.end()) {
            seen.emplace(std::move(digest), out.conversations.size());
            out.conversations.push_back(c);
        } else {
            // first occurrence wins; merge group labels
            auto& survivor = out.conversations[it->second];
            for (const auto& g : c.groups)
                if (std::find(survivor.groups.begin(), survivor.groups.end(), g) ==
                    survivor.groups.end())
                    survivor.groups.push_back(g);
        }
    }
    return out;
}

namespace {

const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> abbrev = {
        "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc",
        "e.g", "i.e", "approx", "dept", "vol", "fig", "jan", "feb", "mar",
        "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec",
        "u.s", "u.k", "a.m", "p.m"};
    return abbrev;
}

// Word immediately preceding position `i` (exclusive), lowercased, without
// leading punctuation.
std::string preceding_word(const std::string& s, std::size_t i) {
    std::size_t end = i;
    std::size_t begin = end;
    while (begin > 0 && !std::isspace(static_cast<unsigned char>(s[begin - 1]))) --begin;
    std::string w;
    for (std::size_t k = begin; k < end; ++k)
        w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[k]))));
    while (!w.empty() && (w.front() == '(' || w.front() == '"' || w.front() == '\''))
        w.erase(w.begin());
    return w;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

std::vector<std::string> split_sentences(const std::string& text) {
    std::string t = trim(text);
    std::vector<std::string> out;
    if (t.empty()) return out;

    std::size_t start = 0;
    std::size_t i = 0;
    const std::size_t n = t.size();
    while (i < n) {
        char ch = t[i];
        if (ch == '.' || ch == '!' || ch == '?') {
            std::size_t run_end = i;
            while (run_end + 1 < n &&
                   (t[run_end + 1] == '.' || t[run_end + 1] == '!' || t[run_end + 1] == '?'))
                ++run_end;
            bool is_single_period = (ch == '.' && run_end == i);
            bool abbrev = false;
            if (is_single_period) {
                std::string w = preceding_word(t, i);
                abbrev = abbreviations().count(w) > 0;
                // "e.g." style: single letters separated by dots
                if (!abbrev && w.size() == 1 && std::isalpha(static_cast<unsigned char>(w[0])))
                    abbrev = true;
            }
            // trailing closers stay with the sentence
            std::size_t cut = run_end + 1;
            while (cut < n && (t[cut] == '"' || t[cut] == '\'' || t[cut] == ')')) ++cut;
            bool at_end = cut >= n;
            bool followed_by_space =
                !at_end && std::isspace(static_cast<unsigned char>(t[cut]));
            if (!abbrev && (at_end || followed_by_space)) {
                std::string sent = trim(t.substr(start, cut - start));
                if (!sent.empty()) out.push_back(std::move(sent));
                start = cut;
            }
            i = cut;
        } else {
            ++i;
        }
    }
    if (start < n) {
        std::string tail = trim(t.substr(start));
        if (!tail.empty()) out.push_back(std::move(tail));
    }
    return out;
}

void split_sentences(Message& message) { message.sentences = split_sentences(message.text); }

namespace {

bool is_emoticon(const std::string& s) {
    static const std::unordered_set<std::string> emo = {
        ":)", ":-)", ":(", ":-(", ":D", ":-D", ";)", ";-)", ":P", ":-P", ":p",
        ":/", ":-/", ":|", ":'(", "<3", "</3", "xD", "XD", ":o", ":O", "=)",
        "=(", "^^", "^_^", "-_-", "o_O", ":3"};
    return emo.count(s) > 0;
}

bool is_url(const std::string& s) {
    return s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0 ||
           s.rfind("www.", 0) == 0;
}

std::string lower(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (unsigned char ch : s) out.push_back(static_cast<char>(std::tolower(ch)));
    return out;
}

bool word_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '\'' || c == '-' || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& sentence) {
    std::vector<std::string> tokens;
    std::istringstream ss(sentence);
    std::string raw;
    while (ss >> raw) {
        if (is_url(raw)) {
            tokens.push_back(lower(raw));
            continue;
        }
        if (is_emoticon(raw)) {
            tokens.push_back(raw);
            continue;
        }
        if ((raw[0] == '@' || raw[0] == '#') && raw.size() > 1) {
            // peel trailing punctuation off mentions/hashtags
            std::size_t end = raw.size();
            while (end > 1 && !word_char(raw[end - 1])) --end;
            tokens.push_back(lower(raw.substr(0, end)));
            for (std::size_t k = end; k < raw.size(); ++k) tokens.push_back(std::string(1, raw[k]));
            continue;
        }
        std::size_t i = 0;
        while (i < raw.size()) {
            if (word_char(raw[i])) {
                std::size_t j = i;
                while (j < raw.size() && word_char(raw[j])) ++j;
                tokens.push_back(lower(raw.substr(i, j - i)));
                i = j;
            } else {
                // check for an emoticon starting here
                bool matched = false;
                for (std::size_t len = std::min<std::size_t>(3, raw.size() - i); len >= 2; --len) {
                    if (is_emoticon(raw.substr(i, len))) {
                        tokens.push_back(raw.substr(i, len));
                        i += len;
                        matched = true;
                        break;
                    }
                }
                if (matched) continue;
                // collapse a run of the same punctuation char ("..." , "!!!")
                std::size_t j = i;
                while (j < raw.size() && raw[j] == raw[i]) ++j;
                tokens.push_back(raw.substr(i, j - i));
                i = j;
            }
        }
    }
    return tokens;
}

}  // namespace convo

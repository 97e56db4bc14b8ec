#ifndef CONVO_MESSAGE_HPP
#define CONVO_MESSAGE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace convo {

// One post or comment. comment_id 0 is the original post of its conversation.
struct Message {
    std::string poster;
    std::int64_t timestamp_ms = 0;
    std::vector<std::string> references;  // users this message addresses, in listed order
    std::int64_t thread_id = 0;
    std::int64_t comment_id = 0;
    std::string text;
    std::vector<std::string> sentences;   // filled by split_sentences

    bool is_root() const { return comment_id == 0; }
};

struct Conversation {
    std::string id;
    std::vector<std::string> groups;
    std::vector<Message> messages;  // sorted by (timestamp_ms, comment_id)

    const Message& root() const { return messages.front(); }
};

enum class SourceKind { Forum, Twitter };

struct Corpus {
    std::vector<Conversation> conversations;
    SourceKind source_kind = SourceKind::Forum;
};

}  // namespace convo

#endif

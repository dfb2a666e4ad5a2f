#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "polyrag/analytics.hpp"
#include "polyrag/conversation.hpp"
#include "polyrag/time_util.hpp"

namespace polyrag {

inline constexpr std::chrono::seconds kDefaultSessionTtl{24 * 3600};

// Sessions kept in memory and persisted to an append-only JSONL journal.
//
// Journal records, one per line:
//   {"op":"session","session_id","channel","sender_id","created"}
//   {"op":"turn","session_id","key","turn":{...},"response":{...}}
//   {"op":"complaint","session_id","timestamp"}
// Replay on open rebuilds sessions, the idempotency cache and complaint
// count. A trailing partial line (an interrupted append) is dropped and
// truncated away; any other malformed line is a JournalError naming its byte
// offset. Turns whose key was already seen are ignored on replay.
class SessionStore {
public:
    using IdGenerator = std::function<std::string()>;

    // An empty path keeps the store in memory only.
    explicit SessionStore(std::string journal_path, std::chrono::seconds ttl = kDefaultSessionTtl,
                          ClockFn clock = now_utc, IdGenerator ids = {});

    // nullopt for unknown sessions and for sessions idle longer than the TTL.
    std::optional<Session> get(const std::string& session_id);

    Session create(Channel channel, const std::string& sender_id);

    // Web: the pinned session if still live. Otherwise the sender's latest
    // live session on that channel, or a fresh one.
    Session resolve(Channel channel, const std::string& sender_id,
                    const std::optional<std::string>& session_id = std::nullopt);

    // Persists a turn with its idempotency key and the response produced for
    // it. Returns false (and writes nothing) if the key was already logged.
    bool append_turn(const std::string& session_id, const ChatTurn& turn, const std::string& key,
                     const nlohmann::ordered_json& response);

    std::optional<nlohmann::json> cached_response(const std::string& key) const;

    void record_complaint(const std::string& session_id);

    std::vector<TurnEvent> turn_log() const;
    std::size_t complaint_count() const;
    std::size_t turn_count() const;
    std::size_t session_count() const;
    bool dropped_partial_tail() const { return dropped_tail_; }

    std::chrono::seconds ttl() const { return ttl_; }
    Instant now() const { return clock_(); }

private:
    void replay();
    void write_line(const std::string& line);
    bool expired(const Session& s, Instant now) const;
    Session create_locked(Channel channel, const std::string& sender_id);

    std::string path_;
    std::chrono::seconds ttl_;
    ClockFn clock_;
    IdGenerator ids_;

    mutable std::mutex mu_;
    std::map<std::string, Session> sessions_;
    std::map<std::string, std::string> latest_by_sender_; // "channel|sender" -> session_id
    std::map<std::string, nlohmann::json> responses_;
    std::vector<TurnEvent> log_;
    std::size_t complaints_ = 0;
    bool dropped_tail_ = false;
};

std::string random_session_id();

} // namespace polyrag

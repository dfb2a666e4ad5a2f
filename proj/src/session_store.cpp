#include "polyrag/session_store.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "polyrag/errors.hpp"
#include "polyrag/serialization.hpp"

namespace polyrag {

std::string random_session_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    std::ostringstream out;
    out << "s-" << std::hex << rng();
    return out.str();
}

namespace {

std::string sender_key(Channel channel, const std::string& sender_id) {
    return std::string(to_string(channel)) + "|" + sender_id;
}

} // namespace

SessionStore::SessionStore(std::string journal_path, std::chrono::seconds ttl, ClockFn clock, IdGenerator ids)
    : path_(std::move(journal_path)), ttl_(ttl), clock_(std::move(clock)), ids_(std::move(ids)) {
    if (!ids_) ids_ = random_session_id;
    if (!path_.empty()) replay();
}

void SessionStore::replay() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) return; // fresh journal
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string data = buf.str();
    in.close();

    std::uint64_t offset = 0;
    bool needs_newline = false;
    while (offset < data.size()) {
        const std::size_t nl = data.find('\n', offset);
        const bool partial = nl == std::string::npos;
        const std::string line = data.substr(offset, partial ? std::string::npos : nl - offset);
        const std::uint64_t line_offset = offset;
        offset = partial ? data.size() : nl + 1;
        if (line.empty()) continue;

        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
            const auto op = rec.at("op").get<std::string>();
            const auto sid = rec.at("session_id").get<std::string>();
            if (op == "session") {
                Session s;
                s.session_id = sid;
                const auto ch = parse_channel(rec.at("channel").get<std::string>());
                if (!ch) throw InvalidArgument("bad channel");
                s.channel = *ch;
                s.sender_id = rec.at("sender_id").get<std::string>();
                const auto created = parse_rfc3339(rec.at("created").get<std::string>());
                if (!created) throw InvalidArgument("bad created timestamp");
                s.created = s.last_active = *created;
                latest_by_sender_[sender_key(s.channel, s.sender_id)] = sid;
                sessions_[sid] = std::move(s);
            } else if (op == "turn") {
                const auto key = rec.at("key").get<std::string>();
                auto turn = turn_from_json(rec.at("turn"));
                const auto& response = rec.at("response");
                auto it = sessions_.find(sid);
                if (it == sessions_.end()) throw InvalidArgument("turn for unknown session " + sid);
                if (responses_.count(key)) continue;
                responses_[key] = response;
                log_.push_back(event_of(it->second.channel, turn));
                it->second.last_active = std::max(it->second.last_active, turn.timestamp);
                it->second.turns.push_back(std::move(turn));
            } else if (op == "complaint") {
                ++complaints_;
            } else {
                throw InvalidArgument("unknown op " + op);
            }
        } catch (const std::exception& e) {
            if (partial) {
                // Interrupted append: drop it and cut the file back.
                dropped_tail_ = true;
                std::filesystem::resize_file(path_, line_offset);
                break;
            }
            throw JournalError(line_offset, std::string("corrupt journal record in ") + path_ + " (" + e.what() + ")");
        }
        if (partial) needs_newline = true;
    }
    if (needs_newline) {
        std::ofstream out(path_, std::ios::binary | std::ios::app);
        out << '\n';
    }
}

void SessionStore::write_line(const std::string& line) {
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw IoError(path_, "cannot open journal for append");
    const std::string record = line + "\n";
    out.write(record.data(), static_cast<std::streamsize>(record.size()));
    out.flush();
    if (!out) throw IoError(path_, "journal append failed");
}

bool SessionStore::expired(const Session& s, Instant now) const { return now - s.last_active > ttl_; }

std::optional<Session> SessionStore::get(const std::string& session_id) {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(session_id);
    if (it == sessions_.end() || expired(it->second, clock_())) return std::nullopt;
    return it->second;
}

Session SessionStore::create_locked(Channel channel, const std::string& sender_id) {
    Session s;
    do {
        s.session_id = ids_();
    } while (sessions_.count(s.session_id));
    s.channel = channel;
    s.sender_id = sender_id.empty() ? s.session_id : sender_id;
    s.created = s.last_active = clock_();
    ordered_json rec;
    rec["op"] = "session";
    rec["session_id"] = s.session_id;
    rec["channel"] = std::string(to_string(channel));
    rec["sender_id"] = s.sender_id;
    rec["created"] = format_rfc3339(s.created);
    write_line(rec.dump());
    latest_by_sender_[sender_key(channel, s.sender_id)] = s.session_id;
    sessions_[s.session_id] = s;
    return s;
}

Session SessionStore::create(Channel channel, const std::string& sender_id) {
    std::lock_guard lock(mu_);
    return create_locked(channel, sender_id);
}

Session SessionStore::resolve(Channel channel, const std::string& sender_id,
                              const std::optional<std::string>& session_id) {
    std::lock_guard lock(mu_);
    const auto now = clock_();
    if (session_id) {
        const auto it = sessions_.find(*session_id);
        if (it != sessions_.end() && it->second.channel == channel && !expired(it->second, now)) return it->second;
        return create_locked(channel, sender_id);
    }
    if (!sender_id.empty()) {
        const auto latest = latest_by_sender_.find(sender_key(channel, sender_id));
        if (latest != latest_by_sender_.end()) {
            const auto& s = sessions_.at(latest->second);
            if (!expired(s, now)) return s;
        }
    }
    return create_locked(channel, sender_id);
}

bool SessionStore::append_turn(const std::string& session_id, const ChatTurn& turn, const std::string& key,
                               const nlohmann::ordered_json& response) {
    std::lock_guard lock(mu_);
    if (responses_.count(key)) return false;
    const auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw InvalidArgument("unknown session " + session_id);
    ordered_json rec;
    rec["op"] = "turn";
    rec["session_id"] = session_id;
    rec["key"] = key;
    rec["turn"] = turn_to_json(turn);
    rec["response"] = response;
    write_line(rec.dump());
    responses_[key] = nlohmann::json::parse(response.dump());
    log_.push_back(event_of(it->second.channel, turn));
    it->second.turns.push_back(turn);
    it->second.last_active = std::max(it->second.last_active, turn.timestamp);
    return true;
}

std::optional<nlohmann::json> SessionStore::cached_response(const std::string& key) const {
    std::lock_guard lock(mu_);
    const auto it = responses_.find(key);
    if (it == responses_.end()) return std::nullopt;
    return it->second;
}

void SessionStore::record_complaint(const std::string& session_id) {
    std::lock_guard lock(mu_);
    if (!sessions_.count(session_id)) throw InvalidArgument("unknown session " + session_id);
    ordered_json rec;
    rec["op"] = "complaint";
    rec["session_id"] = session_id;
    rec["timestamp"] = format_rfc3339(clock_());
    write_line(rec.dump());
    ++complaints_;
}

std::vector<TurnEvent> SessionStore::turn_log() const {
    std::lock_guard lock(mu_);
    return log_;
}

std::size_t SessionStore::complaint_count() const {
    std::lock_guard lock(mu_);
    return complaints_;
}

std::size_t SessionStore::turn_count() const {
    std::lock_guard lock(mu_);
    return log_.size();
}

std::size_t SessionStore::session_count() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
}

} // namespace polyrag

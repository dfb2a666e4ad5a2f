#include "polyrag/analytics.hpp"

#include <cmath>

namespace polyrag {

TurnEvent event_of(Channel channel, const ChatTurn& turn) {
    return {channel, turn.modality, turn.original_lang.code, turn.refused};
}

namespace {

constexpr std::array<Channel, 3> kChannels{Channel::Web, Channel::Webhook, Channel::CLI};

void finish(AnalyticsSnapshot& s) {
    if (s.conversations == 0) return;
    const auto n = static_cast<double>(s.conversations);
    s.voice_fraction = static_cast<double>(s.voice_count) / n;
    s.non_english_fraction = static_cast<double>(s.non_english_count) / n;
}

} // namespace

AnalyticsSnapshot compute_analytics(const std::vector<TurnEvent>& log, std::size_t complaints) {
    AnalyticsSnapshot s;
    for (auto c : kChannels) s.conversations_per_channel[std::string(to_string(c))] = 0;
    for (const auto& e : log) {
        ++s.conversations_per_channel[std::string(to_string(e.channel))];
        ++s.conversations;
        if (e.modality == Modality::Voice) ++s.voice_count;
        if (e.lang_code != "en") ++s.non_english_count;
        if (e.refused) ++s.refusal_count;
    }
    s.complaint_count = complaints;
    finish(s);
    return s;
}

std::string format_percent(double fraction) {
    return std::to_string(static_cast<long long>(std::llround(fraction * 100.0))) + "%";
}

nlohmann::ordered_json to_json(const AnalyticsSnapshot& s) {
    nlohmann::ordered_json j;
    j["conversations"] = s.conversations;
    j["conversations_per_channel"] = s.conversations_per_channel;
    j["voice_fraction"] = s.voice_fraction;
    j["non_english_fraction"] = s.non_english_fraction;
    j["refusal_count"] = s.refusal_count;
    j["complaint_count"] = s.complaint_count;
    j["display"]["voice"] = format_percent(s.voice_fraction);
    j["display"]["non_english"] = format_percent(s.non_english_fraction);
    return j;
}

void AnalyticsCounters::record(const TurnEvent& e) {
    ++per_channel_[static_cast<std::size_t>(e.channel)];
    if (e.modality == Modality::Voice) ++voice_;
    if (e.lang_code != "en") ++non_english_;
    if (e.refused) ++refusals_;
}

void AnalyticsCounters::record_complaint() { ++complaints_; }

AnalyticsSnapshot AnalyticsCounters::snapshot() const {
    AnalyticsSnapshot s;
    for (auto c : kChannels) {
        const auto n = per_channel_[static_cast<std::size_t>(c)].load();
        s.conversations_per_channel[std::string(to_string(c))] = n;
        s.conversations += n;
    }
    s.voice_count = voice_.load();
    s.non_english_count = non_english_.load();
    s.refusal_count = refusals_.load();
    s.complaint_count = complaints_.load();
    finish(s);
    return s;
}

} // namespace polyrag

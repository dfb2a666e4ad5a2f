#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyrag/conversation.hpp"

namespace polyrag {

// One logged conversation (an inbound/outbound turn pair).
struct TurnEvent {
    Channel channel = Channel::Web;
    Modality modality = Modality::Text;
    std::string lang_code = "en";
    bool refused = false;
};

TurnEvent event_of(Channel channel, const ChatTurn& turn);

struct AnalyticsSnapshot {
    std::map<std::string, std::size_t> conversations_per_channel;
    std::size_t conversations = 0;
    std::size_t voice_count = 0;
    std::size_t non_english_count = 0;
    double voice_fraction = 0.0;
    double non_english_fraction = 0.0;
    std::size_t refusal_count = 0;
    std::size_t complaint_count = 0;

    bool operator==(const AnalyticsSnapshot&) const = default;
};

AnalyticsSnapshot compute_analytics(const std::vector<TurnEvent>& log, std::size_t complaints = 0);

// Whole-percent rendering, e.g. 0.4496 -> "45%".
std::string format_percent(double fraction);

nlohmann::ordered_json to_json(const AnalyticsSnapshot& snapshot);

// Lock-free running counters kept alongside the journal.
class AnalyticsCounters {
public:
    void record(const TurnEvent& event);
    void record_complaint();
    AnalyticsSnapshot snapshot() const;

private:
    std::array<std::atomic<std::size_t>, 3> per_channel_{};
    std::atomic<std::size_t> voice_{0};
    std::atomic<std::size_t> non_english_{0};
    std::atomic<std::size_t> refusals_{0};
    std::atomic<std::size_t> complaints_{0};
};

} // namespace polyrag

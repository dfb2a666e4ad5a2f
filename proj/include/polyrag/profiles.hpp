#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polyrag {

enum class Capability { Translate, TTS, STT, LLM };

std::string_view to_string(Capability c);
std::optional<Capability> parse_capability(std::string_view s);

struct ProviderProfile {
    std::string name;
    Capability capability = Capability::LLM;
    double accuracy = 0.0;   // percent
    double latency_ms = 0.0;
    double cost = 0.0;       // per call

    bool operator==(const ProviderProfile&) const = default;
};

// CSV with header `name,capability,accuracy,latency_ms,cost`.
// Throws IoError / InvalidArgument (with line number) on bad input.
std::vector<ProviderProfile> load_profiles_csv(const std::string& path);

// Among profiles with `capability` whose latency fits the budget, the most
// accurate one; ties go to lower latency, then lower cost, then name.
// Throws SelectionError when nothing qualifies.
ProviderProfile select_provider(const std::vector<ProviderProfile>& profiles, Capability capability,
                                std::optional<double> latency_budget_ms = std::nullopt);

} // namespace polyrag

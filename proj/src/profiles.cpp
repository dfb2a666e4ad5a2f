#include "polyrag/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "polyrag/errors.hpp"
#include "polyrag/text.hpp"

namespace polyrag {

std::string_view to_string(Capability c) {
    switch (c) {
    case Capability::Translate: return "Translate";
    case Capability::TTS: return "TTS";
    case Capability::STT: return "STT";
    case Capability::LLM: return "LLM";
    }
    return "LLM";
}

std::optional<Capability> parse_capability(std::string_view s) {
    const auto l = text::to_lower_ascii(text::trim(s));
    if (l == "translate") return Capability::Translate;
    if (l == "tts") return Capability::TTS;
    if (l == "stt") return Capability::STT;
    if (l == "llm") return Capability::LLM;
    return std::nullopt;
}

namespace {

double parse_number(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument(where + ": not a number: '" + s + "'");
    }
}

} // namespace

std::vector<ProviderProfile> load_profiles_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot read provider profiles");
    std::vector<ProviderProfile> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::is_blank(line)) continue;
        auto fields = text::split(text::trim(line), ',');
        for (auto& f : fields) f = text::trim(f);
        const std::string where = path + ":" + std::to_string(line_no);
        if (line_no == 1) {
            if (fields != std::vector<std::string>{"name", "capability", "accuracy", "latency_ms", "cost"}) {
                throw InvalidArgument(where + ": expected header name,capability,accuracy,latency_ms,cost");
            }
            continue;
        }
        if (fields.size() != 5) throw InvalidArgument(where + ": expected 5 fields");
        ProviderProfile p;
        p.name = fields[0];
        const auto cap = parse_capability(fields[1]);
        if (!cap) throw InvalidArgument(where + ": unknown capability '" + fields[1] + "'");
        p.capability = *cap;
        p.accuracy = parse_number(fields[2], where);
        p.latency_ms = parse_number(fields[3], where);
        p.cost = parse_number(fields[4], where);
        if (p.accuracy < 0 || p.accuracy > 100) throw InvalidArgument(where + ": accuracy outside [0,100]");
        if (p.latency_ms < 0 || p.cost < 0) throw InvalidArgument(where + ": negative latency or cost");
        out.push_back(std::move(p));
    }
    return out;
}

ProviderProfile select_provider(const std::vector<ProviderProfile>& profiles, Capability capability,
                                std::optional<double> latency_budget_ms) {
    std::vector<const ProviderProfile*> capable;
    for (const auto& p : profiles) {
        if (p.capability == capability) capable.push_back(&p);
    }
    if (capable.empty()) {
        throw SelectionError("no provider profile with capability " + std::string(to_string(capability)));
    }
    std::vector<const ProviderProfile*> within;
    for (const auto* p : capable) {
        if (!latency_budget_ms || p->latency_ms <= *latency_budget_ms) within.push_back(p);
    }
    if (within.empty()) {
        const auto nearest = std::min_element(capable.begin(), capable.end(), [](auto* a, auto* b) {
            return a->latency_ms < b->latency_ms;
        });
        std::ostringstream msg;
        msg << "no " << to_string(capability) << " provider within latency budget " << *latency_budget_ms
            << " ms; nearest is " << (*nearest)->name << " at " << (*nearest)->latency_ms << " ms";
        throw SelectionError(msg.str());
    }
    const auto better = [](const ProviderProfile* a, const ProviderProfile* b) {
        if (a->accuracy != b->accuracy) return a->accuracy > b->accuracy;
        if (a->latency_ms != b->latency_ms) return a->latency_ms < b->latency_ms;
        if (a->cost != b->cost) return a->cost < b->cost;
        return a->name < b->name;
    };
    return **std::min_element(within.begin(), within.end(), better);
}

} // namespace polyrag

#include "polyrag/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "polyrag/embedding.hpp"
#include "polyrag/errors.hpp"
#include "polyrag/index.hpp"
#include "polyrag/text.hpp"
#include "polyrag/utf8.hpp"

namespace polyrag {

using text::is_blank;
using text::replace_all;
using text::to_lower_ascii;
using text::tokenize;

namespace {

struct FactTemplate {
    const char* heading;
    const char* fact;     // {U}: unit, {N}: number
    const char* question;
    const char* answer;
    int lo;
    int hi;
    int step;
};

constexpr FactTemplate kHrFacts[] = {
    {"Annual Leave", "Employees of the {U} unit receive {N} days of annual leave each year.",
     "How many days of annual leave do employees of the {U} unit receive?", "{N} days", 14, 30, 1},
    {"Working Hours", "The {U} unit operates a shift of {N} hours per working day.",
     "How many hours is a working day shift in the {U} unit?", "{N} hours", 7, 10, 1},
    {"Overtime", "Overtime in the {U} unit is paid at {N} percent of the regular hourly wage.",
     "At what percent of the regular hourly wage is overtime paid in the {U} unit?", "{N} percent", 150, 200, 25},
    {"Medical Benefits", "Staff in the {U} unit can claim medical expenses up to {N} thousand rupees per year.",
     "Up to how many thousand rupees of medical expenses can staff in the {U} unit claim?",
     "{N} thousand rupees", 20, 90, 5},
    {"Grievances", "Grievances raised in the {U} unit must be resolved within {N} working days.",
     "Within how many working days must grievances in the {U} unit be resolved?", "{N} working days", 3, 15, 1},
};

constexpr FactTemplate kQaFacts[] = {
    {"Inspection", "Finished goods in the {U} unit are inspected every {N} minutes on the line.",
     "How often, in minutes, are finished goods inspected in the {U} unit?", "{N} minutes", 15, 90, 15},
    {"Defect Limits", "The acceptable defect rate for the {U} unit is {N} pieces per thousand.",
     "What is the acceptable defect rate for the {U} unit?", "{N} pieces per thousand", 2, 25, 1},
    {"Audits", "Internal audits of the {U} unit are scheduled every {N} weeks.",
     "How often are internal audits of the {U} unit scheduled?", "{N} weeks", 2, 12, 1},
    {"Calibration", "Measuring instruments in the {U} unit are calibrated every {N} months.",
     "How often are measuring instruments in the {U} unit calibrated?", "{N} months", 1, 12, 1},
    {"Packaging", "Each carton packed by the {U} unit holds {N} pairs of socks.",
     "How many pairs of socks does each carton packed by the {U} unit hold?", "{N} pairs", 12, 120, 12},
};

constexpr const char* kUnits[] = {
    "Knitting",  "Dyeing",     "Packing",  "Stitching",  "Finishing",  "Warehouse", "Logistics",
    "Procurement", "Accounts", "Payroll",  "Security",   "Maintenance", "Laboratory", "Boarding",
    "Printing",  "Embroidery", "Cutting",  "Sampling",   "Compliance", "Transport", "Linking",
    "Pressing",  "Labelling",  "Spinning",
};

constexpr const char* kFillers[] = {
    "Supervisors explain this rule to every new joiner during orientation.",
    "Questions about this rule can be raised with the section supervisor.",
    "The rule is reviewed by management at the start of each financial year.",
    "Records related to this rule are kept in the unit office.",
    "Team leaders display a summary of this rule on the notice board.",
    "Any exception requires written approval from the unit manager.",
    "Changes to this rule are announced at the weekly team meeting.",
    "Workers are encouraged to read this section carefully.",
    "Contractors on site follow the same rule as permanent staff.",
    "The human resources office keeps signed copies of this section.",
};

constexpr const char* kOocSubjects[] = {
    "penguins", "volcanoes", "galaxies",  "glaciers",   "dolphins", "comets",     "tornadoes", "jellyfish",
    "kangaroos", "meteors",  "walruses",  "pyramids",   "dinosaurs", "asteroids", "hurricanes", "octopuses",
    "giraffes", "cheetahs",  "flamingos", "earthquakes", "icebergs", "parrots",   "koalas",    "nebulae",
    "camels",   "zebras",    "lobsters",  "owls",       "sharks",   "tulips",
};

constexpr const char* kOocPredicates[] = {
    "migrate southward", "hibernate underground", "orbit jupiter", "glow purple",    "swim backwards",
    "erupt violently",   "sing melodies",         "sparkle brightly", "drift eastward", "evolve quickly",
};

std::string fill(std::string s, const std::string& unit, int n) {
    s = replace_all(std::move(s), "{U}", unit);
    return replace_all(std::move(s), "{N}", std::to_string(n));
}

// Portable across standard libraries, unlike the <random> distributions.
std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[pick(rng, i)]);
}

struct Fact {
    std::size_t doc;
    std::string question;
    std::string answer;
    std::size_t start;
    std::size_t end;
};

} // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticOptions& options) {
    constexpr std::size_t kUnitCount = std::size(kUnits);
    if (options.units == 0 || options.units > kUnitCount)
        throw InvalidArgument("units must be in [1, " + std::to_string(kUnitCount) + "]");
    options.params.validate();

    std::mt19937_64 rng(options.seed);
    std::vector<std::size_t> unit_order(kUnitCount);
    for (std::size_t i = 0; i < kUnitCount; ++i) unit_order[i] = i;
    shuffle(unit_order, rng);

    SyntheticCorpus out;
    std::vector<Fact> facts;
    for (std::size_t d = 0; d < options.units; ++d) {
        const std::string unit = kUnits[unit_order[d]];
        const bool hr = d % 2 == 0;
        const auto& templates = hr ? kHrFacts : kQaFacts;

        Document doc;
        doc.collection = hr ? Collection::HR : Collection::QA;
        std::string slug = to_lower_ascii(unit);
        doc.doc_id = (hr ? "hr/" : "qa/") + slug + (hr ? "_handbook" : "_manual");
        doc.title = unit + (hr ? " Unit Employee Handbook" : " Unit Quality Manual");

        std::string text = "# " + doc.title + "\n\n";
        text += "This document describes how the " + unit + " unit applies company " +
                (hr ? "people policies." : "quality procedures.") + "\n";

        for (const auto& t : templates) {
            text += "\n## " + std::string(t.heading) + "\n\n";
            const int steps = (t.hi - t.lo) / t.step + 1;
            const int n = t.lo + static_cast<int>(pick(rng, static_cast<std::size_t>(steps))) * t.step;
            const std::string fact = fill(t.fact, unit, n);
            const std::size_t start = utf8::length(text);
            text += fact;
            facts.push_back({d, fill(t.question, unit, n), fill(t.answer, unit, n), start,
                             start + utf8::length(fact)});
            for (int i = 0; i < 2; ++i) text += std::string(" ") + kFillers[pick(rng, std::size(kFillers))];
            text += "\n\n";
            const std::size_t extra = 2 + pick(rng, 2);
            for (std::size_t i = 0; i < extra; ++i) {
                if (i) text += ' ';
                text += kFillers[pick(rng, std::size(kFillers))];
            }
            text += "\n";
        }
        doc.text = std::move(text);
        doc.source_path = doc.doc_id + ".md";
        out.documents.push_back(std::move(doc));
    }

    if (options.in_context > facts.size())
        throw InvalidArgument("in_context exceeds the number of generated facts");
    std::vector<std::size_t> order(facts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle(order, rng);
    order.resize(options.in_context);
    std::sort(order.begin(), order.end());

    StrategyOptions fixed;
    fixed.params = options.params;
    const auto chunks = chunk_corpus(out.documents, fixed);

    for (std::size_t i : order) {
        const Fact& f = facts[i];
        QAPair qa;
        qa.question = f.question;
        qa.expected_doc_id = out.documents[f.doc].doc_id;
        qa.answer_start = f.start;
        qa.answer_end = f.end;
        qa.expected_answer_substring = f.answer;
        qa.in_context = true;
        qa.expected_chunk_ids = chunk_ids_covering(qa, chunks);
        out.qa_pairs.push_back(std::move(qa));
    }

    // Out-of-context candidates: vocabulary disjoint from the corpus, and
    // below the grounding threshold against every chunk by brute force.
    std::set<std::string> vocab;
    for (const auto& d : out.documents)
        for (auto& t : tokenize(d.text)) vocab.insert(std::move(t));
    const HashBowEmbedder embedder;
    std::vector<Vector> chunk_vectors;
    chunk_vectors.reserve(chunks.size());
    for (const auto& c : chunks) chunk_vectors.push_back(embedder.embed(c.text));

    std::vector<std::size_t> candidates(std::size(kOocSubjects) * std::size(kOocPredicates));
    for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i] = i;
    shuffle(candidates, rng);
    std::size_t accepted = 0;
    for (std::size_t c : candidates) {
        if (accepted == options.out_of_context) break;
        const std::string q = std::string("Why do ") + kOocSubjects[c / std::size(kOocPredicates)] + " " +
                              kOocPredicates[c % std::size(kOocPredicates)] + "?";
        const auto tokens = tokenize(q);
        if (std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) { return vocab.count(t) > 0; }))
            continue;
        const Vector qv = embedder.embed(q);
        double best = 0.0;
        for (const auto& v : chunk_vectors) {
            double dot = 0.0;
            for (std::size_t j = 0; j < v.values.size(); ++j) dot += qv.values[j] * v.values[j];
            const double denom = qv.norm() * v.norm();
            if (denom > 0.0) best = std::max(best, dot / denom);
        }
        if (best >= options.grounding_threshold) continue;
        QAPair qa;
        qa.question = q;
        qa.in_context = false;
        out.qa_pairs.push_back(std::move(qa));
        ++accepted;
    }
    if (accepted < options.out_of_context)
        throw InvalidArgument("could not generate " + std::to_string(options.out_of_context) +
                              " out-of-context questions below the grounding threshold");
    return out;
}

std::vector<std::string> chunk_ids_covering(const QAPair& qa, const std::vector<Chunk>& chunks) {
    std::vector<std::string> ids;
    if (!qa.in_context) return ids;
    for (const auto& c : chunks)
        if (c.doc_id == qa.expected_doc_id && c.char_start < qa.answer_end && qa.answer_start < c.char_end)
            ids.push_back(c.chunk_id);
    return ids;
}

void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "cannot create directory");

    auto open = [](const fs::path& p) {
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError(p.string(), "cannot write");
        return f;
    };

    std::ostringstream manifest;
    manifest << "filename,collection\n";
    for (const auto& d : corpus.documents) {
        const fs::path p = dir / (d.doc_id + ".md");
        fs::create_directories(p.parent_path(), ec);
        auto f = open(p);
        f << d.text;
        manifest << d.doc_id << ".md," << to_string(d.collection) << "\n";
    }
    open(dir / "manifest.csv") << manifest.str();

    auto f = open(dir / "qa_pairs.jsonl");
    for (const auto& qa : corpus.qa_pairs) {
        nlohmann::ordered_json j;
        j["question"] = qa.question;
        j["in_context"] = qa.in_context;
        j["expected_doc_id"] = qa.expected_doc_id;
        j["answer_start"] = qa.answer_start;
        j["answer_end"] = qa.answer_end;
        j["expected_answer_substring"] = qa.expected_answer_substring;
        j["expected_chunk_ids"] = qa.expected_chunk_ids;
        f << j.dump() << "\n";
    }
}

std::vector<QAPair> load_qa_pairs(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(path.string(), "cannot read QA pairs");
    std::vector<QAPair> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (is_blank(line)) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            QAPair qa;
            qa.question = j.at("question").get<std::string>();
            qa.in_context = j.value("in_context", true);
            qa.expected_doc_id = j.value("expected_doc_id", std::string{});
            qa.answer_start = j.value("answer_start", std::size_t{0});
            qa.answer_end = j.value("answer_end", std::size_t{0});
            qa.expected_answer_substring = j.value("expected_answer_substring", std::string{});
            qa.expected_chunk_ids = j.value("expected_chunk_ids", std::vector<std::string>{});
            out.push_back(std::move(qa));
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

} // namespace polyrag

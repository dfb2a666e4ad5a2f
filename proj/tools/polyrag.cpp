#include <atomic>
#include <csignal>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "polyrag/chat_service.hpp"
#include "polyrag/chunk_store.hpp"
#include "polyrag/config.hpp"
#include "polyrag/errors.hpp"
#include "polyrag/eval.hpp"
#include "polyrag/http_api.hpp"
#include "polyrag/mock_dictionary.hpp"
#include "polyrag/synthetic.hpp"
#include "polyrag/text.hpp"

namespace fs = std::filesystem;
using namespace polyrag;

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

int run_ingest(const std::string& root, const std::string& manifest, const std::string& strategy,
               std::size_t size, std::size_t overlap, std::size_t topics, const std::string& lexicon,
               const std::string& out, const std::string& index_out) {
    StrategyOptions options;
    const auto s = parse_strategy(strategy);
    if (!s) throw InvalidArgument("unknown strategy: " + strategy);
    options.strategy = *s;
    options.params.size = size;
    options.params.overlap = overlap;
    options.params.validate();
    options.topic_k = topics;
    if (!lexicon.empty()) options.entity_lexicon = load_lexicon(lexicon);

    auto loaded = load_corpus(root, manifest.empty() ? std::nullopt : std::optional<fs::path>(manifest));
    for (const auto& f : loaded.failures) std::cerr << "skipped " << f.path << ": " << f.reason << "\n";
    const auto summary = ingest(loaded.documents, options, out);
    std::cout << "ingested " << summary.doc_count << " documents into " << summary.chunk_count << " chunks ("
              << to_string(options.strategy) << ") -> " << out << "\n";
    if (!index_out.empty()) {
        const HashBowEmbedder embedder;
        const auto index = Index::build(read_chunk_store(out), embedder);
        index.save(index_out);
        std::cout << "index: " << index.size() << " vectors -> " << index_out << "\n";
    }
    return 0;
}

int run_serve(const std::string& config_path) {
    const auto config = ServiceConfig::load(config_path);
    auto pipeline = Pipeline::build(config);
    HttpApi api(*pipeline->service, pipeline->index.size(), config.webhook_token, pipeline->selected_providers);

    httplib::Server server;
    api.mount(server);
    if (!config.static_dir.empty() && !server.set_mount_point("/", config.static_dir))
        throw IoError(config.static_dir, "static directory not found");

    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "polyrag listening on " << config.host << ":" << config.port << " (" << pipeline->index.size()
              << " chunks)" << std::endl;
    if (!server.listen(config.host, config.port)) throw Error("cannot listen on " + config.host + ":" +
                                                              std::to_string(config.port));
    return 0;
}

int run_chat(const std::string& config_path, const std::string& sender) {
    const auto config = ServiceConfig::load(config_path);
    auto pipeline = Pipeline::build(config);
    std::string line;
    std::size_t n = 0;
    std::cout << "> " << std::flush;
    while (std::getline(std::cin, line)) {
        if (text::is_blank(line)) {
            std::cout << "> " << std::flush;
            continue;
        }
        if (line == "/quit" || line == "/exit") break;
        InboundMessage msg;
        msg.channel = Channel::CLI;
        msg.sender_id = sender;
        msg.message_id = "cli-" + std::to_string(++n) + "-" + std::to_string(now_utc().time_since_epoch().count());
        msg.kind = MessageKind::Text;
        msg.text = line;
        msg.timestamp = now_utc();
        try {
            const auto result = pipeline->service->handle(msg);
            const auto& m = result.message;
            std::cout << m.text << "\n";
            if (!m.sources.empty()) std::cout << "  sources: " << text::join(m.sources, ", ") << "\n";
            if (m.refused) std::cout << "  (refused)\n";
            if (m.degraded) std::cout << "  (degraded)\n";
        } catch (const ParseError& e) {
            std::cerr << "error in " << e.field() << ": " << e.what() << "\n";
        }
        std::cout << "> " << std::flush;
    }
    return 0;
}

int run_eval(const std::string& suite, const std::string& corpus, const std::string& out,
             const std::string& fixtures, const std::string& lexicon, std::size_t k) {
    SuiteOptions options;
    const auto s = parse_suite(suite);
    if (!s) throw InvalidArgument("unknown suite: " + suite);
    options.suite = *s;
    options.corpus_dir = corpus;
    options.out_dir = out;
    options.fixture_dir = fixtures;
    options.lexicon = lexicon;
    options.k = k;
    for (const auto& p : run_eval_suite(options, &std::cout)) std::cout << "wrote " << p.string() << "\n";
    return 0;
}

int run_gen_corpus(const std::string& out, std::uint64_t seed, const std::string& dictionary) {
    SyntheticOptions options;
    options.seed = seed;
    const auto corpus = generate_synthetic_corpus(options);
    write_synthetic_corpus(corpus, out);
    std::cout << "wrote " << corpus.documents.size() << " documents and " << corpus.qa_pairs.size()
              << " QA pairs -> " << out << "\n";
    if (!dictionary.empty()) {
        const auto entries = build_mock_dictionary(
            corpus, {std::string(kRefusalText), std::string(kDegradedReply)});
        write_dictionary_tsv(entries, dictionary);
        std::cout << "wrote " << entries.size() << " dictionary entries -> " << dictionary << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    const std::string data_dir = POLYRAG_DATA_DIR;
    CLI::App app{"polyrag: multilingual retrieval-augmented QA service"};
    app.require_subcommand(1);

    std::string root, manifest, strategy = "fixed", lexicon, out, index_out;
    std::size_t size = 1000, overlap = 200, topics = 4;
    auto* ingest_cmd = app.add_subcommand("ingest", "Chunk a corpus into a chunk store");
    ingest_cmd->add_option("--root", root, "Corpus directory")->required();
    ingest_cmd->add_option("--manifest", manifest, "CSV filename,collection");
    ingest_cmd->add_option("--strategy", strategy, "fixed|paragraph|semantic|topic|entity")->capture_default_str();
    ingest_cmd->add_option("--size", size, "Chunk size in characters")->capture_default_str();
    ingest_cmd->add_option("--overlap", overlap, "Overlap in characters")->capture_default_str();
    ingest_cmd->add_option("--topics", topics, "Cluster count for topic chunking")->capture_default_str();
    ingest_cmd->add_option("--lexicon", lexicon, "Entity lexicon (one term per line)");
    ingest_cmd->add_option("--out", out, "Chunk store path (JSONL)")->required();
    ingest_cmd->add_option("--index", index_out, "Also build and save the vector index here");

    std::string config_path;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    serve_cmd->add_option("--config", config_path, "Service config JSON")->required();

    std::string sender = "cli-user";
    auto* chat_cmd = app.add_subcommand("chat", "Interactive chat on stdin");
    chat_cmd->add_option("--config", config_path, "Service config JSON")->required();
    chat_cmd->add_option("--sender", sender, "Sender id")->capture_default_str();

    std::string suite = "all", corpus = data_dir + "/corpus", eval_out = "eval_out",
                fixtures = data_dir + "/profiles", eval_lexicon = data_dir + "/entity_lexicon.txt";
    std::size_t k = kDefaultRetrievalK;
    auto* eval_cmd = app.add_subcommand("eval", "Run the evaluation suites and write table1..table5");
    eval_cmd->add_option("--suite", suite, "chunking|prompts|providers|all")->capture_default_str();
    eval_cmd->add_option("--corpus", corpus, "Labeled corpus directory")->capture_default_str();
    eval_cmd->add_option("--out", eval_out, "Output directory")->capture_default_str();
    eval_cmd->add_option("--fixtures", fixtures, "Provider profile CSVs")->capture_default_str();
    eval_cmd->add_option("--lexicon", eval_lexicon, "Entity lexicon")->capture_default_str();
    eval_cmd->add_option("--k", k, "Retrieval depth")->capture_default_str();

    std::string gen_out, dictionary;
    std::uint64_t seed = 7;
    auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate the synthetic labeled corpus");
    gen_cmd->add_option("--out", gen_out, "Output directory")->required();
    gen_cmd->add_option("--seed", seed, "Generator seed")->capture_default_str();
    gen_cmd->add_option("--dictionary", dictionary, "Also write a mock translation dictionary (TSV)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest_cmd) return run_ingest(root, manifest, strategy, size, overlap, topics, lexicon, out, index_out);
        if (*serve_cmd) return run_serve(config_path);
        if (*chat_cmd) return run_chat(config_path, sender);
        if (*eval_cmd) return run_eval(suite, corpus, eval_out, fixtures, eval_lexicon, k);
        if (*gen_cmd) return run_gen_corpus(gen_out, seed, dictionary);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

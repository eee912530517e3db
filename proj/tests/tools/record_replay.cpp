// Records a replay fixture by running the pipeline against scripted replies.
// Usage: record_replay <dataset.jsonl> <script.json> <replay.jsonl> <scratch-dir>

#include "intentrefine/errors.hpp"
#include "intentrefine/json_io.hpp"
#include "intentrefine/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>

using namespace intentrefine;

int main(int argc, char** argv)
{
    if (argc != 5) {
        std::cerr << "usage: record_replay <dataset> <script> <replay-out> <scratch-dir>\n";
        return 2;
    }
    try {
        auto script = nlohmann::json::parse(read_file(argv[2]));
        auto mock = std::make_shared<MockBackend>([script](const LlmRequest& r) {
            auto it = script.find(r.tag);
            if (it == script.end())
                throw Error("no scripted reply for " + r.tag);
            return it->get<std::string>();
        });
        std::filesystem::remove(argv[3]);
        RecordingBackend rec(mock, argv[3]);

        PipelineConfig cfg;
        cfg.dataset = argv[1];
        cfg.output_dir = argv[4];
        cfg.jobs = 1;
        auto summary = run_pipeline(cfg, rec);
        std::cout << "recorded " << load_fixtures(argv[3]).size() << " exchanges; " << summary.report.overall.correct
                  << "/" << summary.report.overall.total << " exact matches, " << summary.errors << " errors\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

#include "json_config.hpp"

#include "intentrefine/errors.hpp"
#include "intentrefine/eval.hpp"
#include "intentrefine/ingest.hpp"
#include "intentrefine/intent.hpp"
#include "intentrefine/json_io.hpp"
#include "intentrefine/pipeline.hpp"
#include "intentrefine/prompting.hpp"
#include "intentrefine/templates.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>

using namespace intentrefine;
namespace fs = std::filesystem;

namespace {

// Options shared by every subcommand; they live on the root app and
// subcommands fall through to them, so a flat config file can set them.
struct Common {
    std::string backend = "replay";
    std::string fixtures;
    std::string mock_response;
    std::string model = kDefaultModel;
    std::string strategy = "simple";
    std::string input_mode = "position_aware";
    bool no_intention = false;
    std::uint64_t seed = 0;
    std::string store;
    unsigned jobs = 4;
    bool em_strict = false;

    BackendOptions backend_options() const
    {
        BackendOptions b;
        b.kind = parse_backend_kind(backend);
        if (!fixtures.empty())
            b.fixtures = fixtures;
        b.mock_response = mock_response;
        return b;
    }

    PromptStrategy prompt_strategy() const
    {
        PromptStrategy s;
        s.kind = parse_strategy_kind(strategy);
        s.intention_mode = !no_intention;
        s.input_mode = parse_input_mode(input_mode);
        s.seed = seed;
        return s;
    }

    EmOptions em() const { return em_strict ? EmOptions::strict() : EmOptions{}; }
};

std::map<std::string, std::optional<Intention>> intentions_by_id(const fs::path& path)
{
    std::map<std::string, std::optional<Intention>> out;
    for (auto& r : load_intentions_file(path))
        out[r.case_id] = std::move(r.intention);
    return out;
}

std::vector<ReviewCase> load_cases(const fs::path& path)
{
    auto loaded = load_dataset(path);
    for (const auto& r : loaded.rejects)
        std::cerr << "rejected line " << r.line_number << (r.case_id.empty() ? "" : " (" + r.case_id + ")") << ": "
                  << r.reason << "\n";
    return std::move(loaded.cases);
}

void print_summary(const PipelineSummary& s)
{
    auto j = s.report.to_json();
    std::cout << "cases " << s.cases << ", rejects " << s.rejects << ", errors " << s.errors << ", scored "
              << s.scored << "\n";
    std::cout << "EM " << (j["em"].is_null() ? std::string("-") : std::to_string(j["em"].get<double>())) << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Intention-guided code refinement from review comments"};
    app.config_formatter(std::make_shared<JsonOrIniConfig>());
    app.set_config("--config", "", "Config file (key=value or JSON) mirroring the command-line flags");
    app.require_subcommand(1);
    app.fallthrough();

    Common o;
    app.add_option("--backend", o.backend, "live | replay | mock | record")
        ->check(CLI::IsMember({"live", "replay", "mock", "record"}));
    app.add_option("--fixtures", o.fixtures, "Replay fixture JSONL (written to with --backend record)");
    app.add_option("--mock-response", o.mock_response, "Constant reply for --backend mock");
    app.add_option("--model", o.model, "Model name sent to the backend");
    app.add_option("--strategy", o.strategy, "simple | simple_cot | tufano_cot | random_few_shot | rag | self_generated");
    app.add_option("--input-mode", o.input_mode, "basic | position_aware | comprehensive");
    app.add_flag("--no-intention", o.no_intention, "Prompt with the review comment instead of the intention");
    app.add_option("--seed", o.seed, "Seed for random few-shot draws");
    app.add_option("--store", o.store, "Example store JSONL");
    app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
    app.add_flag("--em-strict", o.em_strict, "Byte equality instead of normalized exact match");

    // collect
    auto* collect = app.add_subcommand("collect", "Build dataset records from a pull request");
    std::string owner, repo, out_path, api_fixtures;
    std::uint64_t pr = 0;
    collect->add_option("--owner", owner)->required();
    collect->add_option("--repo", repo)->required();
    collect->add_option("--pr", pr)->required();
    collect->add_option("--out", out_path, "Dataset JSONL to write")->required();
    collect->add_option("--api-fixtures", api_fixtures, "Serve API responses from recorded files in this directory");

    // extract
    auto* extract = app.add_subcommand("extract", "Extract intentions for every case");
    std::string dataset, intentions_path;
    std::string agent2_kind;
    extract->add_option("--dataset", dataset);
    extract->add_option("--out", out_path, "Intentions JSONL to write");
    extract->add_option("--agent2-options", agent2_kind, "Print the reversion option set for a change kind and exit")
        ->check(CLI::IsMember({"deletion", "addition", "revision"}));

    // refine / run
    std::string out_dir;
    auto* refine_cmd = app.add_subcommand("refine", "Refine cases from an existing intentions file");
    refine_cmd->add_option("--dataset", dataset)->required();
    refine_cmd->add_option("--intentions", intentions_path, "Output of `extract` (not needed with --no-intention)");
    refine_cmd->add_option("--out-dir", out_dir)->required();

    auto* run = app.add_subcommand("run", "Extract, refine and evaluate");
    run->add_option("--dataset", dataset)->required();
    run->add_option("--out-dir", out_dir)->required();

    // eval
    auto* eval = app.add_subcommand("eval", "Exact-match evaluation of a results file");
    std::string results_path;
    eval->add_option("--results", results_path)->required();
    eval->add_option("--dataset", dataset, "Dataset holding the ground-truth revisions")->required();
    eval->add_option("--out", out_path, "Metrics JSON to write");

    // clean
    auto* clean = app.add_subcommand("clean", "Judge whether each revision meets its intention or comment");
    std::string method = "intention", gold_path;
    clean->add_option("--dataset", dataset)->required();
    clean->add_option("--intentions", intentions_path);
    clean->add_option("--method", method)->check(CLI::IsMember({"intention", "comment"}));
    clean->add_option("--out", out_path, "Verdicts JSONL")->required();
    clean->add_option("--gold", gold_path, "JSONL of {case_id, valid} labels for a confusion report");

    // stats
    auto* stats = app.add_subcommand("stats", "Intention category histogram");
    bool stats_json = false;
    stats->add_option("--dataset", dataset)->required();
    stats->add_option("--intentions", intentions_path)->required();
    stats->add_flag("--json", stats_json, "Print JSON instead of a table");

    // store
    auto* store = app.add_subcommand("store", "Example store for few-shot prompting");
    store->require_subcommand(1);
    auto* store_build = store->add_subcommand("build", "Build an example store from a labeled dataset");
    store_build->add_option("--dataset", dataset)->required();
    store_build->add_option("--intentions", intentions_path)->required();
    store_build->add_option("--out", out_path)->required();
    auto* store_query = store->add_subcommand("query", "Top-k examples for a query text");
    std::string query_text, exclude;
    std::size_t k = kFewShotCount;
    store_query->add_option("--text", query_text)->required();
    store_query->add_option("-k", k)->check(CLI::PositiveNumber);
    store_query->add_option("--exclude", exclude, "Example id to leave out");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*collect) {
            std::unique_ptr<HostClient> api;
            if (!api_fixtures.empty())
                api = std::make_unique<FixtureHostClient>(api_fixtures);
            else
                api = std::make_unique<LiveHostClient>(HostConfig::from_env());
            auto res = collect_pull_request(owner, repo, pr, *api);
            std::vector<ReviewCase> cases;
            for (auto& item : res.cases) {
                if (!item.flags.empty()) {
                    std::cerr << item.review_case.id << ":";
                    for (const auto& f : item.flags)
                        std::cerr << " " << f;
                    std::cerr << "\n";
                }
                cases.push_back(std::move(item.review_case));
            }
            for (const auto& s : res.skipped)
                std::cerr << "skipped " << s.case_id << ": " << s.reason << "\n";
            write_dataset(out_path, cases);
            std::cout << "collected " << cases.size() << " cases, skipped " << res.skipped.size() << "\n";
            return 0;
        }

        if (*extract) {
            if (!agent2_kind.empty()) {
                auto kind = agent2_kind == "deletion"   ? ChangeKind::Deletion
                            : agent2_kind == "addition" ? ChangeKind::Addition
                                                        : ChangeKind::Revision;
                std::cout << "template version " << template_version() << "\n" << format_options(kind) << "\n";
                return 0;
            }
            if (dataset.empty() || out_path.empty())
                throw Error("extract needs --dataset and --out");
            auto llm = make_backend(o.backend_options());
            auto cases = load_cases(dataset);
            auto res = run_extraction(cases, *llm, o.model, o.jobs);
            std::vector<json> rows;
            for (const auto& r : res.records)
                rows.push_back(intention_record_to_json(r));
            write_jsonl(out_path, rows);
            for (const auto& e : res.errors)
                std::cerr << e.to_json().dump() << "\n";
            std::cout << "extracted " << res.records.size() << " intentions, " << res.errors.size() << " errors\n";
            return 0;
        }

        if (*refine_cmd || *run) {
            PipelineConfig cfg;
            cfg.dataset = dataset;
            cfg.output_dir = out_dir;
            cfg.backend = o.backend_options();
            if (!o.store.empty())
                cfg.store = o.store;
            cfg.strategy = o.prompt_strategy();
            cfg.model = o.model;
            cfg.jobs = o.jobs;
            cfg.em = o.em();
            if (*refine_cmd && cfg.strategy.intention_mode) {
                if (intentions_path.empty())
                    throw Error("refine needs --intentions unless --no-intention is given");
                cfg.intentions = intentions_path;
            }
            print_summary(run_pipeline(cfg));
            return 0;
        }

        if (*eval) {
            std::map<std::string, std::string> truths;
            for (const auto& c : load_cases(dataset))
                if (c.revised_code)
                    truths.emplace(c.id, *c.revised_code);
            std::vector<RefinementResult> results;
            for (const auto& j : read_jsonl(results_path))
                results.push_back(result_from_json(j));
            auto report = evaluate(results, truths, o.em()).to_json();
            report["em_options"] = o.em().to_json();
            if (!out_path.empty())
                write_file(out_path, report.dump(2) + "\n");
            std::cout << report.dump(2) << "\n";
            return 0;
        }

        if (*clean) {
            auto m = parse_clean_method(method);
            std::map<std::string, std::optional<Intention>> intentions;
            if (!intentions_path.empty())
                intentions = intentions_by_id(intentions_path);
            else if (m == CleanMethod::IntentionBased)
                throw Error("intention-based cleaning needs --intentions");
            auto llm = make_backend(o.backend_options());
            auto cases = load_cases(dataset);
            std::vector<std::optional<CleanVerdict>> verdicts(cases.size());
            auto errors = parallel_for(cases.size(), o.jobs, [&](std::size_t i) {
                auto it = intentions.find(cases[i].id);
                std::optional<Intention> intention = it == intentions.end() ? std::nullopt : it->second;
                verdicts[i] = clean_case(cases[i], intention, *llm, m, o.model);
            });
            std::vector<json> rows;
            std::vector<CleanVerdict> done;
            for (std::size_t i = 0; i < cases.size(); ++i) {
                if (errors[i]) {
                    std::cerr << cases[i].id << ": " << *errors[i] << "\n";
                    continue;
                }
                rows.push_back(verdict_to_json(*verdicts[i]));
                done.push_back(*verdicts[i]);
            }
            write_jsonl(out_path, rows);
            if (!gold_path.empty()) {
                std::map<std::string, bool> gold;
                for (const auto& j : read_jsonl(gold_path))
                    gold[j.at("case_id").get<std::string>()] = j.at("valid").get<bool>();
                std::vector<GoldLabel> aligned;
                for (const auto& v : done) {
                    auto g = gold.find(v.case_id);
                    if (g == gold.end())
                        throw LabelMismatch("no gold label for " + v.case_id);
                    aligned.push_back({v.case_id, g->second});
                }
                std::cout << confusion(done, aligned).to_json().dump(2) << "\n";
            } else {
                std::cout << "judged " << done.size() << " cases\n";
            }
            return 0;
        }

        if (*stats) {
            auto cases = load_cases(dataset);
            auto by_id = intentions_by_id(intentions_path);
            std::vector<std::optional<Intention>> aligned;
            for (const auto& c : cases) {
                auto it = by_id.find(c.id);
                aligned.push_back(it == by_id.end() ? std::nullopt : it->second);
            }
            auto h = dataset_stats(cases, aligned);
            std::cout << (stats_json ? h.to_json().dump(2) + "\n" : h.to_text());
            return 0;
        }

        if (*store_build) {
            auto cases = load_cases(dataset);
            auto by_id = intentions_by_id(intentions_path);
            std::vector<json> rows;
            for (const auto& c : cases) {
                auto it = by_id.find(c.id);
                if (it == by_id.end() || !it->second || !c.revised_code)
                    continue;
                ExampleRecord e{c.id,           make_key_text(it->second, c.review_comment),
                                c.original_code, c.review_comment,
                                *it->second,    c.review_line,
                                *c.revised_code};
                rows.push_back(example_to_json(e));
            }
            if (rows.empty())
                throw EmptyStore();
            write_jsonl(out_path, rows);
            std::cout << "stored " << rows.size() << " examples\n";
            return 0;
        }

        if (*store_query) {
            if (o.store.empty())
                throw Error("store query needs --store");
            auto s = build_store(load_store_file(o.store));
            for (const auto& hit : query(s, query_text, k, exclude))
                std::cout << json{{"id", hit.record->id}, {"score", hit.score}}.dump() << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#include "intentrefine/pipeline.hpp"

#include "intentrefine/errors.hpp"
#include "intentrefine/revision.hpp"
#include "intentrefine/templates.hpp"
#include "intentrefine/text.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

namespace intentrefine {

const char* to_string(BackendKind k)
{
    switch (k) {
    case BackendKind::Live: return "live";
    case BackendKind::Replay: return "replay";
    case BackendKind::Mock: return "mock";
    case BackendKind::Record: return "record";
    }
    return "?";
}

BackendKind parse_backend_kind(std::string_view name)
{
    for (auto k : {BackendKind::Live, BackendKind::Replay, BackendKind::Mock, BackendKind::Record})
        if (name == to_string(k))
            return k;
    throw Error("unknown backend " + std::string(name));
}

std::string echo_mock_reply(const LlmRequest& req)
{
    auto lines = split_lines(req.user_text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!trim(lines[i]).starts_with("```"))
            continue;
        std::string out = "```\n";
        for (std::size_t j = i + 1; j < lines.size() && !trim(lines[j]).starts_with("```"); ++j)
            out += lines[j] + "\n";
        return out + "```";
    }
    return "6";
}

std::shared_ptr<LlmBackend> make_backend(const BackendOptions& opts)
{
    switch (opts.kind) {
    case BackendKind::Live:
        return std::make_shared<LiveBackend>(LiveConfig::from_env());
    case BackendKind::Replay:
        if (!opts.fixtures)
            throw Error("the replay backend needs a fixture file");
        return ReplayBackend::from_file(*opts.fixtures);
    case BackendKind::Mock:
        if (!opts.mock_response.empty())
            return std::make_shared<MockBackend>(opts.mock_response);
        return std::make_shared<MockBackend>(MockBackend::Responder(echo_mock_reply));
    case BackendKind::Record:
        if (!opts.fixtures)
            throw Error("the record backend needs a fixture file to write");
        return std::make_shared<RecordingBackend>(std::make_shared<LiveBackend>(LiveConfig::from_env()),
                                                  *opts.fixtures);
    }
    throw Error("unknown backend");
}

nlohmann::json PipelineConfig::to_json() const
{
    auto path_or_null = [](const std::optional<std::filesystem::path>& p) {
        return p ? nlohmann::json(p->generic_string()) : nlohmann::json(nullptr);
    };
    return {{"dataset", dataset.generic_string()},
            {"backend", to_string(backend.kind)},
            {"fixtures", path_or_null(backend.fixtures)},
            {"mock_response", backend.mock_response},
            {"store", path_or_null(store)},
            {"intentions", path_or_null(intentions)},
            {"strategy", strategy_to_json(strategy)},
            {"model", model},
            {"em", em.to_json()}};
}

nlohmann::json CaseError::to_json() const { return {{"case_id", case_id}, {"stage", stage}, {"error", message}}; }

std::vector<std::optional<std::string>> parallel_for(std::size_t n, unsigned jobs,
                                                     const std::function<void(std::size_t)>& fn)
{
    std::vector<std::optional<std::string>> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    unsigned threads = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    if (threads == 1) {
        worker();
        return errors;
    }
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    return errors;
}

ExtractionRun run_extraction(const std::vector<ReviewCase>& cases, LlmBackend& llm, const std::string& model,
                             unsigned jobs)
{
    std::vector<std::optional<IntentionRecord>> slots(cases.size());
    auto errors = parallel_for(cases.size(), jobs, [&](std::size_t i) {
        auto outcome = extract_intention(cases[i], llm, ExtractionOptions{model});
        slots[i] = IntentionRecord{cases[i].id, std::move(outcome.intention), std::move(outcome.flags)};
    });
    ExtractionRun run;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (errors[i])
            run.errors.push_back({cases[i].id, "extract", *errors[i]});
        else
            run.records.push_back(std::move(*slots[i]));
    }
    return run;
}

RefinementRun run_refinement(const std::vector<ReviewCase>& cases, const std::vector<IntentionRecord>& intentions,
                             LlmBackend& llm, const PromptStrategy& strategy, const PromptContext& ctx, unsigned jobs)
{
    std::map<std::string, const IntentionRecord*> by_id;
    for (const auto& r : intentions)
        by_id.emplace(r.case_id, &r);

    std::vector<std::optional<RefinementResult>> slots(cases.size());
    auto errors = parallel_for(cases.size(), jobs, [&](std::size_t i) {
        std::optional<Intention> intention;
        std::vector<std::string> flags;
        if (auto it = by_id.find(cases[i].id); it != by_id.end()) {
            intention = it->second->intention;
            flags = it->second->flags;
        }
        auto r = refine(cases[i], intention, llm, strategy, ctx);
        // Extraction flags travel with the result.
        flags.insert(flags.end(), r.flags.begin(), r.flags.end());
        r.flags = std::move(flags);
        slots[i] = std::move(r);
    });
    RefinementRun run;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (errors[i])
            run.errors.push_back({cases[i].id, "refine", *errors[i]});
        else
            run.results.push_back(std::move(*slots[i]));
    }
    return run;
}

std::optional<std::string> file_hash(const std::optional<std::filesystem::path>& path)
{
    if (!path)
        return std::nullopt;
    return sha256_hex(read_file(*path));
}

namespace {

nlohmann::json hash_or_null(const std::optional<std::string>& h) { return h ? nlohmann::json(*h) : nlohmann::json(nullptr); }

std::string dump_pretty(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

PipelineSummary run_pipeline(const PipelineConfig& config, LlmBackend& llm)
{
    if (config.dataset.empty())
        throw Error("no dataset given");
    if (config.output_dir.empty())
        throw Error("no output directory given");

    std::optional<RetrievalStore> store;
    if (config.store)
        store.emplace(build_store(load_store_file(*config.store)));
    config.strategy.validate(store.has_value());

    auto loaded = load_dataset(config.dataset);
    std::filesystem::create_directories(config.output_dir);
    const auto out = config.output_dir;

    std::vector<nlohmann::json> rejects;
    for (const auto& r : loaded.rejects)
        rejects.push_back({{"line", r.line_number}, {"case_id", r.case_id}, {"reason", r.reason}});
    write_jsonl(out / "rejects.jsonl", rejects);

    std::vector<CaseError> errors;
    std::vector<IntentionRecord> intentions;
    if (config.strategy.intention_mode) {
        if (config.intentions) {
            intentions = load_intentions_file(*config.intentions);
        } else {
            auto run = run_extraction(loaded.cases, llm, config.model, config.jobs);
            intentions = std::move(run.records);
            errors = std::move(run.errors);
        }
        std::vector<nlohmann::json> rows;
        for (const auto& r : intentions)
            rows.push_back(intention_record_to_json(r));
        write_jsonl(out / "intentions.jsonl", rows);
    } else {
        std::filesystem::remove(out / "intentions.jsonl");
    }

    // Cases whose extraction failed are not refined.
    std::vector<ReviewCase> to_refine;
    for (const auto& c : loaded.cases)
        if (std::none_of(errors.begin(), errors.end(), [&](const CaseError& e) { return e.case_id == c.id; }))
            to_refine.push_back(c);

    PromptContext ctx{store ? &*store : nullptr, &llm, config.model};
    auto refined = run_refinement(to_refine, intentions, llm, config.strategy, ctx, config.jobs);
    errors.insert(errors.end(), refined.errors.begin(), refined.errors.end());

    std::map<std::string, std::string> truths;
    for (const auto& c : loaded.cases)
        if (c.revised_code)
            truths.emplace(c.id, *c.revised_code);

    std::vector<RefinementResult> scored;
    std::vector<nlohmann::json> result_rows;
    for (auto& r : refined.results) {
        auto truth = truths.find(r.case_id);
        std::string diff;
        if (truth != truths.end()) {
            r.em_against_truth = exact_match(r.revised_code, truth->second, config.em);
            if (!*r.em_against_truth)
                diff = line_diff(r.revised_code, truth->second, config.em);
            scored.push_back(r);
        }
        auto row = result_to_json(r);
        if (!diff.empty())
            row["diff_vs_truth"] = diff;
        result_rows.push_back(std::move(row));
    }
    write_jsonl(out / "results.jsonl", result_rows);

    // Errors are listed in dataset order regardless of the stage they came from.
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < loaded.cases.size(); ++i)
        position.emplace(loaded.cases[i].id, i);
    std::stable_sort(errors.begin(), errors.end(),
                     [&](const CaseError& a, const CaseError& b) { return position[a.case_id] < position[b.case_id]; });
    std::vector<nlohmann::json> error_rows;
    for (const auto& e : errors)
        error_rows.push_back(e.to_json());
    write_jsonl(out / "errors.jsonl", error_rows);

    PipelineSummary summary;
    summary.cases = loaded.cases.size();
    summary.rejects = loaded.rejects.size();
    summary.errors = errors.size();
    summary.scored = scored.size();
    summary.report = evaluate(scored, truths, config.em);

    nlohmann::json metrics = summary.report.to_json();
    metrics["cases"] = summary.cases;
    metrics["rejects"] = summary.rejects;
    metrics["errors"] = summary.errors;
    metrics["unscored"] = refined.results.size() - scored.size();
    metrics["em_options"] = config.em.to_json();
    write_file(out / "metrics.json", dump_pretty(metrics));

    auto cfg = config.to_json();
    nlohmann::json manifest{
        {"config", cfg},
        {"config_hash", sha256_hex(cfg.dump())},
        {"template_version", std::string(template_version())},
        {"template_hash", template_manifest_hash()},
        {"dataset_hash", sha256_hex(read_file(config.dataset))},
        {"fixture_hash", hash_or_null(config.backend.kind == BackendKind::Replay ? file_hash(config.backend.fixtures)
                                                                                 : std::nullopt)},
        {"store_hash", hash_or_null(file_hash(config.store))},
        {"intentions_hash", hash_or_null(file_hash(config.intentions))},
    };
    write_file(out / "manifest.json", dump_pretty(manifest));
    return summary;
}

PipelineSummary run_pipeline(const PipelineConfig& config)
{
    auto llm = make_backend(config.backend);
    return run_pipeline(config, *llm);
}

}  // namespace intentrefine

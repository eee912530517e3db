#include "../support/oracles.hpp"

#include "intentrefine/errors.hpp"
#include "intentrefine/eval.hpp"
#include "intentrefine/hunk.hpp"
#include "intentrefine/json_io.hpp"
#include "intentrefine/pipeline.hpp"
#include "intentrefine/text.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

using namespace intentrefine;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = FIXTURE_DIR;
const fs::path kPipeline = kFixtures / "pipeline";

RefinementResult result(std::string id, std::string code, std::optional<Intention> intention = std::nullopt)
{
    RefinementResult r;
    r.case_id = std::move(id);
    r.revised_code = std::move(code);
    r.intention = std::move(intention);
    return r;
}

fs::path scratch(const std::string& name)
{
    auto p = fs::temp_directory_path() / "intentrefine_test_eval" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

PipelineConfig replay_config(const fs::path& out)
{
    PipelineConfig cfg;
    cfg.dataset = kPipeline / "dataset.jsonl";
    cfg.output_dir = out;
    cfg.backend.kind = BackendKind::Replay;
    cfg.backend.fixtures = kPipeline / "replay.jsonl";
    return cfg;
}

}  // namespace

// Exact match

TEST(ExactMatch, Examples)
{
    EXPECT_TRUE(exact_match("a\nb\n", "a\nb"));
    EXPECT_TRUE(exact_match("a  \r\nb\r\n", "a\nb"));
    EXPECT_TRUE(exact_match("\n\na\nb\n\n\n", "a\nb"));
    EXPECT_FALSE(exact_match("a\n\nb", "a\nb"));
    EXPECT_FALSE(exact_match("  a", "a"));
    EXPECT_FALSE(exact_match("a\nb", "b\na"));
    EXPECT_TRUE(exact_match("", "\n \n"));
}

TEST(ExactMatch, StrictIsByteEquality)
{
    auto strict = EmOptions::strict();
    EXPECT_TRUE(exact_match("a\nb\n", "a\nb\n", strict));
    EXPECT_FALSE(exact_match("a\nb\n", "a\nb", strict));
    EXPECT_FALSE(exact_match("a \n", "a\n", strict));
    EXPECT_FALSE(exact_match("a\r\n", "a\n", strict));
}

TEST(ExactMatch, EachRuleCanBeTurnedOff)
{
    EmOptions no_newline{false, false, true};
    EXPECT_FALSE(exact_match("a\r\nb", "a\nb", no_newline));
    // A CR left before LF is trailing whitespace, so that rule alone also absorbs it.
    EXPECT_TRUE(exact_match("a\r\nb", "a\nb", EmOptions{false, true, true}));
    EmOptions no_trailing{true, false, true};
    EXPECT_FALSE(exact_match("a \nb", "a\nb", no_trailing));
    EmOptions no_edges{true, true, false};
    EXPECT_FALSE(exact_match("\na\nb", "a\nb", no_edges));
}

TEST(ExactMatch, ReflexiveAndSymmetric)
{
    std::mt19937_64 rng(3);
    std::vector<std::string> pool;
    for (int i = 0; i < 40; ++i) {
        auto lines = oracle::random_code(rng, rng() % 6);
        std::string text = oracle::join(lines);
        if (rng() % 3 == 0)
            text += "  \r\n\n";
        pool.push_back(text);
        pool.push_back(text + " ");
    }
    for (const auto& a : pool) {
        EXPECT_TRUE(exact_match(a, a));
        for (const auto& b : pool)
            EXPECT_EQ(exact_match(a, b), exact_match(b, a));
    }
}

TEST(LineDiff, ShowsRemovedAndAddedLines)
{
    EXPECT_EQ(line_diff("a\nb\nc\n", "a\nB\nc\n"), "-b\n+B\n");
    EXPECT_EQ(line_diff("a\n", "a\n\n"), "");
    EXPECT_EQ(line_diff("a\nx\n", "a\n"), "-x\n");
}

// Evaluate

TEST(Evaluate, AllCorrectIs100)
{
    std::vector<RefinementResult> rs{result("a", "x\n", Intention{ExplicitIntention{"x"}}), result("b", "y")};
    auto rep = evaluate(rs, {{"a", "x"}, {"b", "y\n"}});
    EXPECT_EQ(rep.overall.total, 2u);
    EXPECT_DOUBLE_EQ(rep.overall.percent(), 100.0);
}

TEST(Evaluate, EmptyListAndEmptyBuckets)
{
    auto rep = evaluate({}, {});
    EXPECT_EQ(rep.overall.total, 0u);
    EXPECT_TRUE(rep.to_json()["em"].is_null());
    EXPECT_TRUE(rep.by_category.empty());

    auto one = evaluate({result("a", "x", Intention{ReversionIntention{}})}, {{"a", "x"}});
    EXPECT_EQ(one.by_category.size(), 1u);
    EXPECT_EQ(one.by_category.count("reversion"), 1u);
}

TEST(Evaluate, MissingTruthNamesCase)
{
    try {
        evaluate({result("lost", "x")}, {});
        FAIL() << "expected MissingTruth";
    } catch (const MissingTruth& e) {
        EXPECT_NE(std::string(e.what()).find("lost"), std::string::npos);
    }
}

TEST(Evaluate, HandTallyOfTwentyResults)
{
    // 8 explicit (6 right), 5 reversion (5 right), 5 general (2 right), 2 none (1 right): 14 of 20.
    std::vector<RefinementResult> rs;
    std::map<std::string, std::string> truth;
    auto add = [&](const std::string& id, std::optional<Intention> in, bool right) {
        rs.push_back(result(id, right ? "ok" : "bad", std::move(in)));
        truth[id] = "ok";
    };
    for (int i = 0; i < 8; ++i)
        add("e" + std::to_string(i), Intention{ExplicitIntention{"s"}}, i < 6);
    for (int i = 0; i < 5; ++i)
        add("r" + std::to_string(i), Intention{ReversionIntention{}}, true);
    for (int i = 0; i < 5; ++i)
        add("g" + std::to_string(i), Intention{GeneralIntention{DeleteWord{"w"}}}, i % 2 == 1);
    add("n0", std::nullopt, true);
    add("n1", std::nullopt, false);

    PromptStrategy cot;
    cot.kind = StrategyKind::TufanoCot;
    rs.back().strategy = cot;

    auto rep = evaluate(rs, truth);
    EXPECT_EQ(rep.overall.total, 20u);
    EXPECT_EQ(rep.overall.correct, 14u);
    EXPECT_DOUBLE_EQ(rep.overall.percent(), 70.0);
    EXPECT_EQ(rep.by_category["explicit"].correct, 6u);
    EXPECT_DOUBLE_EQ(rep.by_category["explicit"].percent(), 75.0);
    EXPECT_EQ(rep.by_category["reversion"].correct, 5u);
    EXPECT_DOUBLE_EQ(rep.by_category["general"].percent(), 40.0);
    EXPECT_DOUBLE_EQ(rep.by_category["none"].percent(), 50.0);
    ASSERT_EQ(rep.by_strategy.size(), 2u);
    EXPECT_EQ(rep.by_strategy[PromptStrategy{}.label()].total, 19u);
    EXPECT_EQ(rep.by_strategy[cot.label()].total, 1u);
    EXPECT_EQ(rep.by_strategy[cot.label()].correct, 0u);
}

TEST(Evaluate, SyntheticReversionSuiteScoresFull)
{
    std::mt19937_64 rng(2024);
    std::vector<RefinementResult> rs;
    std::map<std::string, std::string> truth;
    MockBackend llm("unused");
    for (int i = 0; rs.size() < 100; ++i) {
        auto p = oracle::random_code(rng, 10 + rng() % 20);
        oracle::Edit e;
        e.pos = 2 + rng() % (p.size() - 4);
        e.del = rng() % 3;
        e.ins = {oracle::random_line(rng)};
        auto q = oracle::apply_edit(p, e);
        ReviewCase c;
        c.id = "rev" + std::to_string(i);
        c.original_code = oracle::join(q);
        c.review_line = static_cast<std::uint32_t>(e.pos + 1);
        c.last_diff_hunk = oracle::hunk_for_edit(p, e);
        auto post = post_side(*c.last_diff_hunk);
        // Skip the rare case where an identical span sits nearer the review line.
        std::size_t first = e.pos - std::min<std::size_t>(3, e.pos);
        if (locate_lines(split_lines(c.original_code), post, c.review_line).start_line != first + 1)
            continue;
        rs.push_back(refine(c, Intention{ReversionIntention{}}, llm, PromptStrategy{}));
        truth[c.id] = oracle::join(p);
    }
    EXPECT_EQ(llm.call_count(), 0u);
    auto rep = evaluate(rs, truth);
    EXPECT_EQ(rep.overall.total, 100u);
    EXPECT_DOUBLE_EQ(rep.overall.percent(), 100.0);
}

// Verdicts and cleaning

TEST(ParseVerdict, HandLabelledReplies)
{
    auto rows = read_jsonl(kFixtures / "clean_replies.jsonl");
    ASSERT_EQ(rows.size(), 20u);
    for (const auto& row : rows) {
        auto reply = row["reply"].get<std::string>();
        if (row["expected"].is_null()) {
            EXPECT_THROW(parse_verdict(reply), UnparseableVerdict) << reply;
        } else {
            EXPECT_EQ(parse_verdict(reply), row["expected"].get<bool>()) << reply;
        }
    }
}

TEST(CleanCase, VerdictRetryAndUnlabeled)
{
    ReviewCase c;
    c.id = "k1";
    c.original_code = "a\nb\n";
    c.review_comment = "rename b";
    c.review_line = 2;
    c.revised_code = "a\nB\n";
    Intention in = GeneralIntention{ChangeWord{"b", "B"}};

    MockBackend ok("VALID");
    auto v = clean_case(c, in, ok, CleanMethod::IntentionBased);
    EXPECT_EQ(v.valid, std::optional<bool>(true));
    EXPECT_EQ(ok.call_log()[0].tag, "clean/intention/k1");

    int calls = 0;
    MockBackend second([&](const LlmRequest&) { return ++calls == 1 ? std::string("hmm") : std::string("INVALID"); });
    auto v2 = clean_case(c, std::nullopt, second, CleanMethod::CommentBased);
    EXPECT_EQ(v2.valid, std::optional<bool>(false));
    EXPECT_EQ(second.call_log()[1].tag, "clean/comment/k1/retry");

    MockBackend never("no idea");
    auto v3 = clean_case(c, in, never, CleanMethod::IntentionBased);
    EXPECT_FALSE(v3.valid);
    EXPECT_EQ(never.call_count(), 2u);
    EXPECT_EQ(verdict_to_json(v3)["flags"], nlohmann::json::array({kFlagUnlabeled}));
}

TEST(CleanRequest, Preconditions)
{
    ReviewCase c;
    c.id = "k2";
    c.original_code = "a\n";
    c.review_line = 1;
    EXPECT_THROW(clean_request(c, Intention{ReversionIntention{}}, CleanMethod::IntentionBased), Error);
    c.revised_code = "b\n";
    EXPECT_THROW(clean_request(c, std::nullopt, CleanMethod::IntentionBased), Error);
    auto req = clean_request(c, Intention{ReversionIntention{}}, CleanMethod::IntentionBased);
    EXPECT_NE(req.user_text.find(render_intention(Intention{ReversionIntention{}})), std::string::npos);
    EXPECT_EQ(parse_clean_method("comment"), CleanMethod::CommentBased);
    EXPECT_THROW(parse_clean_method("other"), Error);
}

// Confusion

TEST(Confusion, PublishedCounts)
{
    auto r = confusion_from_counts(1076, 110, 553, 261);
    ASSERT_TRUE(r.accuracy && r.precision);
    EXPECT_NEAR(100.0 * *r.accuracy, 81.45, 0.01);
    EXPECT_NEAR(100.0 * *r.precision, 90.73, 0.01);
}

TEST(Confusion, TrivialCases)
{
    auto all_true = confusion({{"a", CleanMethod::IntentionBased, true}, {"b", CleanMethod::IntentionBased, true}},
                              {{"a", true}, {"b", true}});
    EXPECT_EQ(all_true.tp, 2u);
    EXPECT_EQ(all_true.fp + all_true.fn + all_true.tn, 0u);
    EXPECT_EQ(all_true.precision, std::optional<double>(1.0));

    auto one_fp = confusion_from_counts(3, 1, 0, 0);
    EXPECT_DOUBLE_EQ(*one_fp.precision, 3.0 / 4.0);

    auto none = confusion_from_counts(0, 0, 0, 0);
    EXPECT_FALSE(none.accuracy);
    EXPECT_FALSE(none.precision);
    EXPECT_TRUE(none.to_json()["precision"].is_null());
    EXPECT_FALSE(confusion_from_counts(0, 0, 4, 1).precision);
}

TEST(Confusion, SkipsUnlabeledAndChecksAlignment)
{
    std::vector<CleanVerdict> v{{"a", CleanMethod::IntentionBased, true},
                                {"b", CleanMethod::IntentionBased, std::nullopt},
                                {"c", CleanMethod::IntentionBased, false},
                                {"d", CleanMethod::IntentionBased, true}};
    auto r = confusion(v, {{"a", true}, {"b", true}, {"c", true}, {"d", false}});
    EXPECT_EQ(r.tp, 1u);
    EXPECT_EQ(r.fn, 1u);
    EXPECT_EQ(r.fp, 1u);
    EXPECT_EQ(r.tn, 0u);
    EXPECT_EQ(r.unlabeled, 1u);

    EXPECT_THROW(confusion(v, {{"a", true}}), LabelMismatch);
    EXPECT_THROW(confusion(v, {{"a", true}, {"x", true}, {"c", true}, {"d", false}}), LabelMismatch);
}

TEST(Confusion, IdentitiesOnRandomCounts)
{
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i) {
        std::size_t tp = rng() % 50, fp = rng() % 50, tn = rng() % 50, fn = rng() % 50;
        auto r = confusion_from_counts(tp, fp, tn, fn);
        std::size_t all = tp + fp + tn + fn;
        ASSERT_EQ(r.accuracy.has_value(), all > 0);
        if (all)
            EXPECT_DOUBLE_EQ(*r.accuracy, static_cast<double>(tp + tn) / static_cast<double>(all));
        ASSERT_EQ(r.precision.has_value(), tp + fp > 0);
        if (tp + fp) {
            EXPECT_DOUBLE_EQ(*r.precision, static_cast<double>(tp) / static_cast<double>(tp + fp));
            EXPECT_GE(*r.precision, 0.0);
            EXPECT_LE(*r.precision, 1.0);
        }
    }
}

// Pipeline

TEST(Pipeline, ReplayMatchesHandTally)
{
    auto out = scratch("replay");
    auto summary = run_pipeline(replay_config(out));
    auto expected = nlohmann::json::parse(read_file(kPipeline / "expected_metrics.json"));
    auto metrics = nlohmann::json::parse(read_file(out / "metrics.json"));
    for (const char* key : {"cases", "rejects", "errors", "unscored", "total", "correct"})
        EXPECT_EQ(metrics[key], expected[key]) << key;
    for (const auto& [cat, b] : expected["by_category"].items()) {
        EXPECT_EQ(metrics["by_category"][cat]["total"], b["total"]) << cat;
        EXPECT_EQ(metrics["by_category"][cat]["correct"], b["correct"]) << cat;
    }
    EXPECT_EQ(metrics["by_category"].size(), expected["by_category"].size());
    double em = 100.0 * expected["correct"].get<double>() / expected["total"].get<double>();
    EXPECT_NEAR(metrics["em"].get<double>(), em, 1e-9);
    EXPECT_EQ(summary.report.overall.correct, expected["correct"].get<std::size_t>());
}

TEST(Pipeline, RepeatedRunsAreByteIdentical)
{
    std::vector<fs::path> runs;
    for (int i = 0; i < 2; ++i) {
        runs.push_back(scratch("repeat" + std::to_string(i)));
        auto cfg = replay_config(runs.back());
        cfg.jobs = i == 0 ? 1 : 8;
        run_pipeline(cfg);
    }
    for (const char* f : {"results.jsonl", "metrics.json", "intentions.jsonl", "errors.jsonl", "manifest.json"})
        EXPECT_EQ(read_file(runs[0] / f), read_file(runs[1] / f)) << f;
}

TEST(Pipeline, ManifestPinsInputs)
{
    auto out = scratch("manifest");
    run_pipeline(replay_config(out));
    auto m = nlohmann::json::parse(read_file(out / "manifest.json"));
    EXPECT_EQ(m["dataset_hash"], sha256_hex(read_file(kPipeline / "dataset.jsonl")));
    EXPECT_EQ(m["fixture_hash"], sha256_hex(read_file(kPipeline / "replay.jsonl")));
    EXPECT_TRUE(m["store_hash"].is_null());
    EXPECT_EQ(m["config"]["backend"], "replay");
}

TEST(Pipeline, NoIntentionModeWritesNoIntentions)
{
    auto out = scratch("no_intention");
    write_file(out / "intentions.jsonl", "stale\n");
    PipelineConfig cfg;
    cfg.dataset = kPipeline / "dataset.jsonl";
    cfg.output_dir = out;
    cfg.backend.kind = BackendKind::Mock;
    cfg.strategy.intention_mode = false;
    auto llm = make_backend(cfg.backend);
    auto summary = run_pipeline(cfg, *llm);
    EXPECT_FALSE(fs::exists(out / "intentions.jsonl"));
    EXPECT_EQ(summary.errors, 0u);
    // Only generation requests were made.
    for (const auto& call : llm->call_log())
        EXPECT_TRUE(call.tag.starts_with("generate/")) << call.tag;
    EXPECT_EQ(llm->call_count(), 20u);
}

TEST(Pipeline, ErrorsDoNotStopTheRun)
{
    auto out = scratch("errors");
    PipelineConfig cfg = replay_config(out);
    auto empty = scratch("empty_fixture") / "replay.jsonl";
    write_file(empty, "");
    cfg.backend.fixtures = empty;
    auto summary = run_pipeline(cfg);
    // Explicit cases need no extraction call but fail at generation; the rest fail at extraction.
    EXPECT_EQ(summary.errors, 20u);
    auto errors = read_jsonl(out / "errors.jsonl");
    ASSERT_EQ(errors.size(), 20u);
    EXPECT_EQ(errors[0]["case_id"], "p01");
    EXPECT_EQ(errors[0]["stage"], "refine");
    EXPECT_EQ(errors[5]["case_id"], "p06");
    EXPECT_EQ(errors[5]["stage"], "extract");
}

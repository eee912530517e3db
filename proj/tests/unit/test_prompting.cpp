#include "intentrefine/errors.hpp"
#include "intentrefine/hunk.hpp"
#include "intentrefine/json_io.hpp"
#include "intentrefine/prompting.hpp"
#include "intentrefine/templates.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <regex>
#include <sstream>

using namespace intentrefine;

namespace {

ExampleRecord ex(std::string id, std::string key)
{
    return ExampleRecord{std::move(id), std::move(key), "x = 1\n", "comment", GeneralIntention{DeleteWord{"x"}}, 1,
                         "y = 1\n"};
}

ReviewCase toy_case()
{
    return ReviewCase{"toy-1",
                      "def area(r):\n    return 3.14 * r * r\n",
                      "Use math.pi instead of 3.14",
                      2,
                      parse_unified_hunk("@@ -1,1 +1,2 @@\n def area(r):\n+    return 3.14 * r * r"),
                      std::nullopt,
                      "python"};
}

std::size_t whitespace_tokens(const std::string& s)
{
    std::istringstream in(s);
    std::size_t n = 0;
    for (std::string w; in >> w;)
        ++n;
    return n;
}

}  // namespace

TEST(Templates, RenderSections)
{
    TemplateVars v{{"a", "A"}, {"empty", ""}};
    EXPECT_EQ(render_template("x {{a}} y", v), "x A y");
    EXPECT_EQ(render_template("{{#a}}\nshown {{a}}\n{{/a}}\n{{#empty}}\nhidden\n{{/empty}}\n{{^empty}}\ninv\n{{/empty}}\n", v),
              "shown A\ninv\n");
    EXPECT_EQ(render_template("{{missing}}|", v), "|");
    // Values are not re-scanned.
    EXPECT_EQ(render_template("{{a}}", {{"a", "{{b}}"}, {"b", "no"}}), "{{b}}");
}

TEST(Templates, AssetsAndManifest)
{
    EXPECT_EQ(template_version(), "v1");
    EXPECT_FALSE(template_text("simple_user").empty());
    EXPECT_THROW(template_text("does_not_exist"), Error);
    auto h = template_manifest_hash();
    EXPECT_EQ(h.size(), 64u);
    EXPECT_EQ(h, template_manifest_hash());
}

TEST(Bm25Store, SingleDocAverageLength)
{
    auto store = build_store({ex("a", "alpha beta gamma")});
    EXPECT_DOUBLE_EQ(store.average_length(), 3.0);
    EXPECT_EQ(store.document_length(0), 3u);
}

TEST(Bm25Store, HandCountedDocumentFrequencies)
{
    // d0: change word foo bar / d1: delete word foo / d2: change the code
    auto store = build_store({ex("d0", "Change word (foo) to (bar)"), ex("d1", "Delete word (foo)"),
                              ex("d2", "Change the code")});
    EXPECT_EQ(store.document_frequency("change"), 2u);
    EXPECT_EQ(store.document_frequency("word"), 2u);
    EXPECT_EQ(store.document_frequency("foo"), 2u);
    EXPECT_EQ(store.document_frequency("bar"), 1u);
    EXPECT_EQ(store.document_frequency("code"), 1u);
    EXPECT_EQ(store.document_frequency("missing"), 0u);
    EXPECT_DOUBLE_EQ(store.average_length(), (5.0 + 3.0 + 3.0) / 3.0);
}

TEST(Bm25Store, DuplicatesCountTwice)
{
    auto store = build_store({ex("a", "same text"), ex("b", "same text")});
    EXPECT_EQ(store.document_frequency("same"), 2u);
    EXPECT_EQ(store.documents().size(), 2u);
}

TEST(Bm25Store, EmptyThrows) { EXPECT_THROW(build_store({}), EmptyStore); }

TEST(Bm25Query, Basics)
{
    auto store = build_store({ex("a", "apple pie"), ex("b", "banana split"), ex("c", "cherry tart"), ex("d", "banana bread")});
    auto hits = query(store, "cherry", 3);
    ASSERT_FALSE(hits.empty());
    EXPECT_EQ(hits[0].record->id, "c");

    hits = query(store, "banana split", 3);
    EXPECT_EQ(hits[0].record->id, "b");
    hits = query(store, "banana split", 3, "b");
    EXPECT_EQ(hits[0].record->id, "d");
    for (const auto& h : hits)
        EXPECT_NE(h.record->id, "b");

    EXPECT_EQ(query(store, "anything", 10).size(), 4u);
    EXPECT_THROW(query(store, "x", 0), std::invalid_argument);
}

TEST(Bm25Query, MatchesBruteForceOn100Docs)
{
    std::mt19937_64 rng(3);
    std::vector<std::string> vocab;
    for (int i = 0; i < 60; ++i)
        vocab.push_back("w" + std::to_string(i));
    std::uniform_int_distribution<int> word(0, 59), len(3, 25);
    std::vector<std::string> texts;
    std::vector<ExampleRecord> docs;
    for (int d = 0; d < 100; ++d) {
        std::string t;
        int n = len(rng);
        for (int i = 0; i < n; ++i)
            t += vocab[static_cast<std::size_t>(word(rng) * word(rng) / 59)] + " ";
        texts.push_back(t);
        docs.push_back(ex("doc" + std::to_string(d), t));
    }
    auto store = build_store(docs);
    for (int q = 0; q < 30; ++q) {
        std::string qt = vocab[static_cast<std::size_t>(word(rng))] + " " + vocab[static_cast<std::size_t>(word(rng))] +
                         " " + vocab[static_cast<std::size_t>(word(rng))];
        auto want = oracle::bm25_top(texts, qt, 3);
        auto got = query(store, qt, 3);
        ASSERT_EQ(got.size(), want.size());
        auto scores = oracle::bm25_scores(texts, qt);
        for (std::size_t i = 0; i < want.size(); ++i) {
            EXPECT_EQ(got[i].index, want[i]) << qt;
            EXPECT_NEAR(got[i].score, scores[want[i]], 1e-9);
        }
    }
}

TEST(KeyText, IntentionThenComment)
{
    EXPECT_EQ(make_key_text(Intention{GeneralIntention{ChangeWord{"a", "b"}}}, "rename"),
              "Change word (a) to (b)\nrename");
    EXPECT_EQ(make_key_text(std::nullopt, "rename"), "rename");
}

TEST(BuildPrompt, SimpleBasicGolden)
{
    PromptStrategy s{StrategyKind::Simple, false, InputMode::Basic, 0};
    auto b = build_prompt(toy_case(), std::nullopt, s);
    auto golden = read_file(std::string(FIXTURE_DIR) + "/golden/simple_basic_prompt.txt");
    EXPECT_EQ(b.system_text + "\n---\n" + b.user_text + "\n", golden);
}

TEST(BuildPrompt, SimpleCotAppendsTheSentence)
{
    PromptStrategy simple{StrategyKind::Simple, false, InputMode::PositionAware, 0};
    PromptStrategy cot = simple;
    cot.kind = StrategyKind::SimpleCot;
    auto a = build_prompt(toy_case(), std::nullopt, simple);
    auto b = build_prompt(toy_case(), std::nullopt, cot);
    EXPECT_EQ(b.user_text, a.user_text + "\nLet's think step by step.");
    EXPECT_EQ(a.system_text, b.system_text);
}

TEST(BuildPrompt, InputModesSelectFields)
{
    auto c = toy_case();
    PromptStrategy s{StrategyKind::Simple, false, InputMode::Basic, 0};
    auto basic = build_prompt(c, std::nullopt, s).user_text;
    s.input_mode = InputMode::PositionAware;
    auto pos = build_prompt(c, std::nullopt, s).user_text;
    s.input_mode = InputMode::Comprehensive;
    auto comp = build_prompt(c, std::nullopt, s).user_text;
    EXPECT_EQ(basic.find("Review line"), std::string::npos);
    EXPECT_NE(pos.find("Review line 2:     return 3.14 * r * r"), std::string::npos);
    EXPECT_EQ(pos.find("@@"), std::string::npos);
    EXPECT_NE(comp.find(render_hunk(*c.last_diff_hunk)), std::string::npos);
    for (const auto* t : {&basic, &pos, &comp})
        EXPECT_NE(t->find("Use math.pi instead of 3.14"), std::string::npos);
}

TEST(BuildPrompt, IntentionReplacesComment)
{
    PromptStrategy s{StrategyKind::Simple, true, InputMode::PositionAware, 0};
    auto text = build_prompt(toy_case(), Intention{GeneralIntention{ChangeWord{"3.14", "math.pi"}}}, s).user_text;
    EXPECT_NE(text.find("Intention: Change word (3.14) to (math.pi)"), std::string::npos);
    EXPECT_EQ(text.find("Use math.pi instead"), std::string::npos);

    text = build_prompt(toy_case(), Intention{ExplicitIntention{"    return math.pi * r * r"}}, s).user_text;
    EXPECT_NE(text.find("Suggestion code:\n```\n    return math.pi * r * r\n```"), std::string::npos);
}

TEST(BuildPrompt, StrategyInvariants)
{
    PromptStrategy tufano{StrategyKind::TufanoCot, true, InputMode::Basic, 0};
    EXPECT_THROW(build_prompt(toy_case(), std::nullopt, tufano), Error);
    tufano.intention_mode = false;
    EXPECT_NE(build_prompt(toy_case(), std::nullopt, tufano).user_text.find("six categories"), std::string::npos);

    PromptStrategy rag{StrategyKind::Rag, true, InputMode::Basic, 0};
    EXPECT_THROW(build_prompt(toy_case(), std::nullopt, rag), StoreMissing);
    PromptStrategy rnd{StrategyKind::RandomFewShot, true, InputMode::Basic, 0};
    EXPECT_THROW(build_prompt(toy_case(), std::nullopt, rnd), StoreMissing);
}

TEST(BuildPrompt, RagListsExactlyTheQueryResults)
{
    std::vector<ExampleRecord> docs{ex("toy-1", "Use math.pi instead of 3.14"), ex("e1", "use math constants"),
                                    ex("e2", "rename variable"), ex("e3", "math.pi please"),
                                    ex("e4", "delete the log line"), ex("e5", "3.14 is magic")};
    auto store = build_store(docs);
    PromptStrategy s{StrategyKind::Rag, false, InputMode::Basic, 0};
    auto b = build_prompt(toy_case(), std::nullopt, s, PromptContext{&store, nullptr, kDefaultModel});
    auto hits = query(store, toy_case().review_comment, 3, "toy-1");
    ASSERT_EQ(b.example_ids.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_EQ(b.example_ids[i], hits[i].record->id);
    EXPECT_NE(b.user_text.find("Example 3"), std::string::npos);
    EXPECT_EQ(b.user_text.find("Example 4"), std::string::npos);
}

TEST(BuildPrompt, RandomFewShotIsSeededAndExcludesSelf)
{
    std::vector<ExampleRecord> docs;
    for (int i = 0; i < 12; ++i)
        docs.push_back(ex(i == 5 ? "toy-1" : "e" + std::to_string(i), "text " + std::to_string(i)));
    auto store = build_store(docs);
    PromptContext ctx{&store, nullptr, kDefaultModel};
    PromptStrategy s{StrategyKind::RandomFewShot, false, InputMode::Basic, 42};
    auto a = build_prompt(toy_case(), std::nullopt, s, ctx);
    auto b = build_prompt(toy_case(), std::nullopt, s, ctx);
    EXPECT_EQ(a.example_ids, b.example_ids);
    EXPECT_EQ(a.user_text, b.user_text);
    EXPECT_EQ(a.example_ids.size(), 3u);
    bool any_other = false;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        s.seed = seed;
        auto ids = build_prompt(toy_case(), std::nullopt, s, ctx).example_ids;
        EXPECT_EQ(std::count(ids.begin(), ids.end(), "toy-1"), 0);
        std::set<std::string> uniq(ids.begin(), ids.end());
        EXPECT_EQ(uniq.size(), 3u);
        any_other |= ids != a.example_ids;
    }
    EXPECT_TRUE(any_other);
}

TEST(BuildPrompt, SelfGeneratedAsksFirst)
{
    MockBackend llm("Example: x -> y");
    PromptStrategy s{StrategyKind::SelfGenerated, true, InputMode::PositionAware, 0};
    auto b = build_prompt(toy_case(), Intention{ReversionIntention{}}, s, PromptContext{nullptr, &llm, kDefaultModel});
    ASSERT_EQ(llm.call_count(), 1u);
    EXPECT_EQ(llm.call_log()[0].tag, "self_generate/toy-1");
    EXPECT_EQ(b.self_generated_examples, "Example: x -> y");
    EXPECT_NE(b.user_text.find("Example: x -> y"), std::string::npos);
    EXPECT_THROW(build_prompt(toy_case(), std::nullopt, s), Error);
}

TEST(TemplateBudget, RagTemplateWithinLimit)
{
    // Fixed wording of a RAG prompt: system text, few-shot framing, one
    // example frame and the task frame, with every placeholder removed.
    std::string fixed;
    for (const char* name : {"generate_system", "few_shot_header", "few_shot_example", "simple_user"})
        fixed += std::string(template_text(name)) + "\n";
    fixed = std::regex_replace(fixed, std::regex(R"(\{\{[#^/]?[a-z_]+\}\})"), " ");
    EXPECT_LE(whitespace_tokens(fixed), 141u);
}

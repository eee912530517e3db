#include "intentrefine/errors.hpp"
#include "intentrefine/hunk.hpp"
#include "intentrefine/intent.hpp"
#include "intentrefine/prompting.hpp"
#include "intentrefine/templates.hpp"
#include "intentrefine/text.hpp"

#include <random>

namespace intentrefine {

namespace {

struct StrategyName {
    StrategyKind kind;
    const char* name;
};

constexpr StrategyName kStrategyNames[] = {
    {StrategyKind::Simple, "simple"},
    {StrategyKind::SimpleCot, "simple_cot"},
    {StrategyKind::TufanoCot, "tufano_cot"},
    {StrategyKind::RandomFewShot, "random_few_shot"},
    {StrategyKind::Rag, "rag"},
    {StrategyKind::SelfGenerated, "self_generated"},
};

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

bool position_aware(InputMode m) { return m != InputMode::Basic; }

void add_intention_or_comment(TemplateVars& vars, const std::optional<Intention>& intention,
                              std::string_view comment, bool intention_mode)
{
    if (intention_mode && intention) {
        if (const auto* e = std::get_if<ExplicitIntention>(&*intention))
            vars["suggestion_code"] = fence_body(e->suggestion_code);
        else
            vars["intention"] = render_intention(*intention);
    } else {
        vars["review_comment"] = std::string(comment);
    }
}

std::string render_task(const ReviewCase& c, const std::optional<Intention>& intention, const PromptStrategy& s)
{
    TemplateVars vars{{"original_code", fence_body(c.original_code)}};
    if (position_aware(s.input_mode)) {
        vars["review_line"] = std::to_string(c.review_line);
        vars["review_line_text"] = review_line_text(c.original_code, c.review_line);
    }
    if (s.input_mode == InputMode::Comprehensive && c.last_diff_hunk)
        vars["last_diff_hunk"] = render_hunk(*c.last_diff_hunk);
    add_intention_or_comment(vars, intention, c.review_comment, s.intention_mode);
    return render_template(template_text("simple_user"), vars);
}

std::string render_examples(const std::vector<const ExampleRecord*>& examples, const PromptStrategy& s)
{
    std::string out(template_text("few_shot_header"));
    std::size_t index = 1;
    for (const auto* ex : examples) {
        TemplateVars vars{{"index", std::to_string(index++)},
                          {"original_code", fence_body(ex->original_code)},
                          {"revised_code", fence_body(ex->revised_code)}};
        if (position_aware(s.input_mode)) {
            vars["review_line"] = std::to_string(ex->review_line);
            vars["review_line_text"] = review_line_text(ex->original_code, ex->review_line);
        }
        if (s.intention_mode)
            vars["intention"] = render_intention(ex->intention);
        else
            vars["review_comment"] = ex->review_comment;
        out += render_template(template_text("few_shot_example"), vars);
    }
    return out;
}

std::vector<const ExampleRecord*> draw_random(const RetrievalStore& store, const ReviewCase& c, std::uint64_t seed)
{
    std::vector<const ExampleRecord*> pool;
    for (const auto& d : store.documents())
        if (d.id != c.id)
            pool.push_back(&d);
    // mt19937_64 output is specified by the standard; the distributions are
    // not, so draws use raw output to stay identical across platforms.
    std::mt19937_64 rng(seed ^ fnv1a(c.id));
    std::size_t take = std::min(kFewShotCount, pool.size());
    for (std::size_t i = 0; i < take; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    return pool;
}

}  // namespace

const char* to_string(StrategyKind kind)
{
    for (const auto& s : kStrategyNames)
        if (s.kind == kind)
            return s.name;
    return "?";
}

const char* to_string(InputMode mode)
{
    switch (mode) {
    case InputMode::Basic: return "basic";
    case InputMode::PositionAware: return "position_aware";
    case InputMode::Comprehensive: return "comprehensive";
    }
    return "?";
}

StrategyKind parse_strategy_kind(std::string_view name)
{
    for (const auto& s : kStrategyNames)
        if (name == s.name)
            return s.kind;
    throw Error("unknown prompt strategy: " + std::string(name));
}

InputMode parse_input_mode(std::string_view name)
{
    if (name == "basic")
        return InputMode::Basic;
    if (name == "position_aware")
        return InputMode::PositionAware;
    if (name == "comprehensive")
        return InputMode::Comprehensive;
    throw Error("unknown input mode: " + std::string(name));
}

void PromptStrategy::validate(bool has_store) const
{
    if (kind == StrategyKind::TufanoCot && intention_mode)
        throw Error("tufano_cot is a comment-only baseline and cannot run in intention mode");
    if (needs_store() && !has_store)
        throw StoreMissing(to_string(kind));
}

std::string PromptStrategy::label() const
{
    return std::string(to_string(kind)) + (intention_mode ? "+intention/" : "/") + to_string(input_mode);
}

PromptBundle build_prompt(const ReviewCase& c, const std::optional<Intention>& intention,
                          const PromptStrategy& strategy, const PromptContext& ctx)
{
    strategy.validate(ctx.store != nullptr);

    PromptBundle bundle;
    bundle.strategy = strategy;
    bundle.system_text = std::string(trim(template_text("generate_system")));
    const std::string task = render_task(c, intention, strategy);

    std::string user;
    switch (strategy.kind) {
    case StrategyKind::Simple:
        user = task;
        break;
    case StrategyKind::SimpleCot:
        user = std::string(rtrim(task)) + "\n" + std::string(kCotSuffix);
        break;
    case StrategyKind::TufanoCot:
        user = std::string(template_text("tufano_cot_user")) + task;
        break;
    case StrategyKind::RandomFewShot:
    case StrategyKind::Rag: {
        std::vector<const ExampleRecord*> examples;
        if (strategy.kind == StrategyKind::Rag) {
            auto key = make_key_text(strategy.intention_mode ? intention : std::nullopt, c.review_comment);
            for (const auto& hit : ctx.store->query(key, kFewShotCount, c.id))
                examples.push_back(hit.record);
        } else {
            examples = draw_random(*ctx.store, c, strategy.seed);
        }
        for (const auto* ex : examples)
            bundle.example_ids.push_back(ex->id);
        user = render_examples(examples, strategy) + task;
        break;
    }
    case StrategyKind::SelfGenerated: {
        if (!ctx.llm)
            throw Error("self_generated prompting needs a model backend");
        LlmRequest req;
        req.model_name = ctx.model;
        req.system_text = bundle.system_text;
        req.user_text = std::string(rtrim(
            render_template(template_text("self_generate_user"),
                            {{"intention_mode", strategy.intention_mode ? "1" : ""}}) +
            task));
        req.tag = "self_generate/" + c.id;
        bundle.self_generated_examples = std::string(trim(ctx.llm->complete(req).text));
        user = render_template(template_text("self_generated_header"),
                               {{"examples", bundle.self_generated_examples}}) +
               task;
        break;
    }
    }
    bundle.user_text = std::string(rtrim(user));
    return bundle;
}

LlmRequest to_request(const PromptBundle& bundle, std::string model, std::string tag)
{
    LlmRequest req;
    req.system_text = bundle.system_text;
    req.user_text = bundle.user_text;
    req.model_name = std::move(model);
    req.tag = std::move(tag);
    return req;
}

}  // namespace intentrefine

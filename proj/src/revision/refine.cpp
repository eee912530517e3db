#include "intentrefine/errors.hpp"
#include "intentrefine/intent.hpp"
#include "intentrefine/revision.hpp"
#include "intentrefine/templates.hpp"
#include "intentrefine/text.hpp"

namespace intentrefine {

GeneratedCandidate generate_candidate(const ReviewCase& c, const std::optional<Intention>& intention, LlmBackend& llm,
                                      const PromptStrategy& strategy, const PromptContext& ctx)
{
    PromptContext local = ctx;
    if (!local.llm)
        local.llm = &llm;
    GeneratedCandidate out;
    out.bundle = build_prompt(c, intention, strategy, local);
    auto req = to_request(out.bundle, ctx.model, "generate/" + c.id);
    out.code = extract_code(llm.complete(req).text);
    if (trim(out.code).empty()) {
        req.user_text += "\n\n" + std::string(trim(template_text("generate_retry")));
        req.tag += "/retry";
        out.code = extract_code(llm.complete(req).text);
    }
    if (trim(out.code).empty())
        throw EmptyCompletion();
    return out;
}

std::string generate_explicit(const ReviewCase& c, const std::string& suggestion_code, LlmBackend& llm,
                              const PromptStrategy& strategy, const PromptContext& ctx)
{
    return generate_candidate(c, Intention{ExplicitIntention{suggestion_code}}, llm, strategy, ctx).code;
}

std::string generate_general(const ReviewCase& c, const GeneralKind& kind, LlmBackend& llm,
                             const PromptStrategy& strategy, const PromptContext& ctx)
{
    return generate_candidate(c, Intention{GeneralIntention{kind}}, llm, strategy, ctx).code;
}

namespace {

void direct(RefinementResult& r, const ReviewCase& c, LlmBackend& llm, const PromptStrategy& strategy,
            const PromptContext& ctx)
{
    PromptStrategy comment_only = strategy;
    comment_only.intention_mode = false;
    auto gen = generate_candidate(c, std::nullopt, llm, comment_only, ctx);
    r.intention.reset();
    r.raw_candidate = gen.code;
    r.revised_code = gen.code;
    r.example_ids = gen.bundle.example_ids;
    r.postprocess_actions = {PostprocessAction::None};
}

void general(RefinementResult& r, const ReviewCase& c, const GeneralKind& kind, LlmBackend& llm,
             const PromptStrategy& strategy, const PromptContext& ctx)
{
    r.intention = GeneralIntention{kind};
    auto gen = generate_candidate(c, r.intention, llm, strategy, ctx);
    auto post = postprocess_general(gen.code, c.original_code, kind, c.review_line, c.language_tag);
    r.raw_candidate = gen.code;
    r.revised_code = post.code;
    r.example_ids = gen.bundle.example_ids;
    r.postprocess_actions = post.actions;
}

}  // namespace

RefinementResult refine(const ReviewCase& c, const std::optional<Intention>& intention, LlmBackend& llm,
                        const PromptStrategy& strategy, const PromptContext& ctx)
{
    RefinementResult r;
    r.case_id = c.id;
    r.strategy = strategy;
    r.template_hash = template_manifest_hash();
    r.intention = intention;

    try {
        if (!intention || !strategy.intention_mode) {
            if (strategy.intention_mode)
                r.flags.emplace_back(kFlagDirectGeneration);
            direct(r, c, llm, strategy, ctx);
            return r;
        }

        if (const auto* e = std::get_if<ExplicitIntention>(&*intention)) {
            auto gen = generate_candidate(c, intention, llm, strategy, ctx);
            auto post = postprocess_explicit(gen.code, c.original_code, e->suggestion_code, c.review_line);
            r.raw_candidate = gen.code;
            r.revised_code = post.code;
            r.example_ids = gen.bundle.example_ids;
            r.postprocess_actions = post.actions;
            if (post.fell_back)
                r.flags.emplace_back(kFlagNoPlausibleLocation);
            return r;
        }

        if (std::holds_alternative<ReversionIntention>(*intention)) {
            if (c.last_diff_hunk) {
                try {
                    r.revised_code = revert_changes(c.original_code, *c.last_diff_hunk, c.review_line);
                    return r;
                } catch (const HunkNotAligned&) {
                    r.flags.emplace_back(kFlagReversionUnaligned);
                }
            } else {
                r.flags.emplace_back(kFlagReversionNoHunk);
            }
            // Fall back to the general path with a freshly extracted template.
            try {
                auto kind = extract_general(c, llm, ExtractionOptions{ctx.model});
                general(r, c, kind, llm, strategy, ctx);
            } catch (const UnparseableIntention&) {
                r.flags.emplace_back(kFlagDirectGeneration);
                direct(r, c, llm, strategy, ctx);
            }
            return r;
        }

        general(r, c, std::get<GeneralIntention>(*intention).kind, llm, strategy, ctx);
        return r;
    } catch (const RefinementError&) {
        throw;
    } catch (const std::exception& e) {
        throw RefinementError(c.id, e.what());
    }
}

}  // namespace intentrefine

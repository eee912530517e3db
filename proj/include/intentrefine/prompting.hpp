#pragma once

#include "intentrefine/llm.hpp"
#include "intentrefine/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace intentrefine {

enum class StrategyKind { Simple, SimpleCot, TufanoCot, RandomFewShot, Rag, SelfGenerated };
enum class InputMode { Basic, PositionAware, Comprehensive };

const char* to_string(StrategyKind kind);
const char* to_string(InputMode mode);
/// Accepts the to_string() spellings ("simple", "simple_cot", "tufano_cot",
/// "random_few_shot", "rag", "self_generated"). Throws Error otherwise.
StrategyKind parse_strategy_kind(std::string_view name);
InputMode parse_input_mode(std::string_view name);

struct PromptStrategy {
    StrategyKind kind = StrategyKind::Simple;
    /// Intention-guided prompts replace the review comment with the intention.
    bool intention_mode = true;
    InputMode input_mode = InputMode::PositionAware;
    /// Seed for RandomFewShot example draws.
    std::uint64_t seed = 0;

    bool needs_store() const { return kind == StrategyKind::RandomFewShot || kind == StrategyKind::Rag; }
    /// Throws Error for TufanoCot with intention_mode, StoreMissing for a
    /// few-shot strategy without a store.
    void validate(bool has_store) const;
    /// e.g. "rag+intention/position_aware".
    std::string label() const;
};

struct ExampleRecord {
    std::string id;
    std::string key_text;
    std::string original_code;
    std::string review_comment;
    Intention intention;
    std::uint32_t review_line = 1;
    std::string revised_code;
};

/// Retrieval key: rendered intention (when present), a newline, then the comment.
std::string make_key_text(const std::optional<Intention>& intention, std::string_view comment);

/// Lowercase, split on ASCII non-alphanumerics, drop empties. Bytes >= 0x80
/// count as alphanumeric so UTF-8 words stay whole.
std::vector<std::string> bm25_tokenize(std::string_view text);

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct ScoredExample {
    std::size_t index = 0;
    double score = 0.0;
    const ExampleRecord* record = nullptr;
};

/// BM25 index over ExampleRecord::key_text. Immutable after construction and
/// safe to query concurrently.
class RetrievalStore {
public:
    /// Throws EmptyStore.
    explicit RetrievalStore(std::vector<ExampleRecord> examples, Bm25Params params = {});

    const std::vector<ExampleRecord>& documents() const { return docs_; }
    const Bm25Params& params() const { return params_; }
    std::size_t document_frequency(std::string_view term) const;
    std::size_t document_length(std::size_t index) const { return lengths_.at(index); }
    double average_length() const { return avg_length_; }

    /// Top-k by BM25 score, descending; ties keep insertion order. Documents
    /// whose id equals `exclude_id` are skipped. Throws std::invalid_argument
    /// for k == 0.
    std::vector<ScoredExample> query(std::string_view key_text, std::size_t k,
                                     std::string_view exclude_id = {}) const;

private:
    struct Posting {
        std::uint32_t doc;
        std::uint32_t tf;
    };
    std::vector<ExampleRecord> docs_;
    Bm25Params params_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::vector<std::size_t> lengths_;
    double avg_length_ = 0.0;
};

RetrievalStore build_store(std::vector<ExampleRecord> examples, Bm25Params params = {});
std::vector<ScoredExample> query(const RetrievalStore& store, std::string_view key_text, std::size_t k,
                                 std::string_view exclude_id = {});

struct PromptBundle {
    std::string system_text;
    std::string user_text;
    PromptStrategy strategy;
    /// Ids of few-shot examples embedded in the prompt, in prompt order.
    std::vector<std::string> example_ids;
    /// Model reply embedded by SelfGenerated.
    std::string self_generated_examples;
};

struct PromptContext {
    const RetrievalStore* store = nullptr;
    /// Needed by SelfGenerated for its example-generation call.
    LlmBackend* llm = nullptr;
    std::string model = kDefaultModel;
};

inline constexpr std::size_t kFewShotCount = 3;
inline constexpr std::string_view kCotSuffix = "Let's think step by step.";

PromptBundle build_prompt(const ReviewCase& c, const std::optional<Intention>& intention,
                          const PromptStrategy& strategy, const PromptContext& ctx = {});

LlmRequest to_request(const PromptBundle& bundle, std::string model, std::string tag);

}  // namespace intentrefine

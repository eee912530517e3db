#include "intentrefine/errors.hpp"
#include "intentrefine/prompting.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace intentrefine {

std::string make_key_text(const std::optional<Intention>& intention, std::string_view comment)
{
    std::string key;
    if (intention) {
        key = render_intention(*intention);
        key.push_back('\n');
    }
    key += comment;
    return key;
}

std::vector<std::string> bm25_tokenize(std::string_view text)
{
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (c >= 0x80 || std::isalnum(c)) {
            cur.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty())
        tokens.push_back(std::move(cur));
    return tokens;
}

RetrievalStore::RetrievalStore(std::vector<ExampleRecord> examples, Bm25Params params)
    : docs_(std::move(examples)), params_(params)
{
    if (docs_.empty())
        throw EmptyStore();
    lengths_.reserve(docs_.size());
    std::size_t total = 0;
    for (std::size_t d = 0; d < docs_.size(); ++d) {
        auto tokens = bm25_tokenize(docs_[d].key_text);
        lengths_.push_back(tokens.size());
        total += tokens.size();
        std::unordered_map<std::string, std::uint32_t> tf;
        std::vector<std::string> order;
        for (auto& t : tokens)
            if (tf[t]++ == 0)
                order.push_back(t);
        for (auto& t : order)
            postings_[t].push_back({static_cast<std::uint32_t>(d), tf[t]});
    }
    avg_length_ = static_cast<double>(total) / static_cast<double>(docs_.size());
}

std::size_t RetrievalStore::document_frequency(std::string_view term) const
{
    auto it = postings_.find(std::string(term));
    return it == postings_.end() ? 0 : it->second.size();
}

std::vector<ScoredExample> RetrievalStore::query(std::string_view key_text, std::size_t k,
                                                 std::string_view exclude_id) const
{
    if (k == 0)
        throw std::invalid_argument("k must be at least 1");

    const double n = static_cast<double>(docs_.size());
    std::vector<double> scores(docs_.size(), 0.0);
    for (const auto& term : bm25_tokenize(key_text)) {
        auto it = postings_.find(term);
        if (it == postings_.end())
            continue;
        const double df = static_cast<double>(it->second.size());
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        for (const auto& p : it->second) {
            const double tf = p.tf;
            const double norm = 1.0 - params_.b + params_.b * static_cast<double>(lengths_[p.doc]) / avg_length_;
            scores[p.doc] += idf * (tf * (params_.k1 + 1.0)) / (tf + params_.k1 * norm);
        }
    }

    std::vector<ScoredExample> ranked;
    ranked.reserve(docs_.size());
    for (std::size_t d = 0; d < docs_.size(); ++d) {
        if (!exclude_id.empty() && docs_[d].id == exclude_id)
            continue;
        ranked.push_back({d, scores[d], &docs_[d]});
    }
    std::size_t take = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end(),
                      [](const ScoredExample& a, const ScoredExample& b) {
                          if (a.score != b.score)
                              return a.score > b.score;
                          return a.index < b.index;
                      });
    ranked.resize(take);
    return ranked;
}

RetrievalStore build_store(std::vector<ExampleRecord> examples, Bm25Params params)
{
    return RetrievalStore(std::move(examples), params);
}

std::vector<ScoredExample> query(const RetrievalStore& store, std::string_view key_text, std::size_t k,
                                 std::string_view exclude_id)
{
    return store.query(key_text, k, exclude_id);
}

}  // namespace intentrefine

#pragma once

#include <stdexcept>
#include <string>

namespace intentrefine {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// core-model
class MalformedHunk : public Error {
public:
    explicit MalformedHunk(const std::string& reason) : Error("malformed hunk: " + reason) {}
};

class HunkNotAligned : public Error {
public:
    explicit HunkNotAligned(const std::string& reason) : Error("hunk not aligned: " + reason) {}
};

// intent-extraction
class UnterminatedFence : public Error {
public:
    UnterminatedFence() : Error("suggestion fence opened but never closed") {}
};

class NoChange : public Error {
public:
    NoChange() : Error("hunk has neither added nor removed lines") {}
};

class UnparseableChoice : public Error {
public:
    explicit UnparseableChoice(const std::string& reply)
        : Error("no option index 1..6 in reply: " + reply.substr(0, 120)) {}
};

class UnparseableIntention : public Error {
public:
    explicit UnparseableIntention(const std::string& reply)
        : Error("reply matches no intention template: " + reply.substr(0, 120)) {}
};

// revision-gen
class EmptyCompletion : public Error {
public:
    EmptyCompletion() : Error("model returned no code") {}
};

class NoPlausibleLocation : public Error {
public:
    explicit NoPlausibleLocation(double best)
        : Error("no plausible suggestion location (best mean similarity " + std::to_string(best) + ")") {}
};

class RefinementError : public Error {
public:
    RefinementError(const std::string& case_id, const std::string& what)
        : Error("case " + case_id + ": " + what), case_id_(case_id) {}
    const std::string& case_id() const noexcept { return case_id_; }

private:
    std::string case_id_;
};

// prompting
class EmptyStore : public Error {
public:
    EmptyStore() : Error("retrieval store needs at least one example") {}
};

class StoreMissing : public Error {
public:
    explicit StoreMissing(const std::string& strategy)
        : Error("strategy " + strategy + " requires an example store") {}
};

// llm-client
class HttpError : public Error {
public:
    HttpError(int status, const std::string& body)
        : Error("http error " + std::to_string(status) + ": " + body.substr(0, 200)), status_(status) {}
    int status() const noexcept { return status_; }

private:
    int status_;
};

class RateLimited : public Error {
public:
    explicit RateLimited(int attempts)
        : Error("rate limited after " + std::to_string(attempts) + " attempts") {}
};

class FixtureMiss : public Error {
public:
    explicit FixtureMiss(const std::string& request_hash)
        : Error("no recorded response for request " + request_hash), hash_(request_hash) {}
    const std::string& request_hash() const noexcept { return hash_; }

private:
    std::string hash_;
};

// ingestion
class SchemaViolation : public Error {
public:
    explicit SchemaViolation(const std::string& reason) : Error(reason) {}
};

class ReviewedLineDeleted : public Error {
public:
    ReviewedLineDeleted() : Error("last line of partial hunk is a removed line") {}
};

class NoMatchingHunk : public Error {
public:
    NoMatchingHunk() : Error("no commit diff contains a hunk matching the partial hunk") {}
};

class ApiError : public Error {
public:
    using Error::Error;
};

// evalkit
class MissingTruth : public Error {
public:
    explicit MissingTruth(const std::string& case_id) : Error("no ground truth for case " + case_id) {}
};

class LabelMismatch : public Error {
public:
    explicit LabelMismatch(const std::string& reason) : Error("label mismatch: " + reason) {}
};

class UnparseableVerdict : public Error {
public:
    explicit UnparseableVerdict(const std::string& reply)
        : Error("reply is neither VALID nor INVALID: " + reply.substr(0, 120)) {}
};

}  // namespace intentrefine

#include "intentrefine/errors.hpp"
#include "intentrefine/ingest.hpp"
#include "intentrefine/json_io.hpp"
#include "intentrefine/text.hpp"

#include <fstream>

namespace intentrefine {

LoadedDataset load_dataset(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path.string());

    LoadedDataset out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        RejectedRecord reject{lineno, "", ""};
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            reject.reason = std::string("invalid JSON: ") + e.what();
            out.rejects.push_back(std::move(reject));
            continue;
        }
        if (j.is_object() && j.contains("id") && j["id"].is_string())
            reject.case_id = j["id"].get<std::string>();
        try {
            out.cases.push_back(case_from_json(j));
        } catch (const Error& e) {
            reject.reason = e.what();
            out.rejects.push_back(std::move(reject));
        } catch (const json::exception& e) {
            reject.reason = e.what();
            out.rejects.push_back(std::move(reject));
        }
    }
    return out;
}

void write_dataset(const std::filesystem::path& path, const std::vector<ReviewCase>& cases)
{
    std::vector<json> rows;
    rows.reserve(cases.size());
    for (const auto& c : cases)
        rows.push_back(case_to_json(c));
    write_jsonl(path, rows);
}

}  // namespace intentrefine

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "intentrefine/errors.hpp"
#include "intentrefine/eval.hpp"
#include "intentrefine/hunk.hpp"
#include "intentrefine/ingest.hpp"
#include "intentrefine/intent.hpp"
#include "intentrefine/json_io.hpp"
#include "intentrefine/llm.hpp"
#include "intentrefine/pipeline.hpp"
#include "intentrefine/revision.hpp"

namespace py = pybind11;
using namespace intentrefine;

// Structured values cross the boundary as JSON text; the Python package decodes them.

namespace {

std::vector<std::string> action_names(const std::vector<PostprocessAction>& actions)
{
    std::vector<std::string> out;
    for (auto a : actions)
        out.emplace_back(to_string(a));
    return out;
}

std::string load_dataset_json(const std::string& path)
{
    auto d = load_dataset(path);
    nlohmann::json cases = nlohmann::json::array(), rejects = nlohmann::json::array();
    for (const auto& c : d.cases)
        cases.push_back(case_to_json(c));
    for (const auto& r : d.rejects)
        rejects.push_back({{"line", r.line_number}, {"case_id", r.case_id}, {"reason", r.reason}});
    return nlohmann::json{{"cases", cases}, {"rejects", rejects}}.dump();
}

std::string run_pipeline_json(const std::string& config_json)
{
    auto j = nlohmann::json::parse(config_json);
    PipelineConfig cfg;
    cfg.dataset = j.at("dataset").get<std::string>();
    cfg.output_dir = j.at("output_dir").get<std::string>();
    cfg.backend.kind = parse_backend_kind(j.value("backend", "replay"));
    if (j.contains("fixtures") && !j["fixtures"].is_null())
        cfg.backend.fixtures = j["fixtures"].get<std::string>();
    cfg.backend.mock_response = j.value("mock_response", "");
    if (j.contains("store") && !j["store"].is_null())
        cfg.store = j["store"].get<std::string>();
    if (j.contains("intentions") && !j["intentions"].is_null())
        cfg.intentions = j["intentions"].get<std::string>();
    if (j.contains("strategy"))
        cfg.strategy = strategy_from_json(j["strategy"]);
    cfg.model = j.value("model", std::string(kDefaultModel));
    cfg.jobs = j.value("jobs", 4u);
    if (j.value("em_strict", false))
        cfg.em = EmOptions::strict();
    auto summary = run_pipeline(cfg);
    auto out = summary.report.to_json();
    out["cases"] = summary.cases;
    out["rejects"] = summary.rejects;
    out["errors"] = summary.errors;
    return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Intention-guided code review refinement";
    py::register_exception<Error>(m, "IntentRefineError", PyExc_RuntimeError);

    m.def("detect_explicit", &detect_explicit, py::arg("comment"),
          "Body of the first suggestion fence in a review comment, or None.");

    m.def("infer_review_line", [](const std::string& diff_hunk) { return infer_review_line(parse_partial_hunk(diff_hunk)); },
          py::arg("diff_hunk"));

    m.def("revert_changes",
          [](const std::string& original, const std::string& hunk, std::uint32_t review_line) {
              return revert_changes(original, parse_unified_hunk(hunk), review_line);
          },
          py::arg("original"), py::arg("hunk"), py::arg("review_line"));

    m.def("postprocess_explicit",
          [](const std::string& raw, const std::string& original, const std::string& suggestion, std::uint32_t line) {
              auto o = postprocess_explicit(raw, original, suggestion, line);
              return py::make_tuple(o.code, action_names(o.actions), o.fell_back);
          },
          py::arg("raw"), py::arg("original"), py::arg("suggestion"), py::arg("review_line"));

    m.def("postprocess_general",
          [](const std::string& raw, const std::string& original, const std::string& intention_json,
             std::uint32_t line, std::optional<std::string> language) {
              auto in = intention_from_json(nlohmann::json::parse(intention_json));
              const auto* g = std::get_if<GeneralIntention>(&in);
              if (!g)
                  throw Error("postprocess_general needs a general intention");
              auto o = postprocess_general(raw, original, g->kind, line, language);
              return py::make_tuple(o.code, action_names(o.actions));
          },
          py::arg("raw"), py::arg("original"), py::arg("intention_json"), py::arg("review_line"),
          py::arg("language") = py::none());

    m.def("exact_match",
          [](const std::string& a, const std::string& b, bool strict) {
              return exact_match(a, b, strict ? EmOptions::strict() : EmOptions{});
          },
          py::arg("candidate"), py::arg("truth"), py::arg("strict") = false);

    m.def("request_hash",
          [](std::string system, std::string user, std::string model, double temperature, std::uint32_t max_tokens) {
              LlmRequest r{std::move(system), std::move(user), std::move(model), temperature, max_tokens, ""};
              return r.request_hash();
          },
          py::arg("system_text"), py::arg("user_text"), py::arg("model_name") = std::string(kDefaultModel),
          py::arg("temperature") = 0.0, py::arg("max_output_tokens") = 1024u);

    m.def("confusion_json",
          [](std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
              return confusion_from_counts(tp, fp, tn, fn).to_json().dump();
          },
          py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"));

    m.def("load_dataset_json", &load_dataset_json, py::arg("path"));
    m.def("run_pipeline_json", &run_pipeline_json, py::arg("config_json"), py::call_guard<py::gil_scoped_release>());
}

#include "intentrefine/templates.hpp"

#include "intentrefine/errors.hpp"
#include "intentrefine/llm.hpp"

#include <vector>

namespace intentrefine {

namespace detail {
extern const char* const kPromptVersion;
extern const TemplateAsset kPromptAssets[];
extern const std::size_t kPromptAssetCount;
}  // namespace detail

std::span<const TemplateAsset> template_assets()
{
    return {detail::kPromptAssets, detail::kPromptAssetCount};
}

std::string_view template_text(std::string_view name)
{
    for (const auto& a : template_assets())
        if (a.name == name)
            return a.text;
    throw Error("unknown prompt template: " + std::string(name));
}

std::string_view template_version() { return detail::kPromptVersion; }

const std::string& template_manifest_hash()
{
    static const std::string hash = [] {
        std::string manifest(template_version());
        manifest.push_back('\0');
        for (const auto& a : template_assets()) {
            manifest += a.name;
            manifest.push_back('\0');
            manifest += a.text;
            manifest.push_back('\0');
        }
        return sha256_hex(manifest);
    }();
    return hash;
}

std::string render_template(std::string_view tmpl, const TemplateVars& vars)
{
    auto lookup = [&](std::string_view name) -> std::string_view {
        auto it = vars.find(name);
        return it == vars.end() ? std::string_view{} : std::string_view{it->second};
    };

    struct Section {
        std::string name;
        bool active;
    };
    std::vector<Section> stack;
    auto active = [&] { return stack.empty() || stack.back().active; };

    std::string out;
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        auto open = tmpl.find("{{", pos);
        if (open == std::string_view::npos) {
            if (active())
                out += tmpl.substr(pos);
            break;
        }
        if (active())
            out += tmpl.substr(pos, open - pos);
        auto close = tmpl.find("}}", open + 2);
        if (close == std::string_view::npos)
            throw Error("unterminated template tag");
        std::string_view tag = tmpl.substr(open + 2, close - open - 2);
        pos = close + 2;

        if (tag.empty())
            throw Error("empty template tag");
        char sigil = tag.front();
        if (sigil == '#' || sigil == '^' || sigil == '/') {
            std::string name(tag.substr(1));
            if (pos < tmpl.size() && tmpl[pos] == '\n')
                ++pos;
            if (sigil == '/') {
                if (stack.empty() || stack.back().name != name)
                    throw Error("mismatched template section close: " + name);
                stack.pop_back();
            } else {
                bool set = !lookup(name).empty();
                stack.push_back({name, active() && (sigil == '#' ? set : !set)});
            }
        } else if (active()) {
            out += lookup(tag);
        }
    }
    if (!stack.empty())
        throw Error("unclosed template section: " + stack.back().name);
    return out;
}

}  // namespace intentrefine

#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>

namespace intentrefine {

struct TemplateAsset {
    std::string_view name;
    std::string_view text;
};

/// Prompt templates compiled into the library, sorted by name.
std::span<const TemplateAsset> template_assets();

/// Throws Error for an unknown name.
std::string_view template_text(std::string_view name);

/// Version directory the assets were embedded from, e.g. "v1".
std::string_view template_version();

/// SHA-256 over version, names and contents. Recorded into every result.
const std::string& template_manifest_hash();

using TemplateVars = std::map<std::string, std::string, std::less<>>;

/// Minimal mustache-style rendering:
///   {{name}}              value, or empty when unset
///   {{#name}}...{{/name}} kept when the value is set and non-empty
///   {{^name}}...{{/name}} kept when the value is unset or empty
/// A section tag directly followed by a newline swallows that newline.
/// Values are inserted verbatim and never re-scanned.
std::string render_template(std::string_view tmpl, const TemplateVars& vars);

/// Code as it goes between fence lines: without its final newline.
inline std::string fence_body(std::string_view code)
{
    if (!code.empty() && code.back() == '\n')
        code.remove_suffix(1);
    return std::string(code);
}

}  // namespace intentrefine

#include "intentrefine/revision.hpp"
#include "intentrefine/text.hpp"

#include <cctype>

namespace intentrefine {

namespace {

constexpr CommentMarker kSlash{"//", false};
constexpr CommentMarker kHash{"#", false};
constexpr CommentMarker kHashSpaced{"#", true};
constexpr CommentMarker kDash{"--", false};
constexpr CommentMarker kSemi{";", false};

bool in(std::string_view tag, std::initializer_list<std::string_view> names)
{
    for (auto n : names)
        if (tag == n)
            return true;
    return false;
}

}  // namespace

std::vector<CommentMarker> comment_markers(const std::optional<std::string>& language_tag)
{
    if (language_tag) {
        auto tag = to_lower(trim(*language_tag));
        if (in(tag, {"php"}))
            return {kSlash, kHash};
        if (in(tag, {"c", "cc", "cpp", "c++", "cxx", "h", "hpp", "java", "js", "javascript", "jsx", "ts", "tsx",
                     "typescript", "go", "golang", "cs", "c#", "csharp", "rust", "rs", "kotlin", "kt", "swift",
                     "scala", "dart", "objc", "objective-c", "groovy"}))
            return {kSlash};
        if (in(tag, {"py", "python", "rb", "ruby", "sh", "bash", "shell", "zsh", "perl", "pl", "r", "yaml", "yml",
                     "toml", "ps1", "powershell", "cmake", "makefile", "dockerfile"}))
            return {kHash};
        if (in(tag, {"sql", "lua", "hs", "haskell", "ada", "elm"}))
            return {kDash};
        if (in(tag, {"lisp", "clojure", "clj", "scheme", "el", "elisp", "asm", "ini"}))
            return {kSemi};
    }
    // A bare '#' would also catch preprocessor lines, so the fallback wants "# ".
    return {kSlash, kHashSpaced};
}

std::optional<std::size_t> find_line_comment(std::string_view line, const std::vector<CommentMarker>& markers)
{
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == '"' || c == '\'' || c == '`') {
            std::size_t j = i + 1;
            while (j < line.size() && line[j] != c)
                j += line[j] == '\\' ? 2 : 1;
            if (j < line.size()) {
                i = j + 1;
                continue;
            }
            // Unclosed quote (apostrophe, lifetime): treat as an ordinary character.
        }
        for (const auto& m : markers) {
            if (line.substr(i).starts_with(m.token)) {
                std::size_t after = i + m.token.size();
                if (!m.needs_space || after == line.size() ||
                    std::isspace(static_cast<unsigned char>(line[after])))
                    return i;
            }
        }
        ++i;
    }
    return std::nullopt;
}

bool contains_comment(std::string_view code, const std::vector<CommentMarker>& markers)
{
    for (const auto& l : split_lines(code))
        if (find_line_comment(l, markers))
            return true;
    return false;
}

}  // namespace intentrefine

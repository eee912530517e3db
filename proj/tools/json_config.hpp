#pragma once

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <sstream>

// Config files may be key=value (INI/TOML style) or a JSON object. Nested
// JSON objects map to subcommand sections: {"run": {"strategy": "rag"}}.
class JsonOrIniConfig : public CLI::ConfigTOML {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override
    {
        std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
        auto first = text.find_first_not_of(" \t\r\n");
        if (first == std::string::npos || text[first] != '{') {
            std::istringstream again(text);
            return CLI::ConfigTOML::from_config(again);
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError(std::string("config: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        flatten(j, {}, items);
        return items;
    }

private:
    static std::string scalar(const nlohmann::json& v)
    {
        if (v.is_string())
            return v.get<std::string>();
        return v.dump();
    }

    static void flatten(const nlohmann::json& obj, const std::vector<std::string>& parents,
                        std::vector<CLI::ConfigItem>& out)
    {
        for (const auto& [key, v] : obj.items()) {
            if (v.is_object()) {
                auto p = parents;
                p.push_back(key);
                flatten(v, p, out);
                continue;
            }
            CLI::ConfigItem item{parents, key, {}};
            if (v.is_array())
                for (const auto& e : v)
                    item.inputs.push_back(scalar(e));
            else if (!v.is_null())
                item.inputs.push_back(scalar(v));
            out.push_back(std::move(item));
        }
    }
};

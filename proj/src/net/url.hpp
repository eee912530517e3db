#pragma once

#include <string>

namespace intentrefine::net {

/// "https://host:8080/v1/" -> origin "https://host:8080", path "/v1".
struct SplitUrl {
    std::string origin;
    std::string path;
};

inline SplitUrl split_url(const std::string& url)
{
    auto scheme_end = url.find("://");
    std::size_t host_begin = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_begin = url.find('/', host_begin);
    SplitUrl out;
    if (path_begin == std::string::npos) {
        out.origin = url;
    } else {
        out.origin = url.substr(0, path_begin);
        out.path = url.substr(path_begin);
    }
    while (!out.path.empty() && out.path.back() == '/')
        out.path.pop_back();
    return out;
}

}  // namespace intentrefine::net

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mediaprof {

/// Minimal URL decomposition. The scheme is optional; a bare `example.com/x`
/// parses with an empty scheme.
struct ParsedUrl {
    std::string scheme; // lowercased, without "://"
    std::string host;   // lowercased, no port or userinfo
    std::string path;   // starts with '/' when non-empty; query/fragment stripped
    std::string query;

    /// Host labels split on '.'.
    std::vector<std::string> host_labels() const;
    /// Non-empty path segments split on '/'.
    std::vector<std::string> path_segments() const;
};

std::optional<ParsedUrl> parse_url(std::string_view url);

/// Lowercased host with a leading `www.` removed.
std::string host_key(const ParsedUrl& url);

/// True when `host` equals `suffix` or ends with "." + suffix.
bool host_has_suffix(std::string_view host, std::string_view suffix);

} // namespace mediaprof

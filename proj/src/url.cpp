#include "mediaprof/url.hpp"

#include <algorithm>
#include <cctype>

namespace mediaprof {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool valid_host_char(unsigned char c)
{
    return std::isalnum(c) || c == '-' || c == '_' || c == '.' || c >= 0x80;
}

std::vector<std::string> split_nonempty(std::string_view s, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find(sep, start);
        if (end == std::string_view::npos)
            end = s.size();
        if (end > start)
            parts.emplace_back(s.substr(start, end - start));
        start = end + 1;
    }
    return parts;
}

} // namespace

std::vector<std::string> ParsedUrl::host_labels() const { return split_nonempty(host, '.'); }

std::vector<std::string> ParsedUrl::path_segments() const { return split_nonempty(path, '/'); }

std::optional<ParsedUrl> parse_url(std::string_view url)
{
    auto first = url.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return std::nullopt;
    url.remove_prefix(first);
    url = url.substr(0, url.find_last_not_of(" \t\r\n") + 1);
    if (std::any_of(url.begin(), url.end(), [](unsigned char c) { return std::isspace(c); }))
        return std::nullopt;

    ParsedUrl out;
    if (auto sep = url.find("://"); sep != std::string_view::npos) {
        auto scheme = url.substr(0, sep);
        if (scheme.empty() || !std::all_of(scheme.begin(), scheme.end(), [](unsigned char c) {
                return std::isalnum(c) || c == '+' || c == '-' || c == '.';
            }))
            return std::nullopt;
        out.scheme = lower(scheme);
        url.remove_prefix(sep + 3);
    } else if (url.starts_with("//")) {
        url.remove_prefix(2);
    }

    auto authority_end = url.find_first_of("/?#");
    auto authority = url.substr(0, authority_end);
    auto rest = authority_end == std::string_view::npos ? std::string_view{} : url.substr(authority_end);

    if (auto at = authority.rfind('@'); at != std::string_view::npos)
        authority.remove_prefix(at + 1);
    if (auto colon = authority.find(':'); colon != std::string_view::npos) {
        auto port = authority.substr(colon + 1);
        if (!std::all_of(port.begin(), port.end(), [](unsigned char c) { return std::isdigit(c); }))
            return std::nullopt;
        authority = authority.substr(0, colon);
    }
    while (!authority.empty() && authority.back() == '.')
        authority.remove_suffix(1);
    if (authority.empty() || authority.front() == '.' || authority.find("..") != std::string_view::npos)
        return std::nullopt;
    if (!std::all_of(authority.begin(), authority.end(), [](unsigned char c) { return valid_host_char(c); }))
        return std::nullopt;
    out.host = lower(authority);

    if (auto hash = rest.find('#'); hash != std::string_view::npos)
        rest = rest.substr(0, hash);
    if (auto q = rest.find('?'); q != std::string_view::npos) {
        out.query = std::string(rest.substr(q + 1));
        rest = rest.substr(0, q);
    }
    out.path = std::string(rest);
    return out;
}

std::string host_key(const ParsedUrl& url)
{
    std::string_view host = url.host;
    if (host.starts_with("www."))
        host.remove_prefix(4);
    return std::string(host);
}

bool host_has_suffix(std::string_view host, std::string_view suffix)
{
    if (suffix.empty() || host.size() < suffix.size())
        return false;
    if (!host.ends_with(suffix))
        return false;
    return host.size() == suffix.size() || host[host.size() - suffix.size() - 1] == '.';
}

} // namespace mediaprof

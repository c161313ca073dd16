#include "mediaprof/urlfeat.hpp"

#include <algorithm>
#include <cctype>

#include "mediaprof/embedlex.hpp"
#include "mediaprof/error.hpp"
#include "mediaprof/url.hpp"

namespace mediaprof {

namespace {

bool any_suffix(std::string_view host, const std::vector<std::string>& suffixes)
{
    return std::any_of(suffixes.begin(), suffixes.end(),
                       [&](const std::string& s) { return host_has_suffix(host, s); });
}

// Scheme lowercased, one trailing slash dropped, surrounding blanks trimmed.
std::string normalized_url_text(std::string_view url)
{
    auto first = url.find_first_not_of(" \t\r\n");
    auto last = url.find_last_not_of(" \t\r\n");
    std::string s(url.substr(first, last - first + 1));
    if (auto sep = s.find("://"); sep != std::string::npos)
        std::transform(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(sep), s.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!s.empty() && s.back() == '/')
        s.pop_back();
    return s;
}

} // namespace

UrlResources UrlResources::builtin()
{
    UrlResources r;
    r.blog_hosts = {"blogspot.com", "blogger.com",    "wordpress.com",   "tumblr.com",
                    "medium.com",   "substack.com",   "wixsite.com",     "weebly.com",
                    "livejournal.com", "typepad.com", "squarespace.com", "ghost.io"};
    r.trusted_tlds = {"gov", "edu", "mil"};
    r.mimic_tlds = {"com.co", "co", "info"};
    return r;
}

UrlResources UrlResources::load(const std::filesystem::path& dir)
{
    UrlResources r;
    r.blog_hosts = load_word_list(dir / "blog_hosts.txt");
    r.trusted_tlds = load_word_list(dir / "tld_trusted.txt");
    r.mimic_tlds = load_word_list(dir / "tld_mimic.txt");
    return r;
}

Eigen::VectorXd UrlFeatureBlock::flatten() const
{
    Eigen::VectorXd out(kLength);
    out << url_length, section_count, digit_char_ratio, special_char_ratio, has_digit_section, has_hyphen_in_host,
        has_underscore, has_short_section, has_long_section, uses_https, on_blog_host, tld_class;
    return out;
}

UrlFeatureBlock url_structure_features(std::string_view url, const UrlResources& res)
{
    auto parsed = url.find_first_not_of(" \t\r\n") == std::string_view::npos ? std::nullopt : parse_url(url);
    if (!parsed)
        throw ExtractionError("cannot parse URL '" + std::string(url) + "'");

    const std::string text = normalized_url_text(url);
    auto sections = parsed->host_labels();
    for (auto& seg : parsed->path_segments())
        sections.push_back(std::move(seg));

    UrlFeatureBlock b;
    const double len = static_cast<double>(text.size());
    b.url_length = len;
    b.section_count = static_cast<double>(sections.size());

    std::size_t digits = 0;
    std::size_t special = 0;
    for (unsigned char c : text) {
        if (std::isdigit(c))
            ++digits;
        else if (!std::isalnum(c) && c != '.' && c != '/' && c != ':')
            ++special;
    }
    b.digit_char_ratio = len > 0 ? static_cast<double>(digits) / len : 0.0;
    b.special_char_ratio = len > 0 ? static_cast<double>(special) / len : 0.0;

    auto has_digit = [](const std::string& s) {
        return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
    };
    b.has_digit_section = std::any_of(sections.begin(), sections.end(), has_digit) ? 1.0 : 0.0;
    b.has_hyphen_in_host = parsed->host.find('-') != std::string::npos ? 1.0 : 0.0;
    b.has_underscore = text.find('_') != std::string::npos ? 1.0 : 0.0;
    b.has_short_section =
        std::any_of(sections.begin(), sections.end(), [](const std::string& s) { return s.size() < 3; }) ? 1.0 : 0.0;
    b.has_long_section =
        std::any_of(sections.begin(), sections.end(), [](const std::string& s) { return s.size() > 10; }) ? 1.0
                                                                                                           : 0.0;
    b.uses_https = parsed->scheme == "https" ? 1.0 : 0.0;
    b.on_blog_host = any_suffix(parsed->host, res.blog_hosts) ? 1.0 : 0.0;
    if (any_suffix(parsed->host, res.trusted_tlds))
        b.tld_class = 1.0;
    else if (any_suffix(parsed->host, res.mimic_tlds))
        b.tld_class = -1.0;
    return b;
}

std::vector<std::string> char_ngrams(std::string_view url, int n_min, int n_max)
{
    require(n_min >= 2 && n_max <= 5 && n_min <= n_max, "n-gram range must lie within [2,5]");
    std::string s(url);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::vector<std::string> grams;
    for (int n = n_min; n <= n_max; ++n)
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= s.size(); ++i)
            grams.push_back(s.substr(i, static_cast<std::size_t>(n)));
    return grams;
}

NgramVocabulary::NgramVocabulary(std::span<const std::string> urls, int n_min, int n_max)
    : n_min_(n_min), n_max_(n_max)
{
    for (const auto& url : urls)
        for (auto& g : char_ngrams(url, n_min, n_max))
            index_.emplace(std::move(g), 0);
    int i = 0;
    for (auto& [gram, idx] : index_)
        idx = i++;
}

std::optional<int> NgramVocabulary::find(std::string_view gram) const
{
    auto it = index_.find(gram);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::vector<std::string> NgramVocabulary::grams() const
{
    std::vector<std::string> out;
    out.reserve(index_.size());
    for (const auto& [gram, idx] : index_)
        out.push_back(gram);
    return out;
}

Eigen::SparseVector<double> url_char_ngrams(std::string_view url, const NgramVocabulary& vocab)
{
    Eigen::SparseVector<double> v(static_cast<Eigen::Index>(vocab.size()));
    std::vector<int> active;
    for (const auto& g : char_ngrams(url, vocab.n_min(), vocab.n_max()))
        if (auto idx = vocab.find(g))
            active.push_back(*idx);
    std::sort(active.begin(), active.end());
    active.erase(std::unique(active.begin(), active.end()), active.end());
    v.reserve(static_cast<Eigen::Index>(active.size()));
    for (int idx : active)
        v.insert(idx) = 1.0;
    return v;
}

Eigen::VectorXd traffic_feature(std::optional<std::int64_t> alexa_rank)
{
    Eigen::VectorXd v = Eigen::VectorXd::Zero(1);
    if (alexa_rank) {
        require(*alexa_rank >= 1, "alexa rank must be >= 1");
        v[0] = 1.0 / static_cast<double>(*alexa_rank);
    }
    return v;
}

} // namespace mediaprof

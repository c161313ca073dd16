#include "mediaprof/profilefeat.hpp"

#include <cmath>

#include "mediaprof/error.hpp"
#include "mediaprof/url.hpp"

namespace mediaprof {

namespace {

Eigen::VectorXd embed_text(std::string_view text, const EmbeddingTable& table)
{
    return avg_embedding(tokenize(text).tokens, table);
}

std::string join(const std::vector<std::string>& parts)
{
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty())
            out += ' ';
        out += p;
    }
    return out;
}

} // namespace

Eigen::VectorXd WikiFeatureBlock::flatten() const
{
    const auto dim = content.size();
    Eigen::VectorXd out(1 + 5 * dim);
    out << has_page, content, infobox, summary, categories, toc;
    return out;
}

Eigen::VectorXd TwitterFeatureBlock::flatten() const
{
    Eigen::VectorXd out(11 + description.size());
    out << has_account, verified, created_year, has_location, url_match.has_url, url_match.matches, counts,
        description;
    return out;
}

WikiFeatureBlock wiki_features(const WikiSnapshot& snap, const EmbeddingTable& table)
{
    WikiFeatureBlock b;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(table.dim());
    if (!snap.exists) {
        b.content = b.infobox = b.summary = b.categories = b.toc = zero;
        return b;
    }
    b.has_page = 1.0;
    b.content = embed_text(snap.content, table);
    b.infobox = embed_text(snap.infobox, table);
    b.summary = embed_text(snap.summary, table);
    b.categories = embed_text(join(snap.categories), table);
    b.toc = embed_text(join(snap.toc), table);
    return b;
}

UrlMatch url_match(const std::optional<std::string>& profile_url, std::string_view medium_url)
{
    auto medium = parse_url(medium_url);
    require(medium.has_value(), "url_match: unparseable medium URL '" + std::string(medium_url) + "'");
    UrlMatch m;
    if (!profile_url)
        return m;
    auto profile = parse_url(*profile_url);
    if (!profile)
        return m;
    m.has_url = 1.0;
    m.matches = host_key(*profile) == host_key(*medium) ? 1.0 : 0.0;
    return m;
}

TwitterFeatureBlock twitter_features(const TwitterProfile& profile, std::string_view medium_url,
                                     const EmbeddingTable& table)
{
    TwitterFeatureBlock b;
    b.counts = Eigen::VectorXd::Zero(5);
    b.description = Eigen::VectorXd::Zero(table.dim());
    if (!profile.exists)
        return b;
    b.has_account = 1.0;
    b.verified = profile.verified ? 1.0 : 0.0;
    b.created_year = profile.created_year.value_or(0);
    b.has_location = profile.location && !profile.location->empty() ? 1.0 : 0.0;
    b.url_match = url_match(profile.profile_url, medium_url);
    const auto& c = profile.counts;
    b.counts << std::log1p(static_cast<double>(c.followers)), std::log1p(static_cast<double>(c.friends)),
        std::log1p(static_cast<double>(c.statuses)), std::log1p(static_cast<double>(c.favorites)),
        std::log1p(static_cast<double>(c.listed));
    b.description = embed_text(profile.description, table);
    return b;
}

} // namespace mediaprof

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "mediaprof/corpus.hpp"
#include "mediaprof/embedlex.hpp"

namespace mediaprof {

/// Has-page flag plus one averaged embedding per page segment.
struct WikiFeatureBlock {
    double has_page = 0.0;
    Eigen::VectorXd content, infobox, summary, categories, toc;

    /// has_page, content, infobox, summary, categories, toc (1 + 5*dim).
    Eigen::VectorXd flatten() const;
    static int length(int dim) { return 1 + 5 * dim; }
};

struct UrlMatch {
    double has_url = 0.0;
    double matches = 0.0;
};

struct TwitterFeatureBlock {
    double has_account = 0.0;
    double verified = 0.0;
    double created_year = 0.0;
    double has_location = 0.0;
    UrlMatch url_match;
    Eigen::VectorXd counts; // log1p of followers, friends, statuses, favorites, listed
    Eigen::VectorXd description;

    /// has_account, verified, created_year, has_location, has_url, matches,
    /// counts[5], description[dim] (11 + dim).
    Eigen::VectorXd flatten() const;
    static int length(int dim) { return 11 + dim; }
};

WikiFeatureBlock wiki_features(const WikiSnapshot& snap, const EmbeddingTable& table);

/// Compares lowercase hosts with `www.` stripped. An unparseable medium URL
/// is a contract violation; an unparseable profile URL counts as absent.
UrlMatch url_match(const std::optional<std::string>& profile_url, std::string_view medium_url);

TwitterFeatureBlock twitter_features(const TwitterProfile& profile, std::string_view medium_url,
                                     const EmbeddingTable& table);

} // namespace mediaprof

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace mediaprof {

/// Suffix lists backing the credibility features.
struct UrlResources {
    std::vector<std::string> blog_hosts;
    std::vector<std::string> trusted_tlds;
    std::vector<std::string> mimic_tlds;

    static UrlResources builtin();
    /// Reads blog_hosts.txt, tld_trusted.txt and tld_mimic.txt from `dir`.
    static UrlResources load(const std::filesystem::path& dir);
};

struct UrlFeatureBlock {
    double url_length = 0;
    double section_count = 0;
    double digit_char_ratio = 0;
    double special_char_ratio = 0;
    double has_digit_section = 0;
    double has_hyphen_in_host = 0;
    double has_underscore = 0;
    double has_short_section = 0;
    double has_long_section = 0;
    double uses_https = 0;
    double on_blog_host = 0;
    double tld_class = 0; // +1 trusted, 0 neutral, -1 mimic-prone

    static constexpr int kLength = 12;
    Eigen::VectorXd flatten() const;
};

/// Orthographic and credibility features of a medium URL. Throws
/// ExtractionError when the URL cannot be parsed.
UrlFeatureBlock url_structure_features(std::string_view url, const UrlResources& res = UrlResources::builtin());

/// Character n-gram vocabulary frozen from a set of training URLs.
class NgramVocabulary {
public:
    NgramVocabulary() = default;
    NgramVocabulary(std::span<const std::string> urls, int n_min, int n_max);

    int n_min() const { return n_min_; }
    int n_max() const { return n_max_; }
    std::size_t size() const { return index_.size(); }
    std::optional<int> find(std::string_view gram) const;
    /// Grams in index order.
    std::vector<std::string> grams() const;

private:
    int n_min_ = 2;
    int n_max_ = 5;
    std::map<std::string, int, std::less<>> index_;
};

/// Lowercased URL grams of every length in [n_min, n_max].
std::vector<std::string> char_ngrams(std::string_view url, int n_min, int n_max);

/// Binary presence vector over the vocabulary; unseen grams are ignored.
Eigen::SparseVector<double> url_char_ngrams(std::string_view url, const NgramVocabulary& vocab);

/// 1/rank, or 0 when the rank is unknown. Non-positive ranks are a contract
/// violation.
Eigen::VectorXd traffic_feature(std::optional<std::int64_t> alexa_rank);

} // namespace mediaprof

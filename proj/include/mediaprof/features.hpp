#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "mediaprof/artfeat.hpp"
#include "mediaprof/corpus.hpp"
#include "mediaprof/embedlex.hpp"
#include "mediaprof/metrics.hpp"
#include "mediaprof/urlfeat.hpp"

namespace mediaprof {

/// Feature families in concatenation order.
inline constexpr std::array<std::string_view, 5> kFamilies{"traffic", "url", "twitter", "wikipedia", "articles"};

/// A contiguous span of the medium feature vector.
struct FeatureSpan {
    std::string family;
    std::string feature;
    int offset = 0;
    int length = 0;

    bool operator==(const FeatureSpan&) const = default;
};

class FeatureManifest {
public:
    FeatureManifest() = default;
    explicit FeatureManifest(std::vector<FeatureSpan> spans);

    /// traffic(1), url(12 [+ ngrams]), twitter(11 + dim), wikipedia(1 + 5 dim), articles(2A).
    static FeatureManifest standard(int embedding_dim, std::size_t ngram_vocab_size = 0);

    const std::vector<FeatureSpan>& spans() const { return spans_; }
    int dim() const { return dim_; }
    const FeatureSpan& span(std::string_view family, std::string_view feature) const;
    int family_dim(std::string_view family) const;

    /// Column indices for selectors of the form `family`, `family:*`,
    /// `family:feature` or `all`, in manifest order without duplicates.
    /// Unknown selectors raise ValidationError listing the valid names.
    std::vector<int> select(const std::vector<std::string>& selectors) const;
    /// Every column except those of `family`.
    std::vector<int> without_family(std::string_view family) const;
    std::vector<std::string> valid_selectors() const;

    nlohmann::json to_json() const;
    static FeatureManifest from_json(const nlohmann::json& j);
    /// Digest of the span layout combined with a resource digest.
    std::string hash(std::string_view resource_hash) const;

    bool operator==(const FeatureManifest& other) const { return spans_ == other.spans_; }

private:
    std::vector<FeatureSpan> spans_;
    int dim_ = 0;
};

/// Everything the featurizers read.
struct FeatureResources {
    ArticleResources articles;
    UrlResources url;
    EmbeddingTable embeddings;
    std::optional<NgramVocabulary> ngrams;
    std::string resource_hash;
};

/// Digest over every file below `resource_dir` plus the embedding file.
std::string compute_resource_hash(const std::filesystem::path& resource_dir,
                                  const std::filesystem::path& embedding_path);

FeatureResources load_feature_resources(const std::filesystem::path& resource_dir,
                                        const std::filesystem::path& embedding_path);

/// Full feature vector for one medium, laid out per `manifest`.
Eigen::VectorXd extract_features(const MediumRecord& record, const EvidenceBundle& bundle,
                                 const FeatureResources& res, const FeatureManifest& manifest);

/// Feature matrix with labels, one row per medium.
struct FeatureTable {
    FeatureManifest manifest;
    std::string manifest_hash;
    std::vector<MediumRecord> media;
    Eigen::MatrixXd X;

    std::vector<int> labels(Task task) const;
    /// X restricted to the given columns.
    Eigen::MatrixXd columns(const std::vector<int>& cols) const;

    nlohmann::json to_json() const;
    static FeatureTable from_json(const nlohmann::json& j);
};

} // namespace mediaprof

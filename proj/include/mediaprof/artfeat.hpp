#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "mediaprof/corpus.hpp"
#include "mediaprof/embedlex.hpp"

namespace mediaprof {

enum class ArticleGroup { Structure, Sentiment, Topic, Complexity, Bias, Morality };

std::string_view to_string(ArticleGroup g);

struct ArticleFeatureSpec {
    std::string_view name;
    ArticleGroup group;
};

/// Per-segment feature count.
inline constexpr int kArticleFeatureCount = 51;
/// Per-medium block length: title features followed by body features.
inline constexpr int kArticleBlockLength = 2 * kArticleFeatureCount;

/// Frozen feature order; part of the model contract.
const std::array<ArticleFeatureSpec, kArticleFeatureCount>& article_feature_manifest();

/// Index of a named feature in the segment vector; throws ContractViolation
/// for unknown names.
int article_feature_index(std::string_view name);

/// `[{"name": "title.char_count", "group": "structure", "index": 0}, ...]` for
/// the full title+body block.
nlohmann::json article_manifest_json();

/// Word lists and cue phrases used by the article featurizer.
struct ArticleResources {
    Tokenizer tokenizer;

    Lexicon stopwords, pronouns_first, pronouns_second, pronouns_third;
    Lexicon question_words, demonstratives;
    Lexicon positive, negative, subjective, negation;
    Lexicon science, personal_concern;
    Lexicon insight, discrepancy, certainty, tentative;
    Lexicon hedges, assertives, factives, implicatives, report_verbs, bias;
    // virtue/vice for care, fairness, loyalty, authority, sanctity
    std::array<Lexicon, 10> moral;

    /// Tokenized multi-word clickbait cues.
    std::vector<std::vector<std::string>> clickbait_phrases;

    /// Loads `<dir>/lexicons/*.txt`, `<dir>/clickbait_phrases.txt` and
    /// `<dir>/abbreviations.txt`.
    static ArticleResources load(const std::filesystem::path& dir);
};

/// Vowel-group syllable heuristic. Empty input is a contract violation.
int count_syllables(std::string_view word);

/// The 51 segment features in manifest order; all zeros for empty text.
Eigen::VectorXd segment_features(std::string_view text, const ArticleResources& res);

/// Mean over articles of segment_features(title) ++ segment_features(body).
Eigen::VectorXd medium_article_block(std::span<const ArticleDoc> articles, const ArticleResources& res);

} // namespace mediaprof

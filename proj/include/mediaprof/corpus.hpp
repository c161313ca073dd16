#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mediaprof {

enum class Factuality : int { Low = 0, Mixed = 1, High = 2 };

enum class Bias7 : int {
    ExtremeLeft = 0,
    Left = 1,
    CenterLeft = 2,
    Center = 3,
    CenterRight = 4,
    Right = 5,
    ExtremeRight = 6,
};

enum class Bias3 : int { Left = 0, Center = 1, Right = 2 };

inline constexpr int kFactualityClasses = 3;
inline constexpr int kBias7Classes = 7;
inline constexpr int kBias3Classes = 3;

/// Canonical label strings, indexed by ordinal.
inline constexpr std::array<std::string_view, 3> kFactualityNames{"Low", "Mixed", "High"};
inline constexpr std::array<std::string_view, 7> kBias7Names{
    "Extreme-Left", "Left", "Center-Left", "Center", "Center-Right", "Right", "Extreme-Right"};
inline constexpr std::array<std::string_view, 3> kBias3Names{"Left", "Center", "Right"};

struct MediumRecord {
    std::string medium_id;
    std::string url;
    Factuality factuality = Factuality::Low;
    Bias7 bias7 = Bias7::Center;

    bool operator==(const MediumRecord&) const = default;
};

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    bool operator==(const Date&) const = default;
};

struct ArticleDoc {
    std::string title;
    std::string body;
    std::optional<Date> published_at;

    bool operator==(const ArticleDoc&) const = default;
};

struct WikiSnapshot {
    bool exists = false;
    std::string content;
    std::string summary;
    std::string infobox;
    std::vector<std::string> categories;
    std::vector<std::string> toc;

    bool operator==(const WikiSnapshot&) const = default;
};

struct TwitterCounts {
    std::int64_t followers = 0;
    std::int64_t friends = 0;
    std::int64_t statuses = 0;
    std::int64_t favorites = 0;
    std::int64_t listed = 0;

    bool operator==(const TwitterCounts&) const = default;
};

struct TwitterProfile {
    bool exists = false;
    bool verified = false;
    std::optional<int> created_year;
    std::optional<std::string> location;
    std::optional<std::string> profile_url;
    std::string description;
    TwitterCounts counts;

    bool operator==(const TwitterProfile&) const = default;
};

struct EvidenceBundle {
    std::string medium_id;
    std::vector<ArticleDoc> articles;
    WikiSnapshot wiki;
    TwitterProfile twitter;
    std::optional<std::int64_t> alexa_rank;

    bool operator==(const EvidenceBundle&) const = default;
};

/// Lowercase host with scheme, `www.`, port and path removed.
/// Throws ValidationError when no host can be extracted.
std::string normalize_medium_id(std::string_view url_or_domain);

Factuality parse_factuality(std::string_view label);
Bias7 parse_bias7(std::string_view label);

/// {Extreme-Left, Left} -> Left, {Center-Left, Center, Center-Right} -> Center,
/// {Right, Extreme-Right} -> Right. Out-of-range input is a contract violation.
int map_bias_7_to_3(int bias7);
inline Bias3 map_bias_7_to_3(Bias7 b) { return static_cast<Bias3>(map_bias_7_to_3(static_cast<int>(b))); }

std::vector<MediumRecord> load_corpus(const std::filesystem::path& path);
std::vector<MediumRecord> parse_corpus(std::string_view text);
void write_corpus(const std::filesystem::path& path, const std::vector<MediumRecord>& records);

/// Reads `<root>/<medium_id>/bundle.json`.
EvidenceBundle load_bundle(const std::filesystem::path& root, std::string_view medium_id);
EvidenceBundle bundle_from_json(const nlohmann::json& doc);
nlohmann::json bundle_to_json(const EvidenceBundle& bundle);
void save_bundle(const std::filesystem::path& root, const EvidenceBundle& bundle);

} // namespace mediaprof

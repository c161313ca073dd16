#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "mediaprof/artfeat.hpp"
#include "mediaprof/corpus.hpp"
#include "mediaprof/error.hpp"
#include "support.hpp"

using namespace mediaprof;

namespace {

const ArticleResources& resources()
{
    static const ArticleResources res = ArticleResources::load(testsupport::kResources);
    return res;
}

double feat(const Eigen::VectorXd& v, std::string_view name) { return v[article_feature_index(name)]; }

struct Readability {
    const char* text;
    int words;
    int sentences;
    int syllables; // hand-counted with the vowel-group rule
    int complex_words;
};

const Readability kReadability[] = {
    {"Cats sleep.", 2, 1, 2, 0},
    {"The table is beautiful.", 4, 1, 7, 1},
    {"Government officials announced new regulations. Critics responded quickly.", 8, 2, 21, 5},
    {"I like the cake!", 4, 1, 4, 0},
    {"Simple people whistle. They rarely cycle.", 6, 2, 12, 1},
    {"Dr. Smith explained everything carefully? Nobody listened.", 7, 2, 19, 5},
};

bool is_ratio_feature(std::string_view name)
{
    return name.ends_with("_ratio") && name != "type_token_ratio";
}

} // namespace

TEST_CASE("syllable heuristic")
{
    CHECK(count_syllables("cat") == 1);
    CHECK(count_syllables("table") == 2);
    CHECK(count_syllables("the") == 1);
    CHECK(count_syllables("cake") == 1);
    CHECK(count_syllables("beautiful") == 3);
    CHECK(count_syllables("rhythm") == 1);
    CHECK(count_syllables("queue") == 1);
    CHECK(count_syllables("42") == 1);
    CHECK(count_syllables("Little") == 2);
    CHECK_THROWS_AS(count_syllables(""), ContractViolation);
}

TEST_CASE("readability formulas match hand computation")
{
    for (const auto& r : kReadability) {
        CAPTURE(r.text);
        const auto v = segment_features(r.text, resources());
        const double w = r.words;
        const double s = r.sentences;
        CHECK(feat(v, "word_count") == w);
        CHECK(feat(v, "sentence_count") == s);
        const double fre = 206.835 - 1.015 * (w / s) - 84.6 * (r.syllables / w);
        const double fk = 0.39 * (w / s) + 11.8 * (r.syllables / w) - 15.59;
        const double fog = 0.4 * ((w / s) + 100.0 * (r.complex_words / w));
        CHECK(std::abs(feat(v, "flesch_reading_ease") - fre) < 1e-9);
        CHECK(std::abs(feat(v, "flesch_kincaid_grade") - fk) < 1e-9);
        CHECK(std::abs(feat(v, "gunning_fog") - fog) < 1e-9);
    }
    const auto cats = segment_features("Cats sleep.", resources());
    CHECK(std::abs(feat(cats, "flesch_kincaid_grade") - (-3.01)) < 1e-9);
    CHECK(feat(cats, "type_token_ratio") == 1.0);
}

TEST_CASE("structure features on a clickbait title")
{
    const auto v = segment_features("You won't BELIEVE this!", resources());
    CHECK(feat(v, "contains_demonstrative") == 1.0);
    CHECK(feat(v, "all_caps_word_ratio") == 0.25);
    CHECK(feat(v, "exclamation_per_sentence") == 1.0);
    CHECK(feat(v, "contains_clickbait_phrase") == 1.0);
    CHECK(feat(v, "word_count") == 4.0);
    CHECK(feat(v, "char_count") == 23.0);
    CHECK(feat(v, "second_person_ratio") == 0.25);
    CHECK(feat(v, "starts_with_number") == 0.0);

    const auto n = segment_features("10 reasons why \"experts\" worry", resources());
    CHECK(feat(n, "starts_with_number") == 1.0);
    CHECK(feat(n, "digit_token_ratio") == 0.2);
    CHECK(feat(n, "quote_char_count") == 2.0);
    CHECK(feat(n, "contains_clickbait_phrase") == 1.0);
    CHECK(feat(n, "punctuation_per_token") == doctest::Approx(2.0 / 5.0));
}

TEST_CASE("lexicon and polarity features")
{
    const auto v = segment_features("good great bad day", resources());
    const double pos = feat(v, "positive_ratio");
    const double neg = feat(v, "negative_ratio");
    CHECK(pos == 0.5);
    CHECK(neg == 0.25);
    CHECK(std::abs(feat(v, "polarity") - (0.5 - 0.25) / 0.75) < 1e-12);
    CHECK(feat(segment_features("plain words only", resources()), "polarity") == 0.0);
}

TEST_CASE("empty and punctuation-only text")
{
    const auto empty = segment_features("", resources());
    CHECK(empty.size() == kArticleFeatureCount);
    CHECK(empty.isZero(0.0));
    CHECK(segment_features("   \n\t", resources()).isZero(0.0));
    const auto punct = segment_features("?!", resources());
    CHECK(punct.allFinite());
    CHECK(feat(punct, "word_count") == 0.0);
    CHECK(feat(punct, "flesch_reading_ease") == 0.0);
}

TEST_CASE("segment features are finite and bounded")
{
    std::vector<std::string> texts{"", "A", "!!!", "12 34 56", "ALL CAPS TITLE", "x. y. z.", "Ça va? Très bien!",
                                   "Don't you think they're lying??? I do.", "“Quoted” text ‘here’."};
    const auto corpus = load_corpus(testsupport::kData / "synth" / "corpus.csv");
    for (std::size_t i = 0; i < 10; ++i)
        for (const auto& a : load_bundle(testsupport::kData / "synth" / "bundles", corpus[i].medium_id).articles) {
            texts.push_back(a.title);
            texts.push_back(a.body);
        }
    std::mt19937 rng(11);
    const std::string alphabet = "abcXYZ019 .,!?'\"-";
    for (int i = 0; i < 50; ++i) {
        std::string s;
        for (int k = 0; k < 40; ++k)
            s.push_back(alphabet[rng() % alphabet.size()]);
        texts.push_back(s);
    }
    const auto& manifest = article_feature_manifest();
    for (const auto& t : texts) {
        CAPTURE(t);
        const auto v = segment_features(t, resources());
        REQUIRE(v.allFinite());
        for (int i = 0; i < kArticleFeatureCount; ++i) {
            const auto name = manifest[static_cast<std::size_t>(i)].name;
            CAPTURE(name);
            if (is_ratio_feature(name) || name == "type_token_ratio") {
                CHECK(v[i] >= 0.0);
                CHECK(v[i] <= 1.0);
            }
            if (name.starts_with("contains_") || name == "starts_with_number")
                CHECK((v[i] == 0.0 || v[i] == 1.0));
            if (name.ends_with("_per_sentence") || name.ends_with("_count"))
                CHECK(v[i] >= 0.0);
        }
        CHECK(feat(v, "polarity") >= -1.0);
        CHECK(feat(v, "polarity") <= 1.0);
    }
}

TEST_CASE("medium article block")
{
    const auto& res = resources();
    CHECK(medium_article_block({}, res).size() == kArticleBlockLength);
    CHECK(medium_article_block({}, res).isZero(0.0));

    const ArticleDoc a{"Two words", "Body text here. More!", std::nullopt};
    const ArticleDoc b{"Now four words here", "Short.", std::nullopt};
    const ArticleDoc c{"", "", std::nullopt};

    Eigen::VectorXd single(kArticleBlockLength);
    single << segment_features(a.title, res), segment_features(a.body, res);
    CHECK(medium_article_block(std::vector{a}, res) == single);
    CHECK((medium_article_block(std::vector{a, a, a}, res) - single).norm() < 1e-12);

    const auto two = medium_article_block(std::vector{a, b}, res);
    CHECK(two[article_feature_index("word_count")] == 3.0);

    const auto abc = medium_article_block(std::vector{a, b, c}, res);
    CHECK((medium_article_block(std::vector{c, a, b}, res) - abc).norm() < 1e-12);
    CHECK((medium_article_block(std::vector{b, c, a}, res) - abc).norm() < 1e-12);
}

TEST_CASE("article manifest")
{
    const auto j = article_manifest_json();
    REQUIRE(j.size() == static_cast<std::size_t>(kArticleBlockLength));
    std::set<std::string> names;
    for (std::size_t i = 0; i < j.size(); ++i) {
        CHECK(j[i]["index"] == static_cast<int>(i));
        names.insert(j[i]["name"].get<std::string>());
    }
    CHECK(names.size() == j.size());
    CHECK(j[0]["name"] == "title.char_count");
    CHECK(j[kArticleFeatureCount]["name"] == "body.char_count");
    CHECK(j[kArticleBlockLength - 1]["group"] == "morality");

    std::map<std::string, int> group_sizes;
    for (const auto& spec : article_feature_manifest())
        ++group_sizes[std::string(to_string(spec.group))];
    CHECK(group_sizes == std::map<std::string, int>{{"structure", 19}, {"sentiment", 5}, {"topic", 2},
                                                    {"complexity", 9}, {"bias", 6}, {"morality", 10}});
    CHECK_THROWS_AS(article_feature_index("nope"), ContractViolation);
}

#include <doctest.h>

#include <array>

#include <nlohmann/json.hpp>

#include "mediaprof/corpus.hpp"
#include "mediaprof/error.hpp"
#include "support.hpp"

using namespace mediaprof;
using testsupport::TempDir;
using testsupport::write_text;

namespace {

const std::string kHeader = "medium_id,url,factuality,bias7\n";

std::string error_of(auto&& fn)
{
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("corpus rows map labels to ordinals")
{
    const auto recs = parse_corpus(kHeader + "apnews.com,http://apnews.com,Very High,Center\n"
                                   + "foxnews.com,http://www.foxnews.com/,Mixed,Right\n");
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].medium_id == "apnews.com");
    CHECK(recs[0].factuality == Factuality::High);
    CHECK(recs[0].bias7 == Bias7::Center);
    CHECK(recs[1].factuality == Factuality::Mixed);
    CHECK(recs[1].bias7 == Bias7::Right);
    CHECK(recs[1].url == "http://www.foxnews.com/");
}

TEST_CASE("corpus ids are normalized")
{
    const auto recs = parse_corpus(kHeader + "https://WWW.Example.COM/path,https://www.example.com/path,Low,Left\n");
    CHECK(recs.at(0).medium_id == "example.com");
}

TEST_CASE("corpus rejects unknown labels naming the value")
{
    const auto msg = error_of([] { parse_corpus(kHeader + "a.com,http://a.com,High,Centre\n"); });
    CHECK(msg.find("Centre") != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK_THROWS_AS(parse_corpus(kHeader + "a.com,http://a.com,High,Centre\n"), ValidationError);
    CHECK_THROWS_AS(parse_corpus(kHeader + "a.com,http://a.com,Great,Center\n"), ValidationError);
}

TEST_CASE("corpus malformed rows carry line numbers")
{
    const auto msg = error_of([] { parse_corpus(kHeader + "a.com,http://a.com,High,Center\nb.com,http://b.com,High\n"); });
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK_THROWS_AS(parse_corpus(kHeader + "b.com,http://b.com,High\n"), ParseError);
    CHECK_THROWS_AS(parse_corpus(kHeader + "\"b.com,http://b.com,High,Left\n"), ParseError);
    CHECK_THROWS_AS(parse_corpus("id,url,fact,bias\n"), ParseError);
    CHECK_THROWS_AS(parse_corpus(""), ParseError);
}

TEST_CASE("corpus duplicates are detected after normalization")
{
    CHECK_THROWS_AS(parse_corpus(kHeader + "www.a.com,http://a.com,High,Center\na.com,http://a.com,Low,Left\n"),
                    ValidationError);
}

TEST_CASE("corpus accepts quoted fields and a BOM")
{
    const auto recs = parse_corpus("\xEF\xBB\xBF" + kHeader + "\"a.com\",\"http://a.com/?x=1,2\",\"Low\",\"Extreme-Left\"\n");
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].url == "http://a.com/?x=1,2");
    CHECK(recs[0].bias7 == Bias7::ExtremeLeft);
}

TEST_CASE("corpus write/load round trip")
{
    TempDir dir;
    const auto recs = load_corpus(testsupport::kData / "synth" / "corpus.csv");
    write_corpus(dir / "c.csv", recs);
    CHECK(load_corpus(dir / "c.csv") == recs);
}

TEST_CASE("label-distribution fixture has the published counts")
{
    const auto recs = load_corpus(testsupport::kData / "stats_corpus.csv");
    REQUIRE(recs.size() == 1066);
    std::array<int, 3> fact{};
    std::array<int, 7> bias{};
    for (const auto& r : recs) {
        ++fact[static_cast<int>(r.factuality)];
        ++bias[static_cast<int>(r.bias7)];
    }
    CHECK(fact == std::array<int, 3>{256, 268, 542});
    CHECK(bias == std::array<int, 7>{21, 168, 209, 263, 92, 157, 156});
}

TEST_CASE("bias 7 to 3 mapping")
{
    CHECK(map_bias_7_to_3(0) == 0);
    CHECK(map_bias_7_to_3(3) == 1);
    CHECK(map_bias_7_to_3(4) == 1);
    CHECK(map_bias_7_to_3(Bias7::ExtremeRight) == Bias3::Right);
    std::array<bool, 3> hit{};
    for (int b = 0; b < 7; ++b) {
        const int m = map_bias_7_to_3(b);
        REQUIRE(m >= 0);
        REQUIRE(m <= 2);
        hit[m] = true;
        if (b > 0)
            CHECK(m >= map_bias_7_to_3(b - 1));
    }
    CHECK(hit == std::array<bool, 3>{true, true, true});
    CHECK_THROWS_AS(map_bias_7_to_3(-1), ContractViolation);
    CHECK_THROWS_AS(map_bias_7_to_3(7), ContractViolation);
}

TEST_CASE("bundle loading")
{
    TempDir dir;
    auto put = [&](const std::string& id, const nlohmann::json& doc) {
        write_text(dir / id / "bundle.json", doc.dump());
    };

    SUBCASE("absent sections default to empty")
    {
        put("a.com", {{"medium_id", "a.com"}});
        const auto b = load_bundle(dir.path(), "a.com");
        CHECK_FALSE(b.twitter.exists);
        CHECK_FALSE(b.wiki.exists);
        CHECK(b.articles.empty());
        CHECK_FALSE(b.alexa_rank.has_value());
    }
    SUBCASE("three articles")
    {
        nlohmann::json arts = nlohmann::json::array();
        for (int i = 0; i < 3; ++i)
            arts.push_back({{"title", "t" + std::to_string(i)}, {"body", "b"}});
        put("a.com", {{"medium_id", "a.com"}, {"articles", arts}});
        CHECK(load_bundle(dir.path(), "a.com").articles.size() == 3);
    }
    SUBCASE("rank zero is rejected with its path")
    {
        put("a.com", {{"medium_id", "a.com"}, {"alexa_rank", 0}});
        CHECK_THROWS_AS(load_bundle(dir.path(), "a.com"), ValidationError);
        CHECK(error_of([&] { load_bundle(dir.path(), "a.com"); }).find("$.alexa_rank") != std::string::npos);
    }
    SUBCASE("schema violations name the JSON path")
    {
        put("a.com", {{"medium_id", "a.com"},
                      {"articles", {{{"title", "ok"}, {"body", "x"}}, {{"title", 5}, {"body", "x"}}}}});
        CHECK(error_of([&] { load_bundle(dir.path(), "a.com"); }).find("$.articles[1].title") != std::string::npos);
        put("b.com", {{"medium_id", "b.com"}, {"twitter", {{"counts", {{"followers", -1}}}}}});
        CHECK(error_of([&] { load_bundle(dir.path(), "b.com"); }).find("$.twitter.counts.followers")
              != std::string::npos);
        put("c.com", {{"medium_id", "c.com"}, {"articles", {{{"published_at", "2018-13-01"}}}}});
        CHECK_THROWS_AS(load_bundle(dir.path(), "c.com"), ValidationError);
    }
    SUBCASE("mismatched id")
    {
        put("a.com", {{"medium_id", "b.com"}});
        CHECK_THROWS_AS(load_bundle(dir.path(), "a.com"), ValidationError);
    }
    SUBCASE("missing file and bad JSON")
    {
        CHECK_THROWS_AS(load_bundle(dir.path(), "nope.com"), NotFoundError);
        write_text(dir / "bad.com" / "bundle.json", "{not json");
        CHECK_THROWS_AS(load_bundle(dir.path(), "bad.com"), ParseError);
    }
}

TEST_CASE("bundle round trip on every fixture bundle")
{
    TempDir dir;
    for (const auto* set : {"synth", "mini"}) {
        const auto root = testsupport::kData / set / "bundles";
        for (const auto& rec : load_corpus(testsupport::kData / set / "corpus.csv")) {
            const auto b = load_bundle(root, rec.medium_id);
            save_bundle(dir.path(), b);
            CHECK(load_bundle(dir.path(), rec.medium_id) == b);
            CHECK(bundle_from_json(bundle_to_json(b)) == b);
        }
    }
}

#include <doctest.h>

#include <cmath>

#include "mediaprof/error.hpp"
#include "mediaprof/profilefeat.hpp"
#include "support.hpp"

using namespace mediaprof;

namespace {

EmbeddingTable small_table()
{
    EmbeddingTable t(2);
    t.add("news", Eigen::Vector2f(1, 0));
    t.add("daily", Eigen::Vector2f(0, 1));
    t.add("politics", Eigen::Vector2f(2, 2));
    return t;
}

} // namespace

TEST_CASE("wikipedia block on a present page")
{
    const auto table = small_table();
    WikiSnapshot snap;
    snap.exists = true;
    snap.content = "Daily news.";
    snap.summary = "politics";
    snap.infobox = "";
    snap.categories = {"News", "Politics"};
    snap.toc = {"unknown words"};
    const auto b = wiki_features(snap, table);
    CHECK(b.has_page == 1.0);
    CHECK(b.content == Eigen::Vector2d(0.5, 0.5));
    CHECK(b.summary == Eigen::Vector2d(2, 2));
    CHECK(b.infobox == Eigen::Vector2d::Zero());
    CHECK(b.categories == Eigen::Vector2d(1.5, 1.0));
    CHECK(b.toc == Eigen::Vector2d::Zero());

    const auto flat = b.flatten();
    REQUIRE(flat.size() == WikiFeatureBlock::length(2));
    Eigen::VectorXd expected(11);
    expected << 1, 0.5, 0.5, 0, 0, 2, 2, 1.5, 1.0, 0, 0;
    CHECK(flat == expected);
}

TEST_CASE("missing wikipedia page zeroes the block")
{
    const auto table = small_table();
    WikiSnapshot snap;
    snap.content = "news daily politics"; // ignored without a page
    const auto flat = wiki_features(snap, table).flatten();
    CHECK(flat.size() == 11);
    CHECK(flat.isZero(0.0));
}

TEST_CASE("twitter url match")
{
    const auto none = url_match(std::nullopt, "http://foxnews.com");
    CHECK(none.has_url == 0.0);
    CHECK(none.matches == 0.0);

    const auto same = url_match("http://foxnews.com", "http://foxnews.com");
    CHECK(same.has_url == 1.0);
    CHECK(same.matches == 1.0);

    const auto lookalike = url_match("http://abcnews.com.co", "http://abcnews.com");
    CHECK(lookalike.has_url == 1.0);
    CHECK(lookalike.matches == 0.0);

    CHECK(url_match("https://www.FoxNews.com/", "http://foxnews.com").matches == 1.0);
    CHECK(url_match("http://foxnews.com", "https://www.foxnews.com/").matches == 1.0);
    CHECK(url_match("not a url", "http://foxnews.com").has_url == 0.0);
    CHECK_THROWS_AS(url_match("http://foxnews.com", ""), ContractViolation);
}

TEST_CASE("url match is symmetric")
{
    const char* urls[] = {"http://a.com", "https://www.a.com/x", "a.com", "http://b.a.com", "http://a.co"};
    for (const char* u : urls)
        for (const char* v : urls) {
            CAPTURE(u);
            CAPTURE(v);
            CHECK(url_match(std::string(u), v).matches == url_match(std::string(v), u).matches);
        }
}

TEST_CASE("twitter block")
{
    const auto table = small_table();
    SUBCASE("no account")
    {
        TwitterProfile p;
        p.verified = true;
        p.description = "news";
        const auto flat = twitter_features(p, "http://a.com", table).flatten();
        CHECK(flat.size() == TwitterFeatureBlock::length(2));
        CHECK(flat.isZero(0.0));
    }
    SUBCASE("full profile")
    {
        TwitterProfile p;
        p.exists = true;
        p.verified = true;
        p.created_year = 2009;
        p.location = "New York";
        p.profile_url = "https://www.a.com";
        p.description = "Daily politics";
        p.counts = {1000, 0, 5, 0, 42};
        const auto b = twitter_features(p, "http://a.com", table);
        CHECK(b.verified == 1.0);
        CHECK(b.created_year == 2009.0);
        CHECK(b.has_location == 1.0);
        CHECK(b.url_match.matches == 1.0);
        CHECK(b.counts[0] == std::log1p(1000.0));
        CHECK(b.counts[1] == 0.0);
        CHECK(b.counts[4] == std::log1p(42.0));
        CHECK(b.description == Eigen::Vector2d(1.0, 1.5));
        Eigen::VectorXd expected(13);
        expected << 1, 1, 2009, 1, 1, 1, std::log1p(1000.0), 0, std::log1p(5.0), 0, std::log1p(42.0), 1.0, 1.5;
        CHECK(b.flatten() == expected);
    }
    SUBCASE("sparse profile")
    {
        TwitterProfile p;
        p.exists = true;
        p.location = "";
        const auto b = twitter_features(p, "http://a.com", table);
        CHECK(b.has_account == 1.0);
        CHECK(b.verified == 0.0);
        CHECK(b.created_year == 0.0);
        CHECK(b.has_location == 0.0);
        CHECK(b.url_match.has_url == 0.0);
        CHECK(b.counts.isZero(0.0));
    }
}

TEST_CASE("profile blocks have fixed length for every fixture")
{
    const auto table = load_embeddings(testsupport::kData / "synth" / "embeddings.txt");
    const auto root = testsupport::kData / "synth" / "bundles";
    for (const auto& rec : load_corpus(testsupport::kData / "synth" / "corpus.csv")) {
        const auto b = load_bundle(root, rec.medium_id);
        const auto tw = twitter_features(b.twitter, rec.url, table).flatten();
        const auto wk = wiki_features(b.wiki, table).flatten();
        CHECK(tw.size() == 11 + table.dim());
        CHECK(wk.size() == 1 + 5 * table.dim());
        CHECK(tw.allFinite());
        CHECK(wk.allFinite());
    }
}

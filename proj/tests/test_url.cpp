#include <doctest.h>

#include "mediaprof/url.hpp"

using namespace mediaprof;

TEST_CASE("parse_url splits scheme, host, path and query")
{
    const auto u = parse_url("HTTPS://User:pw@WWW.Example.com:8080/a/b/?q=1#frag");
    REQUIRE(u);
    CHECK(u->scheme == "https");
    CHECK(u->host == "www.example.com");
    CHECK(u->path == "/a/b/");
    CHECK(u->query == "q=1");
    CHECK(u->host_labels() == std::vector<std::string>{"www", "example", "com"});
    CHECK(u->path_segments() == std::vector<std::string>{"a", "b"});
    CHECK(host_key(*u) == "example.com");
}

TEST_CASE("parse_url without scheme")
{
    const auto u = parse_url("example.org/news");
    REQUIRE(u);
    CHECK(u->scheme.empty());
    CHECK(u->host == "example.org");
    CHECK(u->path == "/news");
    CHECK(parse_url("//cdn.example.org")->host == "cdn.example.org");
}

TEST_CASE("parse_url rejects malformed input")
{
    CHECK_FALSE(parse_url(""));
    CHECK_FALSE(parse_url("   "));
    CHECK_FALSE(parse_url("http://"));
    CHECK_FALSE(parse_url("http://exa mple.com"));
    CHECK_FALSE(parse_url("http://a..com"));
    CHECK_FALSE(parse_url("http://.a.com"));
    CHECK_FALSE(parse_url("http://a.com:port/"));
    CHECK_FALSE(parse_url("ht tp://a.com"));
    CHECK_FALSE(parse_url("http://a!b.com"));
}

TEST_CASE("host suffix matching respects label boundaries")
{
    CHECK(host_has_suffix("abcnews.com.co", "com.co"));
    CHECK(host_has_suffix("abcnews.com.co", "co"));
    CHECK(host_has_suffix("co", "co"));
    CHECK_FALSE(host_has_suffix("disco", "co"));
    CHECK_FALSE(host_has_suffix("example.com", ""));
    CHECK(host_has_suffix("x.blogspot.com", "blogspot.com"));
    CHECK_FALSE(host_has_suffix("myblogspot.com", "blogspot.com"));
}

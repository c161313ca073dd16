#include <doctest.h>

#include <algorithm>
#include <random>

#include "mediaprof/embedlex.hpp"
#include "mediaprof/error.hpp"
#include "support.hpp"

using namespace mediaprof;
using testsupport::TempDir;
using testsupport::write_text;

using Tokens = std::vector<std::string>;

TEST_CASE("tokenize basics")
{
    const auto empty = tokenize("");
    CHECK(empty.tokens.empty());
    CHECK(empty.punctuation.empty());
    CHECK(empty.sentence_count == 0);

    const auto t = tokenize("Fake News!");
    CHECK(t.tokens == Tokens{"fake", "news"});
    CHECK(t.raw_tokens == Tokens{"Fake", "News"});
    CHECK(t.punctuation == Tokens{"!"});
    CHECK(t.sentence_count == 1);
}

TEST_CASE("sentence boundaries")
{
    CHECK(tokenize("Dr. Smith won. Really?").sentence_count == 2);
    CHECK(tokenize("I met J. Smith. He left.").sentence_count == 2);
    CHECK(tokenize("Hello world").sentence_count == 1);
    CHECK(tokenize("Wait... what? Yes.").sentence_count == 2);
    CHECK(tokenize("He said \"Stop!\" Then he left.").sentence_count == 2);
    CHECK(tokenize("Prices rose 3.5 percent. Analysts agreed.").sentence_count == 2);
    CHECK(tokenize("e.g. this one").sentence_count == 1);
    CHECK(tokenize("!!! ???").sentence_count == 0);
    CHECK(tokenize("Really?! (Yes.) No.").sentence_count == 3);
}

TEST_CASE("custom abbreviation list")
{
    const Tokenizer none(std::unordered_set<std::string>{});
    CHECK(none("Dr. Smith won.").sentence_count == 2);
    const auto from_file = Tokenizer::from_file(testsupport::kResources / "abbreviations.txt");
    CHECK(from_file("Dr. Smith won.").sentence_count == 1);
}

TEST_CASE("apostrophes, digits and unicode")
{
    const auto t = tokenize("Don’t 'quote' me on 42 ÜBER Ça.");
    CHECK(t.tokens == Tokens{"don't", "quote", "me", "on", "42", "über", "ça"});
    CHECK(std::count(t.punctuation.begin(), t.punctuation.end(), "'") == 2);
    CHECK(tokenize("caf\xC3").tokens == Tokens{"caf"});
}

TEST_CASE("tokenize is idempotent at the token level")
{
    for (const char* text : {"Dr. Smith won. Really?", "Don't STOP believing!!", "A-b c_d e/f 12:30",
                             "Über Ça «va» — bien?", "it's   spaced\tout\nhere"}) {
        const auto first = tokenize(text).tokens;
        std::string joined;
        for (const auto& tok : first)
            joined += tok + " ";
        CHECK(tokenize(joined).tokens == first);
    }
}

TEST_CASE("utf8 round trip")
{
    const std::string s = "plain é中\U0001F600";
    CHECK(encode_utf8(decode_utf8(s)) == s);
    CHECK(decode_utf8("\xFF").front() == 0xFFFD);
}

TEST_CASE("text embeddings")
{
    TempDir dir;
    write_text(dir / "e.txt", "2 3\nw1 1 2 3\nw2 0.5 -1 4\n");
    const auto t = load_embeddings(dir / "e.txt");
    CHECK(t.dim() == 3);
    CHECK(t.size() == 2);
    CHECK(t.lookup("w2")->isApprox(Eigen::Vector3f(0.5f, -1.0f, 4.0f)));
    CHECK_FALSE(t.lookup("nope"));
    CHECK_FALSE(t.lookup("W1"));
    CHECK(read_embedding_dim(dir / "e.txt") == 3);
}

TEST_CASE("embedding parse errors")
{
    std::string short_row = "1 300\nw";
    for (int i = 0; i < 299; ++i)
        short_row += " 0.1";
    CHECK_THROWS_AS(parse_embeddings_text(short_row + "\n"), ParseError);
    CHECK_THROWS_AS(parse_embeddings_text("2 2\nw 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_embeddings_text("1 2\nw 1 nan\n"), ParseError);
    CHECK_THROWS_AS(parse_embeddings_text("1 2\nw 1 inf\n"), ParseError);
    CHECK_THROWS_AS(parse_embeddings_text("garbage\n"), ParseError);
    CHECK_THROWS_AS(load_embeddings("/nonexistent/e.txt"), NotFoundError);
}

TEST_CASE("duplicate tokens keep the first vector")
{
    const auto t = parse_embeddings_text("3 1\na 1\na 2\nb 3\n");
    CHECK(t.size() == 2);
    CHECK((*t.lookup("a"))[0] == 1.0f);
}

TEST_CASE("binary embeddings round trip and layout")
{
    TempDir dir;
    EmbeddingTable t(2);
    t.add("x", Eigen::Vector2f(1.5f, -2.0f));
    t.add("yy", Eigen::Vector2f(0.25f, 3.0f));
    save_embeddings(dir / "e.bin", t, EmbeddingFormat::Binary);
    const std::string bytes = testsupport::read_text(dir / "e.bin");
    // header, then "x " + 8 bytes + "\n", then "yy " + 8 bytes + "\n"
    CHECK(bytes.size() == std::string("2 2\n").size() + 2 + 8 + 1 + 3 + 8 + 1);
    CHECK(bytes.substr(0, 6) == "2 2\nx ");
    const unsigned char one_point_five[4] = {0x00, 0x00, 0xC0, 0x3F};
    CHECK(std::equal(one_point_five, one_point_five + 4, reinterpret_cast<const unsigned char*>(bytes.data() + 6)));
    const auto back = load_embeddings(dir / "e.bin");
    CHECK(back.tokens() == t.tokens());
    CHECK(*back.lookup("yy") == *t.lookup("yy"));
    save_embeddings(dir / "e.txt", back, EmbeddingFormat::Text);
    CHECK(*load_embeddings(dir / "e.txt").lookup("x") == *t.lookup("x"));
    CHECK_THROWS_AS(parse_embeddings_binary(std::string("1 2\nx ") + std::string(5, '\0')), ParseError);
}

TEST_CASE("avg_embedding")
{
    EmbeddingTable t(2);
    t.add("w1", Eigen::Vector2f(0, 0));
    t.add("w2", Eigen::Vector2f(2, 4));
    t.add("w", Eigen::Vector2f(1, 2));
    CHECK(avg_embedding(Tokens{}, t) == Eigen::Vector2d::Zero());
    CHECK(avg_embedding(Tokens{"oov"}, t) == Eigen::Vector2d::Zero());
    CHECK(avg_embedding(Tokens{"w"}, t) == Eigen::Vector2d(1, 2));
    CHECK(avg_embedding(Tokens{"w1", "w2"}, t) == Eigen::Vector2d(1, 2));
    CHECK(avg_embedding(Tokens{"w1", "oov", "w2"}, t) == Eigen::Vector2d(1, 2));

    EmbeddingTable e3(3);
    e3.add("w", Eigen::Vector3f(1, 2, 3));
    CHECK(avg_embedding(Tokens{"w"}, e3) == Eigen::Vector3d(1, 2, 3));
}

TEST_CASE("avg_embedding is permutation and duplication invariant")
{
    const auto table = load_embeddings(testsupport::kData / "synth" / "embeddings.txt");
    CHECK(table.dim() == 25);
    std::mt19937 rng(5);
    Tokens toks(table.tokens().begin(), table.tokens().begin() + 40);
    toks.push_back("not-in-vocab");
    const Eigen::VectorXd base = avg_embedding(toks, table);

    Eigen::VectorXd oracle = Eigen::VectorXd::Zero(25);
    for (std::size_t i = 0; i < 40; ++i)
        oracle += table.lookup(toks[i])->cast<double>();
    oracle /= 40.0;
    CHECK((base - oracle).norm() < 1e-9);

    for (int r = 0; r < 5; ++r) {
        std::shuffle(toks.begin(), toks.end(), rng);
        CHECK((avg_embedding(toks, table) - base).norm() < 1e-12);
    }
    Tokens doubled = toks;
    doubled.insert(doubled.end(), toks.begin(), toks.end());
    CHECK((avg_embedding(doubled, table) - base).norm() < 1e-12);
}

TEST_CASE("lexicon matching")
{
    const Lexicon good("good", {"good"});
    CHECK(lexicon_ratio(Tokens{}, good) == 0.0);
    CHECK(lexicon_ratio(Tokens{"good", "bad"}, good) == 0.5);

    const Lexicon care("care", {"care*"});
    CHECK(care.matches("cared"));
    CHECK(care.matches("care"));
    CHECK(care.matches("careful"));
    CHECK_FALSE(care.matches("caring"));
    CHECK(lexicon_ratio(Tokens{"caring", "cared"}, care) == 0.5);
    CHECK(lexicon_ratio(Tokens{"cares", "cared"}, care) == 1.0);

    const Lexicon upper("u", {"Hello", "WORLD*"});
    CHECK(upper.matches("hello"));
    CHECK(upper.matches("worldly"));

    CHECK_THROWS_AS(Lexicon("bad", {"a*b"}), ParseError);
    CHECK_THROWS_AS(Lexicon("bad", {"*"}), ParseError);
    CHECK_THROWS_AS(Lexicon("bad", {""}), ParseError);
}

TEST_CASE("lexicon ratio is monotone in matching tokens")
{
    const Lexicon lex("l", {"alpha", "beta*"});
    Tokens toks{"x", "y", "z"};
    std::size_t prev_matches = 0;
    for (const char* add : {"alpha", "betamax", "beta", "alpha"}) {
        toks.emplace_back(add);
        const double r = lexicon_ratio(toks, lex);
        const auto matches = static_cast<std::size_t>(std::lround(r * static_cast<double>(toks.size())));
        CHECK(matches > prev_matches);
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
        prev_matches = matches;
    }
}

TEST_CASE("lexicon files")
{
    TempDir dir;
    write_text(dir / "l.txt", "# comment\nalpha\n\n  Beta*  \ngamma # trailing\n");
    const auto lex = load_lexicon(dir / "l.txt");
    CHECK(lex.name() == "l");
    CHECK(lex.term_count() == 3);
    CHECK(lex.matches("betas"));
    CHECK(lex.matches("gamma"));
    CHECK_THROWS_AS(load_lexicon(dir / "missing.txt"), NotFoundError);
    for (const auto& entry : std::filesystem::directory_iterator(testsupport::kResources / "lexicons"))
        CHECK(load_lexicon(entry.path()).term_count() > 0);
}

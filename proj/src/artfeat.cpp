#include "mediaprof/artfeat.hpp"

#include <algorithm>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mediaprof/error.hpp"

namespace mediaprof {

namespace {

using G = ArticleGroup;

constexpr std::array<ArticleFeatureSpec, kArticleFeatureCount> kManifest{{
    {"char_count", G::Structure},
    {"word_count", G::Structure},
    {"sentence_count", G::Structure},
    {"avg_word_length", G::Structure},
    {"avg_sentence_length", G::Structure},
    {"exclamation_per_sentence", G::Structure},
    {"question_per_sentence", G::Structure},
    {"all_caps_word_ratio", G::Structure},
    {"digit_token_ratio", G::Structure},
    {"punctuation_per_token", G::Structure},
    {"quote_char_count", G::Structure},
    {"stopword_ratio", G::Structure},
    {"first_person_ratio", G::Structure},
    {"second_person_ratio", G::Structure},
    {"third_person_ratio", G::Structure},
    {"starts_with_number", G::Structure},
    {"contains_question_word", G::Structure},
    {"contains_demonstrative", G::Structure},
    {"contains_clickbait_phrase", G::Structure},
    {"positive_ratio", G::Sentiment},
    {"negative_ratio", G::Sentiment},
    {"polarity", G::Sentiment},
    {"subjectivity_ratio", G::Sentiment},
    {"negation_ratio", G::Sentiment},
    {"science_ratio", G::Topic},
    {"personal_concern_ratio", G::Topic},
    {"type_token_ratio", G::Complexity},
    {"flesch_reading_ease", G::Complexity},
    {"flesch_kincaid_grade", G::Complexity},
    {"gunning_fog", G::Complexity},
    {"long_word_ratio", G::Complexity},
    {"insight_ratio", G::Complexity},
    {"discrepancy_ratio", G::Complexity},
    {"certainty_ratio", G::Complexity},
    {"tentative_ratio", G::Complexity},
    {"hedge_ratio", G::Bias},
    {"assertive_ratio", G::Bias},
    {"factive_ratio", G::Bias},
    {"implicative_ratio", G::Bias},
    {"report_verb_ratio", G::Bias},
    {"bias_lexicon_ratio", G::Bias},
    {"care_virtue_ratio", G::Morality},
    {"care_vice_ratio", G::Morality},
    {"fairness_virtue_ratio", G::Morality},
    {"fairness_vice_ratio", G::Morality},
    {"loyalty_virtue_ratio", G::Morality},
    {"loyalty_vice_ratio", G::Morality},
    {"authority_virtue_ratio", G::Morality},
    {"authority_vice_ratio", G::Morality},
    {"sanctity_virtue_ratio", G::Morality},
    {"sanctity_vice_ratio", G::Morality},
}};

constexpr std::array<std::string_view, 10> kMoralNames{
    "care_virtue",      "care_vice",      "fairness_virtue", "fairness_vice",  "loyalty_virtue",
    "loyalty_vice",     "authority_virtue", "authority_vice", "sanctity_virtue", "sanctity_vice"};

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }

bool is_quote(std::string_view p)
{
    return p == "\"" || p == "'" || p == "“" || p == "”" || p == "‘" || p == "’" || p == "«"
           || p == "»";
}

std::size_t length_in_code_points(std::string_view s)
{
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

bool is_all_caps(std::string_view raw)
{
    int upper = 0;
    for (char c : raw) {
        if (c >= 'a' && c <= 'z')
            return false;
        if (c >= 'A' && c <= 'Z')
            ++upper;
    }
    return upper >= 2;
}

bool contains_phrase(std::span<const std::string> tokens, const std::vector<std::string>& phrase)
{
    if (phrase.empty() || phrase.size() > tokens.size())
        return false;
    return std::search(tokens.begin(), tokens.end(), phrase.begin(), phrase.end()) != tokens.end();
}

double any_match(std::span<const std::string> tokens, const Lexicon& lex)
{
    return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) { return lex.matches(t); }) ? 1.0
                                                                                                             : 0.0;
}

} // namespace

std::string_view to_string(ArticleGroup g)
{
    switch (g) {
    case G::Structure: return "structure";
    case G::Sentiment: return "sentiment";
    case G::Topic: return "topic";
    case G::Complexity: return "complexity";
    case G::Bias: return "bias";
    case G::Morality: return "morality";
    }
    return "?";
}

const std::array<ArticleFeatureSpec, kArticleFeatureCount>& article_feature_manifest() { return kManifest; }

int article_feature_index(std::string_view name)
{
    for (int i = 0; i < kArticleFeatureCount; ++i)
        if (kManifest[i].name == name)
            return i;
    throw ContractViolation("unknown article feature '" + std::string(name) + "'");
}

nlohmann::json article_manifest_json()
{
    auto out = nlohmann::json::array();
    int index = 0;
    for (std::string_view segment : {"title", "body"})
        for (const auto& spec : kManifest)
            out.push_back({{"name", std::string(segment) + "." + std::string(spec.name)},
                           {"group", std::string(to_string(spec.group))},
                           {"index", index++}});
    return out;
}

ArticleResources ArticleResources::load(const std::filesystem::path& dir)
{
    ArticleResources r;
    auto lex = [&](std::string_view name) { return load_lexicon(dir / "lexicons" / (std::string(name) + ".txt")); };
    r.tokenizer = Tokenizer::from_file(dir / "abbreviations.txt");
    r.stopwords = lex("stopwords");
    r.pronouns_first = lex("pronouns_first");
    r.pronouns_second = lex("pronouns_second");
    r.pronouns_third = lex("pronouns_third");
    r.question_words = lex("question_words");
    r.demonstratives = lex("demonstratives");
    r.positive = lex("positive");
    r.negative = lex("negative");
    r.subjective = lex("subjective");
    r.negation = lex("negation");
    r.science = lex("science");
    r.personal_concern = lex("personal_concern");
    r.insight = lex("insight");
    r.discrepancy = lex("discrepancy");
    r.certainty = lex("certainty");
    r.tentative = lex("tentative");
    r.hedges = lex("hedges");
    r.assertives = lex("assertives");
    r.factives = lex("factives");
    r.implicatives = lex("implicatives");
    r.report_verbs = lex("report_verbs");
    r.bias = lex("bias");
    for (std::size_t i = 0; i < kMoralNames.size(); ++i)
        r.moral[i] = lex(kMoralNames[i]);
    for (const auto& phrase : load_word_list(dir / "clickbait_phrases.txt"))
        r.clickbait_phrases.push_back(r.tokenizer(phrase).tokens);
    return r;
}

int count_syllables(std::string_view word)
{
    require(!word.empty(), "count_syllables: empty token");
    std::string letters;
    for (char c : word)
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))
            letters.push_back(static_cast<char>(c | 0x20));

    int count = 0;
    bool in_group = false;
    for (char c : letters) {
        bool v = is_vowel(c);
        if (v && !in_group)
            ++count;
        in_group = v;
    }

    const auto n = letters.size();
    if (n >= 2 && letters[n - 1] == 'e' && count > 1) {
        bool consonant_le = n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
        if (!consonant_le)
            --count;
    }
    return std::max(count, 1);
}

Eigen::VectorXd segment_features(std::string_view text, const ArticleResources& res)
{
    Eigen::VectorXd f = Eigen::VectorXd::Zero(kArticleFeatureCount);
    const TokenizedText tt = res.tokenizer(text);
    const auto& tokens = tt.tokens;
    const std::size_t words = tokens.size();
    if (words == 0 && tt.punctuation.empty())
        return f;

    const double w = static_cast<double>(words);
    const double w_guard = std::max(1.0, w);
    const double s_guard = std::max(1, tt.sentence_count);
    auto ratio = [&](const Lexicon& lex) { return lexicon_ratio(tokens, lex); };
    auto set = [&](std::string_view name, double value) { f[article_feature_index(name)] = value; };

    std::size_t letters_total = 0;
    std::size_t caps = 0;
    std::size_t digit_tokens = 0;
    std::size_t syllables = 0;
    std::size_t complex_words = 0;
    std::size_t long_words = 0;
    for (std::size_t i = 0; i < words; ++i) {
        const auto len = length_in_code_points(tokens[i]);
        letters_total += len;
        if (is_all_caps(tt.raw_tokens[i]))
            ++caps;
        if (std::any_of(tokens[i].begin(), tokens[i].end(), [](char c) { return c >= '0' && c <= '9'; }))
            ++digit_tokens;
        const int syl = count_syllables(tokens[i]);
        syllables += static_cast<std::size_t>(syl);
        if (syl >= 3)
            ++complex_words;
        if (len >= 7)
            ++long_words;
    }
    const auto bangs = std::count(tt.punctuation.begin(), tt.punctuation.end(), "!");
    const auto questions = std::count(tt.punctuation.begin(), tt.punctuation.end(), "?");
    const auto quotes = std::count_if(tt.punctuation.begin(), tt.punctuation.end(), is_quote);

    // structure
    set("char_count", static_cast<double>(length_in_code_points(text)));
    set("word_count", w);
    set("sentence_count", tt.sentence_count);
    set("avg_word_length", words ? static_cast<double>(letters_total) / w : 0.0);
    set("avg_sentence_length", w / s_guard);
    set("exclamation_per_sentence", static_cast<double>(bangs) / s_guard);
    set("question_per_sentence", static_cast<double>(questions) / s_guard);
    set("all_caps_word_ratio", static_cast<double>(caps) / w_guard);
    set("digit_token_ratio", static_cast<double>(digit_tokens) / w_guard);
    set("punctuation_per_token", static_cast<double>(tt.punctuation.size()) / w_guard);
    set("quote_char_count", static_cast<double>(quotes));
    set("stopword_ratio", ratio(res.stopwords));
    set("first_person_ratio", ratio(res.pronouns_first));
    set("second_person_ratio", ratio(res.pronouns_second));
    set("third_person_ratio", ratio(res.pronouns_third));
    set("starts_with_number", words && tokens[0][0] >= '0' && tokens[0][0] <= '9' ? 1.0 : 0.0);
    set("contains_question_word", any_match(tokens, res.question_words));
    set("contains_demonstrative", any_match(tokens, res.demonstratives));
    set("contains_clickbait_phrase",
        std::any_of(res.clickbait_phrases.begin(), res.clickbait_phrases.end(),
                    [&](const auto& p) { return contains_phrase(tokens, p); })
            ? 1.0
            : 0.0);

    // sentiment
    const double pos = ratio(res.positive);
    const double neg = ratio(res.negative);
    set("positive_ratio", pos);
    set("negative_ratio", neg);
    set("polarity", pos + neg > 0 ? (pos - neg) / (pos + neg) : 0.0);
    set("subjectivity_ratio", ratio(res.subjective));
    set("negation_ratio", ratio(res.negation));

    // topic
    set("science_ratio", ratio(res.science));
    set("personal_concern_ratio", ratio(res.personal_concern));

    // complexity
    if (words > 0) {
        std::unordered_set<std::string> types(tokens.begin(), tokens.end());
        const double words_per_sentence = w / s_guard;
        const double syllables_per_word = static_cast<double>(syllables) / w;
        set("type_token_ratio", static_cast<double>(types.size()) / w);
        set("flesch_reading_ease", 206.835 - 1.015 * words_per_sentence - 84.6 * syllables_per_word);
        set("flesch_kincaid_grade", 0.39 * words_per_sentence + 11.8 * syllables_per_word - 15.59);
        set("gunning_fog", 0.4 * (words_per_sentence + 100.0 * static_cast<double>(complex_words) / w));
        set("long_word_ratio", static_cast<double>(long_words) / w);
    }
    set("insight_ratio", ratio(res.insight));
    set("discrepancy_ratio", ratio(res.discrepancy));
    set("certainty_ratio", ratio(res.certainty));
    set("tentative_ratio", ratio(res.tentative));

    // bias
    set("hedge_ratio", ratio(res.hedges));
    set("assertive_ratio", ratio(res.assertives));
    set("factive_ratio", ratio(res.factives));
    set("implicative_ratio", ratio(res.implicatives));
    set("report_verb_ratio", ratio(res.report_verbs));
    set("bias_lexicon_ratio", ratio(res.bias));

    // morality
    const int moral_base = article_feature_index("care_virtue_ratio");
    for (int i = 0; i < 10; ++i)
        f[moral_base + i] = ratio(res.moral[static_cast<std::size_t>(i)]);
    return f;
}

Eigen::VectorXd medium_article_block(std::span<const ArticleDoc> articles, const ArticleResources& res)
{
    Eigen::VectorXd block = Eigen::VectorXd::Zero(kArticleBlockLength);
    if (articles.empty())
        return block;
    for (const auto& a : articles) {
        block.head(kArticleFeatureCount) += segment_features(a.title, res);
        block.tail(kArticleFeatureCount) += segment_features(a.body, res);
    }
    return block / static_cast<double>(articles.size());
}

} // namespace mediaprof

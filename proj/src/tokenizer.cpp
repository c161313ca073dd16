#include "mediaprof/embedlex.hpp"

#include "mediaprof/error.hpp"

namespace mediaprof {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool is_space(char32_t c)
{
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' || c == 0xA0
           || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x3000;
}

bool is_apostrophe(char32_t c) { return c == U'\'' || c == 0x2019; }

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool is_letter(char32_t c)
{
    if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z'))
        return true;
    if (c < 0xC0 || c == 0xD7 || c == 0xF7 || c == kReplacement)
        return false;
    if ((c >= 0x2000 && c <= 0x2BFF) || (c >= 0x2E00 && c <= 0x2E7F) || (c >= 0x3000 && c <= 0x303F)
        || (c >= 0xFE30 && c <= 0xFE4F) || (c >= 0xFF00 && c <= 0xFF0F) || (c >= 0x1F000 && c <= 0x1FAFF))
        return false;
    return true;
}

bool is_upper(char32_t c)
{
    return (c >= U'A' && c <= U'Z') || (c >= 0xC0 && c <= 0xDE && c != 0xD7)
           || (c >= 0x100 && c <= 0x17F && c % 2 == 0) || (c >= 0x391 && c <= 0x3A9)
           || (c >= 0x400 && c <= 0x42F);
}

char32_t to_lower(char32_t c)
{
    if (c >= U'A' && c <= U'Z')
        return c + 32;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7)
        return c + 0x20;
    if (c >= 0x100 && c <= 0x17F && c % 2 == 0)
        return c + 1;
    if (c >= 0x391 && c <= 0x3A9)
        return c + 0x20;
    if (c >= 0x410 && c <= 0x42F)
        return c + 0x20;
    if (c >= 0x400 && c <= 0x40F)
        return c + 0x50;
    return c;
}

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool is_closer(char32_t c)
{
    return c == U'"' || c == U'\'' || c == U')' || c == U']' || c == 0x2019 || c == 0x201D || c == 0xBB;
}

bool is_opener(char32_t c) { return c == U'"' || c == U'\'' || c == U'(' || c == U'[' || c == 0x201C || c == 0xAB; }

const std::unordered_set<std::string>& builtin_abbreviations()
{
    static const std::unordered_set<std::string> abbrevs{
        "dr", "mr", "mrs", "ms", "prof", "sr", "jr", "st", "vs", "etc", "inc", "ltd", "co", "corp",
        "gen", "gov", "sen", "rep", "lt", "col", "sgt", "capt", "mt", "no", "jan", "feb", "mar", "apr",
        "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec", "dept", "est", "fig", "approx"};
    return abbrevs;
}

} // namespace

std::u32string decode_utf8(std::string_view text)
{
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        auto b0 = static_cast<unsigned char>(text[i]);
        int extra = 0;
        char32_t cp = 0;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            extra = 1;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            extra = 2;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            extra = 3;
            cp = b0 & 0x07;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        if (i + extra >= text.size()) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k <= extra; ++k) {
            auto b = static_cast<unsigned char>(text[i + k]);
            if ((b & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        if (!ok) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += extra + 1;
    }
    return out;
}

std::string encode_utf8(std::u32string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char32_t c : text) {
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
        } else if (c < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (c >> 6)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        } else if (c < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (c >> 12)));
            out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (c >> 18)));
            out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        }
    }
    return out;
}

Tokenizer::Tokenizer() : abbreviations_(builtin_abbreviations()) {}

Tokenizer::Tokenizer(std::unordered_set<std::string> abbreviations) : abbreviations_(std::move(abbreviations)) {}

Tokenizer Tokenizer::from_file(const std::filesystem::path& path)
{
    auto words = load_word_list(path);
    return Tokenizer(std::unordered_set<std::string>(words.begin(), words.end()));
}

TokenizedText Tokenizer::operator()(std::string_view text) const
{
    TokenizedText out;
    const std::u32string cps = decode_utf8(text);
    const std::size_t n = cps.size();

    int tokens_since_boundary = 0;
    std::size_t i = 0;
    while (i < n) {
        char32_t c = cps[i];
        if (is_space(c)) {
            ++i;
            continue;
        }
        if (is_letter(c) || is_digit(c) || is_apostrophe(c)) {
            std::size_t j = i;
            while (j < n && (is_letter(cps[j]) || is_digit(cps[j]) || is_apostrophe(cps[j])))
                ++j;
            std::size_t lo = i;
            std::size_t hi = j;
            while (lo < hi && is_apostrophe(cps[lo]))
                out.punctuation.push_back(encode_utf8(std::u32string(1, cps[lo++])));
            std::vector<std::string> trailing;
            while (hi > lo && is_apostrophe(cps[hi - 1]))
                trailing.push_back(encode_utf8(std::u32string(1, cps[--hi])));
            if (hi > lo) {
                std::u32string raw;
                std::u32string low;
                for (std::size_t k = lo; k < hi; ++k) {
                    char32_t ch = cps[k] == 0x2019 ? U'\'' : cps[k];
                    raw.push_back(ch);
                    low.push_back(to_lower(ch));
                }
                out.raw_tokens.push_back(encode_utf8(raw));
                out.tokens.push_back(encode_utf8(low));
                ++tokens_since_boundary;
            }
            out.punctuation.insert(out.punctuation.end(), trailing.rbegin(), trailing.rend());
            i = j;
            continue;
        }

        if (!is_terminator(c)) {
            out.punctuation.push_back(encode_utf8(std::u32string(1, c)));
            ++i;
            continue;
        }

        // A run of terminators, optionally followed by closing quotes/brackets.
        std::size_t j = i;
        bool only_periods = true;
        while (j < n && is_terminator(cps[j])) {
            only_periods = only_periods && cps[j] == U'.';
            out.punctuation.push_back(encode_utf8(std::u32string(1, cps[j])));
            ++j;
        }
        std::size_t run_len = j - i;
        std::size_t k = j;
        while (k < n && is_closer(cps[k]))
            ++k;

        bool boundary = false;
        std::size_t after = k;
        while (after < n && is_space(cps[after]))
            ++after;
        if (after == n) {
            boundary = true;
        } else if (after > k) {
            std::size_t next = after;
            while (next < n && is_opener(cps[next]))
                ++next;
            boundary = next < n && is_upper(cps[next]);
        }

        if (boundary && only_periods && run_len == 1 && !out.tokens.empty() && i > 0
            && (is_letter(cps[i - 1]) || is_digit(cps[i - 1]))) {
            const std::string& prev = out.tokens.back();
            if (decode_utf8(prev).size() == 1 || abbreviations_.contains(prev))
                boundary = false;
        }

        if (boundary && tokens_since_boundary > 0) {
            ++out.sentence_count;
            tokens_since_boundary = 0;
        }
        i = j;
    }
    if (tokens_since_boundary > 0)
        ++out.sentence_count;
    return out;
}

TokenizedText tokenize(std::string_view text)
{
    static const Tokenizer tokenizer;
    return tokenizer(text);
}

} // namespace mediaprof

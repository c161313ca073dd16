#include <algorithm>
#include <cctype>
#include <fstream>

#include "mediaprof/embedlex.hpp"
#include "mediaprof/error.hpp"

namespace mediaprof {

namespace {

std::string lower_ascii(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

Lexicon::Lexicon(std::string name, const std::vector<std::string>& terms) : name_(std::move(name))
{
    for (const auto& raw : terms) {
        std::string term = lower_ascii(raw);
        if (term.empty() || term == "*")
            throw ParseError("lexicon '" + name_ + "': empty term");
        auto star = term.find('*');
        if (star != std::string::npos && star + 1 != term.size())
            throw ParseError("lexicon '" + name_ + "': '*' must be the final character in '" + raw + "'");
        if (star != std::string::npos)
            prefixes_.push_back(term.substr(0, star));
        else
            exact_.insert(std::move(term));
    }
    std::sort(prefixes_.begin(), prefixes_.end());
    prefixes_.erase(std::unique(prefixes_.begin(), prefixes_.end()), prefixes_.end());
}

bool Lexicon::matches(std::string_view token) const
{
    if (exact_.contains(std::string(token)))
        return true;
    // prefixes_ is sorted, so any matching stem sorts at or before `token`.
    auto it = std::upper_bound(prefixes_.begin(), prefixes_.end(), token,
                               [](std::string_view t, const std::string& p) { return t < p; });
    while (it != prefixes_.begin()) {
        --it;
        if (token.starts_with(*it))
            return true;
        if (it->empty() || (*it)[0] != (token.empty() ? '\0' : token[0]))
            break;
    }
    return false;
}

std::vector<std::string> load_word_list(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw NotFoundError("cannot open word list " + path.string());
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        auto last = line.find_last_not_of(" \t\r");
        words.push_back(lower_ascii(line.substr(first, last - first + 1)));
    }
    return words;
}

Lexicon load_lexicon(const std::filesystem::path& path)
{
    return Lexicon(path.stem().string(), load_word_list(path));
}

double lexicon_ratio(std::span<const std::string> tokens, const Lexicon& lex)
{
    auto hits = std::count_if(tokens.begin(), tokens.end(), [&](const std::string& t) { return lex.matches(t); });
    return static_cast<double>(hits) / static_cast<double>(std::max<std::size_t>(1, tokens.size()));
}

} // namespace mediaprof

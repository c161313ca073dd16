#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

namespace mediaprof {

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

struct TokenizedText {
    std::vector<std::string> tokens;      // lowercased
    std::vector<std::string> raw_tokens;  // original casing, parallel to tokens
    std::vector<std::string> punctuation; // one entry per punctuation code point
    int sentence_count = 0;
};

/// Rule-based tokenizer. Tokens are maximal runs of letters, digits and
/// apostrophes (leading/trailing apostrophes stripped). Sentences end at
/// `.`, `!` or `?` followed by whitespace and an uppercase letter, or by the
/// end of the text; a period after a single letter or a known abbreviation
/// does not end a sentence.
class Tokenizer {
public:
    Tokenizer();
    explicit Tokenizer(std::unordered_set<std::string> abbreviations);

    static Tokenizer from_file(const std::filesystem::path& path);

    TokenizedText operator()(std::string_view text) const;

private:
    std::unordered_set<std::string> abbreviations_;
};

/// Tokenizes with the built-in abbreviation list.
TokenizedText tokenize(std::string_view text);

/// Decodes UTF-8 into code points; invalid bytes map to U+FFFD.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

// ---------------------------------------------------------------------------
// Word embeddings
// ---------------------------------------------------------------------------

enum class EmbeddingFormat { Auto, Text, Binary };

/// Immutable token -> vector table. Vectors are stored column-wise.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(int dim);

    int dim() const { return dim_; }
    std::size_t size() const { return tokens_.size(); }

    /// Adds `token` unless already present; returns false for duplicates.
    bool add(const std::string& token, const Eigen::Ref<const Eigen::VectorXf>& vec);

    /// Column view of the vector for `token`, or nullopt when out of vocabulary.
    std::optional<Eigen::Map<const Eigen::VectorXf>> lookup(std::string_view token) const;

    const std::vector<std::string>& tokens() const { return tokens_; }

private:
    int dim_ = 0;
    std::vector<std::string> tokens_;
    std::vector<float> data_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Loads word2vec text or binary format. `Auto` picks binary for a `.bin`
/// extension and text otherwise.
EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format = EmbeddingFormat::Auto);
EmbeddingTable parse_embeddings_text(std::string_view data);
EmbeddingTable parse_embeddings_binary(std::string_view data);

void save_embeddings(const std::filesystem::path& path, const EmbeddingTable& table, EmbeddingFormat format);

/// Reads only the `<vocab> <dim>` header line.
int read_embedding_dim(const std::filesystem::path& path);

/// Mean of the in-vocabulary token vectors; the zero vector when none is found.
Eigen::VectorXd avg_embedding(std::span<const std::string> tokens, const EmbeddingTable& table);

// ---------------------------------------------------------------------------
// Lexicons
// ---------------------------------------------------------------------------

/// Word list with literal entries and `stem*` prefix patterns.
class Lexicon {
public:
    Lexicon() = default;
    Lexicon(std::string name, const std::vector<std::string>& terms);

    const std::string& name() const { return name_; }
    bool matches(std::string_view token) const;
    std::size_t term_count() const { return exact_.size() + prefixes_.size(); }

private:
    std::string name_;
    std::unordered_set<std::string> exact_;
    std::vector<std::string> prefixes_;
};

/// One term per line, `#` starts a comment, trailing `*` marks a prefix.
Lexicon load_lexicon(const std::filesystem::path& path);

/// Plain list loader (one entry per line, `#` comments) used for phrase and
/// suffix resources.
std::vector<std::string> load_word_list(const std::filesystem::path& path);

/// matches / max(1, |tokens|).
double lexicon_ratio(std::span<const std::string> tokens, const Lexicon& lex);

} // namespace mediaprof

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mediaprof/embedlex.hpp"
#include "mediaprof/error.hpp"

namespace mediaprof {

namespace {

std::string read_all(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw NotFoundError("cannot open embedding file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> parts;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_ws(line[i]))
            ++i;
        std::size_t j = i;
        while (j < line.size() && !is_ws(line[j]))
            ++j;
        if (j > i)
            parts.push_back(line.substr(i, j - i));
        i = j;
    }
    return parts;
}

std::pair<std::size_t, int> parse_header(std::string_view line)
{
    auto parts = split_ws(line);
    std::size_t vocab = 0;
    int dim = 0;
    if (parts.size() != 2
        || std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(), vocab).ec != std::errc{}
        || std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), dim).ec != std::errc{} || dim <= 0)
        throw ParseError("embedding header must be '<vocab_size> <dim>', got '" + std::string(line) + "'");
    return {vocab, dim};
}

float to_little_endian_float(const char* bytes)
{
    std::uint32_t bits = 0;
    std::memcpy(&bits, bytes, 4);
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap32(bits);
    return std::bit_cast<float>(bits);
}

void append_little_endian_float(std::string& out, float v)
{
    auto bits = std::bit_cast<std::uint32_t>(v);
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap32(bits);
    char bytes[4];
    std::memcpy(bytes, &bits, 4);
    out.append(bytes, 4);
}

} // namespace

EmbeddingTable::EmbeddingTable(int dim) : dim_(dim)
{
    require(dim > 0, "embedding dim must be positive");
}

bool EmbeddingTable::add(const std::string& token, const Eigen::Ref<const Eigen::VectorXf>& vec)
{
    require(vec.size() == dim_, "embedding vector length does not match table dim");
    if (index_.contains(token))
        return false;
    index_.emplace(token, tokens_.size());
    tokens_.push_back(token);
    data_.insert(data_.end(), vec.data(), vec.data() + vec.size());
    return true;
}

std::optional<Eigen::Map<const Eigen::VectorXf>> EmbeddingTable::lookup(std::string_view token) const
{
    auto it = index_.find(std::string(token));
    if (it == index_.end())
        return std::nullopt;
    return Eigen::Map<const Eigen::VectorXf>(data_.data() + it->second * static_cast<std::size_t>(dim_), dim_);
}

EmbeddingTable parse_embeddings_text(std::string_view data)
{
    auto eol = data.find('\n');
    auto [vocab, dim] = parse_header(data.substr(0, eol));
    EmbeddingTable table(dim);
    Eigen::VectorXf vec(dim);

    std::size_t rows = 0;
    std::size_t line_no = 1;
    std::size_t pos = eol == std::string_view::npos ? data.size() : eol + 1;
    while (pos < data.size()) {
        auto end = data.find('\n', pos);
        if (end == std::string_view::npos)
            end = data.size();
        auto line = data.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        auto parts = split_ws(line);
        if (parts.empty())
            continue;
        if (parts.size() != static_cast<std::size_t>(dim) + 1)
            throw ParseError("embedding line " + std::to_string(line_no) + ": expected " + std::to_string(dim)
                             + " values, got " + std::to_string(parts.size() - 1));
        for (int k = 0; k < dim; ++k) {
            auto p = parts[k + 1];
            double v = 0;
            auto res = std::from_chars(p.data(), p.data() + p.size(), v);
            if (res.ec != std::errc{} || res.ptr != p.data() + p.size() || !std::isfinite(v))
                throw ParseError("embedding line " + std::to_string(line_no) + ": bad value '" + std::string(p)
                                 + "'");
            vec[k] = static_cast<float>(v);
        }
        table.add(std::string(parts[0]), vec);
        ++rows;
    }
    if (rows != vocab)
        throw ParseError("embedding header declares " + std::to_string(vocab) + " rows, found "
                         + std::to_string(rows));
    return table;
}

EmbeddingTable parse_embeddings_binary(std::string_view data)
{
    auto eol = data.find('\n');
    if (eol == std::string_view::npos)
        throw ParseError("binary embedding file has no header line");
    auto [vocab, dim] = parse_header(data.substr(0, eol));
    EmbeddingTable table(dim);
    Eigen::VectorXf vec(dim);
    const std::size_t vec_bytes = static_cast<std::size_t>(dim) * 4;

    std::size_t pos = eol + 1;
    for (std::size_t row = 0; row < vocab; ++row) {
        while (pos < data.size() && (data[pos] == '\n' || data[pos] == '\r'))
            ++pos;
        auto space = data.find(' ', pos);
        if (space == std::string_view::npos || space == pos)
            throw ParseError("binary embedding entry " + std::to_string(row) + ": missing token");
        std::string token(data.substr(pos, space - pos));
        pos = space + 1;
        if (data.size() - pos < vec_bytes)
            throw ParseError("binary embedding entry " + std::to_string(row) + " ('" + token + "'): truncated vector");
        for (int k = 0; k < dim; ++k) {
            float v = to_little_endian_float(data.data() + pos + 4 * static_cast<std::size_t>(k));
            if (!std::isfinite(v))
                throw ParseError("binary embedding entry '" + token + "': non-finite value");
            vec[k] = v;
        }
        pos += vec_bytes;
        table.add(token, vec);
    }
    return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format)
{
    if (format == EmbeddingFormat::Auto)
        format = path.extension() == ".bin" ? EmbeddingFormat::Binary : EmbeddingFormat::Text;
    auto data = read_all(path);
    try {
        return format == EmbeddingFormat::Binary ? parse_embeddings_binary(data) : parse_embeddings_text(data);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingTable& table, EmbeddingFormat format)
{
    if (format == EmbeddingFormat::Auto)
        format = path.extension() == ".bin" ? EmbeddingFormat::Binary : EmbeddingFormat::Text;
    std::string out = std::to_string(table.size()) + " " + std::to_string(table.dim()) + "\n";
    for (const auto& token : table.tokens()) {
        auto vec = *table.lookup(token);
        out += token;
        if (format == EmbeddingFormat::Binary) {
            out += ' ';
            for (int k = 0; k < table.dim(); ++k)
                append_little_endian_float(out, vec[k]);
            out += '\n';
        } else {
            char buf[32];
            for (int k = 0; k < table.dim(); ++k) {
                auto res = std::to_chars(buf, buf + sizeof buf, vec[k]);
                out += ' ';
                out.append(buf, res.ptr);
            }
            out += '\n';
        }
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw NotFoundError("cannot write " + path.string());
    f << out;
}

int read_embedding_dim(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw NotFoundError("cannot open embedding file " + path.string());
    std::string line;
    std::getline(in, line);
    return parse_header(line).second;
}

Eigen::VectorXd avg_embedding(std::span<const std::string> tokens, const EmbeddingTable& table)
{
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(table.dim());
    std::size_t found = 0;
    for (const auto& token : tokens) {
        if (auto vec = table.lookup(token)) {
            sum += vec->cast<double>();
            ++found;
        }
    }
    if (found > 0)
        sum /= static_cast<double>(found);
    return sum;
}

} // namespace mediaprof

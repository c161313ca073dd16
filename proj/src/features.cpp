#include "mediaprof/features.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "mediaprof/error.hpp"
#include "mediaprof/hash.hpp"
#include "mediaprof/profilefeat.hpp"

namespace mediaprof {

using nlohmann::json;

FeatureManifest::FeatureManifest(std::vector<FeatureSpan> spans) : spans_(std::move(spans))
{
    for (const auto& s : spans_) {
        require(s.offset == dim_, "feature manifest spans must be contiguous");
        require(s.length > 0, "feature manifest spans must be non-empty");
        dim_ += s.length;
    }
}

FeatureManifest FeatureManifest::standard(int embedding_dim, std::size_t ngram_vocab_size)
{
    require(embedding_dim > 0, "embedding dim must be positive");
    std::vector<FeatureSpan> spans;
    int offset = 0;
    auto add = [&](std::string_view family, std::string_view feature, int length) {
        spans.push_back({std::string(family), std::string(feature), offset, length});
        offset += length;
    };
    add("traffic", "alexa_rank", 1);
    add("url", "structure", UrlFeatureBlock::kLength);
    if (ngram_vocab_size > 0)
        add("url", "ngrams", static_cast<int>(ngram_vocab_size));
    add("twitter", "has_account", 1);
    add("twitter", "verified", 1);
    add("twitter", "created", 1);
    add("twitter", "has_location", 1);
    add("twitter", "url_match", 2);
    add("twitter", "counts", 5);
    add("twitter", "description", embedding_dim);
    add("wikipedia", "has_page", 1);
    for (std::string_view seg : {"content", "infobox", "summary", "categories", "toc"})
        add("wikipedia", seg, embedding_dim);
    add("articles", "title", kArticleFeatureCount);
    add("articles", "body", kArticleFeatureCount);
    return FeatureManifest(std::move(spans));
}

const FeatureSpan& FeatureManifest::span(std::string_view family, std::string_view feature) const
{
    for (const auto& s : spans_)
        if (s.family == family && s.feature == feature)
            return s;
    throw ValidationError("no feature '" + std::string(family) + ":" + std::string(feature) + "' in manifest");
}

int FeatureManifest::family_dim(std::string_view family) const
{
    int d = 0;
    for (const auto& s : spans_)
        if (s.family == family)
            d += s.length;
    return d;
}

std::vector<std::string> FeatureManifest::valid_selectors() const
{
    std::vector<std::string> out{"all"};
    for (auto fam : kFamilies) {
        out.emplace_back(fam);
        for (const auto& s : spans_)
            if (s.family == fam)
                out.push_back(s.family + ":" + s.feature);
    }
    return out;
}

std::vector<int> FeatureManifest::select(const std::vector<std::string>& selectors) const
{
    if (selectors.empty())
        throw ValidationError("empty feature family selection");
    std::set<int> cols;
    auto add_span = [&](const FeatureSpan& s) {
        for (int i = 0; i < s.length; ++i)
            cols.insert(s.offset + i);
    };
    for (const auto& sel : selectors) {
        bool matched = false;
        const auto colon = sel.find(':');
        const std::string family = sel.substr(0, colon);
        const std::string feature = colon == std::string::npos ? "*" : sel.substr(colon + 1);
        for (const auto& s : spans_) {
            if (sel == "all" || (s.family == family && (feature == "*" || s.feature == feature))) {
                add_span(s);
                matched = true;
            }
        }
        if (!matched) {
            std::string valid;
            for (const auto& v : valid_selectors())
                valid += (valid.empty() ? "" : ", ") + v;
            throw ValidationError("unknown feature family '" + sel + "'; valid names: " + valid);
        }
    }
    return {cols.begin(), cols.end()};
}

std::vector<int> FeatureManifest::without_family(std::string_view family) const
{
    std::vector<int> cols;
    for (const auto& s : spans_)
        if (s.family != family)
            for (int i = 0; i < s.length; ++i)
                cols.push_back(s.offset + i);
    return cols;
}

json FeatureManifest::to_json() const
{
    json spans = json::array();
    for (const auto& s : spans_)
        spans.push_back({{"family", s.family}, {"feature", s.feature}, {"offset", s.offset}, {"length", s.length}});
    return {{"dim", dim_}, {"spans", std::move(spans)}, {"article_features", article_manifest_json()}};
}

FeatureManifest FeatureManifest::from_json(const json& j)
{
    std::vector<FeatureSpan> spans;
    for (const auto& s : j.at("spans"))
        spans.push_back({s.at("family").get<std::string>(), s.at("feature").get<std::string>(),
                         s.at("offset").get<int>(), s.at("length").get<int>()});
    return FeatureManifest(std::move(spans));
}

std::string FeatureManifest::hash(std::string_view resource_hash) const
{
    return sha256_hex(to_json().dump() + "|" + std::string(resource_hash));
}

std::string compute_resource_hash(const std::filesystem::path& resource_dir,
                                  const std::filesystem::path& embedding_path)
{
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(resource_dir))
        if (entry.is_regular_file())
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    Sha256 h;
    for (const auto& f : files) {
        h.update(std::filesystem::relative(f, resource_dir).generic_string());
        h.update(":");
        h.update(sha256_file(f));
        h.update("\n");
    }
    h.update("embeddings:");
    h.update(sha256_file(embedding_path));
    return h.hex_digest();
}

FeatureResources load_feature_resources(const std::filesystem::path& resource_dir,
                                        const std::filesystem::path& embedding_path)
{
    FeatureResources r;
    r.articles = ArticleResources::load(resource_dir);
    r.url = UrlResources::load(resource_dir);
    r.embeddings = load_embeddings(embedding_path);
    r.resource_hash = compute_resource_hash(resource_dir, embedding_path);
    return r;
}

Eigen::VectorXd extract_features(const MediumRecord& record, const EvidenceBundle& bundle,
                                 const FeatureResources& res, const FeatureManifest& manifest)
{
    const int dim = res.embeddings.dim();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(manifest.dim());
    auto put = [&](std::string_view family, std::string_view feature, const Eigen::VectorXd& v) {
        const auto& s = manifest.span(family, feature);
        require(v.size() == s.length, "feature block length mismatch for " + std::string(family) + ":"
                                          + std::string(feature));
        x.segment(s.offset, s.length) = v;
    };

    put("traffic", "alexa_rank", traffic_feature(bundle.alexa_rank));
    put("url", "structure", url_structure_features(record.url, res.url).flatten());
    if (res.ngrams) {
        const auto sparse = url_char_ngrams(record.url, *res.ngrams);
        put("url", "ngrams", Eigen::VectorXd(sparse));
    }

    const auto tw = twitter_features(bundle.twitter, record.url, res.embeddings);
    const Eigen::VectorXd tw_flat = tw.flatten();
    require(tw_flat.size() == TwitterFeatureBlock::length(dim), "twitter block length mismatch");
    put("twitter", "has_account", tw_flat.segment(0, 1));
    put("twitter", "verified", tw_flat.segment(1, 1));
    put("twitter", "created", tw_flat.segment(2, 1));
    put("twitter", "has_location", tw_flat.segment(3, 1));
    put("twitter", "url_match", tw_flat.segment(4, 2));
    put("twitter", "counts", tw_flat.segment(6, 5));
    put("twitter", "description", tw_flat.segment(11, dim));

    const auto wiki = wiki_features(bundle.wiki, res.embeddings);
    require(wiki.flatten().size() == WikiFeatureBlock::length(dim), "wikipedia block length mismatch");
    put("wikipedia", "has_page", Eigen::VectorXd::Constant(1, wiki.has_page));
    put("wikipedia", "content", wiki.content);
    put("wikipedia", "infobox", wiki.infobox);
    put("wikipedia", "summary", wiki.summary);
    put("wikipedia", "categories", wiki.categories);
    put("wikipedia", "toc", wiki.toc);

    const Eigen::VectorXd art = medium_article_block(bundle.articles, res.articles);
    put("articles", "title", art.head(kArticleFeatureCount));
    put("articles", "body", art.tail(kArticleFeatureCount));
    return x;
}

std::vector<int> FeatureTable::labels(Task task) const
{
    std::vector<int> y;
    y.reserve(media.size());
    for (const auto& m : media) {
        switch (task) {
        case Task::Factuality: y.push_back(static_cast<int>(m.factuality)); break;
        case Task::Bias7: y.push_back(static_cast<int>(m.bias7)); break;
        case Task::Bias3: y.push_back(map_bias_7_to_3(static_cast<int>(m.bias7))); break;
        }
    }
    return y;
}

Eigen::MatrixXd FeatureTable::columns(const std::vector<int>& cols) const
{
    Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        out.col(static_cast<Eigen::Index>(c)) = X.col(cols[c]);
    return out;
}

json FeatureTable::to_json() const
{
    json rows = json::array();
    for (std::size_t i = 0; i < media.size(); ++i) {
        rows.push_back({{"medium_id", media[i].medium_id},
                        {"url", media[i].url},
                        {"factuality", static_cast<int>(media[i].factuality)},
                        {"bias7", static_cast<int>(media[i].bias7)},
                        {"features", json::array()}});
        auto& feats = rows.back()["features"];
        for (Eigen::Index c = 0; c < X.cols(); ++c)
            feats.push_back(X(static_cast<Eigen::Index>(i), c));
    }
    return {{"version", 1}, {"manifest", manifest.to_json()}, {"manifest_hash", manifest_hash}, {"rows", rows}};
}

FeatureTable FeatureTable::from_json(const json& j)
{
    FeatureTable t;
    t.manifest = FeatureManifest::from_json(j.at("manifest"));
    t.manifest_hash = j.at("manifest_hash").get<std::string>();
    const auto& rows = j.at("rows");
    t.X.resize(static_cast<Eigen::Index>(rows.size()), t.manifest.dim());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        MediumRecord m;
        m.medium_id = r.at("medium_id").get<std::string>();
        m.url = r.at("url").get<std::string>();
        const int fact = r.at("factuality").get<int>();
        const int bias = r.at("bias7").get<int>();
        if (fact < 0 || fact > 2 || bias < 0 || bias > 6)
            throw ValidationError("feature table row " + std::to_string(i) + ": label out of range");
        m.factuality = static_cast<Factuality>(fact);
        m.bias7 = static_cast<Bias7>(bias);
        const auto feats = r.at("features").get<std::vector<double>>();
        if (static_cast<int>(feats.size()) != t.manifest.dim())
            throw ValidationError("feature table row " + std::to_string(i) + ": expected "
                                  + std::to_string(t.manifest.dim()) + " features");
        t.X.row(static_cast<Eigen::Index>(i)) =
            Eigen::Map<const Eigen::RowVectorXd>(feats.data(), static_cast<Eigen::Index>(feats.size()));
        t.media.push_back(std::move(m));
    }
    return t;
}

} // namespace mediaprof

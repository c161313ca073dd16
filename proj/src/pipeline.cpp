#include "mediaprof/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mediaprof/error.hpp"
#include "mediaprof/hash.hpp"
#include "mediaprof/parallel.hpp"

namespace mediaprof {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto end = std::min(s.find(sep, start), s.size());
        const auto part = trim(s.substr(start, end - start));
        if (!part.empty())
            out.emplace_back(part);
        start = end + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value)
{
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end)
        throw UsageError("config key '" + std::string(key) + "': not a number: '" + std::string(value) + "'");
    return out;
}

bool parse_bool(std::string_view key, std::string_view value)
{
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    throw UsageError("config key '" + std::string(key) + "': expected true or false, got '" + std::string(value) + "'");
}

struct Range {
    int lo, hi, step;
};

Range parse_range(std::string_view key, std::string_view spec)
{
    const auto parts = split(spec, ':');
    if (parts.size() != 3)
        throw UsageError("config key '" + std::string(key) + "': expected lo:hi:step, got '" + std::string(spec) + "'");
    Range r{parse_number<int>(key, parts[0]), parse_number<int>(key, parts[1]), parse_number<int>(key, parts[2])};
    if (r.step <= 0 || r.lo > r.hi)
        throw UsageError("config key '" + std::string(key) + "': empty range '" + std::string(spec) + "'");
    return r;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw NotFoundError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view text)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw NotFoundError("cannot write " + path.string());
    out << text;
}

json read_json(const fs::path& path)
{
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

int task_rank(Task t)
{
    switch (t) {
    case Task::Factuality: return 0;
    case Task::Bias7: return 1;
    case Task::Bias3: return 2;
    }
    return 3;
}

} // namespace

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

void PipelineConfig::set(std::string_view key, std::string_view value, const fs::path& base)
{
    auto path_value = [&] {
        fs::path p{std::string(value)};
        return p.is_relative() && !base.empty() ? base / p : p;
    };
    if (key == "corpus")
        corpus = path_value();
    else if (key == "bundles")
        bundles = path_value();
    else if (key == "embeddings")
        embeddings = path_value();
    else if (key == "resources")
        resources = path_value();
    else if (key == "cache_dir")
        cache_dir = path_value();
    else if (key == "output_dir")
        output_dir = path_value();
    else if (key == "families") {
        families = split(value, ',');
        if (families.empty())
            throw UsageError("config key 'families': empty selection");
    } else if (key == "task") {
        tasks_for(value);
        task = std::string(value);
    } else if (key == "family_table")
        family_table = parse_bool(key, value);
    else if (key == "enable_url_ngrams")
        enable_url_ngrams = parse_bool(key, value);
    else if (key == "ngram_min")
        ngram_min = parse_number<int>(key, value);
    else if (key == "ngram_max")
        ngram_max = parse_number<int>(key, value);
    else if (key == "k_outer")
        model.k_outer = parse_number<int>(key, value);
    else if (key == "k_inner")
        model.k_inner = parse_number<int>(key, value);
    else if (key == "seed")
        model.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "smo_tol")
        model.smo.tol = parse_number<double>(key, value);
    else if (key == "smo_max_passes")
        model.smo.max_passes = parse_number<int>(key, value);
    else if (key == "grid_c") {
        parse_range(key, value);
        grid_c = std::string(value);
        rebuild_grid();
    } else if (key == "grid_gamma") {
        parse_range(key, value);
        grid_gamma = std::string(value);
        rebuild_grid();
    } else if (key == "grid_kernels") {
        grid_kernels = std::string(value);
        rebuild_grid();
    } else
        throw UsageError("unknown config key '" + std::string(key) + "'");
    if (key == "k_outer" || key == "k_inner")
        if (model.k_outer < 2 || model.k_inner < 2)
            throw UsageError("fold counts must be at least 2");
    if (key == "ngram_min" || key == "ngram_max")
        if (ngram_min < 2 || ngram_max > 5 || ngram_min > ngram_max)
            throw UsageError("n-gram range must lie within [2, 5]");
}

void PipelineConfig::rebuild_grid()
{
    const Range c = parse_range("grid_c", grid_c);
    const Range g = parse_range("grid_gamma", grid_gamma);
    bool linear = false;
    bool rbf = false;
    for (const auto& k : split(grid_kernels, ',')) {
        const KernelKind kind = parse_kernel_kind(k);
        (kind == KernelKind::Linear ? linear : rbf) = true;
    }
    if (!linear && !rbf)
        throw UsageError("config key 'grid_kernels': no kernel selected");
    model.grid = make_grid(c.lo, c.hi, c.step, g.lo, g.hi, g.step, linear, rbf);
}

PipelineConfig PipelineConfig::load(const fs::path& path)
{
    std::string text;
    try {
        text = read_file(path);
    } catch (const NotFoundError&) {
        throw UsageError("cannot open config file " + path.string());
    }
    PipelineConfig config;
    const fs::path base = path.parent_path();
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"')
                quoted = !quoted;
            else if (line[i] == '#' && !quoted) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty() || line.front() == '[')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        try {
            config.set(key, value, base);
        } catch (const std::exception& e) {
            throw UsageError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

json PipelineConfig::to_json() const
{
    return {{"corpus", corpus.generic_string()},
            {"bundles", bundles.generic_string()},
            {"embeddings", embeddings.generic_string()},
            {"resources", resources.generic_string()},
            {"families", families},
            {"task", task},
            {"family_table", family_table},
            {"enable_url_ngrams", enable_url_ngrams},
            {"ngram_range", {ngram_min, ngram_max}},
            {"k_outer", model.k_outer},
            {"k_inner", model.k_inner},
            {"seed", model.seed},
            {"grid_c", grid_c},
            {"grid_gamma", grid_gamma},
            {"grid_kernels", grid_kernels},
            {"grid_size", model.grid.size()},
            {"smo_tol", model.smo.tol},
            {"smo_max_passes", model.smo.max_passes}};
}

std::vector<Task> tasks_for(std::string_view selection)
{
    if (selection == "bias")
        return {Task::Bias7, Task::Bias3};
    if (selection == "all")
        return {Task::Factuality, Task::Bias7, Task::Bias3};
    return {parse_task(selection)};
}

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

ExtractionPlan plan_extraction(const PipelineConfig& config, const std::vector<MediumRecord>& corpus)
{
    if (!fs::is_regular_file(config.embeddings))
        throw NotFoundError("embedding file not found: " + config.embeddings.string());
    ExtractionPlan plan;
    std::string resource_hash = compute_resource_hash(config.resources, config.embeddings);
    if (config.enable_url_ngrams) {
        std::vector<std::string> urls;
        for (const auto& m : corpus)
            urls.push_back(m.url);
        plan.ngrams.emplace(urls, config.ngram_min, config.ngram_max);
        std::string grams;
        for (const auto& g : plan.ngrams->grams())
            grams += g + "\n";
        resource_hash += "|ngrams:" + sha256_hex(grams);
    }
    plan.manifest = FeatureManifest::standard(read_embedding_dim(config.embeddings),
                                              plan.ngrams ? plan.ngrams->size() : 0);
    plan.manifest_hash = plan.manifest.hash(resource_hash);
    return plan;
}

ExtractSummary cmd_extract(const PipelineConfig& config)
{
    const auto corpus = load_corpus(config.corpus);
    ExtractionPlan plan = plan_extraction(config, corpus);
    FeatureResources res = load_feature_resources(config.resources, config.embeddings);
    res.ngrams = plan.ngrams;

    const fs::path row_dir = config.cache_dir / "media";
    fs::create_directories(row_dir);

    enum class Outcome { Computed, Cached, Skipped };
    std::vector<Outcome> outcome(corpus.size(), Outcome::Skipped);
    std::vector<Eigen::VectorXd> rows(corpus.size());

    parallel_for(corpus.size(), [&](std::size_t i) {
        const auto& record = corpus[i];
        const fs::path bundle_file = config.bundles / record.medium_id / "bundle.json";
        if (!fs::is_regular_file(bundle_file))
            return;
        const std::string key =
            sha256_hex(sha256_file(bundle_file) + "|" + plan.manifest_hash + "|" + record.url);
        const fs::path row_file = row_dir / (record.medium_id + ".json");
        if (fs::is_regular_file(row_file)) {
            try {
                const json cached = json::parse(read_file(row_file));
                if (cached.at("key").get<std::string>() == key) {
                    const auto v = cached.at("features").get<std::vector<double>>();
                    if (static_cast<int>(v.size()) == plan.manifest.dim()) {
                        rows[i] = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
                        outcome[i] = Outcome::Cached;
                        return;
                    }
                }
            } catch (const std::exception&) {
                // unreadable cache entry: recompute
            }
        }
        const EvidenceBundle bundle = load_bundle(config.bundles, record.medium_id);
        rows[i] = extract_features(record, bundle, res, plan.manifest);
        json entry{{"key", key}, {"medium_id", record.medium_id}, {"features", json::array()}};
        for (Eigen::Index c = 0; c < rows[i].size(); ++c)
            entry["features"].push_back(rows[i][c]);
        write_file(row_file, entry.dump());
        outcome[i] = Outcome::Computed;
    });

    ExtractSummary summary;
    summary.table.manifest = plan.manifest;
    summary.table.manifest_hash = plan.manifest_hash;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        switch (outcome[i]) {
        case Outcome::Skipped:
            summary.skipped.push_back(corpus[i].medium_id);
            std::clog << "warning: no bundle for medium '" << corpus[i].medium_id << "', skipped\n";
            continue;
        case Outcome::Cached: ++summary.cache_hits; break;
        case Outcome::Computed: ++summary.computed; break;
        }
        kept.push_back(i);
    }
    summary.table.X.resize(static_cast<Eigen::Index>(kept.size()), plan.manifest.dim());
    for (std::size_t r = 0; r < kept.size(); ++r) {
        summary.table.X.row(static_cast<Eigen::Index>(r)) = rows[kept[r]].transpose();
        summary.table.media.push_back(corpus[kept[r]]);
    }

    write_file(config.cache_dir / "features.json", summary.table.to_json().dump());
    std::string skipped;
    for (const auto& id : summary.skipped)
        skipped += id + "\n";
    write_file(config.cache_dir / "skipped.txt", skipped);

    std::clog << "extracted " << kept.size() << " media (" << summary.computed << " computed, " << summary.cache_hits
              << " cached, " << summary.skipped.size() << " skipped), dim " << plan.manifest.dim() << "\n";
    for (auto fam : kFamilies)
        std::clog << "  " << fam << ": " << plan.manifest.family_dim(fam) << "\n";
    return summary;
}

FeatureTable load_feature_cache(const PipelineConfig& config)
{
    const fs::path path = config.cache_dir / "features.json";
    if (!fs::is_regular_file(path))
        throw NotFoundError("feature cache " + path.string() + " not found; run `mediaprof extract` first");
    FeatureTable table;
    try {
        table = FeatureTable::from_json(read_json(path));
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    const auto plan = plan_extraction(config, load_corpus(config.corpus));
    if (table.manifest_hash != plan.manifest_hash)
        throw ValidationError("feature cache " + path.string()
                              + " is stale (manifest hash mismatch); re-run `mediaprof extract`");
    if (table.media.empty())
        throw ValidationError("feature cache " + path.string() + " has no rows; check skipped.txt and re-extract");
    return table;
}

// ---------------------------------------------------------------------------
// Training, evaluation, ablation
// ---------------------------------------------------------------------------

std::vector<fs::path> cmd_train(const PipelineConfig& config)
{
    const FeatureTable table = load_feature_cache(config);
    const auto cols = table.manifest.select(config.families);
    const Eigen::MatrixXd X = table.columns(cols);
    std::vector<fs::path> written;
    for (Task task : tasks_for(config.task)) {
        const auto labels = table.labels(task);
        const Eigen::VectorXi y = Eigen::Map<const Eigen::VectorXi>(labels.data(), static_cast<Eigen::Index>(labels.size()));
        const auto search = grid_search(X, y, config.model.grid, config.model.k_inner, config.model.seed,
                                        num_classes(task), config.model.smo);
        MultiModel model = train_classifier(X, y, search.best, config.model.smo);
        model.manifest_hash = table.manifest_hash;
        json doc = model_to_json(model);
        doc["task"] = std::string(to_string(task));
        doc["families"] = config.families;
        doc["columns"] = cols;
        const fs::path out = config.output_dir / ("model_" + std::string(to_string(task)) + ".json");
        write_file(out, doc.dump(1));
        written.push_back(out);
    }
    return written;
}

std::vector<fs::path> cmd_evaluate(const PipelineConfig& config)
{
    const FeatureTable table = load_feature_cache(config);
    std::vector<std::vector<std::string>> rows;
    if (config.family_table) {
        rows = standard_family_rows(table.manifest);
        rows.push_back({"all"});
    } else {
        rows.push_back(config.families);
    }
    std::vector<fs::path> written;
    for (Task task : tasks_for(config.task)) {
        const auto reports = run_family_table(table, rows, task, config.model);
        const Metrics baseline = majority_baseline(table.labels(task), num_classes(task));
        json jrows = json::array();
        for (const auto& r : reports)
            jrows.push_back(report_to_json(r));
        const json doc{{"kind", "evaluate"},
                       {"task", std::string(to_string(task))},
                       {"baseline", metrics_to_json(baseline)},
                       {"rows", std::move(jrows)},
                       {"manifest_hash", table.manifest_hash},
                       {"config", config.to_json()}};
        const fs::path stem = config.output_dir / "reports" / ("evaluate_" + std::string(to_string(task)));
        write_file(stem.string() + ".json", doc.dump(1));
        write_file(stem.string() + ".md", render_table(task, reports, baseline));
        written.emplace_back(stem.string() + ".json");
    }
    return written;
}

std::vector<fs::path> cmd_ablate(const PipelineConfig& config)
{
    const FeatureTable table = load_feature_cache(config);
    std::vector<fs::path> written;
    for (Task task : tasks_for(config.task)) {
        const AblationTable t = ablate(table, task, config.model);
        json doc = ablation_to_json(t);
        doc["manifest_hash"] = table.manifest_hash;
        doc["config"] = config.to_json();
        const fs::path stem = config.output_dir / "reports" / ("ablate_" + std::string(to_string(task)));
        write_file(stem.string() + ".json", doc.dump(1));
        write_file(stem.string() + ".md", render_table(task, t.rows, t.baseline));
        written.emplace_back(stem.string() + ".json");
    }
    return written;
}

// ---------------------------------------------------------------------------
// Consolidated report
// ---------------------------------------------------------------------------

std::string cmd_report(const fs::path& output_dir)
{
    const fs::path dir = output_dir / "reports";
    struct Entry {
        int task;
        int kind;
        std::string file;
        json doc;
    };
    std::vector<Entry> entries;
    if (fs::is_directory(dir)) {
        for (const auto& e : fs::directory_iterator(dir)) {
            if (!e.is_regular_file() || e.path().extension() != ".json")
                continue;
            json doc = read_json(e.path());
            try {
                const Task task = parse_task(doc.at("task").get<std::string>());
                const std::string kind = doc.at("kind").get<std::string>();
                if (kind != "evaluate" && kind != "ablation")
                    throw ValidationError("unknown report kind '" + kind + "'");
                entries.push_back({task_rank(task), kind == "evaluate" ? 0 : 1, e.path().filename().string(),
                                   std::move(doc)});
            } catch (const json::exception& ex) {
                throw ParseError(e.path().string() + ": " + ex.what());
            } catch (const std::exception& ex) {
                throw ParseError(e.path().string() + ": " + ex.what());
            }
        }
    }
    if (entries.empty())
        throw UsageError("no reports under " + dir.string() + "; run `mediaprof evaluate` or `mediaprof ablate` first");
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.task, a.kind, a.file) < std::tie(b.task, b.kind, b.file);
    });

    std::ostringstream out;
    out << "# Media profiling results\n";
    for (const auto& e : entries) {
        const Task task = parse_task(e.doc.at("task").get<std::string>());
        std::vector<EvalReport> rows;
        try {
            for (const auto& r : e.doc.at("rows"))
                rows.push_back(report_from_json(r));
        } catch (const std::exception& ex) {
            throw ParseError(e.file + ": " + ex.what());
        }
        const Metrics baseline = metrics_from_json(e.doc.at("baseline"));
        out << "\n## " << (e.kind == 0 ? "Evaluation" : "Ablation") << ": " << to_string(task) << "\n\n"
            << "Source: `" << e.file << "`\n\n"
            << render_table(task, rows, baseline) << "\n";
        if (task == Task::Bias7) {
            for (const auto& r : rows)
                if (r.mapped_bias3)
                    out << "Mapped to 3 classes (" << r.name << "): macro-F1 " << std::fixed << std::setprecision(2)
                        << 100.0 * r.mapped_bias3->macro_f1 << ", acc " << 100.0 * r.mapped_bias3->accuracy << "\n"
                        << std::defaultfloat;
        }
        out << "\nSeed: " << e.doc.at("config").value("seed", 0ULL) << "  \n"
            << "Manifest hash: `" << e.doc.value("manifest_hash", std::string()) << "`  \n";
        if (!rows.empty())
            out << "Fold digest: `" << rows.front().fold_digest << "`\n";
        out << "\n<details><summary>Configuration</summary>\n\n```json\n" << e.doc.at("config").dump(1)
            << "\n```\n\n</details>\n";
    }
    const std::string text = out.str();
    write_file(output_dir / "report.md", text);
    return text;
}

} // namespace mediaprof

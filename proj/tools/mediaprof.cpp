// mediaprof: feature extraction, training, evaluation and ablation for
// medium-level factuality and bias prediction.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mediaprof/error.hpp"
#include "mediaprof/pipeline.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string families;
    std::string task;
    bool enable_url_ngrams = false;
};

mediaprof::PipelineConfig resolve(const Overrides& o)
{
    mediaprof::PipelineConfig cfg =
        o.config.empty() ? mediaprof::PipelineConfig{} : mediaprof::PipelineConfig::load(o.config);
    if (o.seed)
        cfg.set("seed", std::to_string(*o.seed));
    if (!o.families.empty())
        cfg.set("families", o.families);
    if (!o.task.empty())
        cfg.set("task", o.task);
    if (o.enable_url_ngrams)
        cfg.enable_url_ngrams = true;
    if (cfg.corpus.empty() || cfg.embeddings.empty() || cfg.resources.empty() || cfg.bundles.empty())
        throw mediaprof::UsageError("config must set corpus, bundles, embeddings and resources");
    return cfg;
}

void add_common(CLI::App* sub, Overrides& o)
{
    sub->add_option("--config", o.config, "TOML-style key = value config file")->required();
    sub->add_option("--seed", o.seed, "Seed for folds and shuffles");
    sub->add_option("--families", o.families, "Comma-separated selectors: all, family, family:feature");
    sub->add_option("--task", o.task, "factuality | bias7 | bias3 | bias | all");
    sub->add_flag("--enable-url-ngrams", o.enable_url_ngrams, "Add URL character n-grams to the url family");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Medium-level factuality and bias profiling"};
    app.require_subcommand(1);

    Overrides o;
    std::string report_dir;
    auto* extract = app.add_subcommand("extract", "Extract (or refresh cached) feature rows");
    auto* train = app.add_subcommand("train", "Train final models on every cached medium");
    auto* evaluate = app.add_subcommand("evaluate", "Cross-validated evaluation");
    auto* ablate = app.add_subcommand("ablate", "Leave-one-family-out ablation");
    auto* report = app.add_subcommand("report", "Consolidate report JSON files into markdown");
    for (auto* sub : {extract, train, evaluate, ablate})
        add_common(sub, o);
    report->add_option("--output-dir", report_dir, "Output directory of earlier runs");
    report->add_option("--config", o.config, "Config file (its output_dir is used)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (extract->parsed()) {
            const auto s = mediaprof::cmd_extract(resolve(o));
            std::cout << "rows: " << s.table.media.size() << ", dim: " << s.table.manifest.dim()
                      << ", skipped: " << s.skipped.size() << "\n";
        } else if (train->parsed()) {
            for (const auto& p : mediaprof::cmd_train(resolve(o)))
                std::cout << "wrote " << p.string() << "\n";
        } else if (evaluate->parsed()) {
            for (const auto& p : mediaprof::cmd_evaluate(resolve(o)))
                std::cout << "wrote " << p.string() << "\n";
        } else if (ablate->parsed()) {
            for (const auto& p : mediaprof::cmd_ablate(resolve(o)))
                std::cout << "wrote " << p.string() << "\n";
        } else if (report->parsed()) {
            std::filesystem::path dir = report_dir;
            if (dir.empty()) {
                if (o.config.empty())
                    throw mediaprof::UsageError("report needs --output-dir or --config");
                dir = mediaprof::PipelineConfig::load(o.config).output_dir;
            }
            std::cout << mediaprof::cmd_report(dir);
        }
    } catch (const mediaprof::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const mediaprof::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    } catch (const mediaprof::TrainingError& e) {
        std::cerr << "training error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kOk;
}

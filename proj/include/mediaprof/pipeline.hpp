#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mediaprof/eval.hpp"
#include "mediaprof/features.hpp"

namespace mediaprof {

struct PipelineConfig {
    std::filesystem::path corpus;
    std::filesystem::path bundles;
    std::filesystem::path embeddings;
    std::filesystem::path resources;
    std::filesystem::path cache_dir = "cache";
    std::filesystem::path output_dir = "out";
    std::vector<std::string> families{"all"};
    std::string task = "factuality"; // factuality | bias7 | bias3 | bias | all
    bool family_table = false;       // evaluate every family row instead of one selection
    bool enable_url_ngrams = false;
    int ngram_min = 2;
    int ngram_max = 5;
    // Base-2 exponent ranges lo:hi:step.
    std::string grid_c = "-5:15:2";
    std::string grid_gamma = "-15:3:2";
    std::string grid_kernels = "linear,rbf";
    ModelConfig model;

    /// Reads `key = value` lines; `#` starts a comment, values may be quoted.
    /// Relative paths resolve against the config file's directory. Unknown keys
    /// raise UsageError.
    static PipelineConfig load(const std::filesystem::path& path);
    /// Applies one `key = value` setting.
    void set(std::string_view key, std::string_view value, const std::filesystem::path& base = {});
    /// Rebuilds model.grid from the grid_* strings.
    void rebuild_grid();
    nlohmann::json to_json() const;
};

/// Expands a task selection; "bias" means bias7 then bias3.
std::vector<Task> tasks_for(std::string_view selection);

/// Feature layout and hash for the current inputs, as extraction would produce.
struct ExtractionPlan {
    FeatureManifest manifest;
    std::string manifest_hash;
    std::optional<NgramVocabulary> ngrams;
};

ExtractionPlan plan_extraction(const PipelineConfig& config, const std::vector<MediumRecord>& corpus);

struct ExtractSummary {
    FeatureTable table;
    std::vector<std::string> skipped; // medium ids without a bundle
    int computed = 0;
    int cache_hits = 0;
};

/// Extracts (or reuses cached) feature rows and writes
/// `<cache_dir>/features.json` and `<cache_dir>/skipped.txt`.
ExtractSummary cmd_extract(const PipelineConfig& config);

/// Loads the feature cache and checks it against the current inputs.
FeatureTable load_feature_cache(const PipelineConfig& config);

/// Trains one model per selected task on every cached medium and writes
/// `<output_dir>/model_<task>.json`. Returns the written paths.
std::vector<std::filesystem::path> cmd_train(const PipelineConfig& config);

/// Writes `<output_dir>/reports/evaluate_<task>.{json,md}`.
std::vector<std::filesystem::path> cmd_evaluate(const PipelineConfig& config);

/// Writes `<output_dir>/reports/ablate_<task>.{json,md}`.
std::vector<std::filesystem::path> cmd_ablate(const PipelineConfig& config);

/// Consolidates every report JSON under `<output_dir>/reports` into
/// `<output_dir>/report.md` and returns its text.
std::string cmd_report(const std::filesystem::path& output_dir);

} // namespace mediaprof

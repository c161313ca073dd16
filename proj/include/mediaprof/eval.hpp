#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "mediaprof/features.hpp"
#include "mediaprof/metrics.hpp"
#include "mediaprof/svm.hpp"

namespace mediaprof {

struct ModelConfig {
    std::vector<KernelParams> grid = default_grid();
    int k_outer = 5;
    int k_inner = 3;
    std::uint64_t seed = 42;
    SmoOptions smo;
};

struct FoldResult {
    Metrics metrics;
    Eigen::MatrixXi confusion;
    KernelParams params;
    int test_size = 0;
};

struct EvalReport {
    Task task = Task::Factuality;
    std::string name;                  // row label, e.g. "Full" or "twitter:counts"
    std::vector<std::string> families; // selectors used
    int dim = 0;
    std::uint64_t seed = 0;
    std::string fold_digest;
    std::vector<FoldResult> folds;
    Metrics pooled;    // over the union of out-of-fold predictions
    Metrics fold_mean; // mean of per-fold metrics
    Eigen::MatrixXi confusion;
    std::vector<int> predictions; // out-of-fold, aligned with the input rows
    /// For bias7 runs: pooled 7-way predictions mapped to three classes.
    std::optional<Metrics> mapped_bias3;
};

/// Outer stratified k-fold CV. Per fold: grid search on the training part
/// (standardizing inside each inner fold), train the final classifier on the
/// whole training part with the chosen parameters, predict the test part.
EvalReport cross_validate(const Eigen::Ref<const Eigen::MatrixXd>& X, std::span<const int> y, Task task,
                          const ModelConfig& config, std::string name = "Full",
                          std::vector<std::string> families = {"all"});

/// One report per selector list (each list is one table row).
std::vector<EvalReport> run_family_table(const FeatureTable& table,
                                         const std::vector<std::vector<std::string>>& rows, Task task,
                                         const ModelConfig& config);

/// Per-feature rows plus family unions, mirroring the per-source results table.
std::vector<std::vector<std::string>> standard_family_rows(const FeatureManifest& manifest);

struct AblationTable {
    Task task = Task::Factuality;
    Metrics baseline;
    std::vector<EvalReport> rows; // Full, then Full w/o each family
};

/// Families removed in ablation order.
inline constexpr std::array<std::string_view, 5> kAblationOrder{"traffic", "twitter", "url", "articles",
                                                                "wikipedia"};

AblationTable ablate(const FeatureTable& table, Task task, const ModelConfig& config);

nlohmann::json metrics_to_json(const Metrics& m);
Metrics metrics_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const EvalReport& r);
EvalReport report_from_json(const nlohmann::json& j);
nlohmann::json ablation_to_json(const AblationTable& t);
AblationTable ablation_from_json(const nlohmann::json& j);

/// Markdown table with columns Features | Dim. | Macro-F1 | Acc. | MAE | MAE^M;
/// percentages and errors at two decimals.
std::string render_table(Task task, const std::vector<EvalReport>& rows, const std::optional<Metrics>& baseline);

} // namespace mediaprof

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mediaprof {

enum class Task { Factuality, Bias7, Bias3 };

std::string_view to_string(Task task);
/// Accepts "factuality", "bias7", "bias3"; anything else is a UsageError.
Task parse_task(std::string_view s);
int num_classes(Task task);

struct Metrics {
    double accuracy = 0;
    double macro_f1 = 0;
    double mae = 0;
    double mae_macro = 0; // MAE^M: per-class MAE averaged over classes present in y_true
};

/// Labels are ordinals in [0, K). Macro-F1 averages over all K classes with
/// F1 = 0 when precision + recall = 0.
Metrics metrics(std::span<const int> y_true, std::span<const int> y_pred, int num_classes);

/// Rows are gold classes, columns predicted classes.
Eigen::MatrixXi confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred, int num_classes);

/// Metrics of always predicting the most frequent class (lowest on ties).
Metrics majority_baseline(std::span<const int> y_true, int num_classes);

/// Stratified k-fold split: k disjoint test-index sets covering all indices,
/// each class spread round-robin after a seeded shuffle so per-class counts
/// differ by at most one between folds.
std::vector<std::vector<int>> stratified_kfold(std::span<const int> y, int k, std::uint64_t seed);

/// Hex digest of a fold assignment.
std::string fold_digest(const std::vector<std::vector<int>>& folds);

/// Deterministic Fisher-Yates shuffle driven by mt19937_64, identical across
/// standard library implementations.
void seeded_shuffle(std::vector<int>& values, std::uint64_t seed);

} // namespace mediaprof

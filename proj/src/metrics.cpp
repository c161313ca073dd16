#include "mediaprof/metrics.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>

#include "mediaprof/error.hpp"
#include "mediaprof/hash.hpp"

namespace mediaprof {

std::string_view to_string(Task task)
{
    switch (task) {
    case Task::Factuality: return "factuality";
    case Task::Bias7: return "bias7";
    case Task::Bias3: return "bias3";
    }
    return "?";
}

Task parse_task(std::string_view s)
{
    if (s == "factuality")
        return Task::Factuality;
    if (s == "bias7")
        return Task::Bias7;
    if (s == "bias3")
        return Task::Bias3;
    throw UsageError("unknown task '" + std::string(s) + "' (expected factuality, bias7 or bias3)");
}

int num_classes(Task task) { return task == Task::Bias7 ? 7 : 3; }

namespace {

void check_labels(std::span<const int> y_true, std::span<const int> y_pred, int k)
{
    require(k >= 1, "metrics: class count must be positive");
    require(y_true.size() == y_pred.size(), "metrics: length mismatch");
    require(!y_true.empty(), "metrics: empty label vectors");
    auto in_range = [k](int v) { return v >= 0 && v < k; };
    require(std::all_of(y_true.begin(), y_true.end(), in_range) && std::all_of(y_pred.begin(), y_pred.end(), in_range),
            "metrics: label out of range");
}

} // namespace

Eigen::MatrixXi confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred, int num_classes)
{
    check_labels(y_true, y_pred, num_classes);
    Eigen::MatrixXi cm = Eigen::MatrixXi::Zero(num_classes, num_classes);
    for (std::size_t i = 0; i < y_true.size(); ++i)
        ++cm(y_true[i], y_pred[i]);
    return cm;
}

Metrics metrics(std::span<const int> y_true, std::span<const int> y_pred, int num_classes)
{
    const Eigen::MatrixXi cm = confusion_matrix(y_true, y_pred, num_classes);
    const double n = static_cast<double>(y_true.size());

    Metrics m;
    m.accuracy = cm.trace() / n;

    double f1_sum = 0;
    for (int c = 0; c < num_classes; ++c) {
        const double tp = cm(c, c);
        const double predicted = cm.col(c).sum();
        const double actual = cm.row(c).sum();
        const double precision = predicted > 0 ? tp / predicted : 0.0;
        const double recall = actual > 0 ? tp / actual : 0.0;
        if (precision + recall > 0)
            f1_sum += 2 * precision * recall / (precision + recall);
    }
    m.macro_f1 = f1_sum / num_classes;

    double abs_sum = 0;
    std::vector<double> class_abs(static_cast<std::size_t>(num_classes), 0.0);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double err = std::abs(y_pred[i] - y_true[i]);
        abs_sum += err;
        class_abs[static_cast<std::size_t>(y_true[i])] += err;
    }
    m.mae = abs_sum / n;

    double macro_sum = 0;
    int present = 0;
    for (int c = 0; c < num_classes; ++c) {
        const int count = cm.row(c).sum();
        if (count == 0)
            continue;
        macro_sum += class_abs[static_cast<std::size_t>(c)] / count;
        ++present;
    }
    m.mae_macro = macro_sum / present;
    return m;
}

Metrics majority_baseline(std::span<const int> y_true, int num_classes)
{
    require(!y_true.empty(), "majority_baseline: empty labels");
    std::vector<int> counts(static_cast<std::size_t>(num_classes), 0);
    for (int v : y_true) {
        require(v >= 0 && v < num_classes, "majority_baseline: label out of range");
        ++counts[static_cast<std::size_t>(v)];
    }
    const int majority = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    std::vector<int> pred(y_true.size(), majority);
    return metrics(y_true, pred, num_classes);
}

void seeded_shuffle(std::vector<int>& values, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(values[i - 1], values[j]);
    }
}

std::vector<std::vector<int>> stratified_kfold(std::span<const int> y, int k, std::uint64_t seed)
{
    require(k >= 2, "stratified_kfold: k must be >= 2");
    require(!y.empty(), "stratified_kfold: empty labels");
    const int max_label = *std::max_element(y.begin(), y.end());
    require(*std::min_element(y.begin(), y.end()) >= 0, "stratified_kfold: negative label");

    std::vector<std::vector<int>> by_class(static_cast<std::size_t>(max_label) + 1);
    for (std::size_t i = 0; i < y.size(); ++i)
        by_class[static_cast<std::size_t>(y[i])].push_back(static_cast<int>(i));

    std::vector<std::vector<int>> folds(static_cast<std::size_t>(k));
    // The round-robin start carries over between classes to keep fold sizes balanced.
    std::size_t next = 0;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& members = by_class[c];
        seeded_shuffle(members, seed ^ (0x9E3779B97F4A7C15ULL * (c + 1)));
        for (int idx : members) {
            folds[next].push_back(idx);
            next = (next + 1) % static_cast<std::size_t>(k);
        }
    }
    for (auto& f : folds)
        std::sort(f.begin(), f.end());
    return folds;
}

std::string fold_digest(const std::vector<std::vector<int>>& folds)
{
    std::string text;
    for (const auto& f : folds) {
        for (int idx : f) {
            text += std::to_string(idx);
            text += ',';
        }
        text += ';';
    }
    return sha256_hex(text).substr(0, 16);
}

} // namespace mediaprof

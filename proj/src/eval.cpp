#include "mediaprof/eval.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mediaprof/error.hpp"

namespace mediaprof {

using nlohmann::json;

namespace {

Eigen::MatrixXd rows_of(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<int>& idx)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), X.cols());
    for (std::size_t r = 0; r < idx.size(); ++r)
        out.row(static_cast<Eigen::Index>(r)) = X.row(idx[r]);
    return out;
}

std::string capitalize(std::string_view s)
{
    std::string out(s);
    if (!out.empty() && out[0] >= 'a' && out[0] <= 'z')
        out[0] = static_cast<char>(out[0] - 32);
    return out;
}

} // namespace

EvalReport cross_validate(const Eigen::Ref<const Eigen::MatrixXd>& X, std::span<const int> y, Task task,
                          const ModelConfig& config, std::string name, std::vector<std::string> families)
{
    require(X.rows() == static_cast<Eigen::Index>(y.size()), "cross_validate: features and labels not row-aligned");
    const int k = num_classes(task);

    EvalReport report;
    report.task = task;
    report.name = std::move(name);
    report.families = std::move(families);
    report.dim = static_cast<int>(X.cols());
    report.seed = config.seed;

    const auto folds = stratified_kfold(y, config.k_outer, config.seed);
    report.fold_digest = fold_digest(folds);
    report.predictions.assign(y.size(), -1);
    report.confusion = Eigen::MatrixXi::Zero(k, k);

    for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto& test_idx = folds[f];
        if (test_idx.empty())
            continue;
        std::vector<bool> is_test(y.size(), false);
        for (int i : test_idx)
            is_test[static_cast<std::size_t>(i)] = true;
        std::vector<int> train_idx;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (!is_test[i])
                train_idx.push_back(static_cast<int>(i));

        const Eigen::MatrixXd X_train = rows_of(X, train_idx);
        const Eigen::MatrixXd X_test = rows_of(X, test_idx);
        Eigen::VectorXi y_train(static_cast<Eigen::Index>(train_idx.size()));
        for (std::size_t i = 0; i < train_idx.size(); ++i)
            y_train[static_cast<Eigen::Index>(i)] = y[static_cast<std::size_t>(train_idx[i])];

        FoldResult fr;
        try {
            const auto search = grid_search(X_train, y_train, config.grid, config.k_inner,
                                            config.seed + 1000003ULL * (f + 1), k, config.smo);
            fr.params = search.best;
            const MultiModel model = train_classifier(X_train, y_train, fr.params, config.smo);
            const Eigen::VectorXi pred = model.predict_rows(X_test);

            std::vector<int> fold_true;
            std::vector<int> fold_pred;
            for (std::size_t i = 0; i < test_idx.size(); ++i) {
                fold_true.push_back(y[static_cast<std::size_t>(test_idx[i])]);
                fold_pred.push_back(pred[static_cast<Eigen::Index>(i)]);
                report.predictions[static_cast<std::size_t>(test_idx[i])] = pred[static_cast<Eigen::Index>(i)];
            }
            fr.metrics = metrics(fold_true, fold_pred, k);
            fr.confusion = confusion_matrix(fold_true, fold_pred, k);
            fr.test_size = static_cast<int>(test_idx.size());
        } catch (const TrainingError& e) {
            throw TrainingError("fold " + std::to_string(f) + ": " + e.what());
        }
        report.confusion += fr.confusion;
        report.folds.push_back(std::move(fr));
    }

    report.pooled = metrics(y, report.predictions, k);
    for (const auto& fr : report.folds) {
        report.fold_mean.accuracy += fr.metrics.accuracy;
        report.fold_mean.macro_f1 += fr.metrics.macro_f1;
        report.fold_mean.mae += fr.metrics.mae;
        report.fold_mean.mae_macro += fr.metrics.mae_macro;
    }
    const double nf = static_cast<double>(report.folds.size());
    report.fold_mean.accuracy /= nf;
    report.fold_mean.macro_f1 /= nf;
    report.fold_mean.mae /= nf;
    report.fold_mean.mae_macro /= nf;

    if (task == Task::Bias7) {
        std::vector<int> gold3;
        std::vector<int> pred3;
        for (std::size_t i = 0; i < y.size(); ++i) {
            gold3.push_back(map_bias_7_to_3(y[i]));
            pred3.push_back(map_bias_7_to_3(report.predictions[i]));
        }
        report.mapped_bias3 = metrics(gold3, pred3, 3);
    }
    return report;
}

std::vector<std::vector<std::string>> standard_family_rows(const FeatureManifest& manifest)
{
    std::vector<std::vector<std::string>> rows;
    for (auto fam : kFamilies) {
        int spans = 0;
        for (const auto& s : manifest.spans()) {
            if (s.family != fam)
                continue;
            rows.push_back({s.family + ":" + s.feature});
            ++spans;
        }
        if (spans > 1)
            rows.push_back({std::string(fam)});
    }
    return rows;
}

std::vector<EvalReport> run_family_table(const FeatureTable& table,
                                         const std::vector<std::vector<std::string>>& rows, Task task,
                                         const ModelConfig& config)
{
    if (rows.empty())
        throw ValidationError("empty feature family selection");
    const auto y = table.labels(task);
    std::vector<std::vector<int>> columns;
    for (const auto& sel : rows)
        columns.push_back(table.manifest.select(sel)); // validate every row before training anything
    std::vector<EvalReport> out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::string name;
        for (const auto& s : rows[r])
            name += (name.empty() ? "" : "+") + s;
        if (name == "all")
            name = "Full";
        out.push_back(cross_validate(table.columns(columns[r]), y, task, config, name, rows[r]));
    }
    return out;
}

AblationTable ablate(const FeatureTable& table, Task task, const ModelConfig& config)
{
    AblationTable t;
    t.task = task;
    const auto y = table.labels(task);
    t.baseline = majority_baseline(y, num_classes(task));

    std::vector<std::string> all_families(kFamilies.begin(), kFamilies.end());
    t.rows.push_back(cross_validate(table.columns(table.manifest.select(all_families)), y, task, config, "Full",
                                    all_families));
    for (auto fam : kAblationOrder) {
        std::vector<std::string> kept;
        for (auto f : kFamilies)
            if (f != fam)
                kept.emplace_back(f);
        t.rows.push_back(cross_validate(table.columns(table.manifest.without_family(fam)), y, task, config,
                                        "Full w/o " + (fam == "url" ? std::string("URL") : capitalize(fam)),
                                        kept));
    }
    return t;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

json metrics_to_json(const Metrics& m)
{
    return {{"accuracy", m.accuracy}, {"macro_f1", m.macro_f1}, {"mae", m.mae}, {"mae_macro", m.mae_macro}};
}

Metrics metrics_from_json(const json& j)
{
    return {j.at("accuracy").get<double>(), j.at("macro_f1").get<double>(), j.at("mae").get<double>(),
            j.at("mae_macro").get<double>()};
}

namespace {

json matrix_to_json(const Eigen::MatrixXi& m)
{
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXi matrix_from_json(const json& j)
{
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Eigen::MatrixXi m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = j[static_cast<std::size_t>(r)].at(static_cast<std::size_t>(c)).get<int>();
    return m;
}

} // namespace

json report_to_json(const EvalReport& r)
{
    json folds = json::array();
    for (const auto& f : r.folds)
        folds.push_back({{"metrics", metrics_to_json(f.metrics)},
                         {"confusion", matrix_to_json(f.confusion)},
                         {"params", {{"kind", std::string(to_string(f.params.kind))},
                                     {"C", f.params.C},
                                     {"gamma", f.params.gamma}}},
                         {"test_size", f.test_size}});
    json j{{"task", std::string(to_string(r.task))},
           {"name", r.name},
           {"families", r.families},
           {"dim", r.dim},
           {"seed", r.seed},
           {"fold_digest", r.fold_digest},
           {"pooled", metrics_to_json(r.pooled)},
           {"fold_mean", metrics_to_json(r.fold_mean)},
           {"confusion", matrix_to_json(r.confusion)},
           {"folds", std::move(folds)},
           {"predictions", r.predictions}};
    if (r.mapped_bias3)
        j["mapped_bias3"] = metrics_to_json(*r.mapped_bias3);
    return j;
}

EvalReport report_from_json(const json& j)
{
    EvalReport r;
    r.task = parse_task(j.at("task").get<std::string>());
    r.name = j.at("name").get<std::string>();
    r.families = j.at("families").get<std::vector<std::string>>();
    r.dim = j.at("dim").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.fold_digest = j.at("fold_digest").get<std::string>();
    r.pooled = metrics_from_json(j.at("pooled"));
    r.fold_mean = metrics_from_json(j.at("fold_mean"));
    r.confusion = matrix_from_json(j.at("confusion"));
    for (const auto& jf : j.at("folds")) {
        FoldResult f;
        f.metrics = metrics_from_json(jf.at("metrics"));
        f.confusion = matrix_from_json(jf.at("confusion"));
        const auto& p = jf.at("params");
        f.params = {parse_kernel_kind(p.at("kind").get<std::string>()), p.at("C").get<double>(),
                    p.at("gamma").get<double>()};
        f.test_size = jf.at("test_size").get<int>();
        r.folds.push_back(std::move(f));
    }
    r.predictions = j.at("predictions").get<std::vector<int>>();
    if (j.contains("mapped_bias3"))
        r.mapped_bias3 = metrics_from_json(j.at("mapped_bias3"));
    return r;
}

json ablation_to_json(const AblationTable& t)
{
    json rows = json::array();
    for (const auto& r : t.rows)
        rows.push_back(report_to_json(r));
    return {{"kind", "ablation"},
            {"task", std::string(to_string(t.task))},
            {"baseline", metrics_to_json(t.baseline)},
            {"rows", std::move(rows)}};
}

AblationTable ablation_from_json(const json& j)
{
    AblationTable t;
    t.task = parse_task(j.at("task").get<std::string>());
    t.baseline = metrics_from_json(j.at("baseline"));
    for (const auto& r : j.at("rows"))
        t.rows.push_back(report_from_json(r));
    return t;
}

std::string render_table(Task task, const std::vector<EvalReport>& rows, const std::optional<Metrics>& baseline)
{
    auto line = [](const std::string& name, const std::string& dim, const Metrics& m) {
        char buf[512];
        std::snprintf(buf, sizeof buf, "| %s | %s | %.2f | %.2f | %.2f | %.2f |\n", name.c_str(), dim.c_str(),
                      100.0 * m.macro_f1, 100.0 * m.accuracy, m.mae, m.mae_macro);
        return std::string(buf);
    };
    std::ostringstream out;
    out << "Task: " << to_string(task) << "\n\n"
        << "| Features | Dim. | Macro-F1 | Acc. | MAE | MAE^M |\n"
        << "|---|---:|---:|---:|---:|---:|\n";
    if (baseline)
        out << line("Majority Baseline", "-", *baseline);
    for (const auto& r : rows)
        out << line(r.name, std::to_string(r.dim), r.pooled);
    return out.str();
}

} // namespace mediaprof

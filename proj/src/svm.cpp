#include "mediaprof/svm.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>

#include <nlohmann/json.hpp>

#include "mediaprof/metrics.hpp"
#include "mediaprof/parallel.hpp"

namespace mediaprof {

using nlohmann::json;

std::string_view to_string(KernelKind kind) { return kind == KernelKind::Linear ? "linear" : "rbf"; }

KernelKind parse_kernel_kind(std::string_view s)
{
    if (s == "linear")
        return KernelKind::Linear;
    if (s == "rbf")
        return KernelKind::Rbf;
    throw ValidationError("unknown kernel kind '" + std::string(s) + "'");
}

void validate(const KernelParams& p)
{
    require(p.C > 0 && std::isfinite(p.C), "kernel params: C must be positive");
    if (p.kind == KernelKind::Rbf)
        require(p.gamma > 0 && std::isfinite(p.gamma), "kernel params: gamma must be positive for rbf");
}

int vote_winner(const std::vector<int>& votes)
{
    require(!votes.empty(), "vote_winner: no classes");
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

int MultiModel::predict_one(const Eigen::Ref<const Eigen::VectorXd>& x) const
{
    require(!classes.empty(), "predict: untrained model");
    if (classes.size() == 1)
        return classes.front();
    require(x.size() == stats.mean.size(), "predict: feature length mismatch");
    const Eigen::MatrixXd z = standardize_apply(stats, x.transpose());
    const Eigen::VectorXd zx = z.row(0).transpose();

    std::vector<int> votes(classes.size(), 0);
    for (const auto& pm : pairs) {
        const int winner = pm.model.decision(zx) > 0 ? pm.class_a : pm.class_b;
        ++votes[static_cast<std::size_t>(winner)];
    }
    return classes[static_cast<std::size_t>(vote_winner(votes))];
}

Eigen::VectorXi MultiModel::predict_rows(const Eigen::Ref<const Eigen::MatrixXd>& X) const
{
    Eigen::VectorXi out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        out[i] = predict_one(X.row(i).transpose());
    return out;
}

namespace {

std::vector<int> sorted_classes(const Eigen::VectorXi& y)
{
    std::vector<int> classes(y.data(), y.data() + y.size());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    return classes;
}

Eigen::MatrixXd rows_of(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<int>& idx)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), X.cols());
    for (std::size_t r = 0; r < idx.size(); ++r)
        out.row(static_cast<Eigen::Index>(r)) = X.row(idx[r]);
    return out;
}

} // namespace

MultiModel ovo_train(const Eigen::Ref<const Eigen::MatrixXd>& X, const Eigen::VectorXi& y, const KernelParams& p,
                     const SmoOptions& opt)
{
    require(X.rows() == y.size(), "ovo_train: row/label count mismatch");
    MultiModel model;
    model.classes = sorted_classes(y);
    model.params = p;
    if (model.classes.size() < 2)
        throw TrainingError("ovo_train: need at least two classes");
    if (!X.allFinite())
        throw TrainingError("ovo_train: non-finite feature value");

    model.stats = standardize_fit(X);
    const Eigen::MatrixXd Z = standardize_apply(model.stats, X);

    const auto k = model.classes.size();
    int capped = 0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            std::vector<int> idx;
            std::vector<int> labels;
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                if (y[i] == model.classes[a]) {
                    idx.push_back(static_cast<int>(i));
                    labels.push_back(1);
                } else if (y[i] == model.classes[b]) {
                    idx.push_back(static_cast<int>(i));
                    labels.push_back(-1);
                }
            }
            PairModel pm;
            pm.class_a = static_cast<int>(a);
            pm.class_b = static_cast<int>(b);
            try {
                pm.model = smo_train(rows_of(Z, idx), Eigen::Map<Eigen::VectorXi>(labels.data(), labels.size()), p,
                                     opt);
            } catch (const TrainingError& e) {
                throw TrainingError("pair (" + std::to_string(model.classes[a]) + ", "
                                    + std::to_string(model.classes[b]) + "): " + e.what());
            }
            capped += pm.model.converged ? 0 : 1;
            model.pairs.push_back(std::move(pm));
        }
    }
    if (capped > 0)
        std::clog << "warning: SMO hit the iteration cap on " << capped << " of " << model.pairs.size()
                  << " pairs (" << to_string(p.kind) << ", C=" << p.C << ", gamma=" << p.gamma << ")\n";
    return model;
}

MultiModel train_classifier(const Eigen::Ref<const Eigen::MatrixXd>& X, const Eigen::VectorXi& y,
                            const KernelParams& p, const SmoOptions& opt)
{
    auto classes = sorted_classes(y);
    if (classes.size() == 1) {
        MultiModel m;
        m.classes = std::move(classes);
        m.params = p;
        m.stats = standardize_fit(X);
        return m;
    }
    return ovo_train(X, y, p, opt);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

constexpr int kModelFormatVersion = 1;

json params_to_json(const KernelParams& p)
{
    return {{"kind", std::string(to_string(p.kind))}, {"C", p.C}, {"gamma", p.gamma}};
}

KernelParams params_from_json(const json& j)
{
    KernelParams p;
    p.kind = parse_kernel_kind(j.at("kind").get<std::string>());
    p.C = j.at("C").get<double>();
    p.gamma = j.at("gamma").get<double>();
    return p;
}

json vec_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vec_from_json(const json& j)
{
    auto v = j.get<std::vector<double>>();
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

} // namespace

json model_to_json(const MultiModel& model)
{
    json pairs = json::array();
    for (const auto& pm : model.pairs) {
        json svs = json::array();
        for (Eigen::Index s = 0; s < pm.model.support_vectors.rows(); ++s)
            svs.push_back(vec_to_json(pm.model.support_vectors.row(s).transpose()));
        pairs.push_back({{"classes", {model.classes[static_cast<std::size_t>(pm.class_a)],
                                      model.classes[static_cast<std::size_t>(pm.class_b)]}},
                         {"support_vectors", std::move(svs)},
                         {"dual_coef", vec_to_json(pm.model.dual_coef)},
                         {"intercept", pm.model.intercept},
                         {"converged", pm.model.converged}});
    }
    return {{"version", kModelFormatVersion},
            {"classes", model.classes},
            {"params", params_to_json(model.params)},
            {"standardizer", {{"mean", vec_to_json(model.stats.mean)}, {"stddev", vec_to_json(model.stats.stddev)}}},
            {"pairs", std::move(pairs)},
            {"manifest_hash", model.manifest_hash}};
}

MultiModel model_from_json(const json& doc)
{
    try {
        if (!doc.contains("version"))
            throw ValidationError("model JSON: missing version field");
        if (doc.at("version").get<int>() != kModelFormatVersion)
            throw ValidationError("model JSON: unsupported version " + doc.at("version").dump());
        MultiModel m;
        m.classes = doc.at("classes").get<std::vector<int>>();
        m.params = params_from_json(doc.at("params"));
        m.stats.mean = vec_from_json(doc.at("standardizer").at("mean"));
        m.stats.stddev = vec_from_json(doc.at("standardizer").at("stddev"));
        m.manifest_hash = doc.value("manifest_hash", "");
        for (const auto& jp : doc.at("pairs")) {
            PairModel pm;
            auto cls = jp.at("classes").get<std::vector<int>>();
            auto pos = [&](int c) {
                auto it = std::find(m.classes.begin(), m.classes.end(), c);
                if (it == m.classes.end())
                    throw ValidationError("model JSON: pair references unknown class " + std::to_string(c));
                return static_cast<int>(it - m.classes.begin());
            };
            pm.class_a = pos(cls.at(0));
            pm.class_b = pos(cls.at(1));
            pm.model.params = m.params;
            pm.model.intercept = jp.at("intercept").get<double>();
            pm.model.converged = jp.value("converged", true);
            pm.model.dual_coef = vec_from_json(jp.at("dual_coef"));
            const auto& svs = jp.at("support_vectors");
            pm.model.support_vectors.resize(static_cast<Eigen::Index>(svs.size()), m.stats.mean.size());
            for (std::size_t s = 0; s < svs.size(); ++s)
                pm.model.support_vectors.row(static_cast<Eigen::Index>(s)) = vec_from_json(svs[s]).transpose();
            m.pairs.push_back(std::move(pm));
        }
        return m;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("model JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Grid search
// ---------------------------------------------------------------------------

std::vector<KernelParams> make_grid(int c_lo, int c_hi, int c_step, int g_lo, int g_hi, int g_step, bool linear,
                                   bool rbf)
{
    require(c_step > 0 && g_step > 0, "make_grid: steps must be positive");
    std::vector<KernelParams> grid;
    if (linear)
        for (int c = c_lo; c <= c_hi; c += c_step)
            grid.push_back({KernelKind::Linear, std::ldexp(1.0, c), 0.0});
    if (rbf)
        for (int c = c_lo; c <= c_hi; c += c_step)
            for (int g = g_lo; g <= g_hi; g += g_step)
                grid.push_back({KernelKind::Rbf, std::ldexp(1.0, c), std::ldexp(1.0, g)});
    return grid;
}

std::vector<KernelParams> default_grid() { return make_grid(-5, 15, 2, -15, 3, 2); }

namespace {

// One-vs-one training and prediction on precomputed kernel matrices, used to
// score grid candidates without recomputing distances per candidate.
std::vector<int> ovo_predict_from_gram(const Eigen::MatrixXd& K_train, const Eigen::MatrixXd& K_test,
                                       const std::vector<int>& y_train, double C, const SmoOptions& opt)
{
    std::vector<int> classes(y_train);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    const auto m = K_test.rows();
    if (classes.size() == 1)
        return std::vector<int>(static_cast<std::size_t>(m), classes.front());

    Eigen::MatrixXi votes = Eigen::MatrixXi::Zero(m, static_cast<Eigen::Index>(classes.size()));
    for (std::size_t a = 0; a < classes.size(); ++a) {
        for (std::size_t b = a + 1; b < classes.size(); ++b) {
            std::vector<int> idx;
            for (std::size_t i = 0; i < y_train.size(); ++i)
                if (y_train[i] == classes[a] || y_train[i] == classes[b])
                    idx.push_back(static_cast<int>(i));
            const auto n = static_cast<Eigen::Index>(idx.size());
            Eigen::MatrixXd K(n, n);
            Eigen::VectorXi y(n);
            for (Eigen::Index r = 0; r < n; ++r) {
                y[r] = y_train[static_cast<std::size_t>(idx[r])] == classes[a] ? 1 : -1;
                for (Eigen::Index c = 0; c < n; ++c)
                    K(r, c) = K_train(idx[r], idx[c]);
            }
            const auto sol = solve_dual<double>(K, y, C, opt);
            for (Eigen::Index t = 0; t < m; ++t) {
                double f = sol.intercept;
                for (Eigen::Index r = 0; r < n; ++r)
                    if (sol.alpha[r] > 0)
                        f += sol.alpha[r] * y[r] * K_test(t, idx[r]);
                ++votes(t, static_cast<Eigen::Index>(f > 0 ? a : b));
            }
        }
    }
    std::vector<int> pred(static_cast<std::size_t>(m));
    for (Eigen::Index t = 0; t < m; ++t) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < votes.cols(); ++c)
            if (votes(t, c) > votes(t, best))
                best = c;
        pred[static_cast<std::size_t>(t)] = classes[static_cast<std::size_t>(best)];
    }
    return pred;
}

} // namespace

GridSearchResult grid_search(const Eigen::Ref<const Eigen::MatrixXd>& X, const Eigen::VectorXi& y,
                             const std::vector<KernelParams>& grid, int k_inner, std::uint64_t seed,
                             int num_classes, const SmoOptions& opt)
{
    require(!grid.empty(), "grid_search: empty grid");
    require(k_inner >= 2, "grid_search: k_inner must be >= 2");
    require(X.rows() == y.size(), "grid_search: row/label count mismatch");
    for (const auto& p : grid)
        validate(p);

    GridSearchResult result;
    result.mean_macro_f1.assign(grid.size(), 0.0);
    if (grid.size() == 1) {
        result.best = grid.front();
        return result;
    }

    const std::vector<int> labels(y.data(), y.data() + y.size());
    const auto folds = stratified_kfold(labels, k_inner, seed);

    for (const auto& test_idx : folds) {
        if (test_idx.empty())
            continue;
        std::vector<bool> is_test(labels.size(), false);
        for (int i : test_idx)
            is_test[static_cast<std::size_t>(i)] = true;
        std::vector<int> train_idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (!is_test[i])
                train_idx.push_back(static_cast<int>(i));

        const Eigen::MatrixXd X_train = rows_of(X, train_idx);
        const auto stats = standardize_fit(X_train);
        const Eigen::MatrixXd Z_train = standardize_apply(stats, X_train);
        const Eigen::MatrixXd Z_test = standardize_apply(stats, rows_of(X, test_idx));
        const Eigen::MatrixXd lin_train = Z_train * Z_train.transpose();
        const Eigen::MatrixXd lin_test = Z_test * Z_train.transpose();
        const Eigen::MatrixXd d_train = squared_distances(Z_train, Z_train);
        const Eigen::MatrixXd d_test = squared_distances(Z_test, Z_train);

        std::vector<int> y_train;
        for (int i : train_idx)
            y_train.push_back(labels[static_cast<std::size_t>(i)]);
        std::vector<int> y_test;
        for (int i : test_idx)
            y_test.push_back(labels[static_cast<std::size_t>(i)]);

        std::vector<double> fold_scores(grid.size(), 0.0);
        parallel_for(grid.size(), [&](std::size_t g) {
            const auto& p = grid[g];
            std::vector<int> pred;
            if (p.kind == KernelKind::Linear) {
                pred = ovo_predict_from_gram(lin_train, lin_test, y_train, p.C, opt);
            } else {
                const Eigen::MatrixXd K_train = (-p.gamma * d_train.array()).exp().matrix();
                const Eigen::MatrixXd K_test = (-p.gamma * d_test.array()).exp().matrix();
                pred = ovo_predict_from_gram(K_train, K_test, y_train, p.C, opt);
            }
            fold_scores[g] = metrics(y_test, pred, num_classes).macro_f1;
        });
        for (std::size_t g = 0; g < grid.size(); ++g)
            result.mean_macro_f1[g] += fold_scores[g];
    }
    for (auto& s : result.mean_macro_f1)
        s /= static_cast<double>(folds.size());

    for (std::size_t g = 1; g < grid.size(); ++g)
        if (result.mean_macro_f1[g] > result.mean_macro_f1[result.best_index])
            result.best_index = g;
    result.best = grid[result.best_index];
    return result;
}

} // namespace mediaprof

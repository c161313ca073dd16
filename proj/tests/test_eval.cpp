#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "mediaprof/error.hpp"
#include "mediaprof/eval.hpp"

using namespace mediaprof;

namespace {

ModelConfig small_config(std::uint64_t seed = 42)
{
    ModelConfig c;
    c.grid = {{KernelKind::Linear, 1.0, 0.0}, {KernelKind::Rbf, 4.0, 0.5}};
    c.seed = seed;
    return c;
}

// Constant rows except for one informative span.
FeatureTable synthetic_table(int n, std::string_view informative_family, std::uint32_t seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    FeatureTable t;
    t.manifest = FeatureManifest::standard(2);
    t.manifest_hash = "test";
    t.X.resize(n, t.manifest.dim());
    for (int i = 0; i < n; ++i) {
        MediumRecord r;
        r.medium_id = "m" + std::to_string(i);
        r.url = "http://m" + std::to_string(i) + ".com";
        r.factuality = static_cast<Factuality>(i % 3);
        r.bias7 = static_cast<Bias7>(i % 7);
        t.media.push_back(r);
        t.X.row(i).setConstant(1.0);
    }
    const auto cols = t.manifest.select({std::string(informative_family)});
    for (int i = 0; i < n; ++i) {
        t.X(i, cols[0]) = 3.0 * (i % 3) + 0.1 * g(rng);
        t.X(i, cols[1]) = 3.0 * (i % 7) + 0.1 * g(rng);
    }
    return t;
}

} // namespace

TEST_CASE("a leaked label column is predicted perfectly")
{
    const int n = 45;
    Eigen::MatrixXd X(n, 3);
    std::vector<int> y;
    std::mt19937 rng(1);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        y.push_back(i % 3);
        X(i, 0) = i % 3;
        X(i, 1) = g(rng);
        X(i, 2) = g(rng);
    }
    const auto r = cross_validate(X, y, Task::Factuality, small_config());
    CHECK(r.pooled.accuracy == 1.0);
    CHECK(r.pooled.macro_f1 == 1.0);
    CHECK(r.pooled.mae == 0.0);
    CHECK(r.folds.size() == 5);
    CHECK(r.predictions == y);
    CHECK(r.dim == 3);
}

TEST_CASE("constant features collapse to one class per fold")
{
    const int n = 50;
    const Eigen::MatrixXd X = Eigen::MatrixXd::Constant(n, 4, 2.5);
    std::vector<int> y;
    for (int i = 0; i < n; ++i)
        y.push_back(i < 30 ? 2 : i % 2);
    const auto r = cross_validate(X, y, Task::Factuality, small_config());
    const auto folds = stratified_kfold(y, 5, 42);
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const int first = r.predictions[static_cast<std::size_t>(folds[f][0])];
        int hits = 0;
        for (int i : folds[f]) {
            CHECK(r.predictions[static_cast<std::size_t>(i)] == first);
            hits += y[static_cast<std::size_t>(i)] == first;
        }
        CHECK(r.folds[f].metrics.accuracy == doctest::Approx(static_cast<double>(hits) / folds[f].size()));
    }
}

TEST_CASE("fold bookkeeping")
{
    const auto t = synthetic_table(42, "wikipedia", 3);
    const auto y = t.labels(Task::Bias7);
    const auto r = cross_validate(t.X, y, Task::Bias7, small_config());
    Eigen::MatrixXi sum = Eigen::MatrixXi::Zero(7, 7);
    int total = 0;
    for (const auto& f : r.folds) {
        sum += f.confusion;
        total += f.test_size;
    }
    CHECK(sum == r.confusion);
    CHECK(total == 42);
    CHECK(r.confusion.sum() == 42);
    CHECK(r.confusion == confusion_matrix(y, r.predictions, 7));
    REQUIRE(r.mapped_bias3);
    std::vector<int> g3, p3;
    for (std::size_t i = 0; i < y.size(); ++i) {
        g3.push_back(map_bias_7_to_3(y[i]));
        p3.push_back(map_bias_7_to_3(r.predictions[i]));
    }
    CHECK(r.mapped_bias3->accuracy == metrics(g3, p3, 3).accuracy);
    CHECK_FALSE(cross_validate(t.X, t.labels(Task::Factuality), Task::Factuality, small_config()).mapped_bias3);
}

TEST_CASE("seed controls the fold assignment")
{
    const auto t = synthetic_table(30, "twitter", 4);
    const auto y = t.labels(Task::Factuality);
    const auto a = cross_validate(t.X, y, Task::Factuality, small_config(1));
    const auto b = cross_validate(t.X, y, Task::Factuality, small_config(1));
    const auto c = cross_validate(t.X, y, Task::Factuality, small_config(2));
    CHECK(a.fold_digest == b.fold_digest);
    CHECK(a.predictions == b.predictions);
    CHECK(a.fold_digest != c.fold_digest);
    CHECK(report_to_json(a).dump() == report_to_json(b).dump());
}

TEST_CASE("ablation table")
{
    const auto t = synthetic_table(36, "wikipedia", 5);
    const auto ab = ablate(t, Task::Factuality, small_config());
    REQUIRE(ab.rows.size() == 6);
    CHECK(ab.rows[0].name == "Full");
    CHECK(ab.rows[1].name == "Full w/o Traffic");
    CHECK(ab.rows[2].name == "Full w/o Twitter");
    CHECK(ab.rows[3].name == "Full w/o URL");
    CHECK(ab.rows[4].name == "Full w/o Articles");
    CHECK(ab.rows[5].name == "Full w/o Wikipedia");
    CHECK(ab.rows[1].dim == ab.rows[0].dim - 1);
    CHECK(ab.rows[5].dim == ab.rows[0].dim - t.manifest.family_dim("wikipedia"));
    CHECK(ab.baseline.accuracy == doctest::Approx(1.0 / 3.0));
    // The only signal lives in the wikipedia block.
    CHECK(ab.rows[0].pooled.macro_f1 > 0.9);
    CHECK(ab.rows[5].pooled.macro_f1 < ab.rows[0].pooled.macro_f1 - 0.3);

    const auto back = ablation_from_json(nlohmann::json::parse(ablation_to_json(ab).dump()));
    REQUIRE(back.rows.size() == 6);
    CHECK(back.rows[3].name == "Full w/o URL");
    CHECK(back.rows[0].pooled.macro_f1 == ab.rows[0].pooled.macro_f1);
    CHECK(back.baseline.mae == ab.baseline.mae);
}

TEST_CASE("family table rows")
{
    const auto m = FeatureManifest::standard(2);
    const auto rows = standard_family_rows(m);
    CHECK(rows.front() == std::vector<std::string>{"traffic:alexa_rank"});
    CHECK(std::find(rows.begin(), rows.end(), std::vector<std::string>{"traffic"}) == rows.end());
    CHECK(std::find(rows.begin(), rows.end(), std::vector<std::string>{"twitter"}) != rows.end());
    CHECK(std::find(rows.begin(), rows.end(), std::vector<std::string>{"wikipedia:toc"}) != rows.end());

    const auto t = synthetic_table(30, "twitter", 6);
    CHECK_THROWS_AS(run_family_table(t, {}, Task::Factuality, small_config()), ValidationError);
    CHECK_THROWS_AS(run_family_table(t, {{"all"}, {"bogus"}}, Task::Factuality, small_config()), ValidationError);
    const auto out = run_family_table(t, {{"all"}, {"twitter:counts"}, {"url", "traffic"}}, Task::Factuality,
                                      small_config());
    REQUIRE(out.size() == 3);
    CHECK(out[0].name == "Full");
    CHECK(out[1].dim == 5);
    CHECK(out[2].name == "url+traffic");
    CHECK(out[2].dim == 13);
}

TEST_CASE("report json and table rendering")
{
    const auto t = synthetic_table(30, "twitter", 7);
    const auto r = cross_validate(t.X, t.labels(Task::Factuality), Task::Factuality, small_config());
    const auto back = report_from_json(nlohmann::json::parse(report_to_json(r).dump()));
    CHECK(back.name == r.name);
    CHECK(back.predictions == r.predictions);
    CHECK(back.confusion == r.confusion);
    CHECK(back.fold_digest == r.fold_digest);
    CHECK(back.pooled.mae_macro == r.pooled.mae_macro);

    Metrics base{0.5084, 0.2247, 0.73, 1.0};
    EvalReport row;
    row.name = "Full";
    row.dim = 1927;
    row.pooled = {0.6512, 0.5907, 0.5161, 0.5};
    const auto md = render_table(Task::Factuality, {row}, base);
    CHECK(md.find("| Features | Dim. | Macro-F1 | Acc. | MAE | MAE^M |") != std::string::npos);
    CHECK(md.find("| Full | 1927 | 59.07 | 65.12 | 0.52 | 0.50 |") != std::string::npos);
    CHECK(md.find("| Majority Baseline | - | 22.47 | 50.84 | 0.73 | 1.00 |") != std::string::npos);
}

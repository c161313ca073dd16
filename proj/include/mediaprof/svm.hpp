#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "mediaprof/error.hpp"

namespace mediaprof {

enum class KernelKind { Linear, Rbf };

std::string_view to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view s);

struct KernelParams {
    KernelKind kind = KernelKind::Rbf;
    double C = 1.0;
    double gamma = 1.0; // ignored for linear

    bool operator==(const KernelParams&) const = default;
};

void validate(const KernelParams& p);

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

template <typename DerivedX, typename DerivedZ>
typename DerivedX::Scalar kernel_eval(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedZ>& z,
                                      const KernelParams& p)
{
    using Scalar = typename DerivedX::Scalar;
    require(x.size() == z.size(), "kernel_eval: vector length mismatch");
    if (p.kind == KernelKind::Linear)
        return x.dot(z);
    return std::exp(-static_cast<Scalar>(p.gamma) * (x - z).squaredNorm());
}

/// Pairwise squared Euclidean distances between the rows of A and B.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
squared_distances(const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedB>& B)
{
    using Scalar = typename DerivedA::Scalar;
    require(A.cols() == B.cols(), "squared_distances: column mismatch");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> D(A.rows(), B.rows());
    for (Eigen::Index j = 0; j < B.rows(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            D(i, j) = (A.row(i) - B.row(j)).squaredNorm();
    return D;
}

/// K(i, j) = kernel(A.row(i), B.row(j)).
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
kernel_matrix(const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedB>& B, const KernelParams& p)
{
    using Scalar = typename DerivedA::Scalar;
    require(A.cols() == B.cols(), "kernel_matrix: column mismatch");
    if (p.kind == KernelKind::Linear)
        return A * B.transpose();
    return (-static_cast<Scalar>(p.gamma) * squared_distances(A, B).array()).exp().matrix();
}

// ---------------------------------------------------------------------------
// Standardization
// ---------------------------------------------------------------------------

template <typename Scalar>
struct StandardizerStats {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mean;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> stddev; // population
};

inline constexpr double kDegenerateStddev = 1e-12;

template <typename Derived>
StandardizerStats<typename Derived::Scalar> standardize_fit(const Eigen::MatrixBase<Derived>& X)
{
    using Scalar = typename Derived::Scalar;
    require(X.rows() > 0, "standardize_fit: empty matrix");
    StandardizerStats<Scalar> s;
    s.mean = X.colwise().mean().transpose();
    s.stddev = ((X.rowwise() - s.mean.transpose()).array().square().colwise().sum() / static_cast<Scalar>(X.rows()))
                   .sqrt()
                   .transpose();
    return s;
}

template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> standardize_apply(const StandardizerStats<Scalar>& s,
                                                                        const Eigen::MatrixBase<Derived>& X)
{
    require(X.cols() == s.mean.size(), "standardize_apply: column mismatch");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(X.rows(), X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        if (s.stddev[j] < static_cast<Scalar>(kDegenerateStddev))
            out.col(j).setZero();
        else
            out.col(j) = (X.col(j).array() - s.mean[j]) / s.stddev[j];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Binary soft-margin SVM via SMO
// ---------------------------------------------------------------------------

struct SmoOptions {
    double tol = 1e-3;
    /// Sweep cap; each sweep is n working-pair updates. 0 means 10*n sweeps
    /// and at least 1000000 updates.
    std::int64_t max_passes = 0;
};

template <typename Scalar>
struct DualSolution {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> alpha;
    Scalar intercept = 0;
    std::int64_t iterations = 0;
    bool converged = false;
};

/// Value of sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
template <typename Scalar>
Scalar dual_objective(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& K, const Eigen::VectorXi& y,
                      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& alpha)
{
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ay = alpha.cwiseProduct(y.cast<Scalar>());
    return alpha.sum() - Scalar(0.5) * ay.dot(K * ay);
}

/// Solves max sum(a) - 1/2 a'Qa s.t. 0 <= a_i <= C, sum(a_i y_i) = 0 with
/// Q_ij = y_i y_j K_ij, selecting the maximal-violating pair each step (ties
/// go to the lowest index). Stops once the KKT gap is <= tol.
template <typename Scalar>
DualSolution<Scalar> solve_dual(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& K,
                                const Eigen::VectorXi& y, Scalar C, const SmoOptions& opt = {})
{
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index n = y.size();
    require(K.rows() == n && K.cols() == n, "solve_dual: kernel matrix shape mismatch");
    require(C > 0, "solve_dual: C must be positive");
    constexpr Scalar tau = Scalar(1e-12);

    const Vec ys = y.cast<Scalar>();
    DualSolution<Scalar> sol;
    sol.alpha = Vec::Zero(n);
    Vec& a = sol.alpha;
    Vec G = Vec::Constant(n, Scalar(-1)); // gradient of 1/2 a'Qa - e'a

    auto in_up = [&](Eigen::Index t) { return (y[t] > 0 && a[t] < C) || (y[t] < 0 && a[t] > 0); };
    auto in_low = [&](Eigen::Index t) { return (y[t] > 0 && a[t] > 0) || (y[t] < 0 && a[t] < C); };

    const std::int64_t passes = opt.max_passes > 0 ? opt.max_passes : 10 * static_cast<std::int64_t>(n);
    const std::int64_t max_iter = std::max<std::int64_t>(passes * static_cast<std::int64_t>(n),
                                                         opt.max_passes > 0 ? 0 : 1000000);
    const Scalar tol = static_cast<Scalar>(opt.tol);

    while (true) {
        Eigen::Index i = -1;
        Eigen::Index j = -1;
        Scalar m = -std::numeric_limits<Scalar>::infinity();
        Scalar M = std::numeric_limits<Scalar>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            const Scalar v = -ys[t] * G[t];
            if (in_up(t) && v > m) {
                m = v;
                i = t;
            }
            if (in_low(t) && v < M) {
                M = v;
                j = t;
            }
        }
        if (i < 0 || j < 0 || m - M <= tol) {
            sol.converged = true;
            break;
        }
        if (sol.iterations >= max_iter)
            break;
        ++sol.iterations;

        const Scalar Kii = K(i, i);
        const Scalar Kjj = K(j, j);
        const Scalar Kij = K(i, j);
        const Scalar old_ai = a[i];
        const Scalar old_aj = a[j];
        if (y[i] != y[j]) {
            Scalar quad = Kii + Kjj - Scalar(2) * Kij;
            if (quad <= 0)
                quad = tau;
            const Scalar delta = (-G[i] - G[j]) / quad;
            const Scalar diff = a[i] - a[j];
            a[i] += delta;
            a[j] += delta;
            if (diff > 0) {
                if (a[j] < 0) {
                    a[j] = 0;
                    a[i] = diff;
                }
            } else if (a[i] < 0) {
                a[i] = 0;
                a[j] = -diff;
            }
            if (diff > 0) {
                if (a[i] > C) {
                    a[i] = C;
                    a[j] = C - diff;
                }
            } else if (a[j] > C) {
                a[j] = C;
                a[i] = C + diff;
            }
        } else {
            Scalar quad = Kii + Kjj - Scalar(2) * Kij;
            if (quad <= 0)
                quad = tau;
            const Scalar delta = (G[i] - G[j]) / quad;
            const Scalar sum = a[i] + a[j];
            a[i] -= delta;
            a[j] += delta;
            if (sum > C) {
                if (a[i] > C) {
                    a[i] = C;
                    a[j] = sum - C;
                }
            } else if (a[j] < 0) {
                a[j] = 0;
                a[i] = sum;
            }
            if (sum > C) {
                if (a[j] > C) {
                    a[j] = C;
                    a[i] = sum - C;
                }
            } else if (a[i] < 0) {
                a[i] = 0;
                a[j] = sum;
            }
        }
        const Scalar dai = a[i] - old_ai;
        const Scalar daj = a[j] - old_aj;
        // G += Q[:, i] dai + Q[:, j] daj
        G.array() += ys.array() * (K.col(i).array() * (ys[i] * dai) + K.col(j).array() * (ys[j] * daj));
    }

    // Intercept: mean over free vectors, else the midpoint of the feasible interval.
    Scalar ub = std::numeric_limits<Scalar>::infinity();
    Scalar lb = -std::numeric_limits<Scalar>::infinity();
    Scalar free_sum = 0;
    Eigen::Index free_count = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
        const Scalar yG = ys[t] * G[t];
        if (a[t] >= C) {
            if (y[t] < 0)
                ub = std::min(ub, yG);
            else
                lb = std::max(lb, yG);
        } else if (a[t] <= 0) {
            if (y[t] > 0)
                ub = std::min(ub, yG);
            else
                lb = std::max(lb, yG);
        } else {
            free_sum += yG;
            ++free_count;
        }
    }
    Scalar rho = 0;
    if (free_count > 0)
        rho = free_sum / static_cast<Scalar>(free_count);
    else if (std::isfinite(ub) && std::isfinite(lb))
        rho = (ub + lb) / Scalar(2);
    else if (std::isfinite(ub))
        rho = ub;
    else if (std::isfinite(lb))
        rho = lb;
    sol.intercept = -rho;
    return sol;
}

template <typename Scalar>
struct BinaryModel {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Mat support_vectors; // one row per support vector
    Vec dual_coef;       // alpha_i * y_i
    Scalar intercept = 0;
    KernelParams params;
    bool converged = true;

    template <typename Derived>
    Scalar decision(const Eigen::MatrixBase<Derived>& x) const
    {
        Scalar f = intercept;
        for (Eigen::Index s = 0; s < support_vectors.rows(); ++s)
            f += dual_coef[s] * kernel_eval(support_vectors.row(s).transpose(), x, params);
        return f;
    }

    /// +1 when decision(x) > 0, else -1.
    template <typename Derived>
    int predict(const Eigen::MatrixBase<Derived>& x) const
    {
        return decision(x) > 0 ? 1 : -1;
    }
};

/// Trains a binary SVM on labels in {-1, +1}. Throws TrainingError for
/// single-class input or non-finite features.
template <typename Derived>
BinaryModel<typename Derived::Scalar> smo_train(const Eigen::MatrixBase<Derived>& X, const Eigen::VectorXi& y,
                                                const KernelParams& p, const SmoOptions& opt = {})
{
    using Scalar = typename Derived::Scalar;
    validate(p);
    require(X.rows() == y.size(), "smo_train: row/label count mismatch");
    if (X.rows() < 2)
        throw TrainingError("smo_train: need at least two samples");
    if (!X.allFinite())
        throw TrainingError("smo_train: non-finite feature value");
    bool has_pos = false;
    bool has_neg = false;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        require(y[i] == 1 || y[i] == -1, "smo_train: labels must be +1/-1");
        (y[i] > 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg)
        throw TrainingError("smo_train: training labels contain a single class");

    const auto K = kernel_matrix(X, X, p);
    const auto sol = solve_dual<Scalar>(K, y, static_cast<Scalar>(p.C), opt);

    BinaryModel<Scalar> model;
    model.params = p;
    model.intercept = sol.intercept;
    model.converged = sol.converged;
    std::vector<Eigen::Index> sv;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (sol.alpha[i] > 0)
            sv.push_back(i);
    model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), X.cols());
    model.dual_coef.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t s = 0; s < sv.size(); ++s) {
        model.support_vectors.row(static_cast<Eigen::Index>(s)) = X.row(sv[s]);
        model.dual_coef[static_cast<Eigen::Index>(s)] = sol.alpha[sv[s]] * static_cast<Scalar>(y[sv[s]]);
    }
    return model;
}

// ---------------------------------------------------------------------------
// One-vs-one multi-class model
// ---------------------------------------------------------------------------

struct PairModel {
    int class_a = 0; // receives the vote when the decision is positive
    int class_b = 0;
    BinaryModel<double> model;
};

struct MultiModel {
    std::vector<int> classes; // ascending
    StandardizerStats<double> stats;
    KernelParams params;
    std::vector<PairModel> pairs;
    std::string manifest_hash;

    /// Standardizes `x` with the stored statistics and returns the majority
    /// vote over pairs; ties go to the lowest class.
    int predict_one(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    /// One prediction per row of X.
    Eigen::VectorXi predict_rows(const Eigen::Ref<const Eigen::MatrixXd>& X) const;
};

/// Fits the standardizer on X and one binary model per class pair. Throws
/// TrainingError when fewer than two classes are present.
MultiModel ovo_train(const Eigen::Ref<const Eigen::MatrixXd>& X, const Eigen::VectorXi& y, const KernelParams& p,
                     const SmoOptions& opt = {});

/// ovo_train, except that a single-class training set yields a model that
/// always predicts that class.
MultiModel train_classifier(const Eigen::Ref<const Eigen::MatrixXd>& X, const Eigen::VectorXi& y,
                            const KernelParams& p, const SmoOptions& opt = {});

/// Majority vote with ties broken toward the lowest class index.
int vote_winner(const std::vector<int>& votes);

nlohmann::json model_to_json(const MultiModel& model);
MultiModel model_from_json(const nlohmann::json& doc);

// ---------------------------------------------------------------------------
// Hyper-parameter search
// ---------------------------------------------------------------------------

/// Linear candidates for every C, then rbf for every (C, gamma).
/// Exponents are base-2 and inclusive.
std::vector<KernelParams> make_grid(int c_lo, int c_hi, int c_step, int g_lo, int g_hi, int g_step,
                                    bool linear = true, bool rbf = true);
/// C in 2^{-5..15 step 2}, gamma in 2^{-15..3 step 2}, linear and rbf.
std::vector<KernelParams> default_grid();

struct GridSearchResult {
    KernelParams best;
    std::size_t best_index = 0;
    std::vector<double> mean_macro_f1; // per candidate
};

/// Scores each candidate by mean macro-F1 over stratified k_inner-fold CV,
/// standardizing within each inner training fold. Ties keep the earlier
/// candidate. Labels are ordinals in [0, num_classes).
GridSearchResult grid_search(const Eigen::Ref<const Eigen::MatrixXd>& X, const Eigen::VectorXi& y,
                             const std::vector<KernelParams>& grid, int k_inner, std::uint64_t seed,
                             int num_classes, const SmoOptions& opt = {});

} // namespace mediaprof

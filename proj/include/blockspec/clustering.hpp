#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blockspec/linalg.hpp"
#include "blockspec/rng.hpp"
#include "blockspec/scaled_power.hpp"
#include "blockspec/union_find.hpp"

namespace blockspec {

enum class DeltaMode { Theoretical, Estimated, Explicit };

struct PowerConfig {
    int r = 0;  // 0 -> default ceil(ln n)
    DeltaMode delta_mode = DeltaMode::Estimated;
    double p = 0.0;
    double q = 0.0;
    double delta_value = 0.0;          // linear-scale threshold, Explicit mode
    std::optional<int> s_star_hint;    // required for Theoretical mode
};

struct SvdConfig {
    int k = 1;
    DeltaMode delta_mode = DeltaMode::Theoretical;
    double p = 0.0;
    double q = 0.0;
    double delta_value = 0.0;
};

struct Clustering {
    std::vector<std::vector<int>> groups;
    std::string algorithm;
    double threshold_log = 0.0;  // log-domain threshold actually used
    int largest = 0;             // index of the largest group

    int group_of(int vertex) const {
        for (std::size_t g = 0; g < groups.size(); ++g)
            for (int v : groups[g])
                if (v == vertex) return static_cast<int>(g);
        return -1;
    }
};

inline int default_power_exponent(int n) {
    return std::max(1, static_cast<int>(std::ceil(std::log(static_cast<double>(n)))));
}

/// ln of Delta = 0.5 * sqrt(s*) * (p-q)^r * (s*)^(r-1).
inline double delta_power_log(int s_star, double p, double q, int r) {
    if (s_star < 1) throw std::invalid_argument("delta_power_log: s_star must be >= 1");
    if (r < 1) throw std::invalid_argument("delta_power_log: r must be >= 1");
    if (!(p > q)) throw std::invalid_argument("delta_power_log: requires p > q");
    const double ls = std::log(static_cast<double>(s_star));
    return std::log(0.5) + 0.5 * ls + r * std::log(p - q) + (r - 1) * ls;
}

/// Delta = 0.5 * (p-q) * sqrt(s) for the eigenspace-projection algorithms.
inline double delta_svd(double s, double p, double q) {
    if (!(p > q)) throw std::invalid_argument("delta_svd: requires p > q");
    return 0.5 * (p - q) * std::sqrt(s);
}

/// round(lambda_1(B) / (p-q)) clamped to [1, n]; lambda_1(E[B]) = (p-q) s*.
inline int estimate_s_star(const Matrix& b, double p, double q) {
    if (!(p > q)) throw std::invalid_argument("estimate_s_star: requires p > q");
    const EigenDecomposition d = sym_eigen(b);
    const double est = std::round(d.eigenvalues[0] / (p - q));
    const double n = static_cast<double>(b.rows());
    return static_cast<int>(std::min(n, std::max(1.0, est)));
}

/// Union-find over all pairs whose log-domain distance is <= log_threshold.
inline Clustering group_by_log_distance(const Matrix& log_dist, double log_threshold,
                                        std::string algorithm) {
    const int n = static_cast<int>(log_dist.rows());
    UnionFind uf(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (log_dist(i, j) <= log_threshold) uf.unite(i, j);
    Clustering c;
    c.groups = uf.groups();
    c.algorithm = std::move(algorithm);
    c.threshold_log = log_threshold;
    for (std::size_t g = 0; g < c.groups.size(); ++g)
        if (c.groups[g].size() > c.groups[c.largest].size()) c.largest = static_cast<int>(g);
    return c;
}

/// Pairwise log distances between the columns of a coordinate matrix.
inline Matrix column_log_distances(const Matrix& coords) {
    const int n = static_cast<int>(coords.cols());
    const Matrix gram = coords.transpose() * coords;
    Matrix out(n, n);
    const double ninf = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        out(i, i) = ninf;
        for (int j = i + 1; j < n; ++j) {
            const double d2 = std::max(0.0, gram(i, i) + gram(j, j) - 2.0 * gram(i, j));
            const double v = d2 > 0.0 ? 0.5 * std::log(d2) : ninf;
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

/// Row-distance clustering of the powered centered matrix B^r.
inline Clustering power_iteration_cluster(const Matrix& b, const PowerConfig& cfg) {
    const int n = static_cast<int>(b.rows());
    const int r = cfg.r > 0 ? cfg.r : default_power_exponent(n);
    int s_star;
    switch (cfg.delta_mode) {
        case DeltaMode::Theoretical:
            if (!cfg.s_star_hint)
                throw std::invalid_argument("power_iteration_cluster: theoretical delta needs s_star_hint");
            s_star = *cfg.s_star_hint;
            break;
        case DeltaMode::Estimated:
            s_star = estimate_s_star(b, cfg.p, cfg.q);
            break;
        case DeltaMode::Explicit:
            s_star = 1;  // unused
            break;
    }
    double log_threshold;
    if (cfg.delta_mode == DeltaMode::Explicit) {
        if (!(cfg.delta_value > 0.0))
            throw std::invalid_argument("power_iteration_cluster: explicit delta must be positive");
        log_threshold = std::log(cfg.delta_value);
    } else {
        log_threshold = delta_power_log(s_star, cfg.p, cfg.q, r);
    }
    const ScaledPower pw = scaled_power(b, r);
    return group_by_log_distance(log_row_distances(pw), log_threshold, "power");
}

/// Top-k eigenspace projection of the columns of the centered matrix B,
/// thresholded at Delta = 0.5 (p-q) sqrt(n/k).
inline Clustering centered_svd_cluster(const Matrix& b, const SvdConfig& cfg) {
    const int n = static_cast<int>(b.rows());
    if (cfg.k < 1 || cfg.k > n) throw std::invalid_argument("centered_svd_cluster: k out of range");
    const EigenDecomposition d = sym_eigen(b);
    const Matrix coords = d.eigenvectors.leftCols(cfg.k).transpose() * b;  // k x n
    double delta;
    switch (cfg.delta_mode) {
        case DeltaMode::Explicit:
            delta = cfg.delta_value;
            break;
        case DeltaMode::Estimated:
            delta = delta_svd(estimate_s_star(b, cfg.p, cfg.q), cfg.p, cfg.q);
            break;
        default:
            delta = delta_svd(static_cast<double>(n) / cfg.k, cfg.p, cfg.q);
    }
    if (!(delta > 0.0)) throw std::invalid_argument("centered_svd_cluster: threshold must be positive");
    Clustering c = group_by_log_distance(column_log_distances(coords),
                                                 std::log(delta), "csvd");
    return c;
}

/// SVD-I baseline: project the columns of the raw adjacency matrix onto its
/// own top-k eigenspace.
inline Clustering svd1_cluster(const Matrix& a, const SvdConfig& cfg) {
    const int n = static_cast<int>(a.rows());
    if (cfg.k < 1 || cfg.k > n) throw std::invalid_argument("svd1_cluster: k out of range");
    const EigenDecomposition d = sym_eigen(a);
    const Matrix coords = d.eigenvectors.leftCols(cfg.k).transpose() * a;
    const double delta = cfg.delta_mode == DeltaMode::Explicit
                             ? cfg.delta_value
                             : delta_svd(static_cast<double>(n) / cfg.k, cfg.p, cfg.q);
    if (!(delta > 0.0)) throw std::invalid_argument("svd1_cluster: threshold must be positive");
    Clustering c = group_by_log_distance(column_log_distances(coords),
                                                 std::log(delta), "svd1");
    return c;
}

/// SVD-II baseline: random halving, eigenspace from the first half, second
/// half clustered by projection, first half assigned by edge density.
inline Clustering svd2_cluster(const Matrix& a, const SvdConfig& cfg, std::uint64_t seed) {
    const int n = static_cast<int>(a.rows());
    if (n < 2) throw std::invalid_argument("svd2_cluster: need n >= 2");
    if (cfg.k < 1 || cfg.k > n) throw std::invalid_argument("svd2_cluster: k out of range");

    std::vector<int> half1, half2;
    for (int attempt = 0; attempt < 2; ++attempt) {
        half1.clear();
        half2.clear();
        Rng rng(derive_seed(seed, 0x5d2 + attempt));
        for (int i = 0; i < n; ++i) (rng.next_u64() & 1 ? half1 : half2).push_back(i);
        if (!half1.empty() && !half2.empty()) break;
    }
    if (half1.empty() || half2.empty())
        throw std::runtime_error("svd2_cluster: degenerate random halving");

    const int n1 = static_cast<int>(half1.size());
    const int n2 = static_cast<int>(half2.size());
    Matrix a1(n1, n1);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j) a1(i, j) = a(half1[i], half1[j]);
    const int k1 = std::min(cfg.k, n1);
    const EigenDecomposition d = sym_eigen(a1);

    Matrix cols(n1, n2);  // columns of A restricted to half1 rows, for half2 vertices
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) cols(i, j) = a(half1[i], half2[j]);
    const Matrix coords = d.eigenvectors.leftCols(k1).transpose() * cols;

    const double delta = cfg.delta_mode == DeltaMode::Explicit
                             ? cfg.delta_value
                             : delta_svd(static_cast<double>(n1) / cfg.k, cfg.p, cfg.q);
    if (!(delta > 0.0)) throw std::invalid_argument("svd2_cluster: threshold must be positive");
    const double log_delta = std::log(delta);

    UnionFind uf(n2);
    const Matrix ld = column_log_distances(coords);
    for (int i = 0; i < n2; ++i)
        for (int j = i + 1; j < n2; ++j)
            if (ld(i, j) <= log_delta) uf.unite(i, j);
    std::vector<std::vector<int>> half2_groups = uf.groups();

    // Map half2-local groups to global vertex ids.
    std::vector<std::vector<int>> groups;
    groups.reserve(half2_groups.size());
    for (const auto& g : half2_groups) {
        std::vector<int> global;
        global.reserve(g.size());
        for (int local : g) global.push_back(half2[local]);
        groups.push_back(std::move(global));
    }

    // Assign each half1 vertex to the group with maximum edge density
    // toward that group's half2 members.
    for (int v : half1) {
        double best = -1.0;
        std::size_t best_g = 0;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            double edges = 0.0;
            int count = 0;
            for (int u : groups[g]) {
                edges += a(v, u);
                ++count;
            }
            const double density = count > 0 ? edges / count : 0.0;
            if (density > best) {
                best = density;
                best_g = g;
            }
        }
        groups[best_g].push_back(v);
    }
    for (auto& g : groups) std::sort(g.begin(), g.end());

    Clustering c;
    c.groups = std::move(groups);
    c.algorithm = "svd2";
    c.threshold_log = log_delta;
    for (std::size_t g = 0; g < c.groups.size(); ++g)
        if (c.groups[g].size() > c.groups[c.largest].size()) c.largest = static_cast<int>(g);
    return c;
}

/// max_i || P^k_B u_i - f_r B^{r+1}_i || / Delta with f_r = 1/((p-q)^r s^r),
/// s = n/k. The powered term is carried in log scale and collapsed only after
/// the f_r factor cancels the growth.
inline double power_svd_residual(const Matrix& b, int k, int r, double p, double q) {
    const int n = static_cast<int>(b.rows());
    if (k < 1 || k > n) throw std::invalid_argument("power_svd_residual: k out of range");
    if (r < 1) throw std::invalid_argument("power_svd_residual: r must be >= 1");
    const double s = static_cast<double>(n) / k;
    const double delta = delta_svd(s, p, q);
    const double log_fr = -r * (std::log(p - q) + std::log(s));

    const EigenDecomposition d = sym_eigen(b);
    const auto vk = d.eigenvectors.leftCols(k);
    const Matrix projected = vk * (vk.transpose() * b);  // P^k_B applied to every column

    const ScaledPower pw = scaled_power(b, r + 1);
    const double factor = std::exp(pw.log_scale + log_fr);
    const Matrix scaled_rows = factor * pw.base;  // f_r B^{r+1}, rows == columns by symmetry

    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double resid = (projected.col(i) - scaled_rows.row(i).transpose()).norm();
        worst = std::max(worst, resid / delta);
    }
    return worst;
}

/// Separation statistics of a log-domain distance matrix against planted
/// labels: max within-cluster and min cross-cluster distance (log scale).
struct SeparationStats {
    double max_within_log = -std::numeric_limits<double>::infinity();
    double min_cross_log = std::numeric_limits<double>::infinity();

    double gap() const { return std::exp(min_cross_log - max_within_log); }
};

/// restrict_to >= 0 limits the "within" side to pairs inside that cluster and
/// the "cross" side to pairs with exactly one endpoint in it.
inline SeparationStats separation_stats(const Matrix& log_dist, const std::vector<int>& labels,
                                        int restrict_to = -1) {
    const int n = static_cast<int>(log_dist.rows());
    SeparationStats st;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const bool same = labels[i] == labels[j];
            if (restrict_to >= 0) {
                const bool in_i = labels[i] == restrict_to, in_j = labels[j] == restrict_to;
                if (same && in_i)
                    st.max_within_log = std::max(st.max_within_log, log_dist(i, j));
                else if (in_i != in_j)
                    st.min_cross_log = std::min(st.min_cross_log, log_dist(i, j));
            } else if (same) {
                st.max_within_log = std::max(st.max_within_log, log_dist(i, j));
            } else {
                st.min_cross_log = std::min(st.min_cross_log, log_dist(i, j));
            }
        }
    }
    return st;
}

}  // namespace blockspec

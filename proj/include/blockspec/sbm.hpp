#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "blockspec/linalg.hpp"
#include "blockspec/rng.hpp"

namespace blockspec {

/// Planted-partition parameters. Either explicit cluster sizes or a cluster
/// count k with uniform random assignment (the balanced variant).
struct BlockParams {
    int n = 0;
    double p = 0.0;  // intra-cluster edge probability
    double q = 0.0;  // inter-cluster edge probability
    std::vector<int> sizes;  // explicit-size mode when nonempty
    int k = 0;               // uniform-assignment mode otherwise

    bool explicit_sizes() const { return !sizes.empty(); }

    void validate() const {
        if (n < 1) throw std::invalid_argument("BlockParams: n must be >= 1");
        if (!(q >= 0.0 && p <= 1.0 && q < p))
            throw std::invalid_argument(
                "BlockParams: need 0 <= q < p <= 1 (p == q has no planted signal)");
        if (explicit_sizes()) {
            int total = 0;
            for (int s : sizes) {
                if (s < 1) throw std::invalid_argument("BlockParams: empty cluster");
                total += s;
            }
            if (total != n) throw std::invalid_argument("BlockParams: sizes must sum to n");
        } else if (k < 1 || k > n) {
            throw std::invalid_argument("BlockParams: need 1 <= k <= n");
        }
    }

    int cluster_count() const { return explicit_sizes() ? static_cast<int>(sizes.size()) : k; }
    double mean_cluster_size() const { return static_cast<double>(n) / cluster_count(); }
};

/// Max entry variance of the noise matrix R.
inline double noise_sigma2(double p, double q) {
    return std::max(p * (1.0 - p), q * (1.0 - q));
}

struct PlantedModel {
    BlockParams params;
    std::vector<int> labels;  // per-vertex cluster id
    std::uint64_t seed = 0;
    bool self_loops = true;  // diagonal sampled as an intra-cluster pair

    int n() const { return params.n; }

    int largest_cluster_size() const {
        std::vector<int> counts(params.cluster_count(), 0);
        for (int l : labels) counts[l]++;
        return *std::max_element(counts.begin(), counts.end());
    }
};

/// Each vertex independently uniform over k labels.
inline std::vector<int> assign_uniform(int n, int k, std::uint64_t seed) {
    if (k < 1 || k > n) throw std::invalid_argument("assign_uniform: need 1 <= k <= n");
    Rng rng(derive_seed(seed, 0x1abe15));
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = static_cast<int>(rng.next_below(k));
    return labels;
}

inline PlantedModel make_planted(const BlockParams& params, std::uint64_t seed,
                                 bool self_loops = true) {
    params.validate();
    PlantedModel m;
    m.params = params;
    m.seed = seed;
    m.self_loops = self_loops;
    if (params.explicit_sizes()) {
        m.labels.reserve(params.n);
        for (std::size_t c = 0; c < params.sizes.size(); ++c)
            m.labels.insert(m.labels.end(), params.sizes[c], static_cast<int>(c));
    } else {
        m.labels = assign_uniform(params.n, params.k, seed);
    }
    return m;
}

/// Samples the 0/1 adjacency matrix: each unordered pair once, probability p
/// for same-label pairs and q otherwise. The diagonal is sampled with
/// probability p by default so that E[B]_{ii} = p - q; with self_loops off the
/// diagonal is zero and the discrepancy lands in the noise part.
inline Matrix sample_ssbm(const PlantedModel& model) {
    model.params.validate();
    const int n = model.n();
    const double p = model.params.p, q = model.params.q;
    Rng rng(derive_seed(model.seed, 0xadacced));
    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            if (i == j && !model.self_loops) {
                rng.next_double();  // keep the stream aligned across modes
                continue;
            }
            const double prob = model.labels[i] == model.labels[j] ? p : q;
            const double v = rng.next_double() < prob ? 1.0 : 0.0;
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    return a;
}

/// B = A - q * ones.
inline Matrix center(const Matrix& a, double q) {
    return a.array() - q;
}

/// B = L + R with L = E[B] (block structure) and R the zero-mean noise.
struct StructureNoiseSplit {
    Matrix L;
    Matrix R;
};

inline Matrix structure_matrix(const PlantedModel& model) {
    const int n = model.n();
    const double d = model.params.p - model.params.q;
    Matrix L = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (model.labels[i] == model.labels[j]) L(i, j) = d;
    return L;
}

inline StructureNoiseSplit split(const Matrix& b, const PlantedModel& model) {
    if (b.rows() != model.n() || b.cols() != model.n())
        throw std::invalid_argument("split: matrix dimension does not match model");
    StructureNoiseSplit s;
    s.L = structure_matrix(model);
    s.R = b - s.L;
    return s;
}

}  // namespace blockspec

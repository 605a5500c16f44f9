#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "blockspec/clustering.hpp"
#include "blockspec/linalg.hpp"
#include "blockspec/rng.hpp"
#include "blockspec/sbm.hpp"
#include "blockspec/scaled_power.hpp"

namespace blockspec {

/// Hard caps for the exhaustive oracles.
constexpr long kMaxMonomials = 300000;   // n^t
constexpr long kMaxPartitions = 10000;   // t^n

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A generally asymmetric matrix carried as exp(log_scale) * base.
struct ScaledMatrix {
    Matrix base;
    double log_scale = 0.0;

    Matrix represented() const { return std::exp(log_scale) * base; }

    static ScaledMatrix from(const Matrix& m) {
        ScaledMatrix s{m, 0.0};
        detail::renormalize(s.base, s.log_scale);
        return s;
    }

    ScaledMatrix times(const ScaledMatrix& o) const {
        ScaledMatrix s{base * o.base, log_scale + o.log_scale};
        detail::renormalize(s.base, s.log_scale);
        return s;
    }

    double log_max_row_norm() const {
        const double v = max_row_norm(base);
        return v > 0.0 ? log_scale + std::log(v)
                       : -std::numeric_limits<double>::infinity();
    }
};

inline ScaledMatrix scaled_sum(const std::vector<ScaledMatrix>& terms, int n) {
    double common = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) common = std::max(common, t.log_scale);
    ScaledMatrix out{Matrix::Zero(n, n), 0.0};
    if (!std::isfinite(common)) return out;
    out.log_scale = common;
    for (const auto& t : terms) out.base += std::exp(t.log_scale - common) * t.base;
    detail::renormalize(out.base, out.log_scale);
    return out;
}

/// The four-term expansion of the powered centered matrix:
/// B^r = L^r + M + M' + R^r with
///   M  = L^{r-1}R + L^{r-2}RB + ... + L R B^{r-2}
///   M' = R L B^{r-2} + R^2 L B^{r-3} + ... + R^{r-1} L.
struct DecompositionTerms {
    ScaledMatrix Lr, M, Mp, Rr;
    int r = 1;
};

inline DecompositionTerms decompose_terms(const StructureNoiseSplit& split, int r) {
    if (r < 1) throw std::invalid_argument("decompose_terms: r must be >= 1");
    const int n = static_cast<int>(split.L.rows());
    const ScaledMatrix L = ScaledMatrix::from(split.L);
    const ScaledMatrix R = ScaledMatrix::from(split.R);
    const ScaledMatrix B = ScaledMatrix::from(split.L + split.R);

    auto power_of = [&](const ScaledMatrix& m, int e) {
        ScaledMatrix acc = m;
        for (int i = 1; i < e; ++i) acc = acc.times(m);
        return acc;
    };

    DecompositionTerms out;
    out.r = r;
    out.Lr = power_of(L, r);
    out.Rr = power_of(R, r);
    if (r == 1) {
        out.M = ScaledMatrix{Matrix::Zero(n, n), 0.0};
        out.Mp = ScaledMatrix{Matrix::Zero(n, n), 0.0};
        return out;
    }
    std::vector<ScaledMatrix> m_terms, mp_terms;
    for (int t = 1; t <= r - 1; ++t) {
        ScaledMatrix term = power_of(L, t).times(R);          // L^t R
        if (r - t - 1 > 0) term = term.times(power_of(B, r - t - 1));
        m_terms.push_back(term);

        ScaledMatrix termp = power_of(R, t).times(L);         // R^t L
        if (r - t - 1 > 0) termp = termp.times(power_of(B, r - t - 1));
        mp_terms.push_back(termp);
    }
    out.M = scaled_sum(m_terms, n);
    out.Mp = scaled_sum(mp_terms, n);
    return out;
}

/// Max relative entry error of L^r + M + M' + R^r against B^r, relative to
/// the max-abs entry of B^r.
inline double decomposition_error(const StructureNoiseSplit& split,
                                  const DecompositionTerms& terms) {
    const int n = static_cast<int>(split.L.rows());
    const ScaledMatrix sum =
        scaled_sum({terms.Lr, terms.M, terms.Mp, terms.Rr}, n);
    const ScaledPower br = scaled_power(split.L + split.R, terms.r);
    const double common = std::max(sum.log_scale, br.log_scale);
    const Matrix diff = std::exp(sum.log_scale - common) * sum.base -
                        std::exp(br.log_scale - common) * br.base;
    const double scale = (std::exp(br.log_scale - common) * br.base).cwiseAbs().maxCoeff();
    if (scale == 0.0) return diff.cwiseAbs().maxCoeff();
    return diff.cwiseAbs().maxCoeff() / scale;
}

/// Row-norm ratios of the decomposition terms against the power threshold,
/// plus the structure separation of L^r.
struct NormLemmaReport {
    double m_ratio = 0.0;        // ||M||_row / Delta
    double mp_ratio = 0.0;       // ||M'||_row / Delta
    double rr_ratio = 0.0;       // ||R^r||_row / Delta
    double lr_cross_over_2delta = 0.0;  // min cross-cluster row distance of L^r / 2 Delta
    double bar = 1.0;
    bool pass = false;
};

inline NormLemmaReport audit_norm_lemmas(const DecompositionTerms& terms, double delta_log,
                                         const PlantedModel& model, double bar = 1.0) {
    NormLemmaReport rep;
    rep.bar = bar;
    rep.m_ratio = std::exp(terms.M.log_max_row_norm() - delta_log);
    rep.mp_ratio = std::exp(terms.Mp.log_max_row_norm() - delta_log);
    rep.rr_ratio = std::exp(terms.Rr.log_max_row_norm() - delta_log);

    // Cross-cluster separation of L^r rows, for a vertex in the largest cluster.
    const int n = model.n();
    std::vector<int> counts(model.params.cluster_count(), 0);
    for (int l : model.labels) counts[l]++;
    const int big = static_cast<int>(std::max_element(counts.begin(), counts.end()) -
                                     counts.begin());
    double min_cross = std::numeric_limits<double>::infinity();
    int anchor = -1;
    for (int i = 0; i < n && anchor < 0; ++i)
        if (model.labels[i] == big) anchor = i;
    for (int j = 0; j < n; ++j) {
        if (model.labels[j] == big) continue;
        const double d = (terms.Lr.base.row(anchor) - terms.Lr.base.row(j)).norm();
        min_cross = std::min(min_cross, d);
    }
    if (std::isfinite(min_cross) && min_cross > 0.0) {
        rep.lr_cross_over_2delta =
            std::exp(terms.Lr.log_scale + std::log(min_cross) - std::log(2.0) - delta_log);
    }
    rep.pass = rep.m_ratio <= bar && rep.mp_ratio <= bar && rep.rr_ratio <= bar &&
               (model.params.cluster_count() == 1 || rep.lr_cross_over_2delta >= 1.0);
    return rep;
}

/// Restricted-growth encoding of an index list: X[0] = 1, a fresh value gets
/// 1 + max so far, a repeat copies the earlier slot.
inline std::vector<int> encode_index_list(const std::vector<int>& indices) {
    if (indices.empty()) throw std::invalid_argument("encode_index_list: empty list");
    const int t = static_cast<int>(indices.size());
    std::vector<int> x(t);
    x[0] = 1;
    for (int i = 1; i < t; ++i) {
        int match = -1;
        int max_so_far = 0;
        for (int j = 0; j < i; ++j) {
            max_so_far = std::max(max_so_far, x[j]);
            if (indices[j] == indices[i]) match = j;
        }
        x[i] = match >= 0 ? x[match] : max_so_far + 1;
    }
    return x;
}

/// All encodings realized by lists in [m]^t for m >= t; these are exactly the
/// restricted-growth strings of length t (Bell(t) of them, <= t^t).
inline std::vector<std::vector<int>> enumerate_encodings(int t) {
    if (t < 1) throw std::invalid_argument("enumerate_encodings: t must be >= 1");
    if (t > 8) throw ResourceError("enumerate_encodings: t > 8 exceeds the enumeration cap");
    std::vector<std::vector<int>> out;
    std::vector<int> x(t);
    x[0] = 1;
    // Depth-first over the restricted-growth constraint x[i] <= 1 + max(x[0..i-1]).
    auto rec = [&](auto&& self, int i, int max_so_far) -> void {
        if (i == t) {
            out.push_back(x);
            return;
        }
        for (int v = 1; v <= max_so_far + 1; ++v) {
            x[i] = v;
            self(self, i + 1, std::max(max_so_far, v));
        }
    };
    rec(rec, 1, 1);
    return out;
}

/// Per-encoding-class sums of the monomials of (R^t L)_{a,b}, exhaustively
/// over all n^t index lists, with the direct matrix-product entry alongside.
struct GroupSumResult {
    std::map<std::vector<int>, double> class_sums;
    double total = 0.0;
    double direct = 0.0;
    double rel_error = 0.0;
};

inline GroupSumResult group_sum_oracle(const Matrix& R, const Matrix& L, int a, int b, int t) {
    const int n = static_cast<int>(R.rows());
    if (t < 1) throw std::invalid_argument("group_sum_oracle: t must be >= 1");
    double count = std::pow(static_cast<double>(n), t);
    if (count > kMaxMonomials)
        throw ResourceError("group_sum_oracle: n^t exceeds the monomial cap of " +
                            std::to_string(kMaxMonomials));

    GroupSumResult res;
    std::vector<int> idx(t, 0);
    while (true) {
        double mono = R(a, idx[0]);
        for (int i = 1; i < t; ++i) mono *= R(idx[i - 1], idx[i]);
        mono *= L(idx[t - 1], b);
        res.class_sums[encode_index_list(idx)] += mono;
        res.total += mono;
        int pos = t - 1;
        while (pos >= 0 && ++idx[pos] == n) idx[pos--] = 0;
        if (pos < 0) break;
    }

    Matrix prod = R;
    for (int i = 1; i < t; ++i) prod = prod * R;
    res.direct = (prod * L)(a, b);
    const double scale = std::max(1.0, std::abs(res.direct));
    res.rel_error = std::abs(res.total - res.direct) / scale;
    return res;
}

/// Exact identity W^t = t^t * E_T[W^t(T)]: the all-distinct-index class sum
/// equals t^t times the average over all t^n labeled partitions of [n].
struct UnbiasednessResult {
    double w_direct = 0.0;
    double w_from_partitions = 0.0;
    double rel_error = 0.0;
};

inline UnbiasednessResult partition_unbiasedness_check(const Matrix& R, const Matrix& L,
                                                       int a, int b, int t) {
    const int n = static_cast<int>(R.rows());
    if (t < 1) throw std::invalid_argument("partition_unbiasedness_check: t must be >= 1");
    const double n_lists = std::pow(static_cast<double>(n), t);
    const double n_parts = std::pow(static_cast<double>(t), n);
    if (n_lists > kMaxMonomials)
        throw ResourceError("partition_unbiasedness_check: n^t exceeds the monomial cap");
    if (n_parts > kMaxPartitions)
        throw ResourceError("partition_unbiasedness_check: t^n exceeds the partition cap of " +
                            std::to_string(kMaxPartitions));

    // Collect the all-distinct index lists and their monomials once.
    std::vector<std::vector<int>> lists;
    std::vector<double> monomials;
    std::vector<int> idx(t, 0);
    while (true) {
        bool distinct = true;
        for (int i = 0; i < t && distinct; ++i)
            for (int j = i + 1; j < t; ++j)
                if (idx[i] == idx[j]) { distinct = false; break; }
        if (distinct) {
            double mono = R(a, idx[0]);
            for (int i = 1; i < t; ++i) mono *= R(idx[i - 1], idx[i]);
            mono *= L(idx[t - 1], b);
            lists.push_back(idx);
            monomials.push_back(mono);
        }
        int pos = t - 1;
        while (pos >= 0 && ++idx[pos] == n) idx[pos--] = 0;
        if (pos < 0) break;
    }

    UnbiasednessResult res;
    for (double m : monomials) res.w_direct += m;

    // Exhaustive average of W(T) over every assignment of [n] into t labeled sets.
    std::vector<int> assign(n, 0);
    double sum_over_parts = 0.0;
    long part_count = 0;
    while (true) {
        double w_t = 0.0;
        for (std::size_t m = 0; m < lists.size(); ++m) {
            bool in = true;
            for (int i = 0; i < t; ++i)
                if (assign[lists[m][i]] != i) { in = false; break; }
            if (in) w_t += monomials[m];
        }
        sum_over_parts += w_t;
        ++part_count;
        int pos = n - 1;
        while (pos >= 0 && ++assign[pos] == t) assign[pos--] = 0;
        if (pos < 0) break;
    }
    res.w_from_partitions = std::pow(static_cast<double>(t), t) * sum_over_parts / part_count;
    const double scale = std::max(1.0, std::abs(res.w_direct));
    res.rel_error = std::abs(res.w_direct - res.w_from_partitions) / scale;
    return res;
}

/// Monte Carlo variant past the partition cap: sampled partitions with a
/// reported standard error.
struct UnbiasednessMcResult {
    double w_direct = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
};

inline UnbiasednessMcResult partition_unbiasedness_mc(const Matrix& R, const Matrix& L,
                                                      int a, int b, int t, int samples,
                                                      std::uint64_t seed) {
    const int n = static_cast<int>(R.rows());
    if (std::pow(static_cast<double>(n), t) > kMaxMonomials)
        throw ResourceError("partition_unbiasedness_mc: n^t exceeds the monomial cap");
    std::vector<std::vector<int>> lists;
    std::vector<double> monomials;
    std::vector<int> idx(t, 0);
    while (true) {
        bool distinct = true;
        for (int i = 0; i < t && distinct; ++i)
            for (int j = i + 1; j < t; ++j)
                if (idx[i] == idx[j]) { distinct = false; break; }
        if (distinct) {
            double mono = R(a, idx[0]);
            for (int i = 1; i < t; ++i) mono *= R(idx[i - 1], idx[i]);
            mono *= L(idx[t - 1], b);
            lists.push_back(idx);
            monomials.push_back(mono);
        }
        int pos = t - 1;
        while (pos >= 0 && ++idx[pos] == n) idx[pos--] = 0;
        if (pos < 0) break;
    }

    UnbiasednessMcResult res;
    for (double m : monomials) res.w_direct += m;
    Rng rng(derive_seed(seed, 0x9a57));
    const double tt = std::pow(static_cast<double>(t), t);
    double sum = 0.0, sum2 = 0.0;
    std::vector<int> assign(n);
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) assign[i] = static_cast<int>(rng.next_below(t));
        double w_t = 0.0;
        for (std::size_t m = 0; m < lists.size(); ++m) {
            bool in = true;
            for (int i = 0; i < t; ++i)
                if (assign[lists[m][i]] != i) { in = false; break; }
            if (in) w_t += monomials[m];
        }
        const double v = tt * w_t;
        sum += v;
        sum2 += v * v;
    }
    res.estimate = sum / samples;
    const double var = std::max(0.0, sum2 / samples - res.estimate * res.estimate);
    res.std_error = std::sqrt(var / samples);
    return res;
}

/// Max-entry ratios of R^t L and L^t R against their calibration envelopes
/// (asymptotic constants replaced as documented in the harness).
struct EntryBoundReport {
    double rtl_max_entry = 0.0;
    double rtl_envelope = 0.0;
    double rtl_ratio = 0.0;
    double ltr_max_entry = 0.0;
    double ltr_envelope = 0.0;
    double ltr_ratio = 0.0;
};

inline EntryBoundReport audit_entry_bound_rtl(const StructureNoiseSplit& split, int t,
                                              int s_star, double p, double q) {
    if (t < 1) throw std::invalid_argument("audit_entry_bound_rtl: t must be >= 1");
    const int n = static_cast<int>(split.L.rows());
    const double logn = std::log(static_cast<double>(n));
    const double d = p - q;

    ScaledMatrix rt = ScaledMatrix::from(split.R);
    const ScaledMatrix R = rt;
    for (int i = 1; i < t; ++i) rt = rt.times(R);
    const ScaledMatrix rtl = rt.times(ScaledMatrix::from(split.L));
    ScaledMatrix lt = ScaledMatrix::from(split.L);
    const ScaledMatrix L = lt;
    for (int i = 1; i < t; ++i) lt = lt.times(L);
    const ScaledMatrix ltr = lt.times(R);

    EntryBoundReport rep;
    rep.rtl_max_entry = std::exp(rtl.log_scale) * rtl.base.cwiseAbs().maxCoeff();
    rep.ltr_max_entry = std::exp(ltr.log_scale) * ltr.base.cwiseAbs().maxCoeff();
    // Empirical envelope: calibration constant 1, (log n)^3 in place of the
    // asymptotic (log n)^6.
    rep.rtl_envelope = std::sqrt(p * (1.0 - q)) * std::pow(logn, 3) * d * std::sqrt(s_star) *
                       std::pow(d * s_star, t - 1);
    rep.ltr_envelope = 96.0 * std::sqrt(p * (1.0 - q)) * std::sqrt(s_star) * logn *
                       std::pow(d, t) * std::pow(static_cast<double>(s_star), t - 1);
    rep.rtl_ratio = rep.rtl_max_entry / rep.rtl_envelope;
    rep.ltr_ratio = rep.ltr_max_entry / rep.ltr_envelope;
    return rep;
}

/// Eigenvalue scaling of the projection/power link: f_r lambda_i^r should sit
/// near 1 for i <= k and vanish for i > k.
struct ProjectionScalingReport {
    double topk_max_deviation = 0.0;  // max |f_r lambda_i^r - 1|, i <= k
    double tail_max = 0.0;            // max f_r |lambda_j|^r, j > k
};

inline ProjectionScalingReport audit_projection_scaling(const Matrix& b, int k, int r,
                                                        double p, double q) {
    const int n = static_cast<int>(b.rows());
    if (k < 1 || k > n) throw std::invalid_argument("audit_projection_scaling: k out of range");
    const double s = static_cast<double>(n) / k;
    const double log_unit = std::log(p - q) + std::log(s);  // log((p-q)s)
    const EigenDecomposition d = sym_eigen(b);
    ProjectionScalingReport rep;
    for (int i = 0; i < n; ++i) {
        const double lam = d.eigenvalues[i];
        const double mag =
            lam == 0.0 ? 0.0 : std::exp(r * (std::log(std::abs(lam)) - log_unit));
        if (i < k) {
            const double signed_val = (lam < 0.0 && (r % 2)) ? -mag : mag;
            rep.topk_max_deviation = std::max(rep.topk_max_deviation, std::abs(signed_val - 1.0));
        } else {
            rep.tail_max = std::max(rep.tail_max, mag);
        }
    }
    return rep;
}

}  // namespace blockspec

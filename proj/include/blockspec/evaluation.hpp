#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "blockspec/clustering.hpp"

namespace blockspec {

/// Permutation-invariant comparison of a recovered clustering against the
/// planted labels.
struct RecoveryReport {
    bool exact_all = false;      // every planted cluster recovered as a set
    bool exact_largest = false;  // the largest planted cluster recovered as a set
    double accuracy = 0.0;       // fraction correct under greedy max-overlap matching
    std::vector<double> per_cluster_jaccard;
};

struct RecoverySummary {
    double mean_accuracy = 0.0;
    double min_accuracy = 1.0;
    double exact_all_rate = 0.0;
    double exact_largest_rate = 0.0;
    int count = 0;
};

inline RecoveryReport compare(const Clustering& found, const std::vector<int>& truth) {
    const int n = static_cast<int>(truth.size());
    int covered = 0;
    for (const auto& g : found.groups) covered += static_cast<int>(g.size());
    {
        std::set<int> seen;
        for (const auto& g : found.groups)
            for (int v : g) {
                if (v < 0 || v >= n || !seen.insert(v).second)
                    throw std::invalid_argument("compare: found groups not over the truth vertex set");
            }
    }

    const int k = truth.empty() ? 0 : *std::max_element(truth.begin(), truth.end()) + 1;
    std::vector<std::vector<int>> truth_groups(k);
    for (int i = 0; i < n; ++i) truth_groups[truth[i]].push_back(i);

    // Overlap counts between every found group and every planted cluster.
    const int f = static_cast<int>(found.groups.size());
    std::vector<std::vector<int>> overlap(f, std::vector<int>(k, 0));
    for (int g = 0; g < f; ++g)
        for (int v : found.groups[g]) overlap[g][truth[v]]++;

    // Greedy matching, largest overlaps first; ties broken deterministically.
    std::vector<std::tuple<int, int, int>> pairs;  // (-overlap, found idx, truth idx)
    for (int g = 0; g < f; ++g)
        for (int t = 0; t < k; ++t)
            if (overlap[g][t] > 0) pairs.emplace_back(-overlap[g][t], g, t);
    std::sort(pairs.begin(), pairs.end());

    RecoveryReport rep;
    rep.per_cluster_jaccard.assign(k, 0.0);
    std::vector<bool> found_used(f, false), truth_used(k, false);
    int matched = 0;
    for (const auto& [neg, g, t] : pairs) {
        if (found_used[g] || truth_used[t]) continue;
        found_used[g] = true;
        truth_used[t] = true;
        matched += -neg;
        const int uni = static_cast<int>(found.groups[g].size() + truth_groups[t].size()) + neg;
        rep.per_cluster_jaccard[t] = static_cast<double>(-neg) / uni;
    }
    rep.accuracy = n > 0 ? static_cast<double>(matched) / n : 1.0;

    auto exactly_recovered = [&](const std::vector<int>& cluster) {
        for (const auto& g : found.groups) {
            if (g.size() != cluster.size()) continue;
            std::vector<int> sorted = g;
            std::sort(sorted.begin(), sorted.end());
            if (sorted == cluster) return true;
        }
        return false;
    };
    rep.exact_all = covered == n;
    for (const auto& tg : truth_groups)
        if (!exactly_recovered(tg)) rep.exact_all = false;

    int largest = 0;
    for (int t = 1; t < k; ++t)
        if (truth_groups[t].size() > truth_groups[largest].size()) largest = t;
    rep.exact_largest = k > 0 && exactly_recovered(truth_groups[largest]);
    if (rep.exact_all && covered == n) rep.accuracy = 1.0;
    return rep;
}

inline RecoverySummary aggregate(const std::vector<RecoveryReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("aggregate: empty report list");
    RecoverySummary s;
    s.count = static_cast<int>(reports.size());
    for (const auto& r : reports) {
        s.mean_accuracy += r.accuracy;
        s.min_accuracy = std::min(s.min_accuracy, r.accuracy);
        s.exact_all_rate += r.exact_all ? 1.0 : 0.0;
        s.exact_largest_rate += r.exact_largest ? 1.0 : 0.0;
    }
    s.mean_accuracy /= s.count;
    s.exact_all_rate /= s.count;
    s.exact_largest_rate /= s.count;
    return s;
}

}  // namespace blockspec

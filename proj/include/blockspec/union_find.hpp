#pragma once

#include <numeric>
#include <vector>

namespace blockspec {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) rank_[a]++;
    }

    /// Components as vertex-index sets, ordered by smallest member.
    std::vector<std::vector<int>> groups() {
        const int n = static_cast<int>(parent_.size());
        std::vector<int> root_to_group(n, -1);
        std::vector<std::vector<int>> out;
        for (int i = 0; i < n; ++i) {
            const int r = find(i);
            if (root_to_group[r] < 0) {
                root_to_group[r] = static_cast<int>(out.size());
                out.emplace_back();
            }
            out[root_to_group[r]].push_back(i);
        }
        return out;
    }

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
};

}  // namespace blockspec

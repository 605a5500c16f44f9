#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "blockspec/linalg.hpp"

namespace blockspec {

/// Edge-list text format: one "u v" pair per line, 0-indexed, each undirected
/// edge stored once (u <= v), self-loop as "u u".
inline void write_edge_list(std::ostream& os, const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (a(i, j) != 0.0) os << i << ' ' << j << '\n';
}

inline void write_edge_list_file(const std::string& path, const Matrix& a) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_edge_list(os, a);
}

/// Reads an edge list into an adjacency matrix. n is taken from the caller
/// (0 means infer from the largest index seen).
inline Matrix read_edge_list(std::istream& is, int n = 0) {
    std::vector<std::pair<int, int>> edges;
    std::string line;
    int line_no = 0;
    int max_idx = -1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        int u, v;
        if (!(ls >> u >> v) || u < 0 || v < 0)
            throw std::runtime_error("edge list parse error at line " + std::to_string(line_no));
        edges.emplace_back(u, v);
        max_idx = std::max({max_idx, u, v});
    }
    if (n == 0) n = max_idx + 1;
    if (max_idx >= n) throw std::runtime_error("edge index exceeds declared vertex count");
    Matrix a = Matrix::Zero(n, n);
    for (auto [u, v] : edges) {
        a(u, v) = 1.0;
        a(v, u) = 1.0;
    }
    return a;
}

inline Matrix read_edge_list_file(const std::string& path, int n = 0) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return read_edge_list(is, n);
}

/// Labels file: one integer per line, line i = cluster id of vertex i.
inline void write_labels_file(const std::string& path, const std::vector<int>& labels) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    for (int l : labels) os << l << '\n';
}

inline std::vector<int> read_labels_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    std::vector<int> labels;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            labels.push_back(std::stoi(line));
        } catch (const std::exception&) {
            throw std::runtime_error("labels parse error at line " + std::to_string(line_no));
        }
    }
    return labels;
}

}  // namespace blockspec

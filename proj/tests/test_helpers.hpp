#pragma once

#include "blockspec/blockspec.hpp"

namespace blockspec::testing {

inline Matrix random_symmetric(int n, std::uint64_t seed, double scale = 1.0) {
    Rng rng(seed);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = scale * (2.0 * rng.next_double() - 1.0);
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

inline Matrix random_matrix(int n, std::uint64_t seed, double scale = 1.0) {
    Rng rng(seed);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = scale * (2.0 * rng.next_double() - 1.0);
    return m;
}

inline Vector random_vector(int n, std::uint64_t seed) {
    Rng rng(seed);
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = 2.0 * rng.next_double() - 1.0;
    return v;
}

}  // namespace blockspec::testing

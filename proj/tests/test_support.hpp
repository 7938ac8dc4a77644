#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>

#include "ehz/polytope.hpp"
#include "ehz/qp.hpp"

namespace ehz::testing {

inline std::string fixture(const std::string& name) {
    return std::string(EHZ_FIXTURE_DIR) + "/" + name;
}

inline HPolytope random_polygon(int facets, std::uint64_t seed) {
    return make_random_polytope(1, facets, seed);
}

/** Euclidean projection onto the simplex {x >= 0, sum x = 1}. */
inline Vec project_simplex(const Vec& v) {
    const int n = static_cast<int>(v.size());
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double acc = 0.0, tau = 0.0;
    for (int j = 0; j < n; ++j) {
        acc += u[j];
        const double t = (acc - 1.0) / (j + 1);
        if (u[j] - t > 0.0) tau = t;
    }
    return (v.array() - tau).cwiseMax(0.0).matrix();
}

/**
 * Reference maximum of the concave program max 0.5 x'Sx over the simplex
 * for negative semidefinite S: projected gradient ascent with a fixed
 * 1/L step. Independent of the face-enumeration solver.
 */
inline double nsd_simplex_max(const Mat& S, int iters = 50000) {
    const int n = static_cast<int>(S.rows());
    const double L = std::max(1.0, S.norm());
    Vec x = Vec::Constant(n, 1.0 / n);
    for (int k = 0; k < iters; ++k) {
        const Vec g = S * x;
        const Vec next = project_simplex(x + g / L);
        if ((next - x).lpNorm<Eigen::Infinity>() < 1e-15) {
            x = next;
            break;
        }
        x = next;
    }
    return 0.5 * x.dot(S * x);
}

/** Random symmetric matrix with entries of order one. */
inline Mat random_symmetric(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    Mat A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = coef(rng);
    return 0.5 * (A + A.transpose());
}

/** Random negative semidefinite matrix -A'A scaled to unit norm. */
inline Mat random_nsd(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
    Mat S = -A.transpose() * A;
    return S / std::max(1.0, S.norm());
}

}  // namespace ehz::testing

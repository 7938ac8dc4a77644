#pragma once

#include <cstdint>
#include <vector>

#include "ehz/errors.hpp"
#include "ehz/symplectic.hpp"

namespace ehz {

/**
 * Maximization of the (generally indefinite) quadratic form 0.5 * b'Sb over
 * the polytope P = {b : Eb = f, b >= 0}. Callers guarantee P is compact;
 * every instance built here has an all-positive equality row.
 */
struct QuadraticOverPolytope {
    Mat S;               // symmetric objective matrix, F x F
    Mat E;               // equality rows, m x F
    Vec f;               // equality right-hand side, m entries
    int exact_limit = 16;  // largest F accepted by maximize_exact
};

enum class QpStatus { Exact, HeuristicLowerBound };

struct QPSolution {
    double value = 0.0;
    Vec argmax;
    std::vector<int> active_set;  // variables pinned at zero, ascending
    QpStatus status = QpStatus::Exact;
};

/**
 * Exact global maximum by complete face enumeration. For every active set,
 * the face's affine hull is parametrized by a null-space basis and the
 * stationarity system of the reduced quadratic is solved by least squares;
 * singular-but-consistent systems have constant objective value on their
 * solution set, so a feasible representative (found by LP when the
 * minimum-norm one has negative entries) is accepted as a candidate.
 * The best feasible candidate is the global maximum; value ties are broken
 * toward the lexicographically smallest active set.
 */
QPSolution maximize_exact(const QuadraticOverPolytope& q);

/**
 * Away-steps Frank-Wolfe ascent with exact line search, restarted from
 * random vertices (each obtained from an LP with a seeded random objective).
 * Returns the best stationary value found; a lower bound on the exact
 * maximum. Deterministic in (restarts, seed).
 */
QPSolution maximize_heuristic(const QuadraticOverPolytope& q, int restarts, std::uint64_t seed);

}  // namespace ehz

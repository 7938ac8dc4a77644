#pragma once

#include <cstdint>
#include <vector>

#include "ehz/polytope.hpp"

namespace ehz {

/**
 * Facet-normal sequence with repetitions allowed. Valid when beta >= 0,
 * sum beta_i h_K(n_i) = 1 and sum beta_i n_i = 0, each within 1e-9.
 */
struct RepetitionSequence {
    std::vector<Vec> normals;
    Vec beta;
};

/**
 * Polygon area by vertex enumeration (facets sorted by normal angle,
 * adjacent supporting lines intersected, shoelace sum). In the plane the
 * capacity of a convex body equals its area, which makes this an
 * independent ground truth. Requires dim == 2.
 */
double area_2d(const HPolytope& K);

/**
 * Upper bound on the capacity from one valid repetition sequence:
 * 0.5 / sum_{j<i} beta_i beta_j omega(n_i, n_j). Throws
 * ValidationError("InvalidSequence") when the sequence constraints fail and
 * SolverError("NonpositiveObjective") when the sum is not positive (no
 * bound then).
 */
double repetition_bound(const HPolytope& K, const RepetitionSequence& seq);

/**
 * Best (smallest) repetition bound over `samples` random facet sequences of
 * length 3..max_len, with beta chosen per sequence by maximizing the
 * quadratic over the sequence constraint polytope. When max_len >= F and
 * the facet count permits the exact search, the simple-sequence optimum is
 * folded in, so the result equals the capacity there; repetitions never
 * improve on it. Returns +infinity when no sampled sequence yields a bound.
 * Works on the translate of K centered at its Chebyshev center.
 */
double repetition_ladder(const HPolytope& K, int max_len, int samples, std::uint64_t seed);

/**
 * Discrete dual ascent: maximize G = sum_{j<i} t_i t_j omega(v_i, v_j)
 * over durations t in the simplex and velocities v_i in conv{p_1..p_F}
 * with sum t_i v_i = 0, alternating an exact duration step with a
 * linearized velocity step plus exact line search, multi-restart. Every
 * feasible configuration bounds the capacity from above, and the estimate
 * 2 / bestG converges to the capacity on desk-scale instances. Works on
 * the translate of K centered at its Chebyshev center. Returns +infinity
 * when no restart reaches a positive objective.
 */
double clarke_dual_ascent(const HPolytope& K, int m_segments, int restarts,
                          std::uint64_t seed);

}  // namespace ehz

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ehz/orbit.hpp"
#include "ehz/polytope.hpp"
#include "ehz/qp.hpp"

namespace ehz {

/**
 * Coefficient polytope of the capacity formula:
 * M(K) = {beta >= 0 : sum beta_i n_i = 0, sum beta_i h_i = 1}.
 * E stacks the 2n normal-balance rows first and the height row last.
 */
struct MConstraints {
    Mat E;
    Vec f;
};

/** Assemble M(K); requires origin strictly inside K. Checks nonemptiness. */
MConstraints build_M(const HPolytope& K);

/**
 * The permutation objective: sum over pairs j < i of
 * beta[sigma_i] * beta[sigma_j] * omega(n[sigma_i], n[sigma_j]).
 */
double objective(const SymplecticContext& ctx, const Mat& normals,
                 const std::vector<int>& sigma, const Vec& beta);

struct CandidateSolution {
    std::vector<int> sigma;  // facet index per position
    Vec beta;                // facet-indexed coefficients
    double objective = 0.0;
};

enum class CapacityMode { Exact, Heuristic };

struct SearchDiagnostics {
    std::int64_t nodes = 0;    // stationarity systems examined
    std::int64_t cycles = 0;   // transition-graph cycles examined (pruned path)
    double elapsed_ms = 0.0;   // wall clock, reported on stdout only
};

/**
 * Capacity with its optimizer. The optimizer and the orbit certificate
 * refer to the translate of K whose Chebyshev center sits at the origin;
 * `center` records the applied shift (capacity itself is translation
 * invariant).
 */
struct CapacityResult {
    double capacity = 0.0;
    CandidateSolution best;
    CapacityMode mode = CapacityMode::Exact;
    std::int64_t permutations_examined = 0;
    std::optional<OrbitCertificate> orbit;
    Vec center;
    SearchDiagnostics diagnostics;
};

struct CapacityOptions {
    CapacityMode mode = CapacityMode::Exact;
    int exact_limit = 10;     // largest facet count for exact search
    int restarts = 64;        // heuristic mode: sampled permutations
    std::uint64_t seed = 0;
    bool attach_orbit = true;
};

/**
 * Default solver: enumerates ordered supports (subset of facets plus a
 * cyclic order up to rotation and reversal) and solves each stationarity
 * system directly. Equivalent to the per-permutation search (every face of
 * every fixed-order problem appears exactly once as an ordered support) but
 * without revisiting a support once per permutation of the complement.
 * OpenMP-parallel with a schedule-independent merge.
 */
CapacityResult capacity(const HPolytope& K, const CapacityOptions& opts = {});

/**
 * Serial reference: permutations with position 1 pinned to facet 1, modulo
 * reversal; one exact QP per class and orientation. Kept for testing and
 * benchmarking against the default kernel.
 */
CapacityResult capacity_reference(const HPolytope& K, const CapacityOptions& opts = {});

/**
 * Centrally-symmetric fast path: one representative per facet pair, sign
 * patterns modulo global flip, orders modulo reversal, maximization over
 * the slice {beta >= 0, sum beta_i h_i = 1/2}; capacity is 1/4 over the
 * maximum. The optimizer is expanded to a full antipodal sequence so the
 * orbit certificate comes from the same machinery as the general path.
 */
CapacityResult capacity_symmetric(const HPolytope& K, const CapacityOptions& opts = {});

/** Serial literal enumeration of all sign patterns and orders (small F/2). */
CapacityResult capacity_symmetric_reference(const HPolytope& K,
                                            const CapacityOptions& opts = {});

/**
 * Facet transition digraph: edge i -> j iff some boundary point of facet i
 * reaches facet j along the facet's characteristic direction p_i =
 * (2/h_i) J n_i with step at least 1e-7 while staying inside K.
 */
struct TransitionGraph {
    int facet_count = 0;
    std::vector<std::vector<int>> adjacency;  // ascending successor lists

    int edge_count() const {
        int e = 0;
        for (const auto& a : adjacency) e += static_cast<int>(a.size());
        return e;
    }
};

TransitionGraph build_transition_graph(const HPolytope& K);

/**
 * All simple cycles, each rotated so its smallest vertex comes first,
 * in the enumeration order of Johnson's algorithm. Throws
 * CycleLimitExceeded beyond `limit` cycles.
 */
std::vector<std::vector<int>> simple_cycles(const TransitionGraph& g,
                                            std::int64_t limit = 2000000);

/**
 * Search restricted to simple cycles of the transition graph (the order of
 * facets along a trajectory must follow graph edges). Agrees with the
 * unrestricted search; feasible far beyond it in facet count.
 */
CapacityResult capacity_pruned(const HPolytope& K, const CapacityOptions& opts = {});

}  // namespace ehz

#pragma once

#include <string>
#include <vector>

#include "ehz/polytope.hpp"
#include "ehz/symplectic.hpp"

namespace ehz {

struct Segment {
    Vec velocity;
    double duration = 0.0;
};

/** Closed piecewise-affine loop; total duration 1, closure within 1e-8. */
struct PiecewiseAffineLoop {
    Vec start;
    std::vector<Segment> segments;
};

/**
 * Closed-characteristic certificate attached to an exact capacity result.
 * All geometric data refers to the frame in which it was reconstructed
 * (origin strictly inside the polytope).
 */
struct OrbitCertificate {
    PiecewiseAffineLoop loop;
    double action = 0.0;
    double boundary_residual = 0.0;
    double cone_residual = 0.0;
    std::vector<int> facet_visit_counts;
    double speed_scale = 0.0;  // the common positive factor d in w = d*(2/h)Jn
};

/**
 * Rebuild the closed orbit from an optimizer (sigma, beta) of the capacity
 * formula. Dwell times are T_i = beta[sigma_i] * h[sigma_i] on the support
 * of beta; the optimizer order is traversed in reverse (the formula's
 * maximizing order is the time-reversed trajectory under this sign
 * convention, so reversal is what makes the speed scale positive).
 * Start point and speed scale come from least squares over the
 * segment-on-facet incidence equations.
 */
OrbitCertificate reconstruct(const HPolytope& K, const std::vector<int>& sigma, const Vec& beta);

/**
 * Discrete action of a closed loop: 0.5 * sum_{j<i} T_i T_j omega(w_j, w_i)
 * with velocities ordered by time (earlier argument first). Equals the
 * quadrature of 0.5<J gamma, gamma'> for closed loops.
 */
double action(const SymplecticContext& ctx, const PiecewiseAffineLoop& loop);

/** Segment-exact quadrature of 0.5 * <J gamma(t), gamma'(t)> dt. */
double action_quadrature(const SymplecticContext& ctx, const PiecewiseAffineLoop& loop);

struct VerificationCheck {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;
    bool all_passed = false;
};

/**
 * From-scratch structural checks of a certificate against the polytope it
 * was reconstructed on: closure, boundary incidence, normal-cone direction
 * of every segment, single visit per facet, action against the claimed
 * capacity, and duration bookkeeping.
 */
VerificationReport verify(const HPolytope& K, const OrbitCertificate& cert,
                          double capacity_value);

Json orbit_to_json(const PiecewiseAffineLoop& loop, double action_value);

}  // namespace ehz

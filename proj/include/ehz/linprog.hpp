#pragma once

#include "ehz/symplectic.hpp"

namespace ehz {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    Vec x;
};

/**
 * Minimize c.x subject to A x <= b and Aeq x = beq, x free.
 * Dense two-phase simplex on the split-variable standard form with
 * Bland's anti-cycling rule. Intended for small systems (tens of rows);
 * deterministic for identical inputs.
 *
 * Pass 0-row matrices (with matching column counts) for absent blocks.
 */
LpResult solve_lp(const Vec& c, const Mat& A, const Vec& b, const Mat& Aeq, const Vec& beq);

/** Convenience wrapper without equality rows. */
LpResult solve_lp(const Vec& c, const Mat& A, const Vec& b);

}  // namespace ehz

#include "ehz/linprog.hpp"

#include <limits>
#include <vector>

namespace ehz {

namespace {

constexpr double kEnterTol = 1e-10;   // reduced cost threshold
constexpr double kPivotTol = 1e-11;   // minimum pivot magnitude
constexpr double kPhase1Tol = 1e-9;   // residual infeasibility accepted as zero

struct Tableau {
    Mat T;                    // m x (ncols + 1), last column is the rhs
    std::vector<int> basis;   // basic variable per row
    int ncols = 0;

    double& rhs(int r) { return T(r, ncols); }

    void pivot(int r, int j) {
        T.row(r) /= T(r, j);
        for (int i = 0; i < T.rows(); ++i) {
            if (i == r) continue;
            const double f = T(i, j);
            if (f != 0.0) T.row(i) -= f * T.row(r);
        }
        basis[r] = j;
    }
};

// One simplex phase with Bland's rule: smallest eligible entering index,
// smallest basic index on ratio ties. `allowed` masks columns that may enter.
// Returns false when the problem is unbounded in the minimization direction.
bool run_simplex(Tableau& tab, Vec& red, double& obj, const std::vector<char>& allowed) {
    const int m = static_cast<int>(tab.T.rows());
    const long iter_cap = 200000;
    for (long iter = 0;; ++iter) {
        if (iter > iter_cap) throw SolverError("LpStall", "simplex iteration cap exceeded");
        int enter = -1;
        for (int j = 0; j < tab.ncols; ++j) {
            if (allowed[j] && red(j) < -kEnterTol) { enter = j; break; }
        }
        if (enter < 0) return true;

        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int r = 0; r < m; ++r) {
            const double a = tab.T(r, enter);
            if (a <= kPivotTol) continue;
            const double ratio = tab.rhs(r) / a;
            if (ratio < best_ratio - 1e-15 ||
                (ratio <= best_ratio + 1e-15 && (leave < 0 || tab.basis[r] < tab.basis[leave]))) {
                best_ratio = ratio;
                leave = r;
            }
        }
        if (leave < 0) return false;

        obj += red(enter) * best_ratio;
        const double f = red(enter);
        red -= f * tab.T.row(leave).head(tab.ncols).transpose() / tab.T(leave, enter);
        tab.pivot(leave, enter);
    }
}

}  // namespace

LpResult solve_lp(const Vec& c, const Mat& A, const Vec& b, const Mat& Aeq, const Vec& beq) {
    const int nv = static_cast<int>(c.size());
    const int mi = static_cast<int>(A.rows());
    const int me = static_cast<int>(Aeq.rows());
    const int m = mi + me;

    // standard form columns: [u (nv) | v (nv) | slacks (mi) | artificials (m)]
    const int nsplit = 2 * nv;
    const int nart0 = nsplit + mi;
    const int ncols = nart0 + m;

    Tableau tab;
    tab.ncols = ncols;
    tab.T = Mat::Zero(m, ncols + 1);
    tab.basis.assign(m, -1);

    for (int r = 0; r < m; ++r) {
        Vec row(nv);
        double rb;
        if (r < mi) {
            row = A.row(r);
            rb = b(r);
        } else {
            row = Aeq.row(r - mi);
            rb = beq(r - mi);
        }
        double sgn = (rb < 0.0) ? -1.0 : 1.0;
        tab.T.block(r, 0, 1, nv) = sgn * row.transpose();
        tab.T.block(r, nv, 1, nv) = -sgn * row.transpose();
        if (r < mi) tab.T(r, nsplit + r) = sgn;
        tab.T(r, nart0 + r) = 1.0;
        tab.rhs(r) = sgn * rb;
        tab.basis[r] = nart0 + r;
    }

    // phase 1: minimize the sum of artificials
    Vec red = Vec::Zero(ncols);
    red.segment(nart0, m).setOnes();
    double obj = 0.0;
    for (int r = 0; r < m; ++r) {
        red -= tab.T.row(r).head(ncols).transpose();
        obj += tab.rhs(r);
    }
    red.segment(nart0, m).setZero();

    std::vector<char> allowed(ncols, 1);
    for (int j = nart0; j < ncols; ++j) allowed[j] = 0;
    run_simplex(tab, red, obj, allowed);

    LpResult res;
    if (obj > kPhase1Tol) {
        res.status = LpStatus::Infeasible;
        return res;
    }

    // drive residual artificials out of the basis where possible
    for (int r = 0; r < m; ++r) {
        if (tab.basis[r] < nart0) continue;
        int j = 0;
        while (j < nart0 && std::abs(tab.T(r, j)) <= kPivotTol) ++j;
        if (j < nart0) tab.pivot(r, j);
        // otherwise the row is redundant; its artificial stays basic at zero
    }

    // phase 2: original objective on x = u - v
    red = Vec::Zero(ncols);
    red.head(nv) = c;
    red.segment(nv, nv) = -c;
    obj = 0.0;
    for (int r = 0; r < m; ++r) {
        const int bj = tab.basis[r];
        if (bj >= nart0) continue;
        double cb = 0.0;
        if (bj < nv) cb = c(bj);
        else if (bj < nsplit) cb = -c(bj - nv);
        if (cb != 0.0) {
            red -= cb * tab.T.row(r).head(ncols).transpose();
            obj += cb * tab.rhs(r);
        }
    }
    if (!run_simplex(tab, red, obj, allowed)) {
        res.status = LpStatus::Unbounded;
        return res;
    }

    Vec x = Vec::Zero(nv);
    for (int r = 0; r < m; ++r) {
        const int bj = tab.basis[r];
        if (bj < nv) x(bj) += tab.rhs(r);
        else if (bj < nsplit) x(bj - nv) -= tab.rhs(r);
    }
    res.status = LpStatus::Optimal;
    res.x = x;
    res.value = c.dot(x);
    return res;
}

LpResult solve_lp(const Vec& c, const Mat& A, const Vec& b) {
    return solve_lp(c, A, b, Mat::Zero(0, c.size()), Vec::Zero(0));
}

}  // namespace ehz

#include "ehz/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ehz/linprog.hpp"

namespace ehz {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kConsistencyTol = 1e-8;
constexpr double kSvdThreshold = 1e-10;

void check_instance(const QuadraticOverPolytope& q) {
    const int F = static_cast<int>(q.S.rows());
    if (q.S.cols() != F || F < 1)
        throw ValidationError("DimensionMismatch", "objective matrix must be square");
    if ((q.S - q.S.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("AsymmetricObjective", "objective matrix is not symmetric");
    if (q.E.cols() != F || q.E.rows() != q.f.size())
        throw ValidationError("DimensionMismatch", "equality block shapes disagree");
}

void check_feasible(const QuadraticOverPolytope& q) {
    const int F = static_cast<int>(q.S.rows());
    const LpResult r = solve_lp(Vec::Zero(F), -Mat::Identity(F, F), Vec::Zero(F), q.E, q.f);
    if (r.status == LpStatus::Infeasible)
        throw SolverError("InfeasiblePolytope", "constraint system has no nonnegative solution");
}

double evaluate(const Mat& S, const Vec& b) { return 0.5 * b.dot(S * b); }

/** LP step: vertex of P maximizing <g, b>. */
Vec lp_vertex(const QuadraticOverPolytope& q, const Vec& g) {
    const int F = static_cast<int>(q.S.rows());
    const LpResult r = solve_lp(-g, -Mat::Identity(F, F), Vec::Zero(F), q.E, q.f);
    if (r.status == LpStatus::Unbounded)
        throw SolverError("UnboundedPolytope", "feasible set is not compact");
    if (r.status == LpStatus::Infeasible)
        throw SolverError("InfeasiblePolytope", "constraint system has no nonnegative solution");
    return r.x;
}

}  // namespace

QPSolution maximize_exact(const QuadraticOverPolytope& q) {
    check_instance(q);
    const int F = static_cast<int>(q.S.rows());
    if (F > q.exact_limit)
        throw SolverError("ExactLimitExceeded",
                          "face enumeration limited to " + std::to_string(q.exact_limit) +
                              " variables, got " + std::to_string(F));
    check_feasible(q);

    const double f_scale = std::max(1.0, q.f.size() ? q.f.cwiseAbs().maxCoeff() : 0.0);

    bool found = false;
    QPSolution best;
    best.value = -std::numeric_limits<double>::infinity();

    std::vector<int> free_idx;
    std::vector<int> active;
    for (std::uint32_t mask = 0; mask < (1u << F); ++mask) {
        free_idx.clear();
        active.clear();
        for (int i = 0; i < F; ++i)
            (mask >> i & 1u) ? active.push_back(i) : free_idx.push_back(i);
        const int k = static_cast<int>(free_idx.size());

        Vec cand;
        if (k == 0) {
            if (q.f.size() && q.f.cwiseAbs().maxCoeff() > kFeasTol) continue;
            cand = Vec();
        } else {
            Mat Ec(q.E.rows(), k);
            for (int c = 0; c < k; ++c) Ec.col(c) = q.E.col(free_idx[c]);
            Eigen::JacobiSVD<Mat> svd(Ec, Eigen::ComputeFullU | Eigen::ComputeFullV);
            svd.setThreshold(kSvdThreshold);
            const Vec b0 = svd.solve(q.f);
            if ((Ec * b0 - q.f).cwiseAbs().maxCoeff() > kConsistencyTol * f_scale) continue;
            const int nz = k - static_cast<int>(svd.rank());

            Mat Scc(k, k);
            for (int a = 0; a < k; ++a)
                for (int c = 0; c < k; ++c) Scc(a, c) = q.S(free_idx[a], free_idx[c]);

            if (nz == 0) {
                cand = b0;
            } else {
                const Mat Z = svd.matrixV().rightCols(nz);
                const Mat H = Z.transpose() * Scc * Z;
                const Vec g = Z.transpose() * (Scc * b0);
                Eigen::JacobiSVD<Mat> svdH(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
                svdH.setThreshold(kSvdThreshold);
                const Vec y = svdH.solve(-g);
                const double g_scale = std::max(1.0, g.cwiseAbs().maxCoeff());
                if ((H * y + g).cwiseAbs().maxCoeff() > kConsistencyTol * g_scale) continue;
                cand = b0 + Z * y;
                if (cand.minCoeff() < -kFeasTol) {
                    // value is constant on the stationary affine set; look for a
                    // feasible representative there
                    const int nt = nz - static_cast<int>(svdH.rank());
                    if (nt == 0) continue;
                    const Mat W = Z * svdH.matrixV().rightCols(nt);
                    const LpResult rep = solve_lp(Vec::Zero(nt), -W, cand);
                    if (rep.status != LpStatus::Optimal) continue;
                    cand += W * rep.x;
                }
            }
            if (cand.minCoeff() < -kFeasTol) continue;
        }

        Vec beta = Vec::Zero(F);
        for (int c = 0; c < k; ++c) beta(free_idx[c]) = std::max(0.0, cand(c));
        const double value = evaluate(q.S, beta);

        const bool better =
            !found || value > best.value ||
            (value == best.value &&
             std::lexicographical_compare(active.begin(), active.end(), best.active_set.begin(),
                                          best.active_set.end()));
        if (better) {
            found = true;
            best.value = value;
            best.argmax = beta;
            best.active_set = active;
        }
    }

    if (!found)
        throw SolverError("NoCandidate", "face enumeration produced no feasible candidate");
    best.status = QpStatus::Exact;
    return best;
}

QPSolution maximize_heuristic(const QuadraticOverPolytope& q, int restarts, std::uint64_t seed) {
    check_instance(q);
    check_feasible(q);
    const int F = static_cast<int>(q.S.rows());
    if (restarts < 1) restarts = 1;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    bool found = false;
    Vec best_beta;
    double best_value = -std::numeric_limits<double>::infinity();

    for (int r = 0; r < restarts; ++r) {
        Vec dir(F);
        for (int i = 0; i < F; ++i) dir(i) = gauss(rng);
        Vec beta = lp_vertex(q, dir);

        std::vector<Vec> atoms{beta};
        std::vector<double> weights{1.0};

        for (int iter = 0; iter < 1000; ++iter) {
            const Vec g = q.S * beta;
            const Vec s = lp_vertex(q, g);
            const double gap_fw = g.dot(s - beta);

            int ia = 0;
            double worst = std::numeric_limits<double>::infinity();
            for (size_t a = 0; a < atoms.size(); ++a) {
                const double v = g.dot(atoms[a]);
                if (v < worst) {
                    worst = v;
                    ia = static_cast<int>(a);
                }
            }
            const double gap_away = g.dot(beta) - worst;
            const double scale = std::max(1.0, std::abs(evaluate(q.S, beta)));
            if (std::max(gap_fw, gap_away) <= 1e-12 * scale) break;

            Vec d;
            double gamma_max;
            bool fw_step = gap_fw >= gap_away;
            if (!fw_step && weights[ia] >= 1.0 - 1e-14) fw_step = true;
            if (fw_step) {
                d = s - beta;
                gamma_max = 1.0;
            } else {
                d = beta - atoms[ia];
                gamma_max = weights[ia] / (1.0 - weights[ia]);
            }
            const double slope = g.dot(d);
            const double curv = d.dot(q.S * d);
            double gamma = gamma_max;
            if (curv < -1e-14) gamma = std::min(gamma_max, -slope / curv);
            if (gamma <= 0.0) break;

            beta += gamma * d;
            if (fw_step) {
                for (auto& w : weights) w *= (1.0 - gamma);
                bool merged = false;
                for (size_t a = 0; a < atoms.size(); ++a)
                    if ((atoms[a] - s).cwiseAbs().maxCoeff() < 1e-12) {
                        weights[a] += gamma;
                        merged = true;
                        break;
                    }
                if (!merged) {
                    atoms.push_back(s);
                    weights.push_back(gamma);
                }
            } else {
                for (auto& w : weights) w *= (1.0 + gamma);
                weights[ia] -= gamma;
            }
            for (size_t a = atoms.size(); a-- > 0;)
                if (weights[a] < 1e-14) {
                    atoms.erase(atoms.begin() + a);
                    weights.erase(weights.begin() + a);
                }
            double wsum = 0.0;
            for (double w : weights) wsum += w;
            if (wsum > 0.0)
                for (auto& w : weights) w /= wsum;
        }

        const double value = evaluate(q.S, beta);
        if (!found || value > best_value) {
            found = true;
            best_value = value;
            best_beta = beta;
        }
    }

    QPSolution sol;
    sol.status = QpStatus::HeuristicLowerBound;
    sol.argmax = best_beta;
    for (int i = 0; i < F; ++i) {
        if (sol.argmax(i) < 0.0) sol.argmax(i) = 0.0;
        if (sol.argmax(i) <= kFeasTol) sol.active_set.push_back(i);
    }
    sol.value = evaluate(q.S, sol.argmax);
    return sol;
}

}  // namespace ehz

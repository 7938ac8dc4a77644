#include "ehz/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ehz/capacity.hpp"
#include "ehz/linprog.hpp"
#include "ehz/qp.hpp"

namespace ehz {

namespace {

constexpr double kSeqTol = 1e-9;
constexpr double kPositiveTol = 1e-12;

/** sum_{j<i} b_i b_j omega(r_i, r_j) for rows r in sequence order. */
double sequence_objective(const SymplecticContext& ctx, const std::vector<Vec>& rows,
                          const Vec& b) {
    const int L = static_cast<int>(rows.size());
    double acc = 0.0;
    for (int i = 1; i < L; ++i)
        for (int j = 0; j < i; ++j) acc += b(i) * b(j) * ctx.omega(rows[i], rows[j]);
    return acc;
}

}  // namespace

double area_2d(const HPolytope& K) {
    if (K.dim != 2)
        throw ValidationError("DimensionMismatch", "area oracle needs a planar polytope");
    validate_polytope(K);
    const int F = K.facet_count();

    std::vector<int> order(F);
    for (int i = 0; i < F; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&K](int a, int b) {
        const Vec& na = K.facets[a].normal;
        const Vec& nb = K.facets[b].normal;
        return std::atan2(na(1), na(0)) < std::atan2(nb(1), nb(0));
    });

    std::vector<Vec> vertices(F);
    for (int k = 0; k < F; ++k) {
        const Hyperplane& a = K.facets[order[k]];
        const Hyperplane& b = K.facets[order[(k + 1) % F]];
        Eigen::Matrix2d A;
        A << a.normal(0), a.normal(1), b.normal(0), b.normal(1);
        Eigen::Vector2d rhs(a.height, b.height);
        vertices[k] = A.fullPivLu().solve(rhs);
    }

    double twice = 0.0;
    for (int k = 0; k < F; ++k) {
        const Vec& p = vertices[k];
        const Vec& q = vertices[(k + 1) % F];
        twice += p(0) * q(1) - p(1) * q(0);
    }
    return std::abs(twice) / 2.0;
}

double repetition_bound(const HPolytope& K, const RepetitionSequence& seq) {
    const SymplecticContext ctx = K.context();
    const int L = static_cast<int>(seq.normals.size());
    if (L < 1 || seq.beta.size() != L)
        throw ValidationError("InvalidSequence", "sequence and coefficients disagree");
    if (seq.beta.minCoeff() < -kSeqTol)
        throw ValidationError("InvalidSequence", "negative coefficient");

    double height_sum = 0.0;
    Vec balance = Vec::Zero(K.dim);
    for (int i = 0; i < L; ++i) {
        if (seq.normals[i].size() != K.dim)
            throw ValidationError("InvalidSequence", "normal has wrong dimension");
        height_sum += seq.beta(i) * support_value(K, seq.normals[i]);
        balance += seq.beta(i) * seq.normals[i];
    }
    if (std::abs(height_sum - 1.0) > kSeqTol)
        throw ValidationError("InvalidSequence", "support normalization is off");
    if (balance.cwiseAbs().maxCoeff() > kSeqTol)
        throw ValidationError("InvalidSequence", "normals do not balance");

    const double obj = sequence_objective(ctx, seq.normals, seq.beta);
    if (obj <= kPositiveTol)
        throw SolverError("NonpositiveObjective", "sequence carries no upper bound");
    return 0.5 / obj;
}

double repetition_ladder(const HPolytope& K, int max_len, int samples,
                         std::uint64_t seed) {
    const ValidationReport vr = validate_polytope(K);
    const HPolytope Kc = translate(K, Vec(-vr.chebyshev_center));
    const SymplecticContext ctx = Kc.context();
    const int F = Kc.facet_count();
    const int d = Kc.dim;
    const Mat N = Kc.normal_matrix();
    const Vec h = Kc.height_vector();
    const Mat gram = ctx.omega_gram(N);

    double best = std::numeric_limits<double>::infinity();

    // the simple-sequence optimum realizes the ladder value at full length
    if (max_len >= F && F <= 10) {
        CapacityOptions o;
        o.attach_orbit = false;
        best = capacity(Kc, o).capacity;
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> facet_dist(0, F - 1);
    for (int s = 0; s < samples; ++s) {
        if (max_len < 3) break;
        std::uniform_int_distribution<int> len_dist(3, max_len);
        const int L = len_dist(rng);
        std::vector<int> idx(L);
        for (int i = 0; i < L; ++i) idx[i] = facet_dist(rng);

        Mat E(d + 1, L);
        Mat S = Mat::Zero(L, L);
        for (int a = 0; a < L; ++a) {
            E.col(a).head(d) = N.row(idx[a]).transpose();
            E(d, a) = h(idx[a]);
            for (int b = 0; b < a; ++b) {
                const double v = gram(idx[a], idx[b]);
                S(a, b) = v;
                S(b, a) = v;
            }
        }
        Vec f = Vec::Zero(d + 1);
        f(d) = 1.0;

        QPSolution sol;
        try {
            QuadraticOverPolytope q{S, E, f, std::max(16, L)};
            sol = L <= 12 ? maximize_exact(q) : maximize_heuristic(q, 8, rng());
        } catch (const SolverError&) {
            continue;  // empty sequence polytope
        }
        if (sol.value <= kPositiveTol) continue;

        RepetitionSequence seq;
        seq.normals.reserve(L);
        for (int a = 0; a < L; ++a) seq.normals.push_back(N.row(idx[a]).transpose());
        seq.beta = sol.argmax.cwiseMax(0.0);
        try {
            best = std::min(best, repetition_bound(Kc, seq));
        } catch (const Error&) {
            continue;
        }
    }
    return best;
}

double clarke_dual_ascent(const HPolytope& K, int m_segments, int restarts,
                          std::uint64_t seed) {
    const ValidationReport vr = validate_polytope(K);
    const HPolytope Kc = translate(K, Vec(-vr.chebyshev_center));
    const SymplecticContext ctx = Kc.context();
    const int F = Kc.facet_count();
    const int d = Kc.dim;
    const int m = m_segments;
    if (m < 2 || m > 16)
        throw ValidationError("DimensionMismatch", "segment count must be in [2, 16]");
    const Vec h = Kc.height_vector();

    Mat P(d, F);  // velocity generators p_i = (2/h_i) J n_i
    for (int i = 0; i < F; ++i)
        P.col(i) = (2.0 / h(i)) * ctx.apply_J(Kc.facets[i].normal);

    auto eval_G = [&](const Vec& t, const Mat& V) {
        double acc = 0.0;
        for (int i = 1; i < m; ++i)
            for (int j = 0; j < i; ++j)
                acc += t(i) * t(j) * ctx.omega(V.col(i), V.col(j));
        return acc;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> perm(F);
    for (int i = 0; i < F; ++i) perm[i] = i;
    double bestG = 0.0;

    for (int r = 0; r < restarts; ++r) {
        Mat V(d, m);
        if (r % 2 == 0) {
            // cyclic facet sequences seed most basins; closed characteristics
            // visit facets in some cyclic order
            std::shuffle(perm.begin(), perm.end(), rng);
            for (int i = 0; i < m; ++i) V.col(i) = P.col(perm[i % F]);
        } else {
            for (int i = 0; i < m; ++i) {
                Vec lam(F);
                for (int k = 0; k < F; ++k) lam(k) = -std::log(unit(rng) + 1e-300);
                lam /= lam.sum();
                V.col(i) = P * lam;
            }
        }

        Vec t = Vec::Constant(m, 1.0 / m);
        double G = 0.0;
        bool feasible = true;
        for (int iter = 0; iter < 60; ++iter) {
            // duration step: exact maximization over the simplex slice
            Mat Q(m, m);
            const Mat gv = ctx.omega_gram(V.transpose());
            for (int i = 0; i < m; ++i) {
                Q(i, i) = 0.0;
                for (int j = 0; j < i; ++j) {
                    Q(i, j) = gv(i, j);
                    Q(j, i) = gv(i, j);
                }
            }
            Mat E(d + 1, m);
            E.topRows(d) = V;
            E.row(d).setOnes();
            Vec f = Vec::Zero(d + 1);
            f(d) = 1.0;
            try {
                QuadraticOverPolytope q{Q, E, f, 16};
                const QPSolution sol = maximize_exact(q);
                t = sol.argmax.cwiseMax(0.0);
                G = eval_G(t, V);
            } catch (const SolverError&) {
                feasible = false;
                break;
            }

            // velocity step: ascend the linearization over the product of
            // convex hulls, keeping the balance constraint, then take the
            // exact quadratic optimum along the segment
            Mat grads(d, m);
            for (int k = 0; k < m; ++k) {
                Vec acc = Vec::Zero(d);
                for (int i = k + 1; i < m; ++i) acc += t(i) * V.col(i);
                for (int j = 0; j < k; ++j) acc -= t(j) * V.col(j);
                grads.col(k) = t(k) * ctx.apply_J(acc);
            }
            Vec c(m * F);
            for (int k = 0; k < m; ++k) c.segment(k * F, F) = -(P.transpose() * grads.col(k));
            Mat Aeq = Mat::Zero(m + d, m * F);
            Vec beq = Vec::Zero(m + d);
            for (int k = 0; k < m; ++k) {
                Aeq.row(k).segment(k * F, F).setOnes();
                beq(k) = 1.0;
                Aeq.block(m, k * F, d, F) = t(k) * P;
            }
            const LpResult lp = solve_lp(c, -Mat::Identity(m * F, m * F),
                                         Vec::Zero(m * F), Aeq, beq);
            if (lp.status != LpStatus::Optimal) break;
            Mat U(d, m);
            for (int k = 0; k < m; ++k) U.col(k) = P * lp.x.segment(k * F, F);

            // G is exactly quadratic along V + gamma (U - V)
            const double G0 = G;
            const double G1 = eval_G(t, U);
            const double Gh = eval_G(t, Mat(0.5 * (V + U)));
            const double a = 2.0 * G0 + 2.0 * G1 - 4.0 * Gh;
            const double b = G1 - G0 - a;
            double gamma = 1.0;
            if (a < -1e-15) gamma = std::clamp(-b / (2.0 * a), 0.0, 1.0);
            double Gbest = G0;
            double gbest = 0.0;
            for (double g : {gamma, 1.0}) {
                const double val = a * g * g + b * g + G0;
                if (val > Gbest) {
                    Gbest = val;
                    gbest = g;
                }
            }
            if (gbest == 0.0 || Gbest <= G0 + 1e-13 * std::max(1.0, std::abs(G0))) break;
            V = V + gbest * (U - V);
            G = Gbest;
        }
        if (feasible) bestG = std::max(bestG, G);
    }

    if (bestG <= kPositiveTol) return std::numeric_limits<double>::infinity();
    return 2.0 / bestG;
}

}  // namespace ehz

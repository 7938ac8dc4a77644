#include "ehz/capacity.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ehz/linprog.hpp"

namespace ehz {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kConsistencyTol = 1e-8;
constexpr double kSvdThreshold = 1e-10;
constexpr double kPositiveMaxTol = 1e-12;
constexpr double kGraphStep = 1e-7;
constexpr std::int64_t kChunk = 65536;

constexpr std::array<std::int64_t, 21> kFactorial = [] {
    std::array<std::int64_t, 21> f{};
    f[0] = 1;
    for (int i = 1; i <= 20; ++i) f[i] = f[i - 1] * i;
    return f;
}();

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int thread_id() {
#ifdef _OPENMP
    return omp_get_thread_num();
#else
    return 0;
#endif
}

double now_ms() {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

/** r-th permutation (lexicographic) of the ascending-sorted items. */
std::vector<int> unrank_permutation(std::vector<int> items, std::int64_t r) {
    std::vector<int> out;
    out.reserve(items.size());
    for (int k = static_cast<int>(items.size()); k > 0; --k) {
        const std::int64_t f = kFactorial[k - 1];
        const std::int64_t idx = r / f;
        r %= f;
        out.push_back(items[idx]);
        items.erase(items.begin() + idx);
    }
    return out;
}

/**
 * Stationary point of 0.5 b'Sb on the affine slice {b0 + Z t}, returned as
 * a feasible (componentwise >= -1e-9) representative. The value is constant
 * on the full stationary set, so when the minimum-norm representative has
 * negative entries a feasibility LP over that set recovers an equivalent
 * feasible point. Returns false when no stationary point exists on the
 * slice or none of them is feasible.
 */
bool stationary_candidate(const Mat& S, const Vec& b0, const Mat& Z, Vec& cand) {
    if (Z.cols() == 0) {
        if (b0.minCoeff() < -kFeasTol) return false;
        cand = b0;
        return true;
    }
    const Mat H = Z.transpose() * S * Z;
    const Vec g = Z.transpose() * (S * b0);
    Eigen::JacobiSVD<Mat> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(kSvdThreshold);
    const Vec y = svd.solve(-g);
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((H * y + g).cwiseAbs().maxCoeff() > kConsistencyTol * scale) return false;
    cand = b0 + Z * y;
    if (cand.minCoeff() < -kFeasTol) {
        const int nt = static_cast<int>(Z.cols() - svd.rank());
        if (nt == 0) return false;
        const Mat W = Z * svd.matrixV().rightCols(nt);
        const LpResult rep = solve_lp(Vec::Zero(nt), -W, cand);
        if (rep.status != LpStatus::Optimal) return false;
        cand += W * rep.x;
        if (cand.minCoeff() < -kFeasTol) return false;
    }
    return true;
}

struct NodeBest {
    bool has = false;
    double value = 0.0;  // |objective| at the node
    std::vector<int> sigma;
    Vec beta;
};

bool improves(const NodeBest& cur, double value, const std::vector<int>& sigma) {
    if (!cur.has) return true;
    if (value != cur.value) return value > cur.value;
    return std::lexicographical_compare(sigma.begin(), sigma.end(), cur.sigma.begin(),
                                        cur.sigma.end());
}

/** Full canonical permutation: oriented support order, then the rest ascending. */
std::vector<int> extend_to_full(const std::vector<int>& support_order, int F) {
    std::vector<char> used(F, 0);
    std::vector<int> sigma = support_order;
    for (int s : support_order) used[s] = 1;
    for (int i = 0; i < F; ++i)
        if (!used[i]) sigma.push_back(i);
    return sigma;
}

Vec scatter_beta(const std::vector<int>& support, const Vec& local, int F) {
    Vec beta = Vec::Zero(F);
    for (size_t a = 0; a < support.size(); ++a) beta(support[a]) = std::max(0.0, local(a));
    return beta;
}

struct SearchOutput {
    NodeBest best;
    std::int64_t nodes = 0;
};

/**
 * Ordered-support search: every candidate of the per-permutation face
 * enumeration appears exactly once as (support subset, cyclic order up to
 * rotation and reversal); the constraint slice is order-free in facet space
 * and is factored per subset.
 */
SearchOutput search_ordered_supports(const Mat& N, const Vec& h, const Mat& gram) {
    const int F = static_cast<int>(N.rows());
    const int d = static_cast<int>(N.cols());
    Vec f = Vec::Zero(d + 1);
    f(d) = 1.0;

    struct Task {
        std::uint32_t mask;
        std::int64_t lo, hi;
    };
    std::vector<Task> tasks;
    for (std::uint32_t mask = 1; mask < (1u << F); ++mask) {
        const int t = std::popcount(mask);
        if (t < 3) continue;
        const std::int64_t nraw = kFactorial[t - 1];
        for (std::int64_t lo = 0; lo < nraw; lo += kChunk)
            tasks.push_back({mask, lo, std::min(nraw, lo + kChunk)});
    }

    const int nth = thread_count();
    std::vector<NodeBest> bests(nth);
    std::vector<std::int64_t> counts(nth, 0);

#pragma omp parallel
    {
        NodeBest local;
        std::int64_t local_nodes = 0;
        std::vector<int> T, rest, pos, order;
        Mat E, Z, S;
        Vec b0, cand;

#pragma omp for schedule(dynamic)
        for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(tasks.size()); ++ti) {
            const Task& task = tasks[ti];
            T.clear();
            for (int i = 0; i < F; ++i)
                if (task.mask >> i & 1u) T.push_back(i);
            const int t = static_cast<int>(T.size());

            E.resize(d + 1, t);
            for (int a = 0; a < t; ++a) {
                E.col(a).head(d) = N.row(T[a]).transpose();
                E(d, a) = h(T[a]);
            }
            Eigen::JacobiSVD<Mat> svd(E, Eigen::ComputeFullU | Eigen::ComputeFullV);
            svd.setThreshold(kSvdThreshold);
            b0 = svd.solve(f);
            if ((E * b0 - f).cwiseAbs().maxCoeff() > kConsistencyTol) continue;
            const int nz = t - static_cast<int>(svd.rank());
            if (nz == 0 && b0.minCoeff() < -kFeasTol) continue;
            Z = svd.matrixV().rightCols(nz);

            rest.assign(T.begin() + 1, T.end());
            std::vector<int> perm = unrank_permutation(rest, task.lo);
            pos.assign(F, 0);
            S.resize(t, t);

            for (std::int64_t r = task.lo; r < task.hi;
                 ++r, std::next_permutation(perm.begin(), perm.end())) {
                if (perm.front() > perm.back()) continue;  // reversal representative
                ++local_nodes;
                pos[T[0]] = 0;
                for (int k = 0; k < t - 1; ++k) pos[perm[k]] = k + 1;
                for (int a = 0; a < t; ++a) {
                    S(a, a) = 0.0;
                    for (int b = 0; b < a; ++b) {
                        const double v =
                            (pos[T[a]] > pos[T[b]] ? 1.0 : -1.0) * gram(T[a], T[b]);
                        S(a, b) = v;
                        S(b, a) = v;
                    }
                }
                if (!stationary_candidate(S, b0, Z, cand)) continue;
                const double v = 0.5 * cand.dot(S * cand);
                const double av = std::abs(v);
                if (local.has && av < local.value) continue;

                order.clear();
                order.push_back(T[0]);
                if (v >= 0.0)
                    order.insert(order.end(), perm.begin(), perm.end());
                else
                    order.insert(order.end(), perm.rbegin(), perm.rend());
                std::vector<int> sigma = extend_to_full(order, F);
                if (improves(local, av, sigma)) {
                    local.has = true;
                    local.value = av;
                    local.sigma = std::move(sigma);
                    // cand is indexed by sorted support
                    local.beta = scatter_beta(T, cand, F);
                }
            }
        }
        bests[thread_id()] = std::move(local);
        counts[thread_id()] = local_nodes;
    }

    SearchOutput out;
    for (int i = 0; i < nth; ++i) {
        out.nodes += counts[i];
        if (bests[i].has && improves(out.best, bests[i].value, bests[i].sigma))
            out.best = std::move(bests[i]);
    }
    return out;
}

CandidateSolution finish_candidate(const SymplecticContext& ctx, const Mat& N,
                                   NodeBest&& best) {
    CandidateSolution c;
    c.sigma = std::move(best.sigma);
    c.beta = std::move(best.beta);
    c.objective = objective(ctx, N, c.sigma, c.beta);
    return c;
}

void attach_result(CapacityResult& res, const HPolytope& frame, const SymplecticContext& ctx,
                   const Mat& N, NodeBest&& best, bool attach_orbit) {
    if (!best.has || best.value <= kPositiveMaxTol)
        throw SolverError("NonpositiveMaximum",
                          "no configuration with positive objective was found");
    res.best = finish_candidate(ctx, N, std::move(best));
    res.capacity = 0.5 / res.best.objective;
    if (attach_orbit) res.orbit = reconstruct(frame, res.best.sigma, res.best.beta);
}

}  // namespace

MConstraints build_M(const HPolytope& K) {
    const int F = K.facet_count();
    const int d = K.dim;
    K.context();
    const Vec h = K.height_vector();
    if (h.minCoeff() <= 0.0)
        throw ValidationError("EmptyInterior",
                              "origin must be strictly inside the polytope");
    MConstraints M;
    M.E.resize(d + 1, F);
    M.E.topRows(d) = K.normal_matrix().transpose();
    M.E.row(d) = h.transpose();
    M.f = Vec::Zero(d + 1);
    M.f(d) = 1.0;
    const LpResult r = solve_lp(Vec::Zero(F), -Mat::Identity(F, F), Vec::Zero(F), M.E, M.f);
    if (r.status != LpStatus::Optimal)
        throw SolverError("EmptyM", "coefficient polytope is empty");
    return M;
}

double objective(const SymplecticContext& ctx, const Mat& normals,
                 const std::vector<int>& sigma, const Vec& beta) {
    const int F = static_cast<int>(sigma.size());
    if (normals.rows() != F || beta.size() != F)
        throw ValidationError("DimensionMismatch", "objective inputs disagree in size");
    const Mat gram = ctx.omega_gram(normals);
    double acc = 0.0;
    for (int i = 1; i < F; ++i)
        for (int j = 0; j < i; ++j)
            acc += beta(sigma[i]) * beta(sigma[j]) * gram(sigma[i], sigma[j]);
    return acc;
}

CapacityResult capacity(const HPolytope& K, const CapacityOptions& opts) {
    const ValidationReport vr = validate_polytope(K);
    const HPolytope Kc = translate(K, Vec(-vr.chebyshev_center));
    const SymplecticContext ctx = Kc.context();
    const int F = Kc.facet_count();
    const Mat N = Kc.normal_matrix();
    const Vec h = Kc.height_vector();
    build_M(Kc);

    CapacityResult res;
    res.center = vr.chebyshev_center;
    const double t0 = now_ms();

    if (opts.mode == CapacityMode::Exact) {
        if (F > opts.exact_limit)
            throw SolverError("ExactLimitExceeded",
                              "exact search limited to " + std::to_string(opts.exact_limit) +
                                  " facets, got " + std::to_string(F));
        const Mat gram = ctx.omega_gram(N);
        SearchOutput out = search_ordered_supports(N, h, gram);
        res.mode = CapacityMode::Exact;
        res.permutations_examined = out.nodes;
        res.diagnostics.nodes = out.nodes;
        attach_result(res, Kc, ctx, N, std::move(out.best), opts.attach_orbit);
    } else {
        const MConstraints M = build_M(Kc);
        const Mat gram = ctx.omega_gram(N);
        std::mt19937_64 rng(opts.seed);
        std::vector<int> sigma(F);
        for (int i = 0; i < F; ++i) sigma[i] = i;

        bool has = false;
        double best_v = 0.0;
        CandidateSolution best;
        std::vector<int> pos(F);
        for (int s = 0; s < std::max(1, opts.restarts); ++s) {
            std::shuffle(sigma.begin(), sigma.end(), rng);
            Mat S = Mat::Zero(F, F);
            for (int i = 0; i < F; ++i) pos[sigma[i]] = i;
            for (int a = 0; a < F; ++a)
                for (int b = 0; b < a; ++b) {
                    const double v = (pos[a] > pos[b] ? 1.0 : -1.0) * gram(a, b);
                    S(a, b) = v;
                    S(b, a) = v;
                }
            QuadraticOverPolytope q{S, M.E, M.f, std::max(16, F)};
            const QPSolution sol = maximize_heuristic(q, 4, rng());
            if (!has || sol.value > best_v) {
                has = true;
                best_v = sol.value;
                best.sigma = sigma;
                best.beta = sol.argmax;
            }
        }
        if (!has || best_v <= kPositiveMaxTol)
            throw SolverError("NonpositiveMaximum",
                              "heuristic sampling found no positive configuration");
        best.objective = objective(ctx, N, best.sigma, best.beta);
        res.mode = CapacityMode::Heuristic;
        res.permutations_examined = std::max(1, opts.restarts);
        res.diagnostics.nodes = res.permutations_examined;
        res.best = std::move(best);
        res.capacity = 0.5 / res.best.objective;  // upper bound: objective <= true max
    }

    res.diagnostics.elapsed_ms = now_ms() - t0;
    return res;
}

CapacityResult capacity_reference(const HPolytope& K, const CapacityOptions& opts) {
    const ValidationReport vr = validate_polytope(K);
    const HPolytope Kc = translate(K, Vec(-vr.chebyshev_center));
    const SymplecticContext ctx = Kc.context();
    const int F = Kc.facet_count();
    if (F > opts.exact_limit)
        throw SolverError("ExactLimitExceeded",
                          "exact search limited to " + std::to_string(opts.exact_limit) +
                              " facets, got " + std::to_string(F));
    const Mat N = Kc.normal_matrix();
    const MConstraints M = build_M(Kc);
    const Mat gram = ctx.omega_gram(N);

    CapacityResult res;
    res.center = vr.chebyshev_center;
    const double t0 = now_ms();

    NodeBest best;
    std::int64_t classes = 0;
    std::int64_t solves = 0;
    std::vector<int> tail(F - 1);
    for (int i = 0; i < F - 1; ++i) tail[i] = i + 1;
    std::vector<int> pos(F), sigma(F), oriented(F);
    do {
        // cyclic invariance pins facet 0 to position 0; reversal is handled
        // by solving both orientations, so keep one tail representative
        if (F > 2 && tail.front() > tail.back()) continue;
        ++classes;
        sigma[0] = 0;
        for (int i = 0; i < F - 1; ++i) sigma[i + 1] = tail[i];
        for (int i = 0; i < F; ++i) pos[sigma[i]] = i;
        Mat S = Mat::Zero(F, F);
        for (int a = 0; a < F; ++a)
            for (int b = 0; b < a; ++b) {
                const double v = (pos[a] > pos[b] ? 1.0 : -1.0) * gram(a, b);
                S(a, b) = v;
                S(b, a) = v;
            }
        QuadraticOverPolytope q{S, M.E, M.f, std::max(16, F)};
        const QPSolution fwd = maximize_exact(q);
        q.S = -S;
        const QPSolution rev = maximize_exact(q);
        solves += 2;

        const bool take_fwd = fwd.value >= rev.value;
        const double value = take_fwd ? fwd.value : rev.value;
        oriented[0] = 0;
        for (int i = 1; i < F; ++i) oriented[i] = take_fwd ? sigma[i] : sigma[F - i];
        if (improves(best, value, oriented)) {
            best.has = true;
            best.value = value;
            best.sigma = oriented;
            best.beta = take_fwd ? fwd.argmax : rev.argmax;
        }
    } while (std::next_permutation(tail.begin(), tail.end()));

    res.mode = CapacityMode::Exact;
    res.permutations_examined = classes;
    res.diagnostics.nodes = solves;
    attach_result(res, Kc, ctx, N, std::move(best), opts.attach_orbit);
    res.diagnostics.elapsed_ms = now_ms() - t0;
    return res;
}

namespace {

struct SymNode {
    bool has = false;
    double value = 0.0;  // |objective|
    double signed_value = 0.0;
    std::uint32_t mask = 0;
    std::vector<int> perm;   // local support indices by position
    std::uint32_t signs = 0; // bit k => position k+1 negated; position 0 positive
    Vec beta;                // by local support index
};

bool sym_improves(const SymNode& cur, double value, std::uint32_t mask,
                  const std::vector<int>& perm, std::uint32_t signs) {
    if (!cur.has) return true;
    if (value != cur.value) return value > cur.value;
    if (mask != cur.mask) return mask < cur.mask;
    if (perm != cur.perm) return perm < cur.perm;
    return signs < cur.signs;
}

struct SymSearchOutput {
    SymNode best;
    std::int64_t nodes = 0;
};

/**
 * Centrally symmetric search over one representative per antipodal facet
 * pair: support subset, order modulo reversal, sign pattern modulo global
 * flip; the constraint is the single slice sum beta_i h_i = 1/2 (no
 * rotation quotient applies without the balance rows).
 */
SymSearchOutput search_symmetric(const Mat& Nrep, const Vec& hrep, const Mat& gram) {
    const int Fr = static_cast<int>(Nrep.rows());

    struct Task {
        std::uint32_t mask;
        std::int64_t lo, hi;
    };
    std::vector<Task> tasks;
    for (std::uint32_t mask = 1; mask < (1u << Fr); ++mask) {
        const int t = std::popcount(mask);
        if (t < 2) continue;
        const std::int64_t nraw = kFactorial[t];
        const std::int64_t chunk = std::max<std::int64_t>(1, kChunk >> (t - 1));
        for (std::int64_t lo = 0; lo < nraw; lo += chunk)
            tasks.push_back({mask, lo, std::min(nraw, lo + chunk)});
    }

    const int nth = thread_count();
    std::vector<SymNode> bests(nth);
    std::vector<std::int64_t> counts(nth, 0);

#pragma omp parallel
    {
        SymNode local;
        std::int64_t local_nodes = 0;
        std::vector<int> T, locals, pos;
        Mat S;
        Vec cand;

#pragma omp for schedule(dynamic)
        for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(tasks.size()); ++ti) {
            const Task& task = tasks[ti];
            T.clear();
            for (int i = 0; i < Fr; ++i)
                if (task.mask >> i & 1u) T.push_back(i);
            const int t = static_cast<int>(T.size());

            Vec hT(t);
            for (int a = 0; a < t; ++a) hT(a) = hrep(T[a]);
            const Vec b0 = hT * (0.5 / hT.squaredNorm());
            Eigen::HouseholderQR<Mat> qr{Mat(hT)};
            const Mat Q = qr.householderQ();
            const Mat Z = Q.rightCols(t - 1);

            locals.resize(t);
            for (int a = 0; a < t; ++a) locals[a] = a;
            std::vector<int> perm = unrank_permutation(locals, task.lo);
            pos.assign(t, 0);
            S.resize(t, t);
            const std::uint32_t sign_count = 1u << (t - 1);

            for (std::int64_t r = task.lo; r < task.hi;
                 ++r, std::next_permutation(perm.begin(), perm.end())) {
                if (t > 1 && perm.front() > perm.back()) continue;  // reversal representative
                for (int k = 0; k < t; ++k) pos[perm[k]] = k;
                for (std::uint32_t signs = 0; signs < sign_count; ++signs) {
                    ++local_nodes;
                    auto sgn = [&signs, &pos](int local) {
                        const int p = pos[local];
                        return (p > 0 && (signs >> (p - 1) & 1u)) ? -1.0 : 1.0;
                    };
                    for (int a = 0; a < t; ++a) {
                        S(a, a) = 0.0;
                        const double sa = sgn(a);
                        for (int b = 0; b < a; ++b) {
                            const double v = sa * sgn(b) *
                                             (pos[a] > pos[b] ? 1.0 : -1.0) * gram(T[a], T[b]);
                            S(a, b) = v;
                            S(b, a) = v;
                        }
                    }
                    if (!stationary_candidate(S, b0, Z, cand)) continue;
                    const double v = 0.5 * cand.dot(S * cand);
                    const double av = std::abs(v);
                    if (local.has && av < local.value) continue;
                    if (sym_improves(local, av, task.mask, perm, signs)) {
                        local.has = true;
                        local.value = av;
                        local.signed_value = v;
                        local.mask = task.mask;
                        local.perm = perm;
                        local.signs = signs;
                        local.beta = cand;
                    }
                }
            }
        }
        bests[thread_id()] = std::move(local);
        counts[thread_id()] = local_nodes;
    }

    SymSearchOutput out;
    for (int i = 0; i < nth; ++i) {
        out.nodes += counts[i];
        if (bests[i].has &&
            sym_improves(out.best, bests[i].value, bests[i].mask, bests[i].perm,
                         bests[i].signs))
            out.best = std::move(bests[i]);
    }
    return out;
}

/**
 * Expand a winning symmetric node into a full antipodal optimizer: visit the
 * signed representatives in order, then their antipodes in the same order.
 * Cross-block terms cancel pairwise, so the full objective is exactly twice
 * the symmetric one.
 */
NodeBest expand_symmetric(const SymNode& node,
                          const std::vector<std::pair<int, int>>& rep_pairs,
                          const std::vector<int>& T, int F) {
    const int t = static_cast<int>(T.size());
    const std::vector<int>& perm = node.perm;
    const std::uint32_t signs = node.signs;
    const Vec& beta_local = node.beta;

    std::vector<int> pos(t);
    for (int k = 0; k < t; ++k) pos[perm[k]] = k;
    auto sgn = [&signs, &pos](int local) {
        const int p = pos[local];
        return (p > 0 && (signs >> (p - 1) & 1u)) ? -1 : 1;
    };

    // per position: (representative local index, sign)
    std::vector<std::pair<int, int>> seq(t);
    for (int k = 0; k < t; ++k) seq[k] = {perm[k], sgn(perm[k])};
    if (node.signed_value < 0.0) std::reverse(seq.begin(), seq.end());

    auto facet_of = [&](int local, int sign) {
        const auto& pr = rep_pairs[T[local]];
        return sign > 0 ? pr.first : pr.second;
    };

    std::vector<int> order;
    order.reserve(2 * t);
    for (const auto& [local, sign] : seq) order.push_back(facet_of(local, sign));
    for (const auto& [local, sign] : seq) order.push_back(facet_of(local, -sign));

    // rotate the cyclic sequence so the smallest facet leads
    const auto mn = std::min_element(order.begin(), order.end());
    std::rotate(order.begin(), mn, order.end());

    NodeBest best;
    best.has = true;
    best.value = 2.0 * node.value;
    best.sigma = extend_to_full(order, F);
    best.beta = Vec::Zero(F);
    for (int local = 0; local < t; ++local) {
        const auto& pr = rep_pairs[T[local]];
        const double v = std::max(0.0, beta_local(local));
        best.beta(pr.first) = v;
        best.beta(pr.second) = v;
    }
    return best;
}

}  // namespace

CapacityResult capacity_symmetric(const HPolytope& K, const CapacityOptions& opts) {
    validate_polytope(K);
    const auto pairing = detect_central_symmetry(K);
    if (!pairing)
        throw ValidationError("NotCentrallySymmetric",
                              "facets do not come in antipodal pairs with equal heights");
    const SymplecticContext ctx = K.context();
    const int F = K.facet_count();
    const int Fr = F / 2;
    if (Fr > std::min(opts.exact_limit, 8))
        throw SolverError("ExactLimitExceeded",
                          "symmetric search limited to " +
                              std::to_string(std::min(opts.exact_limit, 8)) +
                              " facet pairs, got " + std::to_string(Fr));

    Mat Nrep(Fr, K.dim);
    Vec hrep(Fr);
    for (int r = 0; r < Fr; ++r) {
        Nrep.row(r) = K.facets[pairing->representatives[r]].normal;
        hrep(r) = K.facets[pairing->representatives[r]].height;
    }

    CapacityResult res;
    res.center = Vec::Zero(K.dim);
    const double t0 = now_ms();

    const Mat gram = ctx.omega_gram(Nrep);
    SymSearchOutput out = search_symmetric(Nrep, hrep, gram);
    if (!out.best.has || out.best.value <= kPositiveMaxTol)
        throw SolverError("NonpositiveMaximum",
                          "no configuration with positive objective was found");

    std::vector<int> T;
    for (int i = 0; i < Fr; ++i)
        if (out.best.mask >> i & 1u) T.push_back(i);
    NodeBest best = expand_symmetric(out.best, pairing->pairs, T, F);
    res.mode = CapacityMode::Exact;
    res.permutations_examined = out.nodes;
    res.diagnostics.nodes = out.nodes;
    attach_result(res, K, ctx, K.normal_matrix(), std::move(best), opts.attach_orbit);
    res.diagnostics.elapsed_ms = now_ms() - t0;
    return res;
}

CapacityResult capacity_symmetric_reference(const HPolytope& K, const CapacityOptions& opts) {
    validate_polytope(K);
    const auto pairing = detect_central_symmetry(K);
    if (!pairing)
        throw ValidationError("NotCentrallySymmetric",
                              "facets do not come in antipodal pairs with equal heights");
    const SymplecticContext ctx = K.context();
    const int F = K.facet_count();
    const int Fr = F / 2;
    if (Fr > std::min(opts.exact_limit, 5))
        throw SolverError("ExactLimitExceeded",
                          "literal symmetric enumeration limited to 5 facet pairs, got " +
                              std::to_string(Fr));

    const std::vector<int> reps = pairing->representatives;
    Mat Nrep(Fr, K.dim);
    Vec hrep(Fr);
    for (int r = 0; r < Fr; ++r) {
        Nrep.row(r) = K.facets[reps[r]].normal;
        hrep(r) = K.facets[reps[r]].height;
    }
    const Mat gram = ctx.omega_gram(Nrep);

    CapacityResult res;
    res.center = Vec::Zero(K.dim);
    const double t0 = now_ms();

    Mat E(1, Fr);
    E.row(0) = hrep.transpose();
    Vec f(1);
    f(0) = 0.5;

    SymNode best;
    std::int64_t classes = 0;
    std::vector<int> perm(Fr), pos(Fr);
    for (int i = 0; i < Fr; ++i) perm[i] = i;
    do {
        for (int k = 0; k < Fr; ++k) pos[perm[k]] = k;
        for (std::uint32_t signs = 0; signs < (1u << Fr); ++signs) {
            ++classes;
            auto sgn = [&signs, &pos](int local) {
                return (signs >> pos[local] & 1u) ? -1.0 : 1.0;
            };
            Mat S = Mat::Zero(Fr, Fr);
            for (int a = 0; a < Fr; ++a)
                for (int b = 0; b < a; ++b) {
                    const double v = sgn(a) * sgn(b) * (pos[a] > pos[b] ? 1.0 : -1.0) *
                                     gram(a, b);
                    S(a, b) = v;
                    S(b, a) = v;
                }
            QuadraticOverPolytope q{S, E, f, std::max(16, Fr)};
            const QPSolution sol = maximize_exact(q);
            // positions carry the signs here, so record perm and signs verbatim
            if (sol.value > best.value || !best.has) {
                best.has = true;
                best.value = sol.value;
                best.signed_value = sol.value;
                best.mask = (1u << Fr) - 1u;
                best.perm = perm;
                // re-encode: search_symmetric convention keeps position 0 positive
                best.signs = 0;
                const bool flip = (signs >> pos[perm[0]] & 1u) != 0;  // global flip
                for (int k = 1; k < Fr; ++k) {
                    bool neg = (signs >> k & 1u) != 0;
                    if (flip) neg = !neg;
                    if (neg) best.signs |= (1u << (k - 1));
                }
                best.beta = sol.argmax;
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (!best.has || best.value <= kPositiveMaxTol)
        throw SolverError("NonpositiveMaximum",
                          "no configuration with positive objective was found");

    std::vector<int> T(Fr);
    for (int i = 0; i < Fr; ++i) T[i] = i;
    NodeBest full = expand_symmetric(best, pairing->pairs, T, F);
    res.mode = CapacityMode::Exact;
    res.permutations_examined = classes;
    res.diagnostics.nodes = classes;
    attach_result(res, K, ctx, K.normal_matrix(), std::move(full), opts.attach_orbit);
    res.diagnostics.elapsed_ms = now_ms() - t0;
    return res;
}

TransitionGraph build_transition_graph(const HPolytope& K) {
    const SymplecticContext ctx = K.context();
    const int F = K.facet_count();
    const int d = K.dim;
    const Mat N = K.normal_matrix();
    const Vec h = K.height_vector();
    if (h.minCoeff() <= 0.0)
        throw ValidationError("EmptyInterior",
                              "origin must be strictly inside the polytope");

    TransitionGraph g;
    g.facet_count = F;
    g.adjacency.assign(F, {});

    for (int i = 0; i < F; ++i) {
        const Vec p = (2.0 / h(i)) * ctx.apply_J(K.facets[i].normal);
        for (int j = 0; j < F; ++j) {
            if (j == i) continue;
            // variables (x, c): x on facet i, x + c p_i on facet j, both in K,
            // step c at least the open-condition closure 1e-7
            Mat A(2 * F + 1, d + 1);
            Vec b(2 * F + 1);
            A.topLeftCorner(F, d) = N;
            A.block(0, d, F, 1).setZero();
            b.head(F) = h;
            A.block(F, 0, F, d) = N;
            A.block(F, d, F, 1) = N * p;
            b.segment(F, F) = h;
            A.row(2 * F).setZero();
            A(2 * F, d) = -1.0;
            b(2 * F) = -kGraphStep;

            Mat Aeq(2, d + 1);
            Vec beq(2);
            Aeq.row(0).head(d) = K.facets[i].normal;
            Aeq(0, d) = 0.0;
            beq(0) = h(i);
            Aeq.row(1).head(d) = K.facets[j].normal;
            Aeq(1, d) = K.facets[j].normal.dot(p);
            beq(1) = h(j);

            const LpResult r = solve_lp(Vec::Zero(d + 1), A, b, Aeq, beq);
            if (r.status == LpStatus::Optimal) g.adjacency[i].push_back(j);
        }
    }
    return g;
}

namespace {

/** Johnson's circuit enumeration on the subgraph induced by {v >= s}. */
struct CycleEnumerator {
    const std::vector<std::vector<int>>& adj;
    std::int64_t limit;
    std::vector<std::vector<int>> out;

    std::vector<char> blocked;
    std::vector<std::vector<int>> block_lists;
    std::vector<int> stack;
    std::vector<std::vector<int>> scc_adj;
    int root = 0;

    CycleEnumerator(const std::vector<std::vector<int>>& a, std::int64_t lim)
        : adj(a), limit(lim) {}

    void unblock(int v) {
        blocked[v] = 0;
        for (int w : block_lists[v])
            if (blocked[w]) unblock(w);
        block_lists[v].clear();
    }

    bool circuit(int v) {
        bool found = false;
        stack.push_back(v);
        blocked[v] = 1;
        for (int w : scc_adj[v]) {
            if (w == root) {
                if (static_cast<std::int64_t>(out.size()) >= limit)
                    throw SolverError("CycleLimitExceeded",
                                      "simple cycle enumeration exceeded the limit");
                out.push_back(stack);
                found = true;
            } else if (!blocked[w]) {
                if (circuit(w)) found = true;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (int w : scc_adj[v]) {
                auto& bl = block_lists[w];
                if (std::find(bl.begin(), bl.end(), v) == bl.end()) bl.push_back(v);
            }
        }
        stack.pop_back();
        return found;
    }

    void run() {
        const int V = static_cast<int>(adj.size());
        for (root = 0; root < V; ++root) {
            // strongly connected component of root within {v >= root}
            std::vector<char> reach_fwd(V, 0), reach_bwd(V, 0);
            std::vector<int> dfs{root};
            reach_fwd[root] = 1;
            while (!dfs.empty()) {
                const int v = dfs.back();
                dfs.pop_back();
                for (int w : adj[v])
                    if (w >= root && !reach_fwd[w]) {
                        reach_fwd[w] = 1;
                        dfs.push_back(w);
                    }
            }
            std::vector<std::vector<int>> radj(V);
            for (int v = root; v < V; ++v)
                for (int w : adj[v])
                    if (w >= root) radj[w].push_back(v);
            dfs.push_back(root);
            reach_bwd[root] = 1;
            while (!dfs.empty()) {
                const int v = dfs.back();
                dfs.pop_back();
                for (int w : radj[v])
                    if (w >= root && !reach_bwd[w]) {
                        reach_bwd[w] = 1;
                        dfs.push_back(w);
                    }
            }
            scc_adj.assign(V, {});
            for (int v = root; v < V; ++v) {
                if (!reach_fwd[v] || !reach_bwd[v]) continue;
                for (int w : adj[v])
                    if (w >= root && reach_fwd[w] && reach_bwd[w]) scc_adj[v].push_back(w);
            }
            if (scc_adj[root].empty()) continue;
            blocked.assign(V, 0);
            block_lists.assign(V, {});
            stack.clear();
            circuit(root);
        }
    }
};

}  // namespace

std::vector<std::vector<int>> simple_cycles(const TransitionGraph& g, std::int64_t limit) {
    CycleEnumerator e(g.adjacency, limit);
    e.run();
    return e.out;
}

CapacityResult capacity_pruned(const HPolytope& K, const CapacityOptions& opts) {
    const ValidationReport vr = validate_polytope(K);
    const HPolytope Kc = translate(K, Vec(-vr.chebyshev_center));
    const SymplecticContext ctx = Kc.context();
    const int F = Kc.facet_count();
    const int d = Kc.dim;
    const Mat N = Kc.normal_matrix();
    const Vec h = Kc.height_vector();
    build_M(Kc);
    const Mat gram = ctx.omega_gram(N);

    CapacityResult res;
    res.center = vr.chebyshev_center;
    const double t0 = now_ms();

    const TransitionGraph graph = build_transition_graph(Kc);
    std::vector<std::vector<int>> cycles = simple_cycles(graph);
    cycles.erase(std::remove_if(cycles.begin(), cycles.end(),
                                [](const std::vector<int>& c) { return c.size() < 3; }),
                 cycles.end());

    Vec f = Vec::Zero(d + 1);
    f(d) = 1.0;

    // constraint slices are order-free, so they are shared between cycles
    // with equal support
    struct Slice {
        bool consistent = false;
        Vec b0;
        Mat Z;
    };
    std::unordered_map<std::uint32_t, Slice> slices;
    std::unordered_map<std::uint32_t, std::vector<int>> supports;
    for (const auto& cyc : cycles) {
        std::uint32_t mask = 0;
        for (int v : cyc) mask |= (1u << v);
        if (slices.count(mask)) continue;
        std::vector<int> T(cyc);
        std::sort(T.begin(), T.end());
        const int t = static_cast<int>(T.size());
        Mat E(d + 1, t);
        for (int a = 0; a < t; ++a) {
            E.col(a).head(d) = N.row(T[a]).transpose();
            E(d, a) = h(T[a]);
        }
        Eigen::JacobiSVD<Mat> svd(E, Eigen::ComputeFullU | Eigen::ComputeFullV);
        svd.setThreshold(kSvdThreshold);
        Slice s;
        s.b0 = svd.solve(f);
        if ((E * s.b0 - f).cwiseAbs().maxCoeff() <= kConsistencyTol) {
            s.consistent = true;
            s.Z = svd.matrixV().rightCols(t - svd.rank());
        }
        slices.emplace(mask, std::move(s));
        supports.emplace(mask, std::move(T));
    }

    const int nth = thread_count();
    std::vector<NodeBest> bests(nth);
    std::vector<std::int64_t> counts(nth, 0);

#pragma omp parallel
    {
        NodeBest local;
        std::int64_t local_nodes = 0;
        Mat S;
        Vec cand;
        std::vector<int> pos(F);

#pragma omp for schedule(dynamic)
        for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(cycles.size()); ++ci) {
            const std::vector<int>& cyc = cycles[ci];
            std::uint32_t mask = 0;
            for (int v : cyc) mask |= (1u << v);
            const Slice& slice = slices.at(mask);
            if (!slice.consistent) continue;
            const std::vector<int>& T = supports.at(mask);
            const int t = static_cast<int>(T.size());
            if (slice.Z.cols() == 0 && slice.b0.minCoeff() < -kFeasTol) continue;

            ++local_nodes;
            for (int k = 0; k < t; ++k) pos[cyc[k]] = k;
            S.resize(t, t);
            for (int a = 0; a < t; ++a) {
                S(a, a) = 0.0;
                for (int b = 0; b < a; ++b) {
                    const double v = (pos[T[a]] > pos[T[b]] ? 1.0 : -1.0) * gram(T[a], T[b]);
                    S(a, b) = v;
                    S(b, a) = v;
                }
            }
            if (!stationary_candidate(S, slice.b0, slice.Z, cand)) continue;
            const double v = 0.5 * cand.dot(S * cand);
            const double av = std::abs(v);
            if (local.has && av < local.value) continue;

            std::vector<int> order(cyc);
            if (v < 0.0) std::reverse(order.begin() + 1, order.end());
            std::vector<int> sigma = extend_to_full(order, F);
            if (improves(local, av, sigma)) {
                local.has = true;
                local.value = av;
                local.sigma = std::move(sigma);
                local.beta = scatter_beta(T, cand, F);
            }
        }
        bests[thread_id()] = std::move(local);
        counts[thread_id()] = local_nodes;
    }

    NodeBest best;
    std::int64_t nodes = 0;
    for (int i = 0; i < nth; ++i) {
        nodes += counts[i];
        if (bests[i].has && improves(best, bests[i].value, bests[i].sigma))
            best = std::move(bests[i]);
    }

    res.mode = CapacityMode::Exact;
    res.permutations_examined = static_cast<std::int64_t>(cycles.size());
    res.diagnostics.nodes = nodes;
    res.diagnostics.cycles = static_cast<std::int64_t>(cycles.size());
    attach_result(res, Kc, ctx, N, std::move(best), opts.attach_orbit);
    res.diagnostics.elapsed_ms = now_ms() - t0;
    return res;
}

}  // namespace ehz

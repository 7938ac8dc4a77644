#include "ehz/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ehz/capacity.hpp"
#include "ehz/oracles.hpp"
#include "ehz/qp.hpp"

namespace ehz {

namespace {

std::string sig(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::vector<double> to_list(const Vec& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

void write_json(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("FileError", "cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

CapacityOptions options_from(const RunConfig& cfg) {
    CapacityOptions o;
    o.exact_limit = cfg.exact_limit;
    o.seed = cfg.seed;
    return o;
}

CapacityResult dispatch_capacity(const HPolytope& K, const std::string& mode,
                                 const RunConfig& cfg) {
    CapacityOptions o = options_from(cfg);
    if (mode == "exact") return capacity(K, o);
    if (mode == "heuristic") {
        o.mode = CapacityMode::Heuristic;
        return capacity(K, o);
    }
    if (mode == "symmetric") return capacity_symmetric(K, o);
    if (mode == "pruned") return capacity_pruned(K, o);
    throw ValidationError("BadMode", "unknown mode '" + mode + "'");
}

Json orbit_json(const CapacityResult& res) {
    if (!res.orbit) return nullptr;
    PiecewiseAffineLoop loop = res.orbit->loop;
    loop.start += res.center;  // report in the input frame
    Json j = orbit_to_json(loop, res.orbit->action);
    j["speed_scale"] = res.orbit->speed_scale;
    j["boundary_residual"] = res.orbit->boundary_residual;
    j["facet_visit_counts"] = res.orbit->facet_visit_counts;
    return j;
}

Json result_json(const CapacityResult& res) {
    Json j;
    j["capacity"] = res.capacity;
    j["mode"] = res.mode == CapacityMode::Exact ? "exact" : "heuristic";
    std::vector<int> sigma1;
    sigma1.reserve(res.best.sigma.size());
    for (int s : res.best.sigma) sigma1.push_back(s + 1);
    j["sigma"] = sigma1;
    j["beta"] = to_list(res.best.beta);
    j["objective"] = res.best.objective;
    j["center"] = to_list(res.center);
    j["orbit"] = orbit_json(res);
    j["diagnostics"] = {{"permutations_examined", res.permutations_examined},
                        {"nodes", res.diagnostics.nodes},
                        {"cycles", res.diagnostics.cycles}};
    return j;
}

int cmd_capacity(const RunConfig& cfg, std::ostream& out) {
    const HPolytope K = load_polytope(cfg.input);
    const std::string mode = cfg.command == "capacity" ? cfg.mode : cfg.command;
    const CapacityResult res = dispatch_capacity(K, mode, cfg);
    if (!cfg.output.empty()) write_json(result_json(res), cfg.output);
    out << "capacity = " << sig(res.capacity) << "  mode = " << mode
        << "  facets = " << K.facet_count() << "  nodes = " << res.diagnostics.nodes
        << "  (" << sig(res.diagnostics.elapsed_ms) << " ms)\n";
    return 0;
}

int cmd_orbit(const RunConfig& cfg, std::ostream& out) {
    const HPolytope K = load_polytope(cfg.input);
    std::string mode = cfg.mode;
    if (mode == "heuristic")
        throw ValidationError("BadMode", "orbit certificates need an exact mode");
    const CapacityResult res = dispatch_capacity(K, mode, cfg);
    const HPolytope Kc = translate(K, Vec(-res.center));
    const VerificationReport rep = verify(Kc, *res.orbit, res.capacity);

    Json j;
    j["capacity"] = res.capacity;
    j["center"] = to_list(res.center);
    j["orbit"] = orbit_json(res);
    Json checks = Json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance}});
    j["verification"] = {{"all_passed", rep.all_passed}, {"checks", checks}};
    if (!cfg.output.empty()) write_json(j, cfg.output);

    out << "capacity = " << sig(res.capacity) << "  action = " << sig(res.orbit->action)
        << "  verification = " << (rep.all_passed ? "ok" : "FAILED") << "\n";
    for (const auto& c : rep.checks)
        if (!c.passed)
            out << "  failed: " << c.name << "  measured " << sig(c.measured)
                << "  tolerance " << sig(c.tolerance) << "\n";
    return rep.all_passed ? 0 : 4;
}

int cmd_cut_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const HPolytope K = load_polytope(cfg.input);
    const ValidationReport vr = validate_polytope(K);
    const std::string mode = (cfg.mode == "pruned") ? "pruned" : "exact";

    std::vector<std::pair<Vec, double>> planes;
    for (size_t i = 0; i < cfg.cut_normals.size(); ++i)
        planes.emplace_back(cfg.cut_normals[i], cfg.cut_offsets[i]);
    if (planes.empty()) {
        const int count = cfg.samples > 0 ? cfg.samples : 5;
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int s = 0; s < count; ++s) {
            Vec nrm(K.dim);
            do
                for (int k = 0; k < K.dim; ++k) nrm(k) = gauss(rng);
            while (nrm.norm() < 1e-9);
            nrm.normalize();
            Vec dir(K.dim);
            for (int k = 0; k < K.dim; ++k) dir(k) = gauss(rng);
            const Vec point =
                vr.chebyshev_center + dir * (0.6 * vr.inradius * unit(rng) / dir.norm());
            planes.emplace_back(nrm, nrm.dot(point));
        }
    }

    const double total = dispatch_capacity(K, mode, cfg).capacity;
    Json rows = Json::array();
    bool all_hold = true;
    out << "capacity(K) = " << sig(total) << "\n";
    for (const auto& [nrm, offset] : planes) {
        Json row;
        row["normal"] = to_list(nrm);
        row["offset"] = offset;
        try {
            const CutResult pieces = cut(K, nrm, offset);
            const double c1 = dispatch_capacity(pieces.upper, mode, cfg).capacity;
            const double c2 = dispatch_capacity(pieces.lower, mode, cfg).capacity;
            const bool holds = total <= c1 + c2 + cfg.tol * total;
            row["upper"] = c1;
            row["lower"] = c2;
            row["sum"] = c1 + c2;
            row["holds"] = holds;
            all_hold = all_hold && holds;
            out << "  cut offset " << sig(offset) << ": " << sig(total) << " <= "
                << sig(c1) << " + " << sig(c2) << "  " << (holds ? "ok" : "VIOLATED")
                << "\n";
        } catch (const ValidationError& e) {
            if (e.code() != "DegenerateCut") throw;
            row["skipped"] = true;
            err << "warning: degenerate cut skipped (offset " << sig(offset) << ")\n";
        }
        rows.push_back(std::move(row));
    }

    Json j;
    j["capacity"] = total;
    j["cuts"] = std::move(rows);
    j["all_hold"] = all_hold;
    if (!cfg.output.empty()) write_json(j, cfg.output);
    return all_hold ? 0 : 4;
}

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
    if (cfg.output.empty())
        throw ValidationError("FileError", "gen needs --out");
    HPolytope K;
    if (cfg.shape == "cube")
        K = make_cube(cfg.n, cfg.radius);
    else if (cfg.shape == "cross")
        K = make_cross_polytope(cfg.n, cfg.radius);
    else if (cfg.shape == "simplex")
        K = make_simplex(cfg.n);
    else if (cfg.shape == "random")
        K = make_random_polytope(cfg.n, cfg.facets, cfg.seed);
    else
        throw ValidationError("BadShape", "unknown shape '" + cfg.shape + "'");
    save_polytope(K, cfg.output);
    out << "wrote " << cfg.shape << " (dim " << K.dim << ", " << K.facet_count()
        << " facets) to " << cfg.output << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// self test

struct CheckResult {
    bool ok = false;
    std::string detail;
};

struct OmegaGuard {
    explicit OmegaGuard(double s) { fault_injection::set_omega_scale(s); }
    ~OmegaGuard() { fault_injection::set_omega_scale(1.0); }
};

HPolytope unit_square() {
    HPolytope K;
    K.dim = 2;
    Vec e1 = Vec::Zero(2), e2 = Vec::Zero(2);
    e1(0) = 1.0;
    e2(1) = 1.0;
    K.facets = {{e1, 1.0}, {e2, 1.0}, {-e1, 0.0}, {-e2, 0.0}};
    return K;
}

HPolytope centered(const HPolytope& K) {
    return translate(K, Vec(-validate_polytope(K).chebyshev_center));
}

CheckResult pass(std::string detail) { return {true, std::move(detail)}; }
CheckResult fail(std::string detail) { return {false, std::move(detail)}; }

CheckResult check_near(double got, double want, double tol, const std::string& label) {
    if (std::abs(got - want) <= tol) return pass(label + " = " + sig(got));
    return fail(label + " = " + sig(got) + ", expected " + sig(want) + " +- " + sig(tol));
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.inject.empty() && cfg.inject != "omega-sign")
        throw ValidationError("BadMode", "unknown injection '" + cfg.inject + "'");
    OmegaGuard guard(cfg.inject == "omega-sign" ? -1.0 : 1.0);

    using CheckFn = std::function<CheckResult()>;
    std::vector<std::pair<std::string, CheckFn>> checks;
    auto add = [&checks](std::string name, CheckFn fn) {
        checks.emplace_back(std::move(name), std::move(fn));
    };

    const double relband = 1e-9;

    add("omega-convention", [] {
        for (int n = 1; n <= 3; ++n) {
            SymplecticContext ctx(n);
            Vec e1 = Vec::Zero(2 * n), en1 = Vec::Zero(2 * n);
            e1(0) = 1.0;
            en1(n) = 1.0;
            if (std::abs(ctx.omega(e1, en1) - 1.0) > 1e-15)
                return fail("omega(e1, e_{n+1}) = " + sig(ctx.omega(e1, en1)) +
                            " at n = " + std::to_string(n));
            const Mat J = ctx.J_matrix();
            if ((J * J + Mat::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() > 1e-15)
                return fail("J^2 != -I");
        }
        return pass("omega(e1, e_{n+1}) = 1, J^2 = -I for n = 1..3");
    });

    add("square-capacity", [] {
        const CapacityResult res = capacity(make_cube(1, 1.0));
        if (std::abs(res.capacity - 4.0) > 1e-10)
            return fail("capacity = " + sig(res.capacity));
        if (std::abs(res.best.objective - 0.125) > 1e-12)
            return fail("objective = " + sig(res.best.objective));
        for (int i = 0; i < 4; ++i)
            if (std::abs(res.best.beta(i) - 0.25) > 1e-10)
                return fail("beta not uniform 1/4");
        return pass("capacity = 4, objective = 1/8, beta = 1/4 each");
    });

    add("unit-square", [] {
        const HPolytope K = unit_square();
        const double c = capacity(K).capacity;
        const double a = area_2d(K);
        if (std::abs(c - 1.0) > 1e-10) return fail("capacity = " + sig(c));
        if (std::abs(c - a) > 1e-9 * a) return fail("area mismatch: " + sig(a));
        return pass("capacity = area = 1");
    });

    add("triangle", [] {
        return check_near(capacity(make_simplex(1)).capacity, 0.5, 1e-10, "capacity");
    });

    add("random-polygons-area", [relband] {
        for (int i = 0; i < 8; ++i) {
            const HPolytope K = make_random_polytope(1, 4 + i % 5, 1000 + i);
            const double c = capacity(K).capacity;
            const double a = area_2d(K);
            if (std::abs(c - a) > relband * a)
                return fail("seed " + std::to_string(1000 + i) + ": capacity " + sig(c) +
                            " vs area " + sig(a));
        }
        return pass("capacity = area on 8 seeded polygons");
    });

    add("reference-equality-2d", [relband] {
        for (int i = 0; i < 4; ++i) {
            const HPolytope K = make_random_polytope(1, 4 + i, 2000 + i);
            const double fast = capacity(K).capacity;
            const double ref = capacity_reference(K).capacity;
            if (std::abs(fast - ref) > relband * std::max(1.0, std::abs(ref)))
                return fail("fast " + sig(fast) + " vs reference " + sig(ref));
        }
        return pass("kernel matches the per-permutation reference on 4 polygons");
    });

    add("heuristic-bound-2d", [] {
        for (int i = 0; i < 4; ++i) {
            const HPolytope K = make_random_polytope(1, 5 + i % 3, 3000 + i);
            const double exact = capacity(K).capacity;
            CapacityOptions o;
            o.mode = CapacityMode::Heuristic;
            o.restarts = 64;
            o.seed = 42 + i;
            const double heur = capacity(K, o).capacity;
            if (heur < exact - 1e-9)
                return fail("heuristic " + sig(heur) + " below exact " + sig(exact));
        }
        return pass("heuristic stays an upper bound on 4 polygons");
    });

    add("orbit-certificates-2d", [] {
        std::vector<HPolytope> fixtures{make_cube(1, 1.0), make_simplex(1)};
        for (int i = 0; i < 3; ++i)
            fixtures.push_back(make_random_polytope(1, 5 + i, 4000 + i));
        for (const HPolytope& K : fixtures) {
            const CapacityResult res = capacity(K);
            const HPolytope Kc = centered(K);
            const VerificationReport rep = verify(Kc, *res.orbit, res.capacity);
            if (!rep.all_passed) {
                for (const auto& c : rep.checks)
                    if (!c.passed) return fail("check '" + c.name + "' failed");
            }
        }
        return pass("all certificate checks pass on 5 fixtures");
    });

    add("invariance-2d", [relband] {
        const HPolytope K = make_random_polytope(1, 6, 5000);
        const double c = capacity(K).capacity;
        Vec shift(2);
        shift << 0.3, -0.2;
        const double ct = capacity(translate(K, shift)).capacity;
        if (std::abs(ct - c) > relband * c) return fail("translation broke invariance");
        const double cs = capacity(scale(K, 2.0)).capacity;
        if (std::abs(cs - 4.0 * c) > relband * 4.0 * c) return fail("scaling is off");
        const Mat A = random_symplectic_matrix(1, 7);
        const double ca = capacity(apply_linear(K, A)).capacity;
        if (std::abs(ca - c) > 1e-7 * c) return fail("symplectic map changed the value");
        return pass("translation, scaling, symplectic map all consistent");
    });

    add("symmetric-path-2d", [relband] {
        const double cs = capacity_symmetric(make_cube(1, 1.0)).capacity;
        if (std::abs(cs - 4.0) > 1e-10) return fail("square via pairs = " + sig(cs));
        // centrally symmetric hexagon from three +- normal pairs
        HPolytope H;
        H.dim = 2;
        std::mt19937_64 rng(6000);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int k = 0; k < 3; ++k) {
            Vec nrm(2);
            nrm << gauss(rng), gauss(rng);
            nrm.normalize();
            const double hh = 1.0 + 0.3 * k;
            H.facets.push_back({nrm, hh});
            H.facets.push_back({-nrm, hh});
        }
        const double a = capacity(H).capacity;
        const double b = capacity_symmetric(H).capacity;
        if (std::abs(a - b) > relband * a)
            return fail("hexagon: general " + sig(a) + " vs symmetric " + sig(b));
        return pass("symmetric path agrees with the general kernel");
    });

    add("pruned-path-2d", [relband] {
        for (int i = 0; i < 3; ++i) {
            const HPolytope K = make_random_polytope(1, 5 + i, 7000 + i);
            const double a = capacity(K).capacity;
            const double b = capacity_pruned(K).capacity;
            if (std::abs(a - b) > relband * a)
                return fail("pruned " + sig(b) + " vs general " + sig(a));
        }
        return pass("graph-pruned path agrees on 3 polygons");
    });

    add("cut-subadditivity-2d", [relband] {
        const HPolytope K = make_cube(1, 1.0);
        const double c = capacity(K).capacity;
        Vec nrm(2);
        nrm << 1.0, 0.0;
        for (double offset : {0.0, 0.25, -0.4}) {
            const CutResult pieces = cut(K, nrm, offset);
            const double c1 = capacity(pieces.upper).capacity;
            const double c2 = capacity(pieces.lower).capacity;
            if (c > c1 + c2 + relband * c) return fail("subadditivity violated");
            if (std::abs(c - (c1 + c2)) > 1e-9 * c)
                return fail("planar additivity off: " + sig(c1 + c2));
        }
        return pass("sub additive with planar equality on 3 cuts");
    });

    add("graph-stats-2d", [] {
        const TransitionGraph g = build_transition_graph(make_cube(1, 1.0));
        const auto cycles = simple_cycles(g);
        const auto long_cycles =
            std::count_if(cycles.begin(), cycles.end(),
                          [](const std::vector<int>& c) { return c.size() >= 3; });
        if (g.edge_count() != 4) return fail("square edges = " + std::to_string(g.edge_count()));
        if (long_cycles != 1) return fail("square cycles = " + std::to_string(long_cycles));
        return pass("square transition graph: 4 edges, 1 cycle");
    });

    add("ladder-2d", [] {
        const double lad = repetition_ladder(make_cube(1, 1.0), 4, 40, 11);
        if (std::abs(lad - 4.0) > 1e-9) return fail("square ladder = " + sig(lad));
        const HPolytope K = make_random_polytope(1, 5, 8000);
        const double c = capacity(K).capacity;
        const double l2 = repetition_ladder(K, 7, 60, 12);
        if (l2 < c - 1e-9) return fail("ladder " + sig(l2) + " below capacity " + sig(c));
        return pass("ladder = 4 on the square; bounds hold on a random polygon");
    });

    add("clarke-2d", [] {
        const double e1 = clarke_dual_ascent(make_cube(1, 1.0), 4, 50, 21);
        if (std::abs(e1 - 4.0) > 1e-6) return fail("square ascent = " + sig(e1));
        const double e2 = clarke_dual_ascent(centered(unit_square()), 6, 50, 22);
        if (std::abs(e2 - 1.0) > 1e-6) return fail("unit square ascent = " + sig(e2));
        return pass("ascent reaches 4 and 1 on the squares");
    });

    add("qp-agreement", [] {
        std::mt19937_64 rng(9000);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int i = 0; i < 10; ++i) {
            const int F = 4 + i % 3;
            Mat S(F, F);
            for (int a = 0; a < F; ++a)
                for (int b = 0; b <= a; ++b) {
                    S(a, b) = gauss(rng);
                    S(b, a) = S(a, b);
                }
            Mat E = Mat::Ones(1, F);
            Vec f = Vec::Ones(1);
            QuadraticOverPolytope q{S, E, f, 16};
            const QPSolution ex = maximize_exact(q);
            const QPSolution he = maximize_heuristic(q, 8, 100 + i);
            if (he.value > ex.value + 1e-9)
                return fail("heuristic above exact by " + sig(he.value - ex.value));
        }
        return pass("heuristic <= exact on 10 random simplex instances");
    });

    if (!cfg.quick) {
        add("cube4-paths", [relband] {
            const HPolytope K = make_cube(2, 1.0);
            const double a = capacity(K).capacity;
            if (std::abs(a - 4.0) > 1e-10) return fail("cube capacity = " + sig(a));
            const double b = capacity_symmetric(K).capacity;
            const double c = capacity_pruned(K).capacity;
            if (std::abs(b - a) > relband * a) return fail("symmetric path = " + sig(b));
            if (std::abs(c - a) > relband * a) return fail("pruned path = " + sig(c));
            return pass("cube in R^4: all three paths give 4");
        });

        add("simplex2-capacity", [] {
            const CapacityResult res = capacity(make_simplex(2));
            if (std::abs(res.capacity - 0.25) > 1e-10)
                return fail("capacity = " + sig(res.capacity));
            const HPolytope Kc = centered(make_simplex(2));
            const VerificationReport rep = verify(Kc, *res.orbit, res.capacity);
            if (!rep.all_passed) return fail("certificate check failed");
            return pass("capacity = 1/4 with a verified orbit");
        });

        add("cross4-symmetric", [] {
            const double c = capacity_symmetric(make_cross_polytope(2, 1.0)).capacity;
            return check_near(c, 1.0, 1e-9, "capacity");
        });

        add("graph-stats-4d", [] {
            const TransitionGraph gc = build_transition_graph(make_cube(2, 1.0));
            const auto cyc = simple_cycles(gc);
            const auto longc =
                std::count_if(cyc.begin(), cyc.end(),
                              [](const std::vector<int>& c) { return c.size() >= 3; });
            if (gc.edge_count() != 40)
                return fail("cube edges = " + std::to_string(gc.edge_count()));
            if (longc != 1954) return fail("cube cycles = " + std::to_string(longc));
            const TransitionGraph gs = build_transition_graph(centered(make_simplex(2)));
            const auto cys = simple_cycles(gs);
            const auto longs =
                std::count_if(cys.begin(), cys.end(),
                              [](const std::vector<int>& c) { return c.size() >= 3; });
            if (gs.edge_count() != 14)
                return fail("simplex edges = " + std::to_string(gs.edge_count()));
            if (longs != 25) return fail("simplex cycles = " + std::to_string(longs));
            return pass("cube: 40 edges / 1954 cycles; simplex: 14 / 25");
        });

        add("invariance-4d", [] {
            const HPolytope K = make_simplex(2);
            const double c = capacity(K).capacity;
            const double cs = capacity(scale(K, 2.0)).capacity;
            if (std::abs(cs - 4.0 * c) > 1e-9 * 4.0 * c) return fail("scaling is off");
            const Mat A = random_symplectic_matrix(2, 17);
            const double ca = capacity(apply_linear(K, A)).capacity;
            if (std::abs(ca - c) > 1e-7 * c) return fail("symplectic map changed the value");
            return pass("scaling and symplectic invariance in R^4");
        });

        add("cut-subadditivity-4d", [relband] {
            std::mt19937_64 rng(10000);
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (int i = 0; i < 2; ++i) {
                const HPolytope K = make_random_polytope(2, 5, 11000 + i);
                const ValidationReport vr = validate_polytope(K);
                const double c = capacity(K).capacity;
                Vec nrm(4);
                for (int k = 0; k < 4; ++k) nrm(k) = gauss(rng);
                nrm.normalize();
                const CutResult pieces = cut(K, nrm, nrm.dot(vr.chebyshev_center));
                const double c1 = capacity(pieces.upper).capacity;
                const double c2 = capacity(pieces.lower).capacity;
                if (c > c1 + c2 + relband * c)
                    return fail("violated on seed " + std::to_string(11000 + i));
            }
            return pass("center cuts of 2 random 4-polytopes are subadditive");
        });

        add("ladder-4d", [] {
            const double lad = repetition_ladder(make_cube(2, 1.0), 8, 30, 13);
            return check_near(lad, 4.0, 1e-9, "cube ladder");
        });

        add("clarke-4d", [] {
            const double est = clarke_dual_ascent(make_cube(2, 1.0), 8, 60, 23);
            return check_near(est, 4.0, 1e-4, "cube ascent");
        });
    }

    int failures = 0;
    for (const auto& [name, fn] : checks) {
        CheckResult r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r = fail(std::string("exception: ") + e.what());
        }
        if (!r.ok) ++failures;
        out << (r.ok ? "[ ok ] " : "[FAIL] ") << name << ": " << r.detail << "\n";
    }
    if (failures == 0)
        out << "self test passed (" << checks.size() << " checks)\n";
    else
        out << "self test FAILED (" << failures << " of " << checks.size() << " checks)\n";
    return failures == 0 ? 0 : 4;
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
#ifdef _OPENMP
        omp_set_num_threads(std::max(1, cfg.workers));
#endif
        if (cfg.command == "capacity" || cfg.command == "symmetric" ||
            cfg.command == "pruned")
            return cmd_capacity(cfg, out);
        if (cfg.command == "orbit") return cmd_orbit(cfg, out);
        if (cfg.command == "cut-check") return cmd_cut_check(cfg, out, err);
        if (cfg.command == "gen") return cmd_gen(cfg, out);
        if (cfg.command == "selftest") return cmd_selftest(cfg, out);
        throw ValidationError("BadCommand", "unknown command '" + cfg.command + "'");
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace ehz

#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>

#include "ehz/capacity.hpp"
#include "ehz/oracles.hpp"
#include "test_support.hpp"

using namespace ehz;
using namespace ehz::testing;

TEST_CASE("square capacity and maximizer") {
    const auto res = capacity(make_cube(1, 1.0));
    CHECK(res.capacity == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(res.best.objective == doctest::Approx(0.125).epsilon(1e-12));
    REQUIRE(res.best.beta.size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(res.best.beta(k) == doctest::Approx(0.25));
    CHECK(res.diagnostics.nodes == 7);
    CHECK(res.best.sigma.front() == 0);
}

TEST_CASE("fixture values") {
    CHECK(capacity(load_polytope(fixture("unit_square.json"))).capacity ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(capacity(load_polytope(fixture("triangle.json"))).capacity ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(capacity(load_polytope(fixture("simplex2.json"))).capacity ==
          doctest::Approx(0.25).epsilon(1e-12));
    const auto cube = capacity(load_polytope(fixture("cube4.json")));
    CHECK(cube.capacity == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(cube.diagnostics.nodes == 7938);
}

TEST_CASE("planar capacity equals area") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const HPolytope K = random_polygon(4 + static_cast<int>(seed % 5), 40 + seed);
        const double a = area_2d(K);
        CHECK(capacity(K).capacity == doctest::Approx(a).epsilon(1e-11));
    }
}

TEST_CASE("ordered support search matches the plain enumeration") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const HPolytope K = random_polygon(5 + static_cast<int>(seed % 2), 60 + seed);
        const auto fast = capacity(K);
        const auto ref = capacity_reference(K);
        CHECK(fast.capacity == doctest::Approx(ref.capacity).epsilon(1e-11));
        CHECK(fast.best.objective == doctest::Approx(ref.best.objective).epsilon(1e-11));
    }
    const HPolytope S = load_polytope(fixture("simplex2.json"));
    CHECK(capacity(S).capacity ==
          doctest::Approx(capacity_reference(S).capacity).epsilon(1e-11));
}

TEST_CASE("symmetric reduction agrees with the general search") {
    const HPolytope C = make_cube(2, 1.0);
    const auto general = capacity(C);
    const auto sym = capacity_symmetric(C);
    CHECK(sym.capacity == doctest::Approx(general.capacity).epsilon(1e-12));
    const auto symref = capacity_symmetric_reference(C);
    CHECK(symref.capacity == doctest::Approx(general.capacity).epsilon(1e-12));

    // centrally symmetric hexagon
    HPolytope H;
    H.dim = 2;
    for (int k = 0; k < 3; ++k) {
        const double ang = 0.3 + 2.0 * k * M_PI / 3.0;
        Vec n(2);
        n << std::cos(ang), std::sin(ang);
        H.facets.push_back({n, 1.0 + 0.2 * k});
        H.facets.push_back({Vec(-n), 1.0 + 0.2 * k});
    }
    CHECK(capacity_symmetric(H).capacity ==
          doctest::Approx(capacity(H).capacity).epsilon(1e-11));
    CHECK(capacity_symmetric_reference(H).capacity ==
          doctest::Approx(capacity(H).capacity).epsilon(1e-11));

    CHECK_THROWS_AS(capacity_symmetric(make_simplex(1)), ValidationError);
}

TEST_CASE("cycle pruned search agrees with the general search") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const HPolytope K = random_polygon(6, 80 + seed);
        CHECK(capacity_pruned(K).capacity ==
              doctest::Approx(capacity(K).capacity).epsilon(1e-11));
    }
    const HPolytope S = load_polytope(fixture("simplex2.json"));
    CHECK(capacity_pruned(S).capacity == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("transition graph statistics") {
    const auto gs = build_transition_graph(make_cube(1, 1.0));
    CHECK(gs.edge_count() == 4);
    auto cyc = simple_cycles(gs);
    cyc.erase(std::remove_if(cyc.begin(), cyc.end(),
                             [](const auto& c) { return c.size() < 3; }),
              cyc.end());
    CHECK(cyc.size() == 1);

    const auto gc = build_transition_graph(make_cube(2, 1.0));
    CHECK(gc.edge_count() == 40);
    auto cyc4 = simple_cycles(gc);
    cyc4.erase(std::remove_if(cyc4.begin(), cyc4.end(),
                              [](const auto& c) { return c.size() < 3; }),
               cyc4.end());
    CHECK(cyc4.size() == 1954);

    const HPolytope S = make_simplex(2);
    const auto gsx = build_transition_graph(
        translate(S, Vec(-validate_polytope(S).chebyshev_center)));
    CHECK(gsx.edge_count() == 14);
    auto cycs = simple_cycles(gsx);
    cycs.erase(std::remove_if(cycs.begin(), cycs.end(),
                              [](const auto& c) { return c.size() < 3; }),
               cycs.end());
    CHECK(cycs.size() == 25);
}

TEST_CASE("invariance under translation, scaling and symplectic maps") {
    const HPolytope K = random_polygon(6, 90);
    const double c0 = capacity(K).capacity;

    Vec v(2);
    v << 0.4, -1.1;
    CHECK(capacity(translate(K, v)).capacity == doctest::Approx(c0).epsilon(1e-11));
    CHECK(capacity(scale(K, 2.0)).capacity == doctest::Approx(4.0 * c0).epsilon(1e-11));
    const Mat A = random_symplectic_matrix(1, 11);
    CHECK(capacity(apply_linear(K, A)).capacity == doctest::Approx(c0).epsilon(1e-7));

    const HPolytope C = make_cube(2, 1.0);
    const Mat B = random_symplectic_matrix(2, 12);
    CHECK(capacity(apply_linear(C, B)).capacity == doctest::Approx(4.0).epsilon(1e-7));
}

TEST_CASE("heuristic mode bounds the exact value") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const HPolytope K = random_polygon(9, 95 + seed);
        const auto exact = capacity(K);
        CapacityOptions h;
        h.mode = CapacityMode::Heuristic;
        h.restarts = 48;
        h.seed = 7 + seed;
        const auto rough = capacity(K, h);
        CHECK(rough.mode == CapacityMode::Heuristic);
        CHECK_FALSE(rough.orbit.has_value());
        // heuristic underestimates the objective, so overestimates capacity
        CHECK(rough.capacity >= exact.capacity - 1e-9);
    }
}

TEST_CASE("facet count guards") {
    const HPolytope K = random_polygon(9, 97);
    CapacityOptions tight;
    tight.exact_limit = 8;
    CHECK_THROWS_AS(capacity(K, tight), SolverError);

    HPolytope flat = make_cube(1, 1.0);
    flat.facets[0].height = -2.0;
    CHECK_THROWS_AS(capacity(flat), ValidationError);
}

TEST_CASE("result carries the frame") {
    const HPolytope U = load_polytope(fixture("unit_square.json"));
    const auto res = capacity(U);
    CHECK(res.center(0) == doctest::Approx(0.5));
    CHECK(res.center(1) == doctest::Approx(0.5));
    REQUIRE(res.orbit.has_value());
    CHECK(res.orbit->action == doctest::Approx(res.capacity).epsilon(1e-10));
}

#ifdef _OPENMP
TEST_CASE("thread count does not change the reported maximizer") {
    const HPolytope K = random_polygon(7, 98);
    const int before = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto serial = capacity(K);
    omp_set_num_threads(4);
    const auto parallel = capacity(K);
    omp_set_num_threads(before);
    CHECK(serial.capacity == parallel.capacity);
    CHECK(serial.best.sigma == parallel.best.sigma);
    CHECK((serial.best.beta - parallel.best.beta).norm() == 0.0);
}
#endif

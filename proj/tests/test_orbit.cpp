#include <doctest.h>

#include <random>

#include "ehz/capacity.hpp"
#include "ehz/orbit.hpp"
#include "test_support.hpp"

using namespace ehz;
using namespace ehz::testing;

namespace {

bool check_named(const VerificationReport& rep, const std::string& name) {
    for (const auto& c : rep.checks)
        if (c.name == name) return c.passed;
    return false;
}

}  // namespace

TEST_CASE("square orbit traverses the boundary counterclockwise") {
    const HPolytope K = make_cube(1, 1.0);
    const auto res = capacity(K);
    REQUIRE(res.orbit.has_value());
    const auto& cert = *res.orbit;

    CHECK(cert.action == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(cert.speed_scale == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(cert.boundary_residual <= 1e-10);
    REQUIRE(cert.loop.segments.size() == 4);
    for (const auto& seg : cert.loop.segments) {
        CHECK(seg.duration == doctest::Approx(0.25));
        CHECK(seg.velocity.norm() == doctest::Approx(8.0));
    }
    for (int count : cert.facet_visit_counts) CHECK(count == 1);

    // signed area enclosed by the loop is positive for this orientation
    Vec p = cert.loop.start;
    double twice_area = 0.0;
    for (const auto& seg : cert.loop.segments) {
        const Vec q = p + seg.duration * seg.velocity;
        twice_area += p(0) * q(1) - q(0) * p(1);
        p = q;
    }
    CHECK(twice_area == doctest::Approx(8.0));

    const auto rep = verify(K, cert, res.capacity);
    CHECK(rep.all_passed);
}

TEST_CASE("verification passes on exact results across fixtures") {
    for (const char* name : {"triangle.json", "simplex2.json", "cube4.json"}) {
        const HPolytope K = load_polytope(fixture(name));
        const auto res = capacity(K);
        REQUIRE(res.orbit.has_value());
        const HPolytope centered = translate(K, Vec(-res.center));
        const auto rep = verify(centered, *res.orbit, res.capacity);
        CHECK(rep.all_passed);
    }
}

TEST_CASE("discrete action equals the quadrature") {
    SymplecticContext ctx(2);
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> dur(0.1, 0.5);
    for (int trial = 0; trial < 8; ++trial) {
        const int segs = 3 + trial % 4;
        PiecewiseAffineLoop loop;
        loop.start = Vec::Zero(4);
        for (int k = 0; k < 4; ++k) loop.start(k) = gauss(rng);
        Vec drift = Vec::Zero(4);
        double total = 0.0;
        for (int s = 0; s < segs; ++s) {
            Segment seg;
            seg.duration = dur(rng);
            seg.velocity = Vec(4);
            for (int k = 0; k < 4; ++k) seg.velocity(k) = gauss(rng);
            if (s + 1 == segs) seg.velocity = -drift / seg.duration;  // close the loop
            drift += seg.duration * seg.velocity;
            total += seg.duration;
            loop.segments.push_back(seg);
        }
        for (auto& seg : loop.segments) seg.duration /= total;
        for (auto& seg : loop.segments) seg.velocity *= total;
        CHECK(action(ctx, loop) ==
              doctest::Approx(action_quadrature(ctx, loop)).epsilon(1e-10));
    }
}

TEST_CASE("reconstruction rejects the time-forward facet order") {
    const HPolytope K = make_cube(1, 1.0);
    const auto res = capacity(K);
    // reversing the maximizer order describes the orbit backwards
    std::vector<int> physical(res.best.sigma.rbegin(), res.best.sigma.rend());
    CHECK_THROWS_AS(reconstruct(K, physical, res.best.beta), SolverError);
}

TEST_CASE("verification catches tampered certificates") {
    const HPolytope K = make_cube(1, 1.0);
    const auto res = capacity(K);
    REQUIRE(res.orbit.has_value());

    SUBCASE("doubled final duration breaks closure") {
        auto cert = *res.orbit;
        cert.loop.segments.back().duration *= 2.0;
        const auto rep = verify(K, cert, res.capacity);
        CHECK_FALSE(rep.all_passed);
        CHECK_FALSE(check_named(rep, "closure"));
        CHECK_FALSE(check_named(rep, "total_duration"));
    }
    SUBCASE("shifted start leaves the boundary") {
        auto cert = *res.orbit;
        cert.loop.start(0) += 0.05;
        const auto rep = verify(K, cert, res.capacity);
        CHECK_FALSE(rep.all_passed);
        CHECK_FALSE(check_named(rep, "segment_on_facet"));
    }
    SUBCASE("overwritten action disagrees with the recomputation") {
        auto cert = *res.orbit;
        cert.action += 0.25;
        const auto rep = verify(K, cert, res.capacity);
        CHECK_FALSE(rep.all_passed);
        CHECK_FALSE(check_named(rep, "action_consistency"));
    }
    SUBCASE("wrong capacity claim is flagged") {
        const auto rep = verify(K, *res.orbit, res.capacity * 1.01);
        CHECK_FALSE(rep.all_passed);
        CHECK_FALSE(check_named(rep, "action_equals_capacity"));
    }
    SUBCASE("rescaled velocity violates the cone condition") {
        auto cert = *res.orbit;
        cert.loop.segments[1].velocity *= -1.0;
        const auto rep = verify(K, cert, res.capacity);
        CHECK_FALSE(rep.all_passed);
    }
}

TEST_CASE("orbit json carries segments and action") {
    const auto res = capacity(make_cube(1, 1.0));
    const Json j = orbit_to_json(res.orbit->loop, res.orbit->action);
    CHECK(j.at("action").get<double>() == doctest::Approx(4.0));
    CHECK(j.at("segments").size() == 4);
    CHECK(j.at("segments")[0].contains("velocity"));
    CHECK(j.at("segments")[0].contains("duration"));
}

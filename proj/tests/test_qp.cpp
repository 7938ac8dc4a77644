#include <doctest.h>

#include "ehz/qp.hpp"
#include "test_support.hpp"

using namespace ehz;
using namespace ehz::testing;

namespace {

QuadraticOverPolytope simplex_instance(const Mat& S) {
    QuadraticOverPolytope q;
    q.S = S;
    q.E = Mat::Ones(1, S.rows());
    q.f = Vec::Ones(1);
    return q;
}

}  // namespace

TEST_CASE("product form maximum at the balanced point") {
    Mat S(2, 2);
    S << 0.0, 1.0, 1.0, 0.0;  // 0.5 b'Sb = b1 b2
    const auto sol = maximize_exact(simplex_instance(S));
    CHECK(sol.value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sol.argmax(0) == doctest::Approx(0.5));
    CHECK(sol.argmax(1) == doctest::Approx(0.5));
}

TEST_CASE("concave instance has interior maximum") {
    const auto sol = maximize_exact(simplex_instance(-Mat::Identity(3, 3)));
    CHECK(sol.value == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
    for (int k = 0; k < 3; ++k) CHECK(sol.argmax(k) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("convex instance picks a vertex with lexicographic tie break") {
    const auto sol = maximize_exact(simplex_instance(Mat::Identity(3, 3)));
    CHECK(sol.value == doctest::Approx(0.5));
    // all three vertices tie; the smallest active set {0, 1} wins
    CHECK(sol.active_set == std::vector<int>{0, 1});
    CHECK(sol.argmax(2) == doctest::Approx(1.0));
}

TEST_CASE("argmax satisfies the constraints") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const int F = 3 + static_cast<int>(seed % 5);
        const auto q = simplex_instance(random_symmetric(F, 500 + seed));
        const auto sol = maximize_exact(q);
        CHECK(std::abs(sol.argmax.sum() - 1.0) <= 1e-9);
        CHECK(sol.argmax.minCoeff() >= -1e-12);
        CHECK(sol.value ==
              doctest::Approx(0.5 * sol.argmax.dot(q.S * sol.argmax)).epsilon(1e-10));
    }
}

TEST_CASE("heuristic never exceeds the exact maximum") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const int F = 4 + static_cast<int>(seed % 4);
        const auto q = simplex_instance(random_symmetric(F, 900 + seed));
        const auto exact = maximize_exact(q);
        const auto lower = maximize_heuristic(q, 8, 70 + seed);
        CHECK(lower.value <= exact.value + 1e-9);
        CHECK(lower.status == QpStatus::HeuristicLowerBound);
        CHECK(std::abs(lower.argmax.sum() - 1.0) <= 1e-9);
        CHECK(lower.argmax.minCoeff() >= -1e-12);
    }
}

TEST_CASE("negative semidefinite instances match a projected gradient reference") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int F = 3 + static_cast<int>(seed % 6);
        const Mat S = random_nsd(F, 1300 + seed);
        const auto sol = maximize_exact(simplex_instance(S));
        CHECK(sol.value == doctest::Approx(nsd_simplex_max(S)).epsilon(1e-9));
    }
}

TEST_CASE("two equality rows restrict the feasible face") {
    // b1 + b2 + b3 = 1 and b3 = 0.5 force the rest onto a segment
    Mat S(3, 3);
    S << 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0;
    QuadraticOverPolytope q;
    q.S = S;
    q.E = Mat(2, 3);
    q.E << 1.0, 1.0, 1.0, 0.0, 0.0, 1.0;
    q.f = Vec(2);
    q.f << 1.0, 0.5;
    const auto sol = maximize_exact(q);
    CHECK(sol.value == doctest::Approx(1.0 / 16.0));
    CHECK(sol.argmax(2) == doctest::Approx(0.5));
}

TEST_CASE("size guard rejects oversized instances") {
    const int F = 17;
    auto q = simplex_instance(Mat::Zero(F, F));
    CHECK_THROWS_AS(maximize_exact(q), SolverError);
}

TEST_CASE("determinism across repeated runs") {
    const auto q = simplex_instance(random_symmetric(6, 4242));
    const auto a = maximize_exact(q);
    const auto b = maximize_exact(q);
    CHECK(a.value == b.value);
    CHECK((a.argmax - b.argmax).norm() == 0.0);
    CHECK(a.active_set == b.active_set);
    const auto h1 = maximize_heuristic(q, 6, 9);
    const auto h2 = maximize_heuristic(q, 6, 9);
    CHECK(h1.value == h2.value);
    CHECK((h1.argmax - h2.argmax).norm() == 0.0);
}

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ehz/symplectic.hpp"

namespace ehz {

// ordered_json keeps insertion order, which makes emitted files canonical
using Json = nlohmann::ordered_json;

struct Hyperplane {
    Vec normal;     // unit outer normal
    double height;  // support value, may be <= 0 when the origin is outside
};

/**
 * Convex polytope in R^{2n} given as an intersection of half-spaces
 * {x : <x, normal_i> <= height_i} with unit normals. Loaders rescale
 * (normal, height) by 1/|normal| so stored normals are unit.
 */
struct HPolytope {
    int dim = 0;
    std::vector<Hyperplane> facets;

    int facet_count() const { return static_cast<int>(facets.size()); }
    SymplecticContext context() const;

    /** Stacked facet normals, one per row. */
    Mat normal_matrix() const;
    Vec height_vector() const;
};

struct ValidationReport {
    Vec chebyshev_center;
    double inradius = 0.0;
};

/**
 * Checks the representation defines a bounded polytope with nonempty
 * interior, unit normals, no duplicate facet directions and no redundant
 * facets. Throws ValidationError (DimensionMismatch, NonUnitNormal,
 * DuplicateNormal, Unbounded, EmptyInterior, RedundantFacet) on violation.
 * Returns the Chebyshev center and inradius on success.
 */
ValidationReport validate_polytope(const HPolytope& K);

/** Support function h_K(y) = max { <x, y> : x in K }. Throws on unbounded. */
double support_value(const HPolytope& K, const Vec& y);

HPolytope translate(const HPolytope& K, const Vec& v);
HPolytope scale(const HPolytope& K, double lambda);

/**
 * Image A(K) for invertible A: normals map to (A^-T n) / |A^-T n| and
 * heights divide by the same norm.
 */
HPolytope apply_linear(const HPolytope& K, const Mat& A);

struct CutResult {
    HPolytope upper;  // side <x, normal> >= offset, gains facet (-normal, 0)
    HPolytope lower;  // side <x, normal> <= offset, gains facet (+normal, 0)
};

/**
 * Cuts K with the hyperplane {<x, normal> = offset}. Both pieces are
 * translated so the origin lies on the cutting hyperplane, redundant
 * facets are stripped, and each piece is validated. Throws
 * ValidationError("DegenerateCut") when a piece has empty interior.
 */
CutResult cut(const HPolytope& K, const Vec& normal, double offset);

struct SymmetryPairing {
    std::vector<std::pair<int, int>> pairs;  // (i, j) with n_j = -n_i, h_j = h_i
    std::vector<int> representatives;        // first member of each pair
};

/**
 * Pairs facets into antipodal couples with equal heights (tolerance 1e-9).
 * Returns nullopt when K is not centrally symmetric about the origin.
 */
std::optional<SymmetryPairing> detect_central_symmetry(const HPolytope& K);

HPolytope make_cube(int n, double r);
HPolytope make_cross_polytope(int n, double r);
/** conv{0, e_1, .., e_2n}: 2n coordinate facets at height 0 plus one diagonal facet. */
HPolytope make_simplex(int n);
/**
 * Convex hull of `points` samples drawn uniformly on the unit sphere
 * (deterministic in the seed). The sample count equals the facet count in
 * dimension 2; in higher dimension the hull has more facets. Throws
 * SolverError("GenerationFailure") if no valid polytope emerges after
 * bounded retries.
 */
HPolytope make_random_polytope(int n, int points, std::uint64_t seed);

Json polytope_to_json(const HPolytope& K);
HPolytope polytope_from_json(const Json& j);
HPolytope load_polytope(const std::string& path);
void save_polytope(const HPolytope& K, const std::string& path);

}  // namespace ehz

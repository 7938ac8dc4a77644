#include "ehz/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "ehz/linprog.hpp"

namespace ehz {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kAngleTol = 1e-9;
constexpr double kLpTol = 1e-9;

Hyperplane normalized(Vec n, double h) {
    const double len = n.norm();
    if (len < 1e-14)
        throw ValidationError("NonUnitNormal", "facet normal has zero length");
    // keep already-unit normals bit-exact so load(save(K)) is the identity
    if (std::abs(len - 1.0) <= kUnitTol) return {std::move(n), h};
    return {n / len, h / len};
}

}  // namespace

SymplecticContext HPolytope::context() const {
    if (dim % 2 != 0 || dim < 2)
        throw ValidationError("DimensionMismatch", "ambient dimension must be even and >= 2");
    return SymplecticContext(dim / 2);
}

Mat HPolytope::normal_matrix() const {
    Mat N(facet_count(), dim);
    for (int i = 0; i < facet_count(); ++i) N.row(i) = facets[i].normal;
    return N;
}

Vec HPolytope::height_vector() const {
    Vec h(facet_count());
    for (int i = 0; i < facet_count(); ++i) h(i) = facets[i].height;
    return h;
}

ValidationReport validate_polytope(const HPolytope& K) {
    const int F = K.facet_count();
    const int d = K.dim;
    K.context();  // dimension checks
    if (F < d + 1)
        throw ValidationError("EmptyInterior",
                              "fewer than dim+1 facets cannot bound a polytope");
    for (int i = 0; i < F; ++i) {
        if (K.facets[i].normal.size() != d)
            throw ValidationError("DimensionMismatch", "facet normal size != dim");
        if (std::abs(K.facets[i].normal.norm() - 1.0) > kUnitTol)
            throw ValidationError("NonUnitNormal",
                                  "facet " + std::to_string(i) + " normal is not unit");
    }
    for (int i = 0; i < F; ++i)
        for (int j = i + 1; j < F; ++j)
            if ((K.facets[i].normal - K.facets[j].normal).norm() < kAngleTol)
                throw ValidationError("DuplicateNormal", "facets " + std::to_string(i) +
                                                             " and " + std::to_string(j) +
                                                             " share a direction");

    const Mat N = K.normal_matrix();
    const Vec h = K.height_vector();

    // bounded iff the support value is finite along every signed coordinate axis
    for (int k = 0; k < d; ++k) {
        for (double s : {1.0, -1.0}) {
            Vec c = Vec::Zero(d);
            c(k) = -s;  // maximize s * x_k
            const LpResult r = solve_lp(c, N, h);
            if (r.status == LpStatus::Unbounded)
                throw ValidationError("Unbounded", "unbounded along a coordinate direction");
            if (r.status == LpStatus::Infeasible)
                throw ValidationError("EmptyInterior", "constraint system is infeasible");
        }
    }

    // Chebyshev center: maximize r with N x + r <= h (unit normals)
    Mat A(F, d + 1);
    A.leftCols(d) = N;
    A.col(d).setOnes();
    Vec c = Vec::Zero(d + 1);
    c(d) = -1.0;
    const LpResult ball = solve_lp(c, A, h);
    if (ball.status != LpStatus::Optimal || ball.x(d) <= kLpTol)
        throw ValidationError("EmptyInterior", "no inscribed ball of positive radius");

    // facet i is redundant when dropping it leaves max <x, n_i> below h_i
    for (int i = 0; i < F; ++i) {
        Mat Nredc(F - 1, d);
        Vec hred(F - 1);
        int w = 0;
        for (int j = 0; j < F; ++j) {
            if (j == i) continue;
            Nredc.row(w) = N.row(j);
            hred(w) = h(j);
            ++w;
        }
        const LpResult r = solve_lp(Vec(-N.row(i).transpose()), Nredc, hred);
        if (r.status == LpStatus::Optimal && -r.value <= h(i) + kLpTol)
            throw ValidationError("RedundantFacet",
                                  "facet " + std::to_string(i) + " is redundant");
    }

    ValidationReport rep;
    rep.chebyshev_center = ball.x.head(d);
    rep.inradius = ball.x(d);
    return rep;
}

double support_value(const HPolytope& K, const Vec& y) {
    if (y.size() != K.dim)
        throw ValidationError("DimensionMismatch", "direction size != dim");
    const LpResult r = solve_lp(Vec(-y), K.normal_matrix(), K.height_vector());
    if (r.status == LpStatus::Unbounded)
        throw ValidationError("Unbounded", "support value is infinite");
    if (r.status == LpStatus::Infeasible)
        throw ValidationError("EmptyInterior", "empty polytope has no support value");
    return -r.value;
}

HPolytope translate(const HPolytope& K, const Vec& v) {
    HPolytope out = K;
    for (auto& f : out.facets) f.height += f.normal.dot(v);
    return out;
}

HPolytope scale(const HPolytope& K, double lambda) {
    if (lambda <= 0.0) throw ValidationError("DimensionMismatch", "scale factor must be > 0");
    HPolytope out = K;
    for (auto& f : out.facets) f.height *= lambda;
    return out;
}

HPolytope apply_linear(const HPolytope& K, const Mat& A) {
    if (A.rows() != K.dim || A.cols() != K.dim)
        throw ValidationError("DimensionMismatch", "matrix must be dim x dim");
    const Mat AinvT = A.inverse().transpose();
    HPolytope out;
    out.dim = K.dim;
    out.facets.reserve(K.facets.size());
    for (const auto& f : K.facets) {
        const Vec m = AinvT * f.normal;
        out.facets.push_back(normalized(m, f.height));
    }
    return out;
}

namespace {

// strips facets whose removal does not change the feasible set
HPolytope strip_redundant(const HPolytope& K) {
    HPolytope out;
    out.dim = K.dim;
    std::vector<char> keep(K.facet_count(), 1);
    for (int i = 0; i < K.facet_count(); ++i) {
        Mat N(0, K.dim);
        Vec h(0);
        int rows = 0;
        for (int j = 0; j < K.facet_count(); ++j)
            if (j != i && keep[j]) ++rows;
        N.resize(rows, K.dim);
        h.resize(rows);
        int w = 0;
        for (int j = 0; j < K.facet_count(); ++j) {
            if (j == i || !keep[j]) continue;
            N.row(w) = K.facets[j].normal;
            h(w) = K.facets[j].height;
            ++w;
        }
        const LpResult r = solve_lp(Vec(-K.facets[i].normal), N, h);
        if (r.status == LpStatus::Optimal && -r.value <= K.facets[i].height + kLpTol)
            keep[i] = 0;
    }
    for (int i = 0; i < K.facet_count(); ++i)
        if (keep[i]) out.facets.push_back(K.facets[i]);
    return out;
}

}  // namespace

CutResult cut(const HPolytope& K, const Vec& normal, double offset) {
    if (normal.size() != K.dim)
        throw ValidationError("DimensionMismatch", "cut normal size != dim");
    const Hyperplane g = normalized(normal, offset);

    // translate so the cutting hyperplane passes through the origin
    const Vec shift = -g.height * g.normal;
    const HPolytope Kc = translate(K, shift);

    HPolytope upper = Kc;
    upper.facets.push_back({-g.normal, 0.0});
    HPolytope lower = Kc;
    lower.facets.push_back({g.normal, 0.0});

    CutResult res;
    res.upper = strip_redundant(upper);
    res.lower = strip_redundant(lower);
    for (const HPolytope* piece : {&res.upper, &res.lower}) {
        try {
            validate_polytope(*piece);
        } catch (const ValidationError& e) {
            throw ValidationError("DegenerateCut",
                                  std::string("cut produced an invalid piece (") + e.what() + ")");
        }
    }
    return res;
}

std::optional<SymmetryPairing> detect_central_symmetry(const HPolytope& K) {
    const int F = K.facet_count();
    if (F % 2 != 0) return std::nullopt;
    std::vector<int> partner(F, -1);
    SymmetryPairing out;
    for (int i = 0; i < F; ++i) {
        if (partner[i] >= 0) continue;
        int found = -1;
        for (int j = i + 1; j < F; ++j) {
            if (partner[j] >= 0) continue;
            if ((K.facets[i].normal + K.facets[j].normal).norm() < kAngleTol &&
                std::abs(K.facets[i].height - K.facets[j].height) < 1e-9) {
                found = j;
                break;
            }
        }
        if (found < 0) return std::nullopt;
        partner[i] = found;
        partner[found] = i;
        out.pairs.emplace_back(i, found);
        out.representatives.push_back(i);
    }
    return out;
}

HPolytope make_cube(int n, double r) {
    if (n < 1 || r <= 0.0) throw ValidationError("DimensionMismatch", "need n >= 1 and r > 0");
    HPolytope K;
    K.dim = 2 * n;
    for (int k = 0; k < K.dim; ++k) {
        Vec e = Vec::Zero(K.dim);
        e(k) = 1.0;
        K.facets.push_back({e, r});
        K.facets.push_back({-e, r});
    }
    return K;
}

HPolytope make_cross_polytope(int n, double r) {
    if (n < 1 || r <= 0.0) throw ValidationError("DimensionMismatch", "need n >= 1 and r > 0");
    HPolytope K;
    K.dim = 2 * n;
    const int d = K.dim;
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int mask = 0; mask < (1 << d); ++mask) {
        Vec nrm(d);
        for (int k = 0; k < d; ++k) nrm(k) = (mask >> k & 1) ? -s : s;
        K.facets.push_back({nrm, r * s});
    }
    return K;
}

HPolytope make_simplex(int n) {
    if (n < 1) throw ValidationError("DimensionMismatch", "need n >= 1");
    HPolytope K;
    K.dim = 2 * n;
    const int d = K.dim;
    for (int k = 0; k < d; ++k) {
        Vec e = Vec::Zero(d);
        e(k) = -1.0;
        K.facets.push_back({e, 0.0});
    }
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    K.facets.push_back({Vec::Constant(d, s), s});
    return K;
}

namespace {

// Facets of the hull of points in general position: every d-subset spanning
// a hyperplane with all remaining points strictly on one side.
HPolytope hull_from_points(const Mat& P) {
    const int d = static_cast<int>(P.cols());
    const int m = static_cast<int>(P.rows());
    HPolytope K;
    K.dim = d;
    std::vector<int> idx(d);
    std::vector<char> chosen(m, 0);

    // iterate over d-subsets of the m points
    for (int k = 0; k < d; ++k) idx[k] = k;
    for (;;) {
        Mat D(d - 1, d);
        for (int k = 1; k < d; ++k) D.row(k - 1) = P.row(idx[k]) - P.row(idx[0]);
        Eigen::JacobiSVD<Mat> svd(D, Eigen::ComputeFullV);
        svd.setThreshold(1e-10);
        if (svd.rank() == d - 1) {
            Vec nrm = svd.matrixV().col(d - 1);
            double h = nrm.dot(P.row(idx[0]));
            if (h < 0) { nrm = -nrm; h = -h; }
            int above = 0, below = 0, on = 0;
            for (int p = 0; p < m; ++p) {
                const double v = nrm.dot(P.row(p)) - h;
                if (v > 1e-9) ++above;
                else if (v < -1e-9) ++below;
                else ++on;
            }
            if (on > d) throw SolverError("GenerationFailure", "degenerate point sample");
            if (above == 0 || below == 0) {
                if (above > 0) { nrm = -nrm; h = -h; }
                K.facets.push_back({nrm, h});
            }
        }
        // next combination
        int k = d - 1;
        while (k >= 0 && idx[k] == m - d + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (int j = k + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
    }
    return K;
}

}  // namespace

HPolytope make_random_polytope(int n, int points, std::uint64_t seed) {
    const int d = 2 * n;
    if (points < d + 1)
        throw ValidationError("DimensionMismatch", "need at least dim+1 sample points");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 32; ++attempt) {
        Mat P(points, d);
        for (int i = 0; i < points; ++i) {
            Vec v(d);
            do {
                for (int k = 0; k < d; ++k) v(k) = gauss(rng);
            } while (v.norm() < 1e-6);
            P.row(i) = v / v.norm();
        }
        try {
            HPolytope K = hull_from_points(P);
            validate_polytope(K);
            return K;
        } catch (const Error&) {
            continue;  // resample
        }
    }
    throw SolverError("GenerationFailure", "no valid polytope after bounded retries");
}

Json polytope_to_json(const HPolytope& K) {
    Json j;
    j["dim"] = K.dim;
    Json facets = Json::array();
    for (const auto& f : K.facets) {
        Json jf;
        jf["normal"] = std::vector<double>(f.normal.data(), f.normal.data() + f.normal.size());
        jf["height"] = f.height;
        facets.push_back(std::move(jf));
    }
    j["facets"] = std::move(facets);
    return j;
}

HPolytope polytope_from_json(const Json& j) {
    HPolytope K;
    try {
        K.dim = j.at("dim").get<int>();
        for (const auto& jf : j.at("facets")) {
            const auto coords = jf.at("normal").get<std::vector<double>>();
            Vec nrm(coords.size());
            for (size_t k = 0; k < coords.size(); ++k) nrm(k) = coords[k];
            K.facets.push_back(normalized(nrm, jf.at("height").get<double>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("ParseError", std::string("malformed polytope JSON: ") + e.what());
    }
    return K;
}

HPolytope load_polytope(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("FileError", "cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("ParseError", std::string("invalid JSON: ") + e.what());
    }
    return polytope_from_json(j);
}

void save_polytope(const HPolytope& K, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("FileError", "cannot open " + path + " for writing");
    out << polytope_to_json(K).dump(2) << "\n";
}

}  // namespace ehz

#include "ehz/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ehz {

namespace {

constexpr double kSupportTol = 1e-12;
constexpr double kResidualTol = 1e-6;
constexpr double kInsideTol = 1e-7;
constexpr double kClosureTol = 1e-8;

}  // namespace

OrbitCertificate reconstruct(const HPolytope& K, const std::vector<int>& sigma, const Vec& beta) {
    const SymplecticContext ctx = K.context();
    const int F = K.facet_count();
    const int d = K.dim;
    if (static_cast<int>(sigma.size()) != F || beta.size() != F)
        throw ValidationError("DimensionMismatch", "optimizer must cover every facet");

    // visited facets in physical time order: reverse of the maximizing order
    std::vector<int> visit;
    for (int i = F - 1; i >= 0; --i)
        if (beta(sigma[i]) > kSupportTol) visit.push_back(sigma[i]);
    const int t = static_cast<int>(visit.size());
    if (t < 3)
        throw SolverError("SupportTooSmall",
                          "fewer than 3 visited facets cannot close a positive-action loop");

    Vec T(t);
    Mat P(d, t);
    for (int k = 0; k < t; ++k) {
        const auto& fct = K.facets[visit[k]];
        if (fct.height <= 0.0)
            throw ValidationError("EmptyInterior", "origin must be strictly inside the polytope");
        T(k) = beta(visit[k]) * fct.height;
        P.col(k) = (2.0 / fct.height) * ctx.apply_J(fct.normal);
    }

    // unknowns (start, d): segment k starts on its facet,
    // <start + d * prefix_k, n_k> = h_k with prefix_k = sum_{l<k} T_l p_l
    Mat A(t, d + 1);
    Vec b(t);
    Vec prefix = Vec::Zero(d);
    for (int k = 0; k < t; ++k) {
        const auto& fct = K.facets[visit[k]];
        A.row(k).head(d) = fct.normal;
        A(k, d) = fct.normal.dot(prefix);
        b(k) = fct.height;
        prefix += T(k) * P.col(k);
    }
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const Vec z = svd.solve(b);
    const double dscale = z(d);
    if (dscale <= kSupportTol)
        throw SolverError("NegativeSpeedScale",
                          "incidence system forces a nonpositive speed scale");
    const double residual = (A * z - b).cwiseAbs().maxCoeff();
    if (residual > kResidualTol)
        throw SolverError("ResidualTooLarge", "incidence residual " + std::to_string(residual));

    OrbitCertificate cert;
    cert.loop.start = z.head(d);
    cert.speed_scale = dscale;
    cert.boundary_residual = residual;
    cert.facet_visit_counts.assign(F, 0);

    Vec point = cert.loop.start;
    const Mat N = K.normal_matrix();
    const Vec h = K.height_vector();
    for (int k = 0; k < t; ++k) {
        Segment seg;
        seg.velocity = dscale * P.col(k);
        seg.duration = T(k);
        cert.loop.segments.push_back(seg);
        cert.facet_visit_counts[visit[k]] += 1;
        const double outside = (N * point - h).maxCoeff();
        if (outside > kInsideTol)
            throw SolverError("ResidualTooLarge",
                              "loop leaves the polytope by " + std::to_string(outside));
        point += seg.duration * seg.velocity;
    }
    const double outside = (N * point - h).maxCoeff();
    if (outside > kInsideTol)
        throw SolverError("ResidualTooLarge",
                          "loop leaves the polytope by " + std::to_string(outside));

    cert.cone_residual = 0.0;
    for (int k = 0; k < t; ++k) {
        const auto& fct = K.facets[visit[k]];
        const Vec ideal = dscale * (2.0 / fct.height) * ctx.apply_J(fct.normal);
        cert.cone_residual = std::max(
            cert.cone_residual,
            (cert.loop.segments[k].velocity - ideal).cwiseAbs().maxCoeff());
    }

    cert.action = action(ctx, cert.loop);
    return cert;
}

double action(const SymplecticContext& ctx, const PiecewiseAffineLoop& loop) {
    const int m = static_cast<int>(loop.segments.size());
    double acc = 0.0;
    for (int i = 1; i < m; ++i)
        for (int j = 0; j < i; ++j)
            acc += loop.segments[i].duration * loop.segments[j].duration *
                   ctx.omega(loop.segments[j].velocity, loop.segments[i].velocity);
    return 0.5 * acc;
}

double action_quadrature(const SymplecticContext& ctx, const PiecewiseAffineLoop& loop) {
    // per segment: integral of 0.5<J(p + s w), w> ds over [0, T] reduces to
    // 0.5 T <Jp, w> because <Jw, w> = 0
    double acc = 0.0;
    Vec point = loop.start;
    for (const auto& seg : loop.segments) {
        acc += 0.5 * seg.duration * ctx.omega(point, seg.velocity);
        point += seg.duration * seg.velocity;
    }
    return acc;
}

VerificationReport verify(const HPolytope& K, const OrbitCertificate& cert,
                          double capacity_value) {
    const SymplecticContext ctx = K.context();
    const int F = K.facet_count();
    const Mat N = K.normal_matrix();
    const Vec h = K.height_vector();
    const int m = static_cast<int>(cert.loop.segments.size());

    VerificationReport rep;
    auto add = [&rep](const std::string& name, double measured, double tol) {
        rep.checks.push_back({name, measured <= tol, measured, tol});
    };

    // breakpoints
    std::vector<Vec> pts;
    Vec point = cert.loop.start;
    for (int k = 0; k < m; ++k) {
        pts.push_back(point);
        point += cert.loop.segments[k].duration * cert.loop.segments[k].velocity;
    }
    add("closure", (point - cert.loop.start).cwiseAbs().maxCoeff(), kClosureTol);

    double outside = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts) outside = std::max(outside, (N * p - h).maxCoeff());
    outside = std::max(outside, (N * point - h).maxCoeff());
    add("inside_polytope", outside, kInsideTol);

    // per segment: some facet contains both endpoints; the velocity must be
    // speed_scale * (2/h) J n for one such facet
    double incidence = 0.0;
    double cone = 0.0;
    std::vector<int> visits(F, 0);
    double min_duration = m ? std::numeric_limits<double>::infinity() : 0.0;
    double total = 0.0;
    for (int k = 0; k < m; ++k) {
        const Vec& a = pts[k];
        const Vec b = (k + 1 < m) ? pts[k + 1] : point;
        double best_on = std::numeric_limits<double>::infinity();
        double best_cone = std::numeric_limits<double>::infinity();
        int best_facet = -1;
        for (int j = 0; j < F; ++j) {
            const double on = std::max(std::abs(N.row(j).dot(a) - h(j)),
                                       std::abs(N.row(j).dot(b) - h(j)));
            if (on > kResidualTol) continue;
            const Vec ideal =
                cert.speed_scale * (2.0 / h(j)) * ctx.apply_J(K.facets[j].normal);
            const double dev = (cert.loop.segments[k].velocity - ideal).cwiseAbs().maxCoeff();
            if (dev < best_cone) {
                best_cone = dev;
                best_on = on;
                best_facet = j;
            }
        }
        if (best_facet < 0) {
            incidence = std::numeric_limits<double>::infinity();
            cone = std::numeric_limits<double>::infinity();
        } else {
            incidence = std::max(incidence, best_on);
            cone = std::max(cone, best_cone);
            visits[best_facet] += 1;
        }
        min_duration = std::min(min_duration, cert.loop.segments[k].duration);
        total += cert.loop.segments[k].duration;
    }
    add("segment_on_facet", incidence, kResidualTol);
    const double cone_scale = std::max(1.0, std::abs(cert.speed_scale));
    add("cone_direction", cone, kResidualTol * cone_scale);
    add("single_visit", visits.empty() ? 0.0 : static_cast<double>(*std::max_element(
                                                   visits.begin(), visits.end())),
        1.0);
    add("positive_durations", min_duration > 0.0 ? 0.0 : 1.0, 0.5);
    add("total_duration", std::abs(total - 1.0), 1e-9);

    const double act = action(ctx, cert.loop);
    add("action_consistency", std::abs(act - cert.action), 1e-10);
    add("action_quadrature", std::abs(action_quadrature(ctx, cert.loop) - act), 1e-10);
    add("action_equals_capacity", std::abs(cert.action - capacity_value),
        1e-8 * std::max(1.0, std::abs(capacity_value)));

    rep.all_passed = true;
    for (const auto& c : rep.checks) rep.all_passed = rep.all_passed && c.passed;
    return rep;
}

Json orbit_to_json(const PiecewiseAffineLoop& loop, double action_value) {
    Json j;
    j["start"] = std::vector<double>(loop.start.data(), loop.start.data() + loop.start.size());
    Json segs = Json::array();
    for (const auto& seg : loop.segments) {
        Json js;
        js["velocity"] = std::vector<double>(seg.velocity.data(),
                                             seg.velocity.data() + seg.velocity.size());
        js["duration"] = seg.duration;
        segs.push_back(std::move(js));
    }
    j["segments"] = std::move(segs);
    j["action"] = action_value;
    return j;
}

}  // namespace ehz

#include "ehz/symplectic.hpp"

#include <random>

namespace ehz {

namespace fault_injection {

namespace {
double g_omega_scale = 1.0;
}

void set_omega_scale(double s) { g_omega_scale = s; }
double omega_scale() { return g_omega_scale; }

}  // namespace fault_injection

Vec SymplecticContext::apply_J(const Vec& u) const {
    if (u.size() != dim()) throw ValidationError("DimensionMismatch", "vector size != 2n");
    Vec r(dim());
    r.head(n) = -u.tail(n);
    r.tail(n) = u.head(n);
    return r;
}

double SymplecticContext::omega(const Vec& u, const Vec& v) const {
    if (u.size() != dim() || v.size() != dim())
        throw ValidationError("DimensionMismatch", "vector size != 2n");
    // <Ju, v> with J(x,y) = (-y,x): sum_k (x_k(u) y_k(v) - y_k(u) x_k(v))
    return fault_injection::omega_scale() * (u.head(n).dot(v.tail(n)) - u.tail(n).dot(v.head(n)));
}

Mat SymplecticContext::omega_gram(const Mat& rows) const {
    if (rows.cols() != dim()) throw ValidationError("DimensionMismatch", "row size != 2n");
    const auto X = rows.leftCols(n);
    const auto Y = rows.rightCols(n);
    return fault_injection::omega_scale() * (X * Y.transpose() - Y * X.transpose());
}

Mat SymplecticContext::J_matrix() const {
    Mat J = Mat::Zero(dim(), dim());
    J.topRightCorner(n, n) = -Mat::Identity(n, n);
    J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    return J;
}

Mat random_symplectic_matrix(int n, std::uint64_t seed, int factors) {
    const int d = 2 * n;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    std::uniform_real_distribution<double> shear(-0.5, 0.5);
    std::uniform_int_distribution<int> plane(0, n - 1);
    std::uniform_int_distribution<int> kind(0, n > 1 ? 2 : 1);

    Mat A = Mat::Identity(d, d);
    for (int s = 0; s < factors; ++s) {
        Mat Fm = Mat::Identity(d, d);
        const int k = kind(rng);
        if (k == 0) {
            // rotation in the (x_i, y_i) plane
            const int i = plane(rng);
            const double th = angle(rng);
            Fm(i, i) = std::cos(th);
            Fm(i, n + i) = -std::sin(th);
            Fm(n + i, i) = std::sin(th);
            Fm(n + i, n + i) = std::cos(th);
        } else if (k == 1) {
            // shear x_i += t y_i
            const int i = plane(rng);
            Fm(i, n + i) = shear(rng);
        } else {
            // cross shear x_i += t x_j, y_j -= t y_i (i != j)
            int i = plane(rng), j = plane(rng);
            while (j == i) j = plane(rng);
            const double t = shear(rng);
            Fm(i, j) = t;
            Fm(n + j, n + i) = -t;
        }
        A = Fm * A;
    }
    return A;
}

}  // namespace ehz

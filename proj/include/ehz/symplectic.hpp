#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "ehz/errors.hpp"

namespace ehz {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/**
 * Standard symplectic vector space R^{2n} with coordinates ordered
 * (x_1..x_n, y_1..y_n). The complex structure maps (x, y) to (-y, x)
 * and the symplectic form is omega(u, v) = <Ju, v>, so that
 * omega(e_1, e_{n+1}) = +1.
 */
struct SymplecticContext {
    int n = 0;

    explicit SymplecticContext(int half_dim) : n(half_dim) {
        if (n < 1) throw ValidationError("DimensionMismatch", "half-dimension must be >= 1");
    }

    int dim() const { return 2 * n; }

    /** J u = (-y, x) for u = (x, y). */
    Vec apply_J(const Vec& u) const;

    /** omega(u, v) = <Ju, v>. Antisymmetric, omega(u, u) = 0. */
    double omega(const Vec& u, const Vec& v) const;

    /** Pairwise form values: G(i, j) = omega(rows.row(i), rows.row(j)). */
    Mat omega_gram(const Mat& rows) const;

    Mat J_matrix() const;
};

/**
 * Random symplectic matrix built as a product of planar rotations and
 * symplectic shears. Entries stay small (each factor has entries bounded
 * by 1 and shear parameters are drawn from [-0.5, 0.5]); A^T J A = J holds
 * to machine precision. Deterministic in the seed.
 */
Mat random_symplectic_matrix(int n, std::uint64_t seed, int factors = 6);

namespace fault_injection {

/**
 * Test-sensitivity canary for the CLI self test: scales every omega
 * evaluation by the given factor. Normal operation is +1; the self test
 * flips it to -1 and asserts that the suite notices. Not thread-safe;
 * meant to be set once before computations start.
 */
void set_omega_scale(double s);
double omega_scale();

}  // namespace fault_injection

}  // namespace ehz

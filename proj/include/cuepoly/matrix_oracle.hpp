#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "cuepoly/report.hpp"
#include "cuepoly/rng.hpp"
#include "cuepoly/samplers.hpp"

namespace cuepoly
{

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

struct UnitaryMatrix
{
    ComplexMatrix entries;

    long n() const { return entries.rows(); }
    /// max |(V* V - I)_{ij}|
    double unitarity_error() const;
};

struct OrthogonalMatrix
{
    RealMatrix entries;
    /// Number of column swaps applied to land in SO (0 or 1).
    int column_swaps = 0;

    long n() const { return entries.rows(); }
    double orthogonality_error() const;
    double determinant() const;
};

inline constexpr long max_unitary_oracle_size = 64;
inline constexpr long max_so2n_oracle_half_size = 32;

/// Uniform vector on the complex unit sphere in C^n.
ComplexVector sample_complex_sphere(long n, RngStream& rng);

/// Haar unitary via QR of a complex Ginibre matrix with the phases of R's
/// diagonal folded back into Q. 1 <= n <= 64.
UnitaryMatrix sample_haar_unitary_qr(long n, RngStream& rng);

/// Haar unitary built by V_{m+1} = M diag(1, V_m), where M is an orthonormal
/// completion of a uniform first column. 1 <= n <= 64.
UnitaryMatrix sample_haar_unitary_recursive(long n, RngStream& rng);

/// Unitary matrix whose first column is exactly `first` (unit norm), by
/// modified Gram-Schmidt on {first, e_2, ..., e_n} with pivot fallback.
ComplexMatrix complete_to_unitary(ComplexVector const& first);

/// Haar draw from SO(2n), 1 <= n <= 32.
OrthogonalMatrix sample_haar_so2n(long n, RngStream& rng);

/// log det(I - x V) continued from x = 0, as a sum of principal logs of
/// 1 - x e^{i theta} over the eigenvalues of V. 0 <= x <= 1.
LogCharPoly log_charpoly_direct(UnitaryMatrix const& v, double x);

/// log det(I - SO) for an orthogonal matrix, as a real log-modulus; the
/// imaginary part is the (zero) sum of eigenvalue arguments.
LogCharPoly log_charpoly_direct(OrthogonalMatrix const& o);

/// det(I - x V) as a complex number through an LU factorization.
std::complex<double> charpoly_value(ComplexMatrix const& v, double x);

/// One draw of the right-hand side of the off-circle decomposition
/// (1 - x M11) det(I - x V') + x(1-x)/(1 - conj M11) M~* (V'* - x I)^{-1} M~ det(I - x V')
/// given V' = V_{n-1} and the uniform column M_1.
std::complex<double> offcircle_rhs(ComplexMatrix const& v_prev, ComplexVector const& m1, double x);

/// Right-hand side of the eigenangle form of the same identity, given the
/// eigenvalues of V_{n-1} and the uniform column M_1.
std::complex<double> eigenangle_rhs(ComplexVector const& eigenvalues_prev, ComplexVector const& m1,
                                    double x);

/// Reflection onto the median hyperplane of e_1 and m1 with first column m1.
ComplexMatrix median_reflection(ComplexVector const& m1);

struct IdentityOptions
{
    double alpha = 1e-3;
    double z_threshold = 5.0;
};

/// Monte Carlo comparison of both sides of the off-circle identity.
/// 2 <= n <= 8, 0 <= x <= 1. Reports first and second moments of the real
/// and imaginary parts, with two-sample KS on each part.
Report verify_offcircle_identity(long n, double x, std::size_t m_samples, RngStream& rng,
                                 IdentityOptions const& options = {});

/// Same comparison for the eigenangle identity. 2 <= n <= 6, 0 <= x < 1.
Report verify_eigenangle_identity(long n, double x, std::size_t m_samples, RngStream& rng,
                                  IdentityOptions const& options = {});

}  // namespace cuepoly

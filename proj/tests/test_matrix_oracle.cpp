#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "cuepoly/matrix_oracle.hpp"
#include "cuepoly/specfun.hpp"
#include "cuepoly/stats.hpp"

using namespace cuepoly;

TEST_CASE("Haar unitary draws are unitary")
{
    RngStream rng(3, 0);
    for (long n : {1L, 2L, 5L, 16L, 64L})
    {
        UnitaryMatrix const q = sample_haar_unitary_qr(n, rng);
        UnitaryMatrix const r = sample_haar_unitary_recursive(n, rng);
        CHECK(q.n() == n);
        CHECK(q.unitarity_error() < 1e-12);
        CHECK(r.unitarity_error() < 1e-12);
        CHECK(std::abs(std::abs(q.entries.determinant()) - 1.0) < 1e-10);
    }
    CHECK_THROWS_AS(sample_haar_unitary_qr(0, rng), std::domain_error);
    CHECK_THROWS_AS(sample_haar_unitary_qr(65, rng), std::domain_error);
    CHECK_THROWS_AS(sample_haar_unitary_recursive(65, rng), std::domain_error);
}

TEST_CASE("Haar unitary entries")
{
    // |V_11|^2 ~ beta(1, n-1), mean 1/n; the trace has E|tr V|^2 = 1.
    RngStream rng(3, 1);
    long const n = 4;
    std::vector<double> entry, trace2, entry_r;
    for (int i = 0; i < 20000; ++i)
    {
        UnitaryMatrix const q = sample_haar_unitary_qr(n, rng);
        UnitaryMatrix const r = sample_haar_unitary_recursive(n, rng);
        entry.push_back(std::norm(q.entries(0, 0)));
        entry_r.push_back(std::norm(r.entries(2, 1)));
        trace2.push_back(std::norm(q.entries.trace()));
    }
    CHECK(std::abs(z_score(estimate_mean(entry), 0.25)) < 5.0);
    CHECK(std::abs(z_score(estimate_mean(entry_r), 0.25)) < 5.0);
    CHECK(std::abs(z_score(estimate_mean(trace2), 1.0)) < 5.0);
}

TEST_CASE("Haar QR examples")
{
    RngStream rng(3, 8);
    std::vector<double> tr_re, tr_im, det4, det1;
    for (int i = 0; i < 100000; ++i)
    {
        std::complex<double> const tr = sample_haar_unitary_qr(2, rng).entries.trace();
        tr_re.push_back(tr.real());
        tr_im.push_back(tr.imag());
        det4.push_back(std::norm(charpoly_value(sample_haar_unitary_qr(4, rng).entries, 1.0)));
        det1.push_back(std::norm(charpoly_value(sample_haar_unitary_qr(1, rng).entries, 1.0)));
    }
    CHECK(std::abs(z_score(estimate_mean(tr_re), 0.0)) < 5.0);
    CHECK(std::abs(z_score(estimate_mean(tr_im), 0.0)) < 5.0);
    CHECK(std::abs(z_score(estimate_mean(det4), 5.0)) < 5.0);
    CHECK(std::abs(z_score(estimate_mean(det1), 2.0)) < 5.0);
    CHECK(*std::max_element(det1.begin(), det1.end()) <= 4.0 + 1e-12);
}

TEST_CASE("recursive and QR constructions agree, and rotation invariance")
{
    RngStream rng(3, 9);
    std::vector<double> qr_re, qr_im, rec_re, rec_im, rot_re;
    std::complex<double> const phase = std::polar(1.0, -0.7);
    for (int i = 0; i < 100000; ++i)
    {
        LogCharPoly const a = log_charpoly_direct(sample_haar_unitary_qr(3, rng), 1.0);
        LogCharPoly const b = log_charpoly_direct(sample_haar_unitary_recursive(3, rng), 1.0);
        UnitaryMatrix rotated = sample_haar_unitary_qr(3, rng);
        rotated.entries *= phase;
        qr_re.push_back(a.re_log);
        qr_im.push_back(a.im_log);
        rec_re.push_back(b.re_log);
        rec_im.push_back(b.im_log);
        rot_re.push_back(log_charpoly_direct(rotated, 1.0).re_log);
    }
    CHECK(ks_two_sample(qr_re, rec_re).p_value > 1e-3);
    CHECK(ks_two_sample(qr_im, rec_im).p_value > 1e-3);
    CHECK(ks_two_sample(qr_re, rot_re).p_value > 1e-3);
}

TEST_CASE("complex sphere and orthonormal completion")
{
    RngStream rng(3, 2);
    for (long n : {1L, 3L, 8L})
    {
        ComplexVector const m = sample_complex_sphere(n, rng);
        CHECK(std::abs(m.norm() - 1.0) < 1e-14);
        ComplexMatrix const c = complete_to_unitary(m);
        CHECK((c.col(0) - m).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((c.adjoint() * c - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    }
    ComplexVector e1 = ComplexVector::Zero(4);
    e1(0) = 1.0;
    ComplexMatrix const c = complete_to_unitary(e1);
    CHECK((c.adjoint() * c - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("median reflection")
{
    RngStream rng(3, 3);
    for (long n : {2L, 3L, 6L})
    {
        ComplexVector const m = sample_complex_sphere(n, rng);
        ComplexMatrix const r = median_reflection(m);
        CHECK((r.col(0) - m).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((r.adjoint() * r - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("characteristic polynomial")
{
    RngStream rng(3, 4);
    UnitaryMatrix const v = sample_haar_unitary_qr(6, rng);
    CHECK(std::abs(charpoly_value(v.entries, 0.0) - 1.0) < 1e-15);
    LogCharPoly const at0 = log_charpoly_direct(v, 0.0);
    CHECK(at0.re_log == 0.0);
    CHECK(at0.im_log == 0.0);
    for (double x : {0.3, 0.9, 1.0})
    {
        std::complex<double> const z = charpoly_value(v.entries, x);
        LogCharPoly const l = log_charpoly_direct(v, x);
        CHECK(l.re_log == doctest::Approx(std::log(std::abs(z))).epsilon(1e-10));
        CHECK(std::abs(std::polar(1.0, l.im_log) - z / std::abs(z)) < 1e-10);
        CHECK(std::abs(l.im_log) <= 6 * pi / 2);
    }
    // identity matrix: det(I - x I) = (1 - x)^n
    UnitaryMatrix id{ComplexMatrix::Identity(3, 3)};
    CHECK(std::abs(charpoly_value(id.entries, 0.5) - 0.125) < 1e-15);
    CHECK(log_charpoly_direct(id, 0.5).re_log == doctest::Approx(3 * std::log(0.5)));
    CHECK_THROWS_AS(log_charpoly_direct(v, 1.5), std::domain_error);
}

TEST_CASE("Haar SO(2n)")
{
    RngStream rng(3, 5);
    int swaps = 0;
    for (int i = 0; i < 200; ++i)
    {
        OrthogonalMatrix const o = sample_haar_so2n(2, rng);
        CHECK(o.orthogonality_error() < 1e-12);
        CHECK(o.determinant() == doctest::Approx(1.0).epsilon(1e-12));
        swaps += o.column_swaps;
        LogCharPoly const l = log_charpoly_direct(o);
        CHECK(l.im_log == 0.0);
        CHECK(l.group == Group::SpecialOrthogonalEven);
        double const direct = (RealMatrix::Identity(4, 4) - o.entries).determinant();
        CHECK(l.re_log == doctest::Approx(std::log(direct)).epsilon(1e-8));
    }
    // a swap is needed about half the time
    CHECK(swaps > 60);
    CHECK(swaps < 140);
    CHECK_THROWS_AS(sample_haar_so2n(33, rng), std::domain_error);
}

TEST_CASE("off-circle identity holds pointwise for the median reflection")
{
    RngStream rng(3, 6);
    for (long n : {2L, 3L, 5L})
        for (double x : {0.0, 0.25, 0.5, 0.9})
        {
            UnitaryMatrix const prev = sample_haar_unitary_qr(n - 1, rng);
            ComplexVector const m1 = sample_complex_sphere(n, rng);
            ComplexMatrix const m = median_reflection(m1);
            ComplexMatrix block = ComplexMatrix::Zero(n, n);
            block(0, 0) = 1.0;
            block.bottomRightCorner(n - 1, n - 1) = prev.entries;
            std::complex<double> const lhs = charpoly_value(m * block, x);
            std::complex<double> const rhs = offcircle_rhs(prev.entries, m1, x);
            CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
            if (x < 1.0)
            {
                // tail of M_1 in the eigenbasis of V'
                Eigen::ComplexEigenSolver<ComplexMatrix> es(prev.entries);
                ComplexVector rotated = m1;
                rotated.tail(n - 1) = es.eigenvectors().adjoint() * m1.tail(n - 1);
                std::complex<double> const eig = eigenangle_rhs(es.eigenvalues(), rotated, x);
                CHECK(std::abs(eig - lhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
            }
        }
}

TEST_CASE("Monte Carlo identity checks")
{
    RngStream rng(3, 7);
    CHECK(verify_offcircle_identity(3, 0.5, 20000, rng).all_passed());
    CHECK(verify_eigenangle_identity(3, 0.5, 20000, rng).all_passed());
    CHECK_THROWS_AS(verify_offcircle_identity(9, 0.5, 10, rng), std::domain_error);
    CHECK_THROWS_AS(verify_eigenangle_identity(3, 1.0, 10, rng), std::domain_error);
}

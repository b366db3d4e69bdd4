#include "cuepoly/matrix_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cuepoly/stats.hpp"

namespace cuepoly
{
namespace
{
using cd = std::complex<double>;

constexpr double pivot_floor = 1e-8;
constexpr double singular_floor = 1e-12;

void require_size(long n, long lo, long hi, char const* who)
{
    if (n < lo || n > hi)
        throw std::domain_error(std::string(who) + ": size " + std::to_string(n) + " outside ["
                                + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

void require_unit_interval(double x, char const* who)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error(std::string(who) + ": x must lie in [0, 1], got " + std::to_string(x));
}

ComplexMatrix complex_ginibre(long n, RngStream& rng)
{
    ComplexMatrix z(n, n);
    double const scale = std::sqrt(0.5);
    for (long c = 0; c < n; ++c)
        for (long r = 0; r < n; ++r)
        {
            double const re = rng.normal();
            double const im = rng.normal();
            z(r, c) = cd(scale * re, scale * im);
        }
    return z;
}

// Both sides of an identity in law, one complex value per draw.
struct IdentitySamples
{
    std::vector<double> lhs_re, lhs_im, rhs_re, rhs_im;

    void reserve(std::size_t m)
    {
        lhs_re.reserve(m);
        lhs_im.reserve(m);
        rhs_re.reserve(m);
        rhs_im.reserve(m);
    }
    void push(cd lhs, cd rhs)
    {
        lhs_re.push_back(lhs.real());
        lhs_im.push_back(lhs.imag());
        rhs_re.push_back(rhs.real());
        rhs_im.push_back(rhs.imag());
    }
};

std::vector<double> squares(std::vector<double> const& v)
{
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = v[i] * v[i];
    return out;
}

void compare_moments(Report& report, std::string const& suite, std::string const& part,
                     std::vector<double> const& lhs, std::vector<double> const& rhs,
                     IdentityOptions const& options)
{
    auto const first_l = estimate_mean(lhs);
    auto const first_r = estimate_mean(rhs);
    report.add(z_check(suite, "E[" + part + " LHS] - E[" + part + " RHS]", 0.0,
                       first_l.mean - first_r.mean, std::hypot(first_l.std_error, first_r.std_error),
                       lhs.size(), options.z_threshold));
    auto const second_l = estimate_mean(squares(lhs));
    auto const second_r = estimate_mean(squares(rhs));
    report.add(z_check(suite, "E[(" + part + " LHS)^2] - E[(" + part + " RHS)^2]", 0.0,
                       second_l.mean - second_r.mean,
                       std::hypot(second_l.std_error, second_r.std_error), lhs.size(),
                       options.z_threshold));
    auto const ks = ks_two_sample(lhs, rhs);
    report.add(ks_check(suite, "KS " + part + " LHS vs RHS", ks.statistic, ks.p_value, lhs.size(),
                        options.alpha));
}

Report summarize(std::string const& suite, IdentitySamples const& s, bool exact_expected,
                 IdentityOptions const& options)
{
    Report report;
    compare_moments(report, suite, "Re", s.lhs_re, s.rhs_re, options);
    compare_moments(report, suite, "Im", s.lhs_im, s.rhs_im, options);
    if (exact_expected)
    {
        bool equal = s.lhs_re == s.rhs_re && s.lhs_im == s.rhs_im;
        report.add(condition_check(suite, "both sides identically equal at x = 0", equal));
    }
    return report;
}
}  // namespace

double UnitaryMatrix::unitarity_error() const
{
    ComplexMatrix const gram = entries.adjoint() * entries;
    return (gram - ComplexMatrix::Identity(n(), n())).cwiseAbs().maxCoeff();
}

double OrthogonalMatrix::orthogonality_error() const
{
    RealMatrix const gram = entries.transpose() * entries;
    return (gram - RealMatrix::Identity(n(), n())).cwiseAbs().maxCoeff();
}

double OrthogonalMatrix::determinant() const
{
    return entries.determinant();
}

ComplexVector sample_complex_sphere(long n, RngStream& rng)
{
    if (n < 1)
        throw std::domain_error("sample_complex_sphere: n must be >= 1");
    ComplexVector v(n);
    for (;;)
    {
        for (long i = 0; i < n; ++i)
        {
            double const re = rng.normal();
            double const im = rng.normal();
            v(i) = cd(re, im);
        }
        double const norm = v.norm();
        if (norm > 0.0)
            return v / norm;
    }
}

UnitaryMatrix sample_haar_unitary_qr(long n, RngStream& rng)
{
    require_size(n, 1, max_unitary_oracle_size, "sample_haar_unitary_qr");
    for (;;)
    {
        ComplexMatrix const z = complex_ginibre(n, rng);
        Eigen::HouseholderQR<ComplexMatrix> qr(z);
        ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
        auto const& packed = qr.matrixQR();
        bool singular = false;
        for (long j = 0; j < n; ++j)
        {
            cd const r = packed(j, j);
            double const mag = std::abs(r);
            if (mag < singular_floor)
            {
                singular = true;
                break;
            }
            q.col(j) *= r / mag;
        }
        if (!singular)
            return {std::move(q)};
    }
}

ComplexMatrix complete_to_unitary(ComplexVector const& first)
{
    long const n = first.size();
    ComplexMatrix q = ComplexMatrix::Zero(n, n);
    q.col(0) = first;
    long filled = 1;

    auto try_candidate = [&](long index) {
        ComplexVector w = ComplexVector::Unit(n, index);
        // two modified Gram-Schmidt sweeps
        for (int sweep = 0; sweep < 2; ++sweep)
            for (long c = 0; c < filled; ++c)
                w -= q.col(c) * q.col(c).dot(w);
        double const norm = w.norm();
        if (norm < pivot_floor)
            return;
        q.col(filled++) = w / norm;
    };

    for (long index = 1; index < n && filled < n; ++index)
        try_candidate(index);
    if (filled < n)
        try_candidate(0);
    if (filled < n)
        throw std::runtime_error("complete_to_unitary: could not complete the basis");
    return q;
}

UnitaryMatrix sample_haar_unitary_recursive(long n, RngStream& rng)
{
    require_size(n, 1, max_unitary_oracle_size, "sample_haar_unitary_recursive");
    ComplexMatrix v = sample_complex_sphere(1, rng);
    for (long m = 1; m < n; ++m)
    {
        ComplexMatrix const reflect = complete_to_unitary(sample_complex_sphere(m + 1, rng));
        ComplexMatrix block = ComplexMatrix::Zero(m + 1, m + 1);
        block(0, 0) = 1.0;
        block.bottomRightCorner(m, m) = v;
        v = reflect * block;
    }
    return {std::move(v)};
}

OrthogonalMatrix sample_haar_so2n(long n, RngStream& rng)
{
    require_size(n, 1, max_so2n_oracle_half_size, "sample_haar_so2n");
    long const size = 2 * n;
    for (;;)
    {
        RealMatrix z(size, size);
        for (long c = 0; c < size; ++c)
            for (long r = 0; r < size; ++r)
                z(r, c) = rng.normal();
        Eigen::HouseholderQR<RealMatrix> qr(z);
        RealMatrix q = qr.householderQ() * RealMatrix::Identity(size, size);
        auto const& packed = qr.matrixQR();
        bool singular = false;
        for (long j = 0; j < size; ++j)
        {
            double const r = packed(j, j);
            if (std::abs(r) < singular_floor)
            {
                singular = true;
                break;
            }
            if (r < 0.0)
                q.col(j) = -q.col(j);
        }
        if (singular)
            continue;
        OrthogonalMatrix out{std::move(q), 0};
        if (out.determinant() < 0.0)
        {
            out.entries.col(0).swap(out.entries.col(1));
            out.column_swaps = 1;
        }
        return out;
    }
}

LogCharPoly log_charpoly_direct(UnitaryMatrix const& v, double x)
{
    require_unit_interval(x, "log_charpoly_direct");
    LogCharPoly out{0.0, 0.0, v.n(), Group::Unitary};
    if (x == 0.0)
        return out;

    Eigen::ComplexEigenSolver<ComplexMatrix> solver(v.entries, false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("log_charpoly_direct: eigendecomposition failed");
    for (long i = 0; i < v.n(); ++i)
    {
        cd lambda = solver.eigenvalues()(i);
        lambda /= std::abs(lambda);
        // Re(1 - x lambda) >= 0 on the unit circle for x in [0, 1]
        double const re = std::max(0.0, 1.0 - x * lambda.real());
        double const im = -x * lambda.imag();
        out.re_log += 0.5 * std::log(re * re + im * im);
        out.im_log += std::atan2(im, re);
    }
    return out;
}

LogCharPoly log_charpoly_direct(OrthogonalMatrix const& o)
{
    Eigen::EigenSolver<RealMatrix> solver(o.entries, false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("log_charpoly_direct: eigendecomposition failed");
    double re_log = 0.0;
    for (long i = 0; i < o.n(); ++i)
    {
        cd lambda = solver.eigenvalues()(i);
        lambda /= std::abs(lambda);
        re_log += std::log(std::abs(1.0 - lambda));
    }
    return {re_log, 0.0, o.n() / 2, Group::SpecialOrthogonalEven};
}

std::complex<double> charpoly_value(ComplexMatrix const& v, double x)
{
    ComplexMatrix const a = ComplexMatrix::Identity(v.rows(), v.cols()) - x * v;
    return a.partialPivLu().determinant();
}

std::complex<double> offcircle_rhs(ComplexMatrix const& v_prev, ComplexVector const& m1, double x)
{
    long const m = v_prev.rows();
    cd const m11 = m1(0);
    cd const det_prev = charpoly_value(v_prev, x);
    cd value = (1.0 - x * m11) * det_prev;
    if (x == 0.0 || x == 1.0)
        return value;

    ComplexVector const tail = m1.tail(m);
    ComplexMatrix const b = v_prev.adjoint() - x * ComplexMatrix::Identity(m, m);
    ComplexVector const y = b.partialPivLu().solve(tail);
    cd const quadratic = tail.dot(y);  // conj(tail)^T y
    value += x * (1.0 - x) / (1.0 - std::conj(m11)) * quadratic * det_prev;
    return value;
}

std::complex<double> eigenangle_rhs(ComplexVector const& eigenvalues_prev, ComplexVector const& m1,
                                    double x)
{
    long const m = eigenvalues_prev.size();
    cd const m11 = m1(0);
    cd product = 1.0;
    for (long j = 0; j < m; ++j)
        product *= 1.0 - x * eigenvalues_prev(j);
    cd value = (1.0 - x * m11) * product;
    if (x == 0.0 || x == 1.0)
        return value;

    cd sum = 0.0;
    for (long j = 0; j < m; ++j)
    {
        cd others = 1.0;
        for (long k = 0; k < m; ++k)
            if (k != j)
                others *= 1.0 - x * eigenvalues_prev(k);
        sum += eigenvalues_prev(j) * std::norm(m1(j + 1)) * others;
    }
    value += x * (1.0 - x) / (1.0 - std::conj(m11)) * sum;
    return value;
}

ComplexMatrix median_reflection(ComplexVector const& m1)
{
    long const n = m1.size();
    ComplexVector k = m1;
    k(0) -= 1.0;
    ComplexMatrix out(n, n);
    out.col(0) = m1;
    cd const denom = 1.0 - std::conj(m1(0));
    for (long j = 1; j < n; ++j)
        out.col(j) = ComplexVector::Unit(n, j) - std::conj(m1(j)) / denom * k;
    return out;
}

Report verify_offcircle_identity(long n, double x, std::size_t m_samples, RngStream& rng,
                                 IdentityOptions const& options)
{
    require_size(n, 2, 8, "verify_offcircle_identity");
    require_unit_interval(x, "verify_offcircle_identity");
    if (m_samples < 2)
        throw std::domain_error("verify_offcircle_identity: need at least two samples");

    IdentitySamples s;
    s.reserve(m_samples);
    while (s.lhs_re.size() < m_samples)
    {
        cd const lhs = charpoly_value(sample_haar_unitary_qr(n, rng).entries, x);
        UnitaryMatrix const v_prev = sample_haar_unitary_qr(n - 1, rng);
        ComplexVector const m1 = sample_complex_sphere(n, rng);
        cd const rhs = offcircle_rhs(v_prev.entries, m1, x);
        if (!std::isfinite(rhs.real()) || !std::isfinite(rhs.imag()))
            continue;  // singular solve, redraw
        s.push(lhs, rhs);
    }
    return summarize("offcircle", s, x == 0.0, options);
}

Report verify_eigenangle_identity(long n, double x, std::size_t m_samples, RngStream& rng,
                                  IdentityOptions const& options)
{
    require_size(n, 2, 6, "verify_eigenangle_identity");
    if (!(x >= 0.0 && x < 1.0))
        throw std::domain_error("verify_eigenangle_identity: x must lie in [0, 1)");
    if (m_samples < 2)
        throw std::domain_error("verify_eigenangle_identity: need at least two samples");

    IdentitySamples s;
    s.reserve(m_samples);
    Eigen::ComplexEigenSolver<ComplexMatrix> solver;
    while (s.lhs_re.size() < m_samples)
    {
        solver.compute(sample_haar_unitary_qr(n, rng).entries, false);
        ComplexVector const eig = solver.eigenvalues();
        cd lhs = 1.0;
        for (long j = 0; j < n; ++j)
            lhs *= 1.0 - x * eig(j);

        solver.compute(sample_haar_unitary_qr(n - 1, rng).entries, false);
        ComplexVector const eig_prev = solver.eigenvalues();
        ComplexVector const m1 = sample_complex_sphere(n, rng);
        s.push(lhs, eigenangle_rhs(eig_prev, m1, x));
    }
    return summarize("eigenrec", s, x == 0.0, options);
}

}  // namespace cuepoly

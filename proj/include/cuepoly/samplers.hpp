#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cuepoly/rng.hpp"

namespace cuepoly
{

enum class Group
{
    Unitary,
    SpecialOrthogonalEven,
};

std::string_view to_string(Group group);

/// Complex log of a characteristic polynomial value Z_N.
///
/// re_log = log|Z_N|; im_log = Im log Z_N on the branch obtained by summing
/// principal logs of factors whose real parts are nonnegative. For the
/// unitary group im_log lies in [-n pi/2, n pi/2]; for SO(2n) it is 0.
struct LogCharPoly
{
    double re_log = 0.0;
    double im_log = 0.0;
    long long n = 0;
    Group group = Group::Unitary;
};

/// One coupled realization of log Z_N read at increasing checkpoints.
struct Trajectory
{
    std::vector<long long> checkpoints;
    std::vector<LogCharPoly> values;
};

/// Sum over k = 1..n of Log(1 + e^{i theta_k} sqrt(beta_{1,k-1})).
LogCharPoly sample_unitary_log_charpoly(long long n, RngStream& rng);

/// (sum_j T_j, sum_j W_j) with T_j = log(beta_{j,j-1} 2 cos W_j).
LogCharPoly sample_joint(long long n, RngStream& rng);

/// log 2 + sum_{k=2}^{2n} log(1 + eps_k sqrt(beta_{1/2,(k-1)/2})).
LogCharPoly sample_so2n_log_charpoly(long long n, RngStream& rng);

/// Extend the unitary factor product sequentially in k, recording the
/// running log at each checkpoint. Checkpoints must be nonempty, >= 1 and
/// strictly increasing.
Trajectory sample_trajectory(std::span<long long const> checkpoints, RngStream& rng);

/// Number of degenerate (exactly zero) factors redrawn since process start.
std::uint64_t degenerate_factor_count();

}  // namespace cuepoly

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cuepoly/samplers.hpp"

namespace cuepoly
{

enum class SamplerKind
{
    Product,          // unitary product of independent factors
    Joint,            // unitary radial/angular sums
    ProductSO2N,      // SO(2n) product with random signs
    MatrixQR,         // Haar unitary by QR, direct determinant
    MatrixRecursive,  // Haar unitary by recursive reflections
    MatrixSO2N,       // Haar SO(2n) by QR
};

std::string_view to_string(SamplerKind kind);
/// Throws std::invalid_argument for unknown names.
SamplerKind sampler_from_string(std::string_view name);
Group group_of(SamplerKind kind);

/// One sample from the given sampler.
LogCharPoly draw(SamplerKind kind, long long n, RngStream& rng);

/// Contiguous range of draws produced by one substream.
struct StreamSlice
{
    std::uint64_t stream_id;
    std::size_t begin;
    std::size_t count;
};

struct SampleBatch
{
    Group group = Group::Unitary;
    long long n = 0;
    SamplerKind sampler = SamplerKind::Product;
    std::uint64_t seed = 0;
    std::vector<LogCharPoly> draws;
    std::vector<StreamSlice> slices;

    std::size_t size() const { return draws.size(); }
    std::vector<double> re_logs() const;
    std::vector<double> im_logs() const;
};

/// Split `samples` draws into `workers` contiguous substreams with ids
/// stream_base, stream_base + 1, ...; results are concatenated in stream
/// order so the output does not depend on thread scheduling.
SampleBatch generate_batch(SamplerKind kind, long long n, std::size_t samples, std::uint64_t seed,
                           int workers = 1, std::uint64_t stream_base = 0);

/// Coupled trajectories, stored per checkpoint.
struct TrajectoryBatch
{
    std::vector<long long> checkpoints;
    std::vector<std::vector<double>> re_log;  // [checkpoint][trajectory]
    std::vector<std::vector<double>> im_log;
    std::vector<StreamSlice> slices;

    std::size_t size() const { return re_log.empty() ? 0 : re_log.front().size(); }
};

TrajectoryBatch generate_trajectories(std::span<long long const> checkpoints, std::size_t count,
                                      std::uint64_t seed, int workers = 1,
                                      std::uint64_t stream_base = 0);

/// Sizes of the contiguous chunks used for `workers` substreams.
std::vector<std::size_t> partition_sizes(std::size_t samples, int workers);

}  // namespace cuepoly

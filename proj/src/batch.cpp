#include "cuepoly/batch.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>

#include "cuepoly/matrix_oracle.hpp"

namespace cuepoly
{

std::string_view to_string(SamplerKind kind)
{
    switch (kind)
    {
        case SamplerKind::Product:
            return "product";
        case SamplerKind::Joint:
            return "joint";
        case SamplerKind::ProductSO2N:
            return "so2n_product";
        case SamplerKind::MatrixQR:
            return "haar_qr";
        case SamplerKind::MatrixRecursive:
            return "haar_recursive";
        case SamplerKind::MatrixSO2N:
            return "haar_so2n";
    }
    return "unknown";
}

SamplerKind sampler_from_string(std::string_view name)
{
    for (auto kind : {SamplerKind::Product, SamplerKind::Joint, SamplerKind::ProductSO2N,
                      SamplerKind::MatrixQR, SamplerKind::MatrixRecursive, SamplerKind::MatrixSO2N})
    {
        if (to_string(kind) == name)
            return kind;
    }
    throw std::invalid_argument("unknown sampler: " + std::string(name));
}

Group group_of(SamplerKind kind)
{
    return (kind == SamplerKind::ProductSO2N || kind == SamplerKind::MatrixSO2N)
               ? Group::SpecialOrthogonalEven
               : Group::Unitary;
}

LogCharPoly draw(SamplerKind kind, long long n, RngStream& rng)
{
    switch (kind)
    {
        case SamplerKind::Product:
            return sample_unitary_log_charpoly(n, rng);
        case SamplerKind::Joint:
            return sample_joint(n, rng);
        case SamplerKind::ProductSO2N:
            return sample_so2n_log_charpoly(n, rng);
        case SamplerKind::MatrixQR:
            return log_charpoly_direct(sample_haar_unitary_qr(n, rng), 1.0);
        case SamplerKind::MatrixRecursive:
            return log_charpoly_direct(sample_haar_unitary_recursive(n, rng), 1.0);
        case SamplerKind::MatrixSO2N:
            return log_charpoly_direct(sample_haar_so2n(n, rng));
    }
    throw std::invalid_argument("draw: unknown sampler");
}

std::vector<double> SampleBatch::re_logs() const
{
    std::vector<double> out(draws.size());
    std::transform(draws.begin(), draws.end(), out.begin(), [](auto const& d) { return d.re_log; });
    return out;
}

std::vector<double> SampleBatch::im_logs() const
{
    std::vector<double> out(draws.size());
    std::transform(draws.begin(), draws.end(), out.begin(), [](auto const& d) { return d.im_log; });
    return out;
}

std::vector<std::size_t> partition_sizes(std::size_t samples, int workers)
{
    if (workers < 1)
        throw std::invalid_argument("workers must be >= 1");
    auto const w = static_cast<std::size_t>(workers);
    std::vector<std::size_t> sizes(w, samples / w);
    for (std::size_t i = 0; i < samples % w; ++i)
        ++sizes[i];
    return sizes;
}

namespace
{
// Runs body(worker, rng, begin, count) on one thread per nonempty chunk.
template<class Body>
std::vector<StreamSlice> run_partitioned(std::size_t samples, std::uint64_t seed, int workers,
                                         std::uint64_t stream_base, Body body)
{
    auto const sizes = partition_sizes(samples, workers);
    std::vector<StreamSlice> slices;
    std::size_t begin = 0;
    for (std::size_t w = 0; w < sizes.size(); ++w)
    {
        slices.push_back({stream_base + w, begin, sizes[w]});
        begin += sizes[w];
    }

    std::vector<std::exception_ptr> errors(slices.size());
    auto task = [&](std::size_t w) {
        try
        {
            RngStream rng(seed, slices[w].stream_id);
            body(rng, slices[w].begin, slices[w].count);
        }
        catch (...)
        {
            errors[w] = std::current_exception();
        }
    };
    if (slices.size() == 1)
    {
        task(0);
    }
    else
    {
        std::vector<std::jthread> threads;
        for (std::size_t w = 0; w < slices.size(); ++w)
            threads.emplace_back(task, w);
    }
    for (auto const& e : errors)
        if (e)
            std::rethrow_exception(e);
    return slices;
}
}  // namespace

SampleBatch generate_batch(SamplerKind kind, long long n, std::size_t samples, std::uint64_t seed,
                           int workers, std::uint64_t stream_base)
{
    SampleBatch batch;
    batch.group = group_of(kind);
    batch.n = n;
    batch.sampler = kind;
    batch.seed = seed;
    batch.draws.resize(samples);
    batch.slices = run_partitioned(samples, seed, workers, stream_base,
                                   [&](RngStream& rng, std::size_t begin, std::size_t count) {
                                       for (std::size_t i = 0; i < count; ++i)
                                           batch.draws[begin + i] = draw(kind, n, rng);
                                   });
    return batch;
}

TrajectoryBatch generate_trajectories(std::span<long long const> checkpoints, std::size_t count,
                                      std::uint64_t seed, int workers, std::uint64_t stream_base)
{
    TrajectoryBatch out;
    out.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    out.re_log.assign(checkpoints.size(), std::vector<double>(count));
    out.im_log.assign(checkpoints.size(), std::vector<double>(count));
    out.slices = run_partitioned(count, seed, workers, stream_base,
                                 [&](RngStream& rng, std::size_t begin, std::size_t n) {
                                     for (std::size_t i = 0; i < n; ++i)
                                     {
                                         auto const t = sample_trajectory(checkpoints, rng);
                                         for (std::size_t c = 0; c < t.values.size(); ++c)
                                         {
                                             out.re_log[c][begin + i] = t.values[c].re_log;
                                             out.im_log[c][begin + i] = t.values[c].im_log;
                                         }
                                     }
                                 });
    return out;
}

}  // namespace cuepoly

#include <doctest.h>

#include <numeric>
#include <stdexcept>
#include <vector>

#include "cuepoly/batch.hpp"

using namespace cuepoly;

TEST_CASE("partition sizes")
{
    auto const p = partition_sizes(10, 3);
    CHECK(p == std::vector<std::size_t>{4, 3, 3});
    CHECK(std::accumulate(p.begin(), p.end(), std::size_t{0}) == 10);
    CHECK(partition_sizes(2, 4).size() == 4);
    CHECK_THROWS(partition_sizes(10, 0));
}

TEST_CASE("batches are deterministic and independent of thread timing")
{
    for (SamplerKind kind : {SamplerKind::Product, SamplerKind::Joint, SamplerKind::ProductSO2N, SamplerKind::MatrixQR,
                             SamplerKind::MatrixRecursive, SamplerKind::MatrixSO2N})
    {
        SampleBatch const a = generate_batch(kind, 3, 500, 9, 3);
        SampleBatch const b = generate_batch(kind, 3, 500, 9, 3);
        REQUIRE(a.size() == 500);
        CHECK(a.group == group_of(kind));
        CHECK(a.slices.size() == 3);
        bool same = true;
        for (std::size_t i = 0; i < a.size(); ++i)
            same = same && a.draws[i].re_log == b.draws[i].re_log && a.draws[i].im_log == b.draws[i].im_log;
        CHECK(same);
        CHECK(sampler_from_string(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(sampler_from_string("nope"), std::invalid_argument);
}

TEST_CASE("slices follow stream order")
{
    SampleBatch const one = generate_batch(SamplerKind::Product, 4, 100, 5, 1, 7);
    SampleBatch const four = generate_batch(SamplerKind::Product, 4, 100, 5, 4, 7);
    CHECK(one.slices.front().stream_id == 7);
    std::size_t begin = 0;
    for (std::size_t i = 0; i < four.slices.size(); ++i)
    {
        CHECK(four.slices[i].stream_id == 7 + i);
        CHECK(four.slices[i].begin == begin);
        begin += four.slices[i].count;
    }
    CHECK(begin == 100);
    // the first substream is shared, so the opening draws agree
    CHECK(one.draws[0].re_log == four.draws[0].re_log);
    CHECK(one.re_logs().size() == 100);
    CHECK(four.im_logs().size() == 100);
}

TEST_CASE("trajectory batches")
{
    std::vector<long long> const at{10, 100, 1000};
    TrajectoryBatch const a = generate_trajectories(at, 300, 4, 2);
    TrajectoryBatch const b = generate_trajectories(at, 300, 4, 2);
    REQUIRE(a.size() == 300);
    CHECK(a.re_log.size() == 3);
    CHECK(a.re_log == b.re_log);
    CHECK(a.im_log == b.im_log);
}

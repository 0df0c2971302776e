#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "ramus/rng.hpp"

using ramus::Rng;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the identical stream") {
    Rng a(1234), b(1234);
    for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(1234), d(1234);
    for (int i = 0; i < 64; ++i) {
        CHECK(c.uniform() == d.uniform());
        CHECK(c.gaussian() == d.gaussian());
    }
}

TEST_CASE("different seeds diverge") {
    Rng a(1), b(2);
    int agree = 0;
    for (int i = 0; i < 32; ++i)
        if (a.next_u64() == b.next_u64()) ++agree;
    CHECK(agree == 0);
}

TEST_CASE("uniform lies in [0,1) and has the right mean") {
    Rng rng(7);
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // SE of the mean of U(0,1) over n draws is 1/sqrt(12 n).
    const double se = 1.0 / std::sqrt(12.0 * n);
    CHECK(std::abs(sum / n - 0.5) < 4.0 * se);
}

TEST_CASE("gaussian has standard-normal mean and variance") {
    Rng rng(11);
    const int n = 40000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        REQUIRE(std::isfinite(g));
        sum += g;
        sumsq += g * g;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
    // Var of the sample variance of N(0,1) is ~2/n.
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("uniform_below respects the bound and is unbiased across buckets") {
    Rng rng(5);
    const std::uint64_t bound = 8;
    const int n = 80000;
    std::vector<int> counts(bound, 0);
    for (int i = 0; i < n; ++i) {
        const std::uint64_t v = rng.uniform_below(bound);
        REQUIRE(v < bound);
        ++counts[static_cast<std::size_t>(v)];
    }
    const double p = 1.0 / double(bound);
    const double se = std::sqrt(p * (1 - p) / n);
    for (std::uint64_t k = 0; k < bound; ++k)
        CHECK(std::abs(counts[k] / double(n) - p) < 5.0 * se);
    CHECK(rng.uniform_below(1) == 0);
}

TEST_CASE("derive_stream is a pure function of parent seed and index") {
    const Rng parent(99);
    Rng c1 = parent.derive_stream(3);
    Rng c2 = parent.derive_stream(3);
    for (int i = 0; i < 16; ++i) CHECK(c1.next_u64() == c2.next_u64());
}

TEST_CASE("derived streams with distinct indices do not collide") {
    const Rng parent(42);
    std::set<std::uint64_t> firsts;
    for (std::uint64_t k = 0; k < 100; ++k) firsts.insert(parent.derive_stream(k).next_u64());
    CHECK(firsts.size() == 100);
    // ... and none coincides with the parent's own stream.
    Rng p(42);
    CHECK(firsts.count(p.next_u64()) == 0);
}

TEST_CASE("frozen bit stream: the generator never changes silently") {
    // Golden values captured once from this implementation; any change to the
    // seeding or output function breaks byte-level run reproducibility across
    // versions and must fail here.
    const std::uint64_t expected[4] = {
        0xd0764d4f4476689full,
        0x519e4174576f3791ull,
        0xfbe07cfb0c24ed8cull,
        0xb37d9f600cd835b8ull,
    };
    Rng rng(42);
    for (int i = 0; i < 4; ++i) CHECK(rng.next_u64() == expected[i]);

    Rng u(7);
    CHECK(u.uniform() == doctest::Approx(0.055360436478333108).epsilon(1e-15));
    CHECK(u.uniform() == doctest::Approx(0.17211585444811772).epsilon(1e-15));

    Rng g(7);
    CHECK(g.gaussian() == doctest::Approx(1.130864961772841).epsilon(1e-15));
    CHECK(g.gaussian() == doctest::Approx(2.1234228511806621).epsilon(1e-15));

    const Rng parent(42);
    CHECK(parent.derive_stream(3).next_u64() == 0xff6256fe19210a26ull);
}

} // TEST_SUITE

#include <doctest.h>

#include <cmath>
#include <vector>

#include "sublev/errors.hpp"
#include "sublev/rng.hpp"

using namespace sublev;

TEST_SUITE("rng") {

TEST_CASE("same derivation path yields an identical stream") {
    const StreamKey root(42);
    Rng a(root.derive("phase1", 7));
    Rng b(root.derive("phase1", 7));
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different index diverges immediately") {
    const StreamKey root(42);
    Rng a(root.derive("phase1", 0));
    Rng b(root.derive("phase1", 1));
    int differing = 0;
    for (int i = 0; i < 1000; ++i) {
        if (a.next_u64() != b.next_u64()) ++differing;
    }
    CHECK(differing == 1000);
}

TEST_CASE("different label diverges") {
    const StreamKey root(42);
    Rng a(root.derive("phase1", 0));
    Rng b(root.derive("phase2", 0));
    CHECK(a.next_u64() != b.next_u64());
}

TEST_CASE("uniform stays in [0, 1)") {
    Rng rng(StreamKey(7).derive("u", 0));
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("chi-square uniformity of 1e5 draws into 100 bins") {
    // Band frozen at the 0.001-0.999 quantiles of chi-square(99).
    Rng rng(StreamKey(2024).derive("uniformity", 0));
    std::vector<int> bins(100, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        ++bins[static_cast<std::size_t>(rng.uniform() * 100.0)];
    }
    const double expected = n / 100.0;
    double stat = 0.0;
    for (int c : bins) {
        const double d = c - expected;
        stat += d * d / expected;
    }
    CHECK(stat >= 57.0);
    CHECK(stat <= 149.0);
}

TEST_CASE("derived streams are uncorrelated") {
    const StreamKey root(99);
    Rng a(root.derive("stream", 0));
    Rng b(root.derive("stream", 1));
    const int n = 100000;
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (int i = 0; i < n; ++i) {
        const double x = a.uniform();
        const double y = b.uniform();
        sa += x;
        sb += y;
        saa += x * x;
        sbb += y * y;
        sab += x * y;
    }
    const double cov = sab / n - (sa / n) * (sb / n);
    const double va = saa / n - (sa / n) * (sa / n);
    const double vb = sbb / n - (sb / n) * (sb / n);
    const double corr = cov / std::sqrt(va * vb);
    CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("normal moments") {
    Rng rng(StreamKey(1).derive("norm", 0));
    const int n = 100000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sumsq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.02);
    CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("chisquare(2) mean") {
    Rng rng(StreamKey(1).derive("chi", 0));
    const int n = 100000;
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += rng.chisquare(2);
    CHECK(std::abs(sum / n - 2.0) < 0.05);
}

TEST_CASE("chisquare rejects df <= 0") {
    Rng rng(StreamKey(1).derive("chi", 1));
    CHECK_THROWS_AS(rng.chisquare(0), InvalidParamError);
    CHECK_THROWS_AS(rng.chisquare(-3), InvalidParamError);
}

} // TEST_SUITE

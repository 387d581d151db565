#include <doctest.h>

#include <cmath>
#include <random>

#include "irav/transform.hpp"
#include "support.hpp"

using namespace irav;

namespace {

ResidualBlock random_residual(int n, std::mt19937& rng) {
    ResidualBlock r(n);
    for (auto& v : r.values)
        v = static_cast<int>(rng() % 511U) - 255;
    return r;
}

}  // namespace

TEST_CASE("dct of a constant block") {
    for (int n : {4, 8, 16, 32}) {
        ResidualBlock r(n);
        for (auto& v : r.values)
            v = 7;
        const CoeffBlock c = forward_dct(r);
        CHECK(c.at(0, 0) == doctest::Approx(7.0 * n));
        double ac = 0.0;
        for (std::size_t i = 1; i < c.values.size(); ++i)
            ac = std::max(ac, std::fabs(c.values[i]));
        CHECK(ac < 1e-9);
    }
}

TEST_CASE("dct round trip and parseval") {
    std::mt19937 rng(10);
    for (int i = 0; i < 1000; ++i) {
        const int n = 4 << (i % 4);
        const ResidualBlock r = random_residual(n, rng);
        const CoeffBlock c = forward_dct(r);
        const RealBlock back = inverse_dct(c);
        for (std::size_t k = 0; k < r.values.size(); ++k)
            REQUIRE(std::fabs(back.values[k] - r.values[k]) <= 1e-9);
        CHECK(round_residual(back) == r);
        CHECK(energy(c) == doctest::Approx(energy(r)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(forward_dct(ResidualBlock(6)), UsageError);
    CHECK_FALSE(valid_transform_size(64));
}

TEST_CASE("zeroing inactive residual") {
    std::mt19937 rng(11);
    const ResidualBlock r = random_residual(8, rng);
    const std::vector<std::uint8_t> ones(64, 1), zeros(64, 0);
    CHECK(zero_inactive_residual(r, {ones.data(), 8, 8, 8}) == r);
    const ResidualBlock z = zero_inactive_residual(r, {zeros.data(), 8, 8, 8});
    for (int v : z.values)
        CHECK(v == 0);
    std::vector<std::uint8_t> half(64, 1);
    for (int y = 0; y < 8; ++y)
        for (int x = 4; x < 8; ++x)
            half[static_cast<std::size_t>(y * 8 + x)] = 0;
    const ResidualBlock h = zero_inactive_residual(r, {half.data(), 8, 8, 8});
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
            CHECK(h.at(x, y) == (x < 4 ? r.at(x, y) : 0));
    CHECK(energy(forward_dct(h)) <= energy(forward_dct(r)));
    CHECK_THROWS_AS(zero_inactive_residual(r, {ones.data(), 4, 4, 4}), UsageError);

    for (int i = 0; i < 2000; ++i) {
        const int n = 4 << (i % 4);
        const ResidualBlock a = random_residual(n, rng);
        const auto m = test::random_block_mask(n, rng);
        CHECK(energy(forward_dct(zero_inactive_residual(a, {m.data(), n, n, n}))) <=
              energy(forward_dct(a)) * (1.0 + 1e-12));
    }
}

TEST_CASE("quantizer") {
    CHECK(quant_step(4) == doctest::Approx(1.0));
    CHECK(quant_step(10) == doctest::Approx(2.0));
    CHECK(quant_step(22) == doctest::Approx(8.0));
    CoeffBlock c(4);
    c.at(0, 0) = 100.0;
    c.at(1, 0) = -100.0;
    c.at(2, 0) = 0.6;  // below the dead zone at step 1 for inter
    const LevelBlock li = quantize(c, 4, true);
    const LevelBlock lp = quantize(c, 4, false);
    CHECK(li.at(0, 0) == 100);
    CHECK(li.at(1, 0) == -100);
    CHECK(li.at(2, 0) == 0);  // 0.6 + 1/3 < 1
    CHECK(lp.at(2, 0) == 0);
    c.at(2, 0) = 0.7;
    CHECK(quantize(c, 4, true).at(2, 0) == 1);
    CHECK(quantize(c, 4, false).at(2, 0) == 0);
    const CoeffBlock d = dequantize(li, 4);
    CHECK(d.at(0, 0) == doctest::Approx(100.0));
    c.at(0, 0) = 1e9;
    CHECK(quantize(c, 0, true).at(0, 0) == 32767);
    CHECK_THROWS_AS(quantize(c, 52, true), UsageError);
}

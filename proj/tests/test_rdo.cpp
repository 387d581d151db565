#include <doctest.h>

#include <cmath>
#include <random>

#include "irav/kernels.hpp"
#include "irav/rdo.hpp"
#include "support.hpp"

using namespace irav;

namespace {

PixelView view2(const std::uint8_t* d) { return {d, 2, 2, 2}; }

}  // namespace

TEST_CASE("closed-form distortions") {
    const std::uint8_t a[] = {1, 2, 3, 4}, b[] = {1, 0, 3, 0};
    const std::uint8_t all[] = {1, 1, 1, 1}, right_inactive[] = {1, 0, 1, 0};
    CHECK(ssd(view2(a), view2(b)) == 20);
    CHECK(sad(view2(a), view2(b)) == 6);
    CHECK(masked_ssd(view2(a), view2(b), view2(right_inactive)) == 0);
    CHECK(masked_sad(view2(a), view2(b), view2(right_inactive)) == 0);
    CHECK(masked_ssd(view2(a), view2(b), view2(all)) == 20);
    CHECK(ssd(view2(a), view2(a)) == 0);
}

TEST_CASE("satd of a single impulse") {
    PixelBlock a(4, 100), b(4, 100);
    b.at(2, 1) = 93;
    CHECK(satd(a.view(), b.view()) == doctest::Approx(4.0 * 7));
    CHECK(satd(a.view(), a.view()) == 0.0);
    const std::vector<std::uint8_t> none(16, 0);
    CHECK(masked_satd(a.view(), b.view(), {none.data(), 4, 4, 4}) == 0.0);
    PixelBlock c(6);
    CHECK_THROWS_AS(satd(c.view(), c.view()), UsageError);
    CHECK_THROWS_AS(ssd(a.view(), c.view()), UsageError);
}

TEST_CASE("masked metrics: degeneracy, monotonicity and symmetry") {
    std::mt19937 rng(13);
    for (int i = 0; i < 1000; ++i) {
        const int n = 4 << (i % 4);
        const PixelBlock a = test::random_block(n, rng);
        const PixelBlock b = test::noisy_copy(a, 20, rng);
        const std::vector<std::uint8_t> ones(static_cast<std::size_t>(n) * n, 1);
        const MaskView all{ones.data(), n, n, n};
        CHECK(masked_sad(a.view(), b.view(), all) == sad(a.view(), b.view()));
        CHECK(masked_ssd(a.view(), b.view(), all) == ssd(a.view(), b.view()));
        CHECK(masked_satd(a.view(), b.view(), all) == satd(a.view(), b.view()));
        CHECK(sad(a.view(), b.view()) == sad(b.view(), a.view()));
        CHECK(satd(a.view(), b.view()) == satd(b.view(), a.view()));

        // I1 subset of I2: removing active positions can only lower the sum.
        auto m1 = test::random_block_mask(n, rng);
        auto m2 = m1;
        for (auto& v : m2)
            if (rng() % 3U == 0)
                v = 0;
        const MaskView v1{m1.data(), n, n, n}, v2{m2.data(), n, n, n};
        CHECK(masked_ssd(a.view(), b.view(), v2) <= masked_ssd(a.view(), b.view(), v1));
        CHECK(masked_sad(a.view(), b.view(), v2) <= masked_sad(a.view(), b.view(), v1));
        CHECK(masked_ssd(a.view(), b.view(), v1) <= ssd(a.view(), b.view()));
    }
}

TEST_CASE("distortion dispatch") {
    std::mt19937 rng(14);
    const PixelBlock a = test::random_block(8, rng), b = test::random_block(8, rng);
    const auto m = test::random_block_mask(8, rng);
    const MaskView mv{m.data(), 8, 8, 8};
    CHECK(distortion({Metric::SSD, false}, a.view(), b.view(), mv) == double(ssd(a.view(), b.view())));
    CHECK(distortion({Metric::SAD, true}, a.view(), b.view(), mv) == double(masked_sad(a.view(), b.view(), mv)));
    CHECK(distortion({Metric::SATD, true}, a.view(), b.view(), mv) == masked_satd(a.view(), b.view(), mv));
}

TEST_CASE("rd cost and lambdas") {
    CHECK(rd_cost(0, 0, 1.0) == 0.0);
    CHECK(rd_cost(100, 10, 2.5) == 125.0);
    CHECK_THROWS_AS(rd_cost(-1, 0, 1.0), UsageError);
    CHECK_THROWS_AS(rd_cost(1, 0, 0.0), UsageError);
    const Lambdas l = lambdas_for_qp(12);
    CHECK(l.ssd == doctest::Approx(0.85));
    CHECK(l.sad == doctest::Approx(std::sqrt(0.85)));
    CHECK(lambdas_for_qp(15).ssd == doctest::Approx(1.7));
}

TEST_CASE("choose_mode") {
    const std::vector<RdCandidate> one{{50, 3}};
    CHECK(choose_mode(one, 1.0).index == 0);
    CHECK_THROWS_AS(choose_mode(std::vector<RdCandidate>{}, 1.0), UsageError);
    const std::vector<RdCandidate> c{{40, 10}, {0, 0}, {10, 2}};
    const RdDecision d = choose_mode(c, 2.0);
    CHECK(d.index == 1);
    CHECK(d.cost == 0.0);
    // ties go to the earliest candidate
    const std::vector<RdCandidate> tie{{10, 2}, {12, 1}, {20, 1}};
    CHECK(choose_mode(tie, 2.0).index == 0);
    CHECK(choose_mode(tie, 7.0).index == 1);
    // scale invariance and dominated-candidate invariance
    std::vector<RdCandidate> scaled;
    for (const auto& x : c)
        scaled.push_back({x.distortion * 3, x.rate_bits * 3});
    CHECK(choose_mode(scaled, 2.0).index == d.index);
    std::vector<RdCandidate> more = c;
    more.push_back({1000, 1000});
    CHECK(choose_mode(more, 2.0).index == d.index);
}

TEST_CASE("masked rdo prefers the candidate exact on active samples") {
    // Right half inactive; cand A is perfect on the left only, cand B is off by 3 everywhere.
    PixelBlock orig(8, 100), a(8, 100), b(8, 103);
    for (int y = 0; y < 8; ++y)
        for (int x = 4; x < 8; ++x)
            a.at(x, y) = 160;
    std::vector<std::uint8_t> m(64, 1);
    for (int y = 0; y < 8; ++y)
        for (int x = 4; x < 8; ++x)
            m[static_cast<std::size_t>(y * 8 + x)] = 0;
    const MaskView mv{m.data(), 8, 8, 8};
    const double lam = lambdas_for_qp(32).ssd;
    const std::vector<RdCandidate> masked{{double(masked_ssd(orig.view(), a.view(), mv)), 12},
                                          {double(masked_ssd(orig.view(), b.view(), mv)), 10}};
    const std::vector<RdCandidate> plain{{double(ssd(orig.view(), a.view())), 12}, {double(ssd(orig.view(), b.view())), 10}};
    CHECK(masked[0].distortion == 0.0);
    CHECK(choose_mode(masked, lam).index == 0);
    CHECK(choose_mode(plain, lam).index == 1);
}

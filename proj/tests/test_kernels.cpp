#include <doctest.h>

#include <random>

#include "irav/kernels.hpp"
#include "support.hpp"

using namespace irav;

TEST_CASE("simd kernels match the scalar reference") {
    const kernels::DistortionKernels* simd = kernels::avx2();
    if (simd == nullptr) {
        MESSAGE("AVX2 not available; equivalence test skipped");
        return;
    }
    const auto& ref = kernels::scalar();
    std::mt19937 rng(15);
    // Cover odd widths and strided views, not only the codec's square blocks.
    const int widths[] = {1, 3, 4, 7, 8, 12, 15, 16, 20, 31, 32, 33, 48, 64};
    for (int it = 0; it < 3000; ++it) {
        const int w = widths[rng() % std::size(widths)];
        const int h = 1 + static_cast<int>(rng() % 33U);
        const int stride = w + static_cast<int>(rng() % 5U);
        std::vector<std::uint8_t> a(static_cast<std::size_t>(stride) * h), b(a.size()), m(a.size());
        const bool close = rng() % 2U;
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = static_cast<std::uint8_t>(rng());
            b[i] = close ? static_cast<std::uint8_t>(std::clamp(int(a[i]) + int(rng() % 7U) - 3, 0, 255))
                         : static_cast<std::uint8_t>(rng());
            m[i] = static_cast<std::uint8_t>(rng() % 3U == 0 ? 0 : 1);
        }
        const PixelView va{a.data(), w, h, stride}, vb{b.data(), w, h, stride};
        const MaskView vm{m.data(), w, h, stride};
        REQUIRE(simd->sad(va, vb) == ref.sad(va, vb));
        REQUIRE(simd->ssd(va, vb) == ref.ssd(va, vb));
        REQUIRE(simd->masked_sad(va, vb, vm) == ref.masked_sad(va, vb, vm));
        REQUIRE(simd->masked_ssd(va, vb, vm) == ref.masked_ssd(va, vb, vm));
        if (w % 4 == 0 && h % 4 == 0) {
            REQUIRE(simd->hadamard_abs(va, vb) == ref.hadamard_abs(va, vb));
            REQUIRE(simd->masked_hadamard_abs(va, vb, vm) == ref.masked_hadamard_abs(va, vb, vm));
        }
    }
    // Extremes: maximum differences everywhere.
    std::vector<std::uint8_t> z(32 * 32, 0), f(32 * 32, 255), ones(32 * 32, 1);
    const PixelView vz{z.data(), 32, 32, 32}, vf{f.data(), 32, 32, 32};
    const MaskView vo{ones.data(), 32, 32, 32};
    CHECK(simd->ssd(vz, vf) == ref.ssd(vz, vf));
    CHECK(simd->hadamard_abs(vz, vf) == ref.hadamard_abs(vz, vf));
    CHECK(simd->masked_hadamard_abs(vz, vf, vo) == ref.masked_hadamard_abs(vz, vf, vo));
}

TEST_CASE("kernel selection") {
    const auto before = kernels::active_isa();
    kernels::select(kernels::Isa::Scalar);
    CHECK(kernels::active_isa() == kernels::Isa::Scalar);
    CHECK(&kernels::active() == &kernels::scalar());
    if (kernels::avx2_supported()) {
        kernels::select(kernels::Isa::Avx2);
        CHECK(kernels::active_isa() == kernels::Isa::Avx2);
    } else {
        CHECK_THROWS_AS(kernels::select(kernels::Isa::Avx2), UsageError);
    }
    kernels::select(before);
    CHECK(kernels::to_string(kernels::Isa::Avx2) == "avx2");
}

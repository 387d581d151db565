#include <array>
#include <cstdlib>

#include "irav/kernels.hpp"

namespace irav::kernels {

namespace {

std::uint64_t sad_c(PixelView a, PixelView b) {
    std::uint64_t sum = 0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x)
            sum += static_cast<std::uint64_t>(std::abs(int(a(x, y)) - int(b(x, y))));
    return sum;
}

std::uint64_t ssd_c(PixelView a, PixelView b) {
    std::uint64_t sum = 0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x) {
            const int d = int(a(x, y)) - int(b(x, y));
            sum += static_cast<std::uint64_t>(d * d);
        }
    return sum;
}

std::uint64_t masked_sad_c(PixelView a, PixelView b, MaskView m) {
    std::uint64_t sum = 0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x)
            if (m(x, y))
                sum += static_cast<std::uint64_t>(std::abs(int(a(x, y)) - int(b(x, y))));
    return sum;
}

std::uint64_t masked_ssd_c(PixelView a, PixelView b, MaskView m) {
    std::uint64_t sum = 0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x)
            if (m(x, y)) {
                const int d = int(a(x, y)) - int(b(x, y));
                sum += static_cast<std::uint64_t>(d * d);
            }
    return sum;
}

std::uint64_t hadamard4(const std::array<int, 16>& d) {
    std::array<int, 16> t{};
    for (int i = 0; i < 4; ++i) {
        const int s0 = d[i * 4 + 0] + d[i * 4 + 1], s1 = d[i * 4 + 0] - d[i * 4 + 1];
        const int s2 = d[i * 4 + 2] + d[i * 4 + 3], s3 = d[i * 4 + 2] - d[i * 4 + 3];
        t[i * 4 + 0] = s0 + s2;
        t[i * 4 + 1] = s1 + s3;
        t[i * 4 + 2] = s0 - s2;
        t[i * 4 + 3] = s1 - s3;
    }
    std::uint64_t sum = 0;
    for (int j = 0; j < 4; ++j) {
        const int s0 = t[0 + j] + t[4 + j], s1 = t[0 + j] - t[4 + j];
        const int s2 = t[8 + j] + t[12 + j], s3 = t[8 + j] - t[12 + j];
        sum += static_cast<std::uint64_t>(std::abs(s0 + s2) + std::abs(s1 + s3) + std::abs(s0 - s2) +
                                          std::abs(s1 - s3));
    }
    return sum;
}

template <bool Masked>
std::uint64_t hadamard_tiles(PixelView a, PixelView b, MaskView m) {
    std::uint64_t sum = 0;
    std::array<int, 16> d{};
    for (int ty = 0; ty + 4 <= a.height; ty += 4)
        for (int tx = 0; tx + 4 <= a.width; tx += 4) {
            for (int y = 0; y < 4; ++y)
                for (int x = 0; x < 4; ++x) {
                    int v = int(a(tx + x, ty + y)) - int(b(tx + x, ty + y));
                    if constexpr (Masked)
                        v = m(tx + x, ty + y) ? v : 0;
                    d[static_cast<std::size_t>(y * 4 + x)] = v;
                }
            sum += hadamard4(d);
        }
    return sum;
}

std::uint64_t hadamard_abs_c(PixelView a, PixelView b) { return hadamard_tiles<false>(a, b, {}); }
std::uint64_t masked_hadamard_abs_c(PixelView a, PixelView b, MaskView m) { return hadamard_tiles<true>(a, b, m); }

}  // namespace

const DistortionKernels& scalar() {
    static const DistortionKernels table{sad_c, ssd_c, masked_sad_c, masked_ssd_c, hadamard_abs_c,
                                         masked_hadamard_abs_c};
    return table;
}

}  // namespace irav::kernels

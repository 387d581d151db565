#include <immintrin.h>

#include <cstdlib>

#include "irav/kernels.hpp"

namespace irav::kernels {

namespace {

inline std::uint64_t hsum_epi64(__m256i v) {
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
    return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

inline __m256i widen_epi32_to_epi64(__m256i v) {
    return _mm256_add_epi64(_mm256_cvtepi32_epi64(_mm256_castsi256_si128(v)),
                            _mm256_cvtepi32_epi64(_mm256_extracti128_si256(v, 1)));
}

// Replace b by a wherever the mask is 0 so those positions produce no difference.
inline __m256i select_active256(__m256i a, __m256i b, const std::uint8_t* m) {
    const __m256i mv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(m));
    const __m256i on = _mm256_cmpgt_epi8(mv, _mm256_setzero_si256());
    return _mm256_blendv_epi8(a, b, on);
}

inline __m128i select_active128(__m128i a, __m128i b, __m128i mv) {
    const __m128i on = _mm_cmpgt_epi8(mv, _mm_setzero_si128());
    return _mm_blendv_epi8(a, b, on);
}

template <bool Masked>
std::uint64_t sad_avx2(PixelView a, PixelView b, MaskView m) {
    __m256i acc = _mm256_setzero_si256();
    std::uint64_t tail = 0;
    for (int y = 0; y < a.height; ++y) {
        const std::uint8_t* pa = a.row(y);
        const std::uint8_t* pb = b.row(y);
        const std::uint8_t* pm = Masked ? m.row(y) : nullptr;
        int x = 0;
        for (; x + 32 <= a.width; x += 32) {
            const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(pa + x));
            __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(pb + x));
            if constexpr (Masked)
                vb = select_active256(va, vb, pm + x);
            acc = _mm256_add_epi64(acc, _mm256_sad_epu8(va, vb));
        }
        for (; x + 16 <= a.width; x += 16) {
            const __m128i va = _mm_loadu_si128(reinterpret_cast<const __m128i*>(pa + x));
            __m128i vb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(pb + x));
            if constexpr (Masked)
                vb = select_active128(va, vb, _mm_loadu_si128(reinterpret_cast<const __m128i*>(pm + x)));
            acc = _mm256_add_epi64(acc, _mm256_zextsi128_si256(_mm_sad_epu8(va, vb)));
        }
        for (; x + 8 <= a.width; x += 8) {
            const __m128i va = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(pa + x));
            __m128i vb = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(pb + x));
            if constexpr (Masked)
                vb = select_active128(va, vb, _mm_loadl_epi64(reinterpret_cast<const __m128i*>(pm + x)));
            acc = _mm256_add_epi64(acc, _mm256_zextsi128_si256(_mm_sad_epu8(va, vb)));
        }
        for (; x < a.width; ++x)
            if (!Masked || pm[x])
                tail += static_cast<std::uint64_t>(std::abs(int(pa[x]) - int(pb[x])));
    }
    return hsum_epi64(acc) + tail;
}

template <bool Masked>
std::uint64_t ssd_avx2(PixelView a, PixelView b, MaskView m) {
    __m256i acc = _mm256_setzero_si256();
    std::uint64_t tail = 0;
    for (int y = 0; y < a.height; ++y) {
        const std::uint8_t* pa = a.row(y);
        const std::uint8_t* pb = b.row(y);
        const std::uint8_t* pm = Masked ? m.row(y) : nullptr;
        __m256i row = _mm256_setzero_si256();
        int x = 0;
        for (; x + 16 <= a.width; x += 16) {
            const __m128i va = _mm_loadu_si128(reinterpret_cast<const __m128i*>(pa + x));
            __m128i vb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(pb + x));
            if constexpr (Masked)
                vb = select_active128(va, vb, _mm_loadu_si128(reinterpret_cast<const __m128i*>(pm + x)));
            const __m256i d = _mm256_sub_epi16(_mm256_cvtepu8_epi16(va), _mm256_cvtepu8_epi16(vb));
            row = _mm256_add_epi32(row, _mm256_madd_epi16(d, d));
        }
        for (; x + 8 <= a.width; x += 8) {
            const __m128i va = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(pa + x));
            __m128i vb = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(pb + x));
            if constexpr (Masked)
                vb = select_active128(va, vb, _mm_loadl_epi64(reinterpret_cast<const __m128i*>(pm + x)));
            const __m128i d = _mm_sub_epi16(_mm_cvtepu8_epi16(va), _mm_cvtepu8_epi16(vb));
            row = _mm256_add_epi32(row, _mm256_zextsi128_si256(_mm_madd_epi16(d, d)));
        }
        // Per-row partial sums stay far below 2^31 for any practical width.
        acc = _mm256_add_epi64(acc, widen_epi32_to_epi64(row));
        for (; x < a.width; ++x)
            if (!Masked || pm[x]) {
                const int d = int(pa[x]) - int(pb[x]);
                tail += static_cast<std::uint64_t>(d * d);
            }
    }
    return hsum_epi64(acc) + tail;
}

// 4-point Hadamard along each group of four 16-bit lanes.
inline __m256i hadamard_rows(__m256i t) {
    const __m256i alt1 = _mm256_setr_epi16(1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1);
    const __m256i alt2 = _mm256_setr_epi16(1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1);
    __m256i sw = _mm256_shufflehi_epi16(_mm256_shufflelo_epi16(t, _MM_SHUFFLE(2, 3, 0, 1)), _MM_SHUFFLE(2, 3, 0, 1));
    const __m256i y = _mm256_add_epi16(sw, _mm256_sign_epi16(t, alt1));
    sw = _mm256_shufflehi_epi16(_mm256_shufflelo_epi16(y, _MM_SHUFFLE(1, 0, 3, 2)), _MM_SHUFFLE(1, 0, 3, 2));
    return _mm256_add_epi16(sw, _mm256_sign_epi16(y, alt2));
}

std::uint64_t scalar_tile(PixelView a, PixelView b, MaskView m, bool masked, int tx, int ty) {
    const PixelView sa = a.sub(tx, ty, 4, 4), sb = b.sub(tx, ty, 4, 4);
    if (masked)
        return scalar().masked_hadamard_abs(sa, sb, m.sub(tx, ty, 4, 4));
    return scalar().hadamard_abs(sa, sb);
}

template <bool Masked>
std::uint64_t hadamard_avx2(PixelView a, PixelView b, MaskView m) {
    const __m256i ones = _mm256_set1_epi16(1);
    __m256i acc = _mm256_setzero_si256();
    std::uint64_t tail = 0;
    for (int ty = 0; ty + 4 <= a.height; ty += 4) {
        int tx = 0;
        for (; tx + 16 <= a.width; tx += 16) {
            __m256i d[4];
            for (int r = 0; r < 4; ++r) {
                const __m128i va = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.row(ty + r) + tx));
                __m128i vb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b.row(ty + r) + tx));
                if constexpr (Masked)
                    vb = select_active128(va, vb, _mm_loadu_si128(reinterpret_cast<const __m128i*>(m.row(ty + r) + tx)));
                d[r] = _mm256_sub_epi16(_mm256_cvtepu8_epi16(va), _mm256_cvtepu8_epi16(vb));
            }
            const __m256i s0 = _mm256_add_epi16(d[0], d[1]), s1 = _mm256_sub_epi16(d[0], d[1]);
            const __m256i s2 = _mm256_add_epi16(d[2], d[3]), s3 = _mm256_sub_epi16(d[2], d[3]);
            const __m256i cols[4] = {_mm256_add_epi16(s0, s2), _mm256_add_epi16(s1, s3), _mm256_sub_epi16(s0, s2),
                                     _mm256_sub_epi16(s1, s3)};
            __m256i rowsum = _mm256_setzero_si256();
            for (const __m256i& c : cols)
                rowsum = _mm256_add_epi32(rowsum, _mm256_madd_epi16(_mm256_abs_epi16(hadamard_rows(c)), ones));
            acc = _mm256_add_epi64(acc, widen_epi32_to_epi64(rowsum));
        }
        for (; tx + 4 <= a.width; tx += 4)
            tail += scalar_tile(a, b, m, Masked, tx, ty);
    }
    return hsum_epi64(acc) + tail;
}

std::uint64_t sad(PixelView a, PixelView b) { return sad_avx2<false>(a, b, {}); }
std::uint64_t ssd(PixelView a, PixelView b) { return ssd_avx2<false>(a, b, {}); }
std::uint64_t masked_sad(PixelView a, PixelView b, MaskView m) { return sad_avx2<true>(a, b, m); }
std::uint64_t masked_ssd(PixelView a, PixelView b, MaskView m) { return ssd_avx2<true>(a, b, m); }
std::uint64_t hadamard_abs(PixelView a, PixelView b) { return hadamard_avx2<false>(a, b, {}); }
std::uint64_t masked_hadamard_abs(PixelView a, PixelView b, MaskView m) { return hadamard_avx2<true>(a, b, m); }

}  // namespace

const DistortionKernels& avx2_table() {
    static const DistortionKernels table{sad, ssd, masked_sad, masked_ssd, hadamard_abs, masked_hadamard_abs};
    return table;
}

}  // namespace irav::kernels

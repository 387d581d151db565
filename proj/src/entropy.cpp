#include "irav/entropy.hpp"

#include <array>
#include <cstdlib>
#include <string>

#include "irav/error.hpp"
#include "irav/transform.hpp"

namespace irav {

namespace {

std::vector<int> build_zigzag(int n) {
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n) * n);
    for (int s = 0; s < 2 * n - 1; ++s) {
        if (s % 2 == 0) {
            // up-right: y decreasing
            for (int y = std::min(s, n - 1); y >= 0 && s - y < n; --y)
                order.push_back(y * n + (s - y));
        } else {
            for (int x = std::min(s, n - 1); x >= 0 && s - x < n; --x)
                order.push_back((s - x) * n + x);
        }
    }
    return order;
}

int last_significant(const LevelBlock& levels, const std::vector<int>& scan) {
    for (int i = static_cast<int>(scan.size()) - 1; i >= 0; --i)
        if (levels.levels[static_cast<std::size_t>(scan[static_cast<std::size_t>(i)])] != 0)
            return i;
    return -1;
}

}  // namespace

const std::vector<int>& zigzag_order(int n) {
    static const std::array<std::vector<int>, 4> tables{build_zigzag(4), build_zigzag(8), build_zigzag(16),
                                                        build_zigzag(32)};
    switch (n) {
    case 4: return tables[0];
    case 8: return tables[1];
    case 16: return tables[2];
    case 32: return tables[3];
    default: throw UsageError("unsupported block size " + std::to_string(n));
    }
}

void entropy_encode_block(BitWriter& bw, const LevelBlock& levels) {
    const auto& scan = zigzag_order(levels.size);
    const int last = last_significant(levels, scan);
    if (last < 0) {
        bw.put_bit(false);
        return;
    }
    bw.put_bit(true);
    bw.put_eg(static_cast<std::uint64_t>(last), 0);
    for (int i = 0; i <= last; ++i) {
        const std::int32_t v = levels.levels[static_cast<std::size_t>(scan[static_cast<std::size_t>(i)])];
        bw.put_bit(v != 0);
        if (v != 0) {
            bw.put_eg(static_cast<std::uint64_t>(std::abs(v) - 1), 1);
            bw.put_bit(v < 0);
        }
    }
}

LevelBlock entropy_decode_block(BitReader& br, int n) {
    const auto& scan = zigzag_order(n);
    LevelBlock out(n);
    if (!br.get_bit())
        return out;
    const std::uint64_t at = br.position();
    const std::uint64_t last = br.get_eg(0);
    if (last >= scan.size())
        throw DataError("last significant index " + std::to_string(last) + " out of range for " + std::to_string(n) +
                        "x" + std::to_string(n) + " block at bit offset " + std::to_string(at));
    for (std::uint64_t i = 0; i <= last; ++i) {
        if (!br.get_bit())
            continue;
        const std::uint64_t pos = br.position();
        const std::uint64_t mag = br.get_eg(1) + 1;
        if (mag > 32768)
            throw DataError("level magnitude overflow at bit offset " + std::to_string(pos));
        const bool neg = br.get_bit();
        out.levels[static_cast<std::size_t>(scan[i])] = neg ? -static_cast<std::int32_t>(mag) : static_cast<std::int32_t>(mag);
    }
    return out;
}

std::uint64_t block_bits(const LevelBlock& levels) {
    const auto& scan = zigzag_order(levels.size);
    const int last = last_significant(levels, scan);
    if (last < 0)
        return 1;
    std::uint64_t bits = 1 + static_cast<std::uint64_t>(eg_bits(static_cast<std::uint64_t>(last), 0));
    for (int i = 0; i <= last; ++i) {
        const std::int32_t v = levels.levels[static_cast<std::size_t>(scan[static_cast<std::size_t>(i)])];
        bits += 1;
        if (v != 0)
            bits += static_cast<std::uint64_t>(eg_bits(static_cast<std::uint64_t>(std::abs(v) - 1), 1)) + 1;
    }
    return bits;
}

}  // namespace irav

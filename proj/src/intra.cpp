#include "irav/intra.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "irav/error.hpp"

namespace irav {

std::string_view to_string(IntraMode m) {
    switch (m) {
    case IntraMode::DC: return "DC";
    case IntraMode::Planar: return "PLANAR";
    case IntraMode::Hor: return "HOR";
    case IntraMode::Ver: return "VER";
    case IntraMode::Diag45: return "DIAG45";
    case IntraMode::Diag135: return "DIAG135";
    }
    return "?";
}

IntraMode intra_mode_from_index(unsigned v) {
    if (v >= kIntraModes.size())
        throw DataError("unknown intra mode " + std::to_string(v));
    return kIntraModes[v];
}

IntraRefs gather_refs(PixelView plane, int x, int y, int size) {
    IntraRefs r{size, std::vector<int>(static_cast<std::size_t>(size), 128),
                std::vector<int>(static_cast<std::size_t>(size), 128), 128};
    const bool has_top = y > 0;
    const bool has_left = x > 0;
    if (has_top)
        for (int i = 0; i < size; ++i)
            r.top[static_cast<std::size_t>(i)] = plane(x + i, y - 1);
    if (has_left)
        for (int i = 0; i < size; ++i)
            r.left[static_cast<std::size_t>(i)] = plane(x - 1, y + i);
    if (has_top && has_left) {
        r.corner = plane(x - 1, y - 1);
    } else if (has_top) {
        r.left.assign(static_cast<std::size_t>(size), r.top[0]);
        r.corner = r.top[0];
    } else if (has_left) {
        r.top.assign(static_cast<std::size_t>(size), r.left[0]);
        r.corner = r.left[0];
    }
    return r;
}

PixelBlock intra_predict(IntraMode mode, const IntraRefs& refs) {
    const int n = refs.size;
    if (n <= 0 || !std::has_single_bit(static_cast<unsigned>(n)))
        throw UsageError("intra block size must be a power of two");
    PixelBlock p(n);
    auto top = [&](int i) { return refs.top[static_cast<std::size_t>(std::min(i, n - 1))]; };
    auto left = [&](int i) { return refs.left[static_cast<std::size_t>(std::min(i, n - 1))]; };

    switch (mode) {
    case IntraMode::DC: {
        int sum = 0;
        for (int i = 0; i < n; ++i)
            sum += top(i) + left(i);
        const auto dc = static_cast<std::uint8_t>((sum + n) / (2 * n));
        std::fill(p.samples.begin(), p.samples.end(), dc);
        break;
    }
    case IntraMode::Planar: {
        const int shift = std::countr_zero(static_cast<unsigned>(n)) + 1;
        const int tr = top(n - 1), bl = left(n - 1);
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                p.at(x, y) = static_cast<std::uint8_t>(
                    ((n - 1 - x) * left(y) + (x + 1) * tr + (n - 1 - y) * top(x) + (y + 1) * bl + n) >> shift);
        break;
    }
    case IntraMode::Hor:
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                p.at(x, y) = static_cast<std::uint8_t>(left(y));
        break;
    case IntraMode::Ver:
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                p.at(x, y) = static_cast<std::uint8_t>(top(x));
        break;
    case IntraMode::Diag45:
        // Propagates the row above towards the bottom-left; samples past the
        // block width repeat the last one.
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                p.at(x, y) = static_cast<std::uint8_t>(top(x + y + 1));
        break;
    case IntraMode::Diag135:
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                const int d = x - y;
                p.at(x, y) = static_cast<std::uint8_t>(d > 0 ? top(d - 1) : d < 0 ? left(-d - 1) : refs.corner);
            }
        break;
    default:
        throw UsageError("unknown intra mode");
    }
    return p;
}

}  // namespace irav

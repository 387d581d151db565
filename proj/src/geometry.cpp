#include "irav/geometry.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "irav/frame_io.hpp"

namespace irav {

namespace {

constexpr double kPi = std::numbers::pi;

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

[[noreturn]] void layout_error(const ProjectionFormat& f, int w, int h, const std::string& constraint) {
    throw DataError(std::string(to_string(f.kind)) + " layout " + dims(w, h) + " violates: " + constraint);
}

struct Vec3 {
    double x, y, z;
};

// X points to longitude +90, Y to the north pole, Z to (0, 0).
Vec3 to_vec(const SphereDirection& d) {
    const double c = std::cos(d.latitude);
    return {c * std::sin(d.longitude), std::sin(d.latitude), c * std::cos(d.longitude)};
}

SphereDirection to_dir(const Vec3& v) {
    const double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
    double lon = std::atan2(v.x, v.z);
    if (lon >= kPi)
        lon -= 2 * kPi;
    return {lon, std::asin(std::clamp(v.y / n, -1.0, 1.0))};
}

// Rectangle of a face or segment in the packed frame, in pixel units.
struct Region {
    int x0 = 0, y0 = 0, w = 0, h = 0;
    bool wrap_x = false;
    bool wrap_y = false;
};

// ---- CMP ------------------------------------------------------------------

// Face order: left, front, right, back, top, bottom.
enum CubeFace { kLeft, kFront, kRight, kBack, kTop, kBottom };
constexpr std::array<std::array<int, 2>, 6> kCubeSlot = {{{0, 1}, {1, 1}, {2, 1}, {3, 1}, {1, 0}, {1, 2}}};

Vec3 cube_face_dir(int face, double u, double v) {
    switch (face) {
    case kFront: return {u, -v, 1};
    case kRight: return {1, -v, -u};
    case kBack: return {-u, -v, -1};
    case kLeft: return {-1, -v, u};
    case kTop: return {u, 1, v};
    default: return {u, -1, -v};
    }
}

void cube_locate(const Vec3& d, int& face, double& u, double& v) {
    const double ax = std::abs(d.x), ay = std::abs(d.y), az = std::abs(d.z);
    if (ax >= ay && ax >= az) {
        if (d.x > 0) { face = kRight; u = -d.z / ax; v = -d.y / ax; }
        else { face = kLeft; u = d.z / ax; v = -d.y / ax; }
    } else if (ay >= az) {
        if (d.y > 0) { face = kTop; u = d.x / ay; v = d.z / ay; }
        else { face = kBottom; u = d.x / ay; v = -d.z / ay; }
    } else {
        if (d.z > 0) { face = kFront; u = d.x / az; v = -d.y / az; }
        else { face = kBack; u = -d.x / az; v = -d.y / az; }
    }
}

// ---- SSP ------------------------------------------------------------------

struct SspLayout {
    int side;   // square / equator width
    int guard;
    int equator_y0() const { return side + guard; }
    int south_y0() const { return 5 * side + 2 * guard; }
};

enum class SspPart { North, Equator, South, Guard };

SspPart ssp_part(const SspLayout& l, int row) {
    if (row < l.side)
        return SspPart::North;
    if (row < l.equator_y0())
        return SspPart::Guard;
    if (row < l.equator_y0() + 4 * l.side)
        return SspPart::Equator;
    if (row < l.south_y0())
        return SspPart::Guard;
    return SspPart::South;
}

// Direction for a point in a segment; poles clamp the radius to the disk.
SphereDirection ssp_dir(const SspLayout& l, SspPart part, double u, double v) {
    const double half = l.side / 2.0;
    if (part == SspPart::Equator) {
        const double vl = v - l.equator_y0();
        double lon = (vl / (4.0 * l.side) - 0.5) * 2 * kPi;
        lon = std::clamp(lon, -kPi, std::nextafter(kPi, 0.0));
        return {lon, (0.5 - u / l.side) * (kPi / 2)};
    }
    const double vl = part == SspPart::North ? v : v - l.south_y0();
    const double dx = u - half, dy = vl - half;
    const double r = std::min(std::hypot(dx, dy), half);
    const double colat = r / half * (kPi / 4);
    double lon = std::atan2(dy, dx);
    if (lon >= kPi)
        lon -= 2 * kPi;
    return {lon, part == SspPart::North ? kPi / 2 - colat : -kPi / 2 + colat};
}

bool ssp_active(const SspLayout& l, int x, int y) {
    const SspPart part = ssp_part(l, y);
    if (part == SspPart::Guard)
        return false;
    if (part == SspPart::Equator)
        return true;
    const int yl = part == SspPart::North ? y : y - l.south_y0();
    const double half = l.side / 2.0;
    return std::hypot(x + 0.5 - half, yl + 0.5 - half) <= half;
}

// ---- RSP ------------------------------------------------------------------

// Maps between the two faces' own frames. The map is its own inverse.
Vec3 rsp_swap(const Vec3& v) { return {v.y, v.x, -v.z}; }

constexpr double kRspLonSpan = 1.5 * kPi;  // 270 degrees
constexpr double kRspLatSpan = 0.5 * kPi;  // 90 degrees

bool rsp_active(int x, int y, int width, int face_h) {
    const int yl = y % face_h;
    const SphereDirection own{((x + 0.5) / width - 0.5) * kRspLonSpan, (0.5 - (yl + 0.5) / face_h) * kRspLatSpan};
    const SphereDirection other = to_dir(rsp_swap(to_vec(own)));
    const bool in_other = std::abs(other.longitude) <= kRspLonSpan / 2 && std::abs(other.latitude) <= kRspLatSpan / 2;
    return !in_other || std::abs(own.latitude) <= std::abs(other.latitude);
}

// ---- sampling ---------------------------------------------------------------

int wrap_or_clamp(int v, int lo, int n, bool wrap) {
    int k = v - lo;
    if (wrap) {
        k %= n;
        if (k < 0)
            k += n;
    } else {
        k = std::clamp(k, 0, n - 1);
    }
    return lo + k;
}

std::uint8_t sample(const FramePlane& src, const Region& r, double x, double y, ResampleFilter filter,
                    const ActivityMask* mask) {
    if (filter == ResampleFilter::Nearest) {
        const int xi = wrap_or_clamp(static_cast<int>(std::lround(x)), r.x0, r.w, r.wrap_x);
        const int yi = wrap_or_clamp(static_cast<int>(std::lround(y)), r.y0, r.h, r.wrap_y);
        return src.at(xi, yi);
    }
    const double fx0 = std::floor(x), fy0 = std::floor(y);
    const double ax = x - fx0, ay = y - fy0;
    const int x0 = static_cast<int>(fx0), y0 = static_cast<int>(fy0);
    double acc = 0.0, wsum = 0.0;
    for (int dy = 0; dy < 2; ++dy) {
        const int yi = wrap_or_clamp(y0 + dy, r.y0, r.h, r.wrap_y);
        const double wy = dy ? ay : 1.0 - ay;
        for (int dx = 0; dx < 2; ++dx) {
            const int xi = wrap_or_clamp(x0 + dx, r.x0, r.w, r.wrap_x);
            const double w = wy * (dx ? ax : 1.0 - ax);
            if (w == 0.0 || (mask && !mask->active(xi, yi)))
                continue;
            acc += w * src.at(xi, yi);
            wsum += w;
        }
    }
    if (wsum <= 0.0) {
        const int xi = wrap_or_clamp(static_cast<int>(std::lround(x)), r.x0, r.w, r.wrap_x);
        const int yi = wrap_or_clamp(static_cast<int>(std::lround(y)), r.y0, r.h, r.wrap_y);
        return src.at(xi, yi);
    }
    return static_cast<std::uint8_t>(std::clamp(std::lround(acc / wsum), 0L, 255L));
}

struct Located {
    PixelCoord p;
    Region region;
};

// Location of `d` in a packed CMP/SSP frame, plus the face/segment to sample in.
Located locate_packed(const ProjectionFormat& f, const SphereDirection& d, int width, int height) {
    if (f.kind == Projection::CMP) {
        const int face_size = width / 4;
        int face;
        double u, v;
        cube_locate(to_vec(d), face, u, v);
        const auto [col, row] = kCubeSlot[static_cast<std::size_t>(face)];
        Region r{col * face_size, row * face_size, face_size, face_size};
        return {{r.x0 + (u + 1) / 2 * face_size - 0.5, r.y0 + (v + 1) / 2 * face_size - 0.5}, r};
    }
    const SspLayout l{width, f.guard_width};
    (void)height;
    if (std::abs(d.latitude) <= kPi / 4) {
        const double u = (0.5 - d.latitude / (kPi / 2)) * l.side;
        const double v = (d.longitude / (2 * kPi) + 0.5) * 4.0 * l.side;
        Region r{0, l.equator_y0(), l.side, 4 * l.side, false, true};
        return {{u - 0.5, r.y0 + v - 0.5}, r};
    }
    const double half = l.side / 2.0;
    const double colat = kPi / 2 - std::abs(d.latitude);
    const double rad = colat / (kPi / 4) * half;
    const double u = half + rad * std::cos(d.longitude);
    const double v = half + rad * std::sin(d.longitude);
    Region r{0, d.latitude > 0 ? 0 : l.south_y0(), l.side, l.side};
    return {{u - 0.5, r.y0 + v - 0.5}, r};
}

// Direction of an arbitrary point in a packed frame, ignoring activity.
SphereDirection packed_dir_unchecked(const ProjectionFormat& f, double x, double y, int width) {
    const double u = x + 0.5, v = y + 0.5;
    if (f.kind == Projection::CMP) {
        const int face_size = width / 4;
        const int col = std::clamp(static_cast<int>(std::floor(u / face_size)), 0, 3);
        const int row = std::clamp(static_cast<int>(std::floor(v / face_size)), 0, 2);
        int face = kFront;
        for (int k = 0; k < 6; ++k)
            if (kCubeSlot[static_cast<std::size_t>(k)][0] == col && kCubeSlot[static_cast<std::size_t>(k)][1] == row)
                face = k;
        const double fu = (u - col * face_size) / face_size * 2 - 1;
        const double fv = (v - row * face_size) / face_size * 2 - 1;
        return to_dir(cube_face_dir(face, fu, fv));
    }
    const SspLayout l{width, f.guard_width};
    SspPart part = ssp_part(l, std::clamp(static_cast<int>(std::floor(v)), 0, 6 * l.side + 2 * l.guard - 1));
    if (part == SspPart::Guard)
        part = SspPart::Equator;
    return ssp_dir(l, part, u, v);
}

void require_resampled(const ProjectionFormat& f) {
    if (f.kind != Projection::CMP && f.kind != Projection::SSP)
        throw UsageError("resampling is only implemented for CMP and SSP, not " + std::string(to_string(f.kind)));
}

}  // namespace

std::string_view to_string(Projection p) {
    switch (p) {
    case Projection::ERP: return "ERP";
    case Projection::CMP: return "CMP";
    case Projection::OHP: return "OHP";
    case Projection::COHP: return "COHP";
    case Projection::CISP: return "CISP";
    case Projection::RSP: return "RSP";
    case Projection::SSP: return "SSP";
    }
    return "?";
}

Projection parse_projection(std::string_view name) {
    std::string up(name);
    for (auto& c : up)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (Projection p : {Projection::ERP, Projection::CMP, Projection::OHP, Projection::COHP, Projection::CISP,
                         Projection::RSP, Projection::SSP})
        if (to_string(p) == up)
            return p;
    throw UsageError("unknown projection format '" + std::string(name) + "'");
}

void check_layout(const ProjectionFormat& f, int w, int h) {
    if (w <= 0 || h <= 0)
        layout_error(f, w, h, "width > 0 and height > 0");
    if (w % 2 != 0 || h % 2 != 0)
        layout_error(f, w, h, "even width and height (4:2:0)");
    if (f.guard_width < 0)
        layout_error(f, w, h, "guard_width >= 0");
    const int g = f.guard_width;
    switch (f.kind) {
    case Projection::ERP:
        if (w != 2 * h)
            layout_error(f, w, h, "width == 2*height");
        break;
    case Projection::CMP:
        if (w % 4 != 0 || h % 3 != 0 || w / 4 != h / 3)
            layout_error(f, w, h, "width%4==0, height%3==0, width/4==height/3");
        if ((w / 4) % 2 != 0)
            layout_error(f, w, h, "even face size (width/4)");
        break;
    case Projection::OHP:
        if (w % 4 != 0)
            layout_error(f, w, h, "width%4==0");
        break;
    case Projection::COHP:
        if (h <= g + 2 || (h - g) % 2 != 0)
            layout_error(f, w, h, "height > guard+2 and (height-guard) even");
        break;
    case Projection::CISP:
        if (w < 5 * std::max(g, 1))
            layout_error(f, w, h, "width >= 5*guard");
        break;
    case Projection::RSP:
        if (w != 3 * (h / 2))
            layout_error(f, w, h, "width == 3*(height/2)");
        break;
    case Projection::SSP:
        if (h != 6 * w + 2 * g)
            layout_error(f, w, h, "height == 6*width + 2*guard");
        break;
    }
}

ActivityMask generate_mask(const ProjectionFormat& f, int w, int h) {
    check_layout(f, w, h);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h, 1);
    auto set = [&](int x, int y, bool active) { bits[static_cast<std::size_t>(y) * w + x] = active ? 1 : 0; };
    const double g = f.guard_width;

    switch (f.kind) {
    case Projection::ERP:
        break;
    case Projection::CMP: {
        const int face = w / 4;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const int col = x / face, row = y / face;
                set(x, y, row == 1 || col == 1);
            }
        break;
    }
    case Projection::OHP: {
        // 4x2 triangle boxes; top row apex up, bottom row apex down.
        const int bw = w / 4, bh = h / 2;
        for (int y = 0; y < h; ++y) {
            const int row = y / bh < 2 ? y / bh : 1;
            const int yl = y - row * bh;
            const double t = row == 0 ? (yl + 0.5) / bh : 1.0 - (yl + 0.5) / bh;
            const double half = t * bw / 2.0;
            for (int x = 0; x < w; ++x) {
                const int xl = x % bw;
                set(x, y, std::abs(xl + 0.5 - bw / 2.0) <= half);
            }
        }
        break;
    }
    case Projection::COHP: {
        // Two rows of interleaved triangles separated by a horizontal guard band,
        // each row with one guard band along its discontinuous diagonal edge.
        const int row_h = (h - f.guard_width) / 2;
        for (int y = 0; y < h; ++y) {
            const bool mid = y >= row_h && y < row_h + f.guard_width;
            const int row = y < row_h ? 0 : 1;
            const int yl = row == 0 ? y : y - row_h - f.guard_width;
            const double t = (yl + 0.5) / row_h;
            const double edge = row == 0 ? w / 4.0 + t * w / 2.0 : 3.0 * w / 4.0 - t * w / 2.0;
            for (int x = 0; x < w; ++x)
                set(x, y, !(mid || std::abs(x + 0.5 - edge) < g / 2));
        }
        break;
    }
    case Projection::CISP: {
        // Five columns of triangle strips; guard bands between columns and along
        // the split diagonal inside the first four columns.
        const double cw = w / 5.0;
        for (int y = 0; y < h; ++y) {
            const double t = (y + 0.5) / h;
            for (int x = 0; x < w; ++x) {
                const double cx = x + 0.5;
                bool guard = false;
                for (int k = 1; k < 5 && !guard; ++k)
                    guard = std::abs(cx - k * cw) < g / 2;
                for (int c = 0; c < 4 && !guard; ++c)
                    guard = std::abs(cx - (c + t) * cw) < g / 2;
                set(x, y, !guard);
            }
        }
        break;
    }
    case Projection::RSP: {
        const int face_h = h / 2;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                set(x, y, rsp_active(x, y, w, face_h));
        break;
    }
    case Projection::SSP: {
        const SspLayout l{w, f.guard_width};
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                set(x, y, ssp_active(l, x, y));
        break;
    }
    }
    return ActivityMask(w, h, std::move(bits));
}

PixelCoord dir_to_erp(const SphereDirection& d, int width, int height) {
    if (width != 2 * height)
        throw UsageError("ERP requires width == 2*height, got " + dims(width, height));
    return {(d.longitude / (2 * kPi) + 0.5) * width - 0.5, (0.5 - d.latitude / kPi) * height - 0.5};
}

SphereDirection erp_to_dir(double x, double y, int width, int height) {
    if (width != 2 * height)
        throw UsageError("ERP requires width == 2*height, got " + dims(width, height));
    return {((x + 0.5) / width - 0.5) * 2 * kPi, (0.5 - (y + 0.5) / height) * kPi};
}

WeightMap ws_weights_erp(int width, int height) {
    if (width != 2 * height)
        throw UsageError("ERP requires width == 2*height, got " + dims(width, height));
    WeightMap m{width, height, std::vector<double>(static_cast<std::size_t>(width) * height)};
    for (int j = 0; j < height; ++j) {
        const double wgt = std::cos((j + 0.5 - height / 2.0) * kPi / height);
        std::fill_n(m.weights.begin() + static_cast<std::ptrdiff_t>(j) * width, width, wgt);
    }
    return m;
}

PixelCoord dir_to_packed(const ProjectionFormat& f, const SphereDirection& d, int width, int height) {
    require_resampled(f);
    check_layout(f, width, height);
    return locate_packed(f, d, width, height).p;
}

std::optional<SphereDirection> packed_to_dir(const ProjectionFormat& f, double x, double y, int width, int height) {
    require_resampled(f);
    check_layout(f, width, height);
    const int xi = static_cast<int>(std::lround(x)), yi = static_cast<int>(std::lround(y));
    if (xi < 0 || yi < 0 || xi >= width || yi >= height)
        return std::nullopt;
    if (f.kind == Projection::CMP) {
        const int face = width / 4;
        if (!(yi / face == 1 || xi / face == 1))
            return std::nullopt;
    } else if (!ssp_active(SspLayout{width, f.guard_width}, xi, yi)) {
        return std::nullopt;
    }
    return packed_dir_unchecked(f, x, y, width);
}

Frame420 convert(const Frame420& frame, const ProjectionFormat& from, const ProjectionFormat& to, int out_width,
                 int out_height, ResampleFilter filter) {
    const bool forward = from.kind == Projection::ERP && (to.kind == Projection::CMP || to.kind == Projection::SSP);
    const bool backward = to.kind == Projection::ERP && (from.kind == Projection::CMP || from.kind == Projection::SSP);
    if (!forward && !backward)
        throw UsageError("unsupported conversion " + std::string(to_string(from.kind)) + " -> " +
                         std::string(to_string(to.kind)) + " (only ERP<->CMP and ERP<->SSP)");
    check_layout(from, frame.width(), frame.height());
    check_layout(to, out_width, out_height);

    Frame420 out(out_width, out_height, 128);
    if (forward) {
        const ActivityMask mask = generate_mask(to, out_width, out_height);
        const ActivityMask cmask = subsample_mask_420(mask);
        for (int c = 0; c < 3; ++c) {
            const FramePlane& src = frame.plane(c);
            FramePlane& dst = out.plane(c);
            const ActivityMask& m = c == 0 ? mask : cmask;
            const int scale = c == 0 ? 1 : 2;
            const Region whole{0, 0, src.width(), src.height(), true, false};
            for (int y = 0; y < dst.height(); ++y)
                for (int x = 0; x < dst.width(); ++x) {
                    if (!m.active(x, y))
                        continue;
                    // Sample centre in luma pixel coordinates.
                    const double lx = scale == 1 ? x : 2.0 * x + 0.5;
                    const double ly = scale == 1 ? y : 2.0 * y + 0.5;
                    const SphereDirection d = packed_dir_unchecked(to, lx, ly, out_width);
                    const PixelCoord p = dir_to_erp(d, frame.width(), frame.height());
                    const double sx = scale == 1 ? p.x : (p.x - 0.5) / 2.0;
                    const double sy = scale == 1 ? p.y : (p.y - 0.5) / 2.0;
                    dst.at(x, y) = sample(src, whole, sx, sy, filter, nullptr);
                }
        }
        return out;
    }

    const ActivityMask mask = generate_mask(from, frame.width(), frame.height());
    const ActivityMask cmask = subsample_mask_420(mask);
    for (int c = 0; c < 3; ++c) {
        const FramePlane& src = frame.plane(c);
        FramePlane& dst = out.plane(c);
        const ActivityMask& m = c == 0 ? mask : cmask;
        const bool chroma = c != 0;
        for (int y = 0; y < dst.height(); ++y)
            for (int x = 0; x < dst.width(); ++x) {
                const double lx = chroma ? 2.0 * x + 0.5 : x;
                const double ly = chroma ? 2.0 * y + 0.5 : y;
                const SphereDirection d = erp_to_dir(lx, ly, out_width, out_height);
                Located loc = locate_packed(from, d, frame.width(), frame.height());
                if (chroma) {
                    loc.p = {(loc.p.x - 0.5) / 2.0, (loc.p.y - 0.5) / 2.0};
                    loc.region = {loc.region.x0 / 2, loc.region.y0 / 2, loc.region.w / 2, loc.region.h / 2,
                                  loc.region.wrap_x, loc.region.wrap_y};
                }
                dst.at(x, y) = sample(src, loc.region, loc.p.x, loc.p.y, filter, &m);
            }
    }
    return out;
}

}  // namespace irav

#include "irav/frame_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

namespace irav {

FramePlane::FramePlane(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
        throw UsageError("plane dimensions must be positive");
    samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

FramePlane::FramePlane(int width, int height, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
    if (width <= 0 || height <= 0)
        throw UsageError("plane dimensions must be positive");
    if (samples_.size() != static_cast<std::size_t>(width) * height)
        throw UsageError("sample count does not match plane dimensions");
}

Frame420::Frame420(int width, int height, std::uint8_t fill) {
    if (width % 2 != 0 || height % 2 != 0)
        throw UsageError("4:2:0 frame dimensions must be even");
    luma = FramePlane(width, height, fill);
    cb = FramePlane(width / 2, height / 2, fill);
    cr = FramePlane(width / 2, height / 2, fill);
}

Frame420::Frame420(FramePlane y, FramePlane u, FramePlane v)
    : luma(std::move(y)), cb(std::move(u)), cr(std::move(v)) {
    if (luma.width() % 2 != 0 || luma.height() % 2 != 0)
        throw UsageError("4:2:0 frame dimensions must be even");
    for (const FramePlane* c : {&cb, &cr})
        if (c->width() != luma.width() / 2 || c->height() != luma.height() / 2)
            throw UsageError("chroma plane must be half the luma size");
}

ActivityMask::ActivityMask(int width, int height)
    : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, 1) {
    if (width <= 0 || height <= 0)
        throw UsageError("mask dimensions must be positive");
}

ActivityMask::ActivityMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
    if (width <= 0 || height <= 0)
        throw UsageError("mask dimensions must be positive");
    if (bits_.size() != static_cast<std::size_t>(width) * height)
        throw UsageError("mask size does not match dimensions");
    for (auto& b : bits_)
        b = b ? 1 : 0;
}

std::size_t ActivityMask::inactive_count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{0}));
}

double ActivityMask::inactive_fraction() const {
    return bits_.empty() ? 0.0 : static_cast<double>(inactive_count()) / static_cast<double>(bits_.size());
}

std::vector<Frame420> read_yuv420(const std::filesystem::path& path, int width, int height,
                                  std::size_t max_frames) {
    if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0)
        throw DataError("YUV420 dimensions must be positive and even, got " + std::to_string(width) + "x" +
                        std::to_string(height));
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());
    const std::uint64_t luma_size = static_cast<std::uint64_t>(width) * height;
    const std::uint64_t frame_size = luma_size * 3 / 2;
    const std::uint64_t file_size = std::filesystem::file_size(path);
    if (file_size % frame_size != 0) {
        const std::uint64_t offset = file_size / frame_size * frame_size;
        throw DataError("truncated YUV420 file " + path.string() + ": partial frame at byte offset " +
                        std::to_string(offset));
    }
    const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(file_size / frame_size, max_frames));

    std::vector<Frame420> frames;
    frames.reserve(count);
    for (std::size_t f = 0; f < count; ++f) {
        std::vector<std::uint8_t> y(luma_size), u(luma_size / 4), v(luma_size / 4);
        in.read(reinterpret_cast<char*>(y.data()), static_cast<std::streamsize>(y.size()));
        in.read(reinterpret_cast<char*>(u.data()), static_cast<std::streamsize>(u.size()));
        in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size()));
        if (!in)
            throw DataError("read failed in " + path.string() + " at byte offset " +
                            std::to_string(f * frame_size));
        frames.emplace_back(FramePlane(width, height, std::move(y)), FramePlane(width / 2, height / 2, std::move(u)),
                            FramePlane(width / 2, height / 2, std::move(v)));
    }
    return frames;
}

std::uint64_t write_yuv420(const std::vector<Frame420>& frames, const std::filesystem::path& path) {
    for (const auto& f : frames)
        if (f.width() != frames.front().width() || f.height() != frames.front().height())
            throw DataError("all frames must share dimensions");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot create " + path.string());
    std::uint64_t bytes = 0;
    for (const auto& f : frames) {
        for (int c = 0; c < 3; ++c) {
            const auto& s = f.plane(c).samples();
            out.write(reinterpret_cast<const char*>(s.data()), static_cast<std::streamsize>(s.size()));
            bytes += s.size();
        }
    }
    if (!out)
        throw DataError("write failed for " + path.string());
    return bytes;
}

namespace {

// Reads one PGM header token, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {}
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty())
                break;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    return tok;
}

int pgm_int(std::istream& in, const std::string& what, const std::filesystem::path& path) {
    const std::string tok = pgm_token(in);
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size())
            throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw DataError("PGM " + path.string() + ": bad " + what + " '" + tok + "'");
    }
}

}  // namespace

ActivityMask read_mask_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open mask " + path.string());
    const std::string magic = pgm_token(in);
    if (magic != "P5")
        throw DataError("PGM " + path.string() + ": expected magic P5, got '" + magic + "'");
    const int w = pgm_int(in, "width", path);
    const int h = pgm_int(in, "height", path);
    const int maxval = pgm_int(in, "maxval", path);
    if (maxval != 255)
        throw DataError("PGM " + path.string() + ": maxval must be 255, got " + std::to_string(maxval));
    if (w <= 0 || h <= 0)
        throw DataError("PGM " + path.string() + ": non-positive dimensions");
    // pgm_token consumed the single whitespace byte after maxval.
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(w) * h);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw DataError("PGM " + path.string() + ": size mismatch, header says " + std::to_string(w) + "x" +
                        std::to_string(h) + " but only " + std::to_string(in.gcount()) + " samples present");
    if (in.peek() != EOF)
        throw DataError("PGM " + path.string() + ": size mismatch, trailing data after " +
                        std::to_string(raw.size()) + " samples");
    for (auto& v : raw)
        v = v >= 128 ? 1 : 0;
    return ActivityMask(w, h, std::move(raw));
}

std::uint64_t write_mask_pgm(const ActivityMask& mask, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot create " + path.string());
    std::ostringstream hdr;
    hdr << "P5\n" << mask.width() << ' ' << mask.height() << "\n255\n";
    const std::string h = hdr.str();
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    std::vector<std::uint8_t> raw(mask.bits().size());
    std::transform(mask.bits().begin(), mask.bits().end(), raw.begin(),
                   [](std::uint8_t b) { return b ? std::uint8_t{255} : std::uint8_t{0}; });
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out)
        throw DataError("write failed for " + path.string());
    return h.size() + raw.size();
}

ActivityMask subsample_mask_420(const ActivityMask& mask) {
    if (mask.width() % 2 != 0 || mask.height() % 2 != 0)
        throw DataError("cannot subsample a mask with odd dimensions");
    const int w = mask.width() / 2, h = mask.height() / 2;
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            bits[static_cast<std::size_t>(y) * w + x] = mask.active(2 * x, 2 * y) || mask.active(2 * x + 1, 2 * y) ||
                                                        mask.active(2 * x, 2 * y + 1) ||
                                                        mask.active(2 * x + 1, 2 * y + 1);
    return ActivityMask(w, h, std::move(bits));
}

}  // namespace irav

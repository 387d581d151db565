#include <doctest.h>

#include <fstream>
#include <functional>
#include <random>

#include "irav/frame_io.hpp"
#include "support.hpp"

using namespace irav;
namespace fs = std::filesystem;

namespace {

void write_raw(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out << bytes;
}

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const DataError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("yuv420 round trip is bit-identical") {
    const auto dir = test::temp_dir("yuv");
    std::mt19937 rng(1);
    for (auto [w, h] : {std::pair{2, 2}, std::pair{16, 16}, std::pair{34, 18}}) {
        std::vector<Frame420> frames;
        for (int i = 0; i < 3; ++i)
            frames.push_back(test::random_frame(w, h, rng));
        const auto p = dir / "rt.yuv";
        CHECK(write_yuv420(frames, p) == 3ULL * w * h * 3 / 2);
        CHECK(read_yuv420(p, w, h) == frames);
        CHECK(read_yuv420(p, w, h, 2).size() == 2);
    }
    fs::remove_all(dir);
}

TEST_CASE("yuv420 sizes and errors") {
    const auto dir = test::temp_dir("yuv_err");
    CHECK(write_yuv420({Frame420(16, 16)}, dir / "one.yuv") == 384);
    CHECK(write_yuv420({}, dir / "empty.yuv") == 0);
    CHECK(fs::file_size(dir / "empty.yuv") == 0);
    CHECK(read_yuv420(dir / "empty.yuv", 16, 16).empty());

    write_raw(dir / "trunc.yuv", std::string(384 + 100, '\x10'));
    const std::string msg = error_of([&] { read_yuv420(dir / "trunc.yuv", 16, 16); });
    CHECK(msg.find("byte offset 384") != std::string::npos);

    CHECK_THROWS_AS(read_yuv420(dir / "one.yuv", 15, 16), DataError);
    CHECK_THROWS_AS(write_yuv420({Frame420(16, 16), Frame420(8, 8)}, dir / "mix.yuv"), DataError);
    fs::remove_all(dir);
}

TEST_CASE("pgm masks") {
    const auto dir = test::temp_dir("pgm");
    std::mt19937 rng(2);
    const ActivityMask m = test::random_mask(13, 7, rng);
    write_mask_pgm(m, dir / "m.pgm");
    CHECK(read_mask_pgm(dir / "m.pgm") == m);

    write_raw(dir / "all255.pgm", "P5\n8 8\n255\n" + std::string(64, '\xff'));
    CHECK(read_mask_pgm(dir / "all255.pgm").inactive_count() == 0);
    write_raw(dir / "all0.pgm", "P5\n8 8\n255\n" + std::string(64, '\0'));
    CHECK(read_mask_pgm(dir / "all0.pgm").inactive_count() == 64);
    std::string checker;
    for (int i = 0; i < 64; ++i)
        checker += ((i / 8 + i % 8) % 2) ? '\xff' : '\0';
    write_raw(dir / "checker.pgm", "P5\n8 8\n255\n" + checker);
    CHECK(read_mask_pgm(dir / "checker.pgm").inactive_fraction() == 0.5);
    write_raw(dir / "thresh.pgm", "P5\n# comment\n2 1\n255\n\x7f\x80");
    const ActivityMask t = read_mask_pgm(dir / "thresh.pgm");
    CHECK_FALSE(t.active(0, 0));
    CHECK(t.active(1, 0));

    write_raw(dir / "p2.pgm", "P2\n2 2\n255\n0 0 0 0\n");
    write_raw(dir / "maxval.pgm", "P5\n2 2\n15\n\0\0\0\0");
    write_raw(dir / "short.pgm", "P5\n4 4\n255\n" + std::string(10, '\xff'));
    const auto e1 = error_of([&] { read_mask_pgm(dir / "p2.pgm"); });
    const auto e2 = error_of([&] { read_mask_pgm(dir / "maxval.pgm"); });
    const auto e3 = error_of([&] { read_mask_pgm(dir / "short.pgm"); });
    CHECK(e1.find("magic") != std::string::npos);
    CHECK(e2.find("maxval") != std::string::npos);
    CHECK(e3.find("size mismatch") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("chroma mask subsampling") {
    CHECK(subsample_mask_420(ActivityMask(8, 6)).inactive_count() == 0);
    CHECK(subsample_mask_420(ActivityMask(8, 6, std::vector<std::uint8_t>(48, 0))).inactive_count() == 12);
    const ActivityMask one(2, 2, {0, 0, 1, 0});
    const ActivityMask sub = subsample_mask_420(one);
    CHECK(sub.width() == 1);
    CHECK(sub.active(0, 0));
    CHECK_THROWS_AS(subsample_mask_420(ActivityMask(3, 2)), DataError);

    std::mt19937 rng(3);
    for (int it = 0; it < 50; ++it) {
        const ActivityMask m = test::random_mask(16, 12, rng);
        const ActivityMask s = subsample_mask_420(m);
        for (int y = 0; y < 6; ++y)
            for (int x = 0; x < 8; ++x) {
                const bool any = m.active(2 * x, 2 * y) || m.active(2 * x + 1, 2 * y) || m.active(2 * x, 2 * y + 1) ||
                                 m.active(2 * x + 1, 2 * y + 1);
                CHECK(s.active(x, y) == any);
            }
    }
}

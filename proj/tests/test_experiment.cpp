#include <doctest.h>

#include "irav/experiment.hpp"
#include "irav/synth.hpp"
#include "support.hpp"

using namespace irav;

TEST_CASE("synthesis") {
    for (SynthKind k : {SynthKind::Gradient, SynthKind::Checker, SynthKind::Orbit}) {
        CHECK(synthesize(k, 32, 16, 3, 7) == synthesize(k, 32, 16, 3, 7));
        const auto one = synthesize(k, 32, 16, 1, 7);
        REQUIRE(one.size() == 1);
        CHECK(one[0].cb.width() == 16);
    }
    CHECK(synthesize(SynthKind::Orbit, 32, 16, 1, 1) != synthesize(SynthKind::Orbit, 32, 16, 1, 2));
    CHECK(parse_synth_kind("Orbit") == SynthKind::Orbit);
    CHECK_THROWS_AS(parse_synth_kind("noise"), UsageError);
    CHECK_THROWS_AS(synthesize(SynthKind::Orbit, 31, 16, 1, 1), UsageError);

    // Orbit frames are crops of one canvas.
    const auto f = synthesize(SynthKind::Orbit, 48, 48, 2, 3);
    const Offset o0 = orbit_offset(0), o1 = orbit_offset(1);
    const int dx = o1.x - o0.x, dy = o1.y - o0.y;
    for (int y = 8; y < 40; ++y)
        for (int x = 8; x < 40; ++x)
            REQUIRE(f[1].luma.at(x, y) == f[0].luma.at(x + dx, y + dy));
}

TEST_CASE("sweep: cardinality, identical configs and csv round trip") {
    SequenceInput seq;
    seq.name = "tiny";
    seq.format = {Projection::OHP, 16};
    seq.frames = synthesize(SynthKind::Orbit, 64, 64, 3, 2);
    SweepSpec spec;
    spec.intra_period = 2;
    spec.search_range = 2;
    spec.jobs = 2;
    spec.configs = {baseline_config(), {"same", baseline_config().tools}};
    const SweepResult same = run_sweep({seq}, spec);
    CHECK(same.points.size() == 8);
    REQUIRE(same.rows.size() == 1);
    CHECK(*same.rows[0].bd_rate == 0.0);

    spec.configs = {baseline_config(), proposed_config()};
    const SweepResult r = run_sweep({seq}, spec);
    const std::string csv = points_csv(r.points);
    const auto parsed = parse_points_csv(csv);
    REQUIRE(parsed.size() == 8);
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        CHECK(parsed[i].kbps == r.points[i].kbps);
        CHECK(parsed[i].quality_db == r.points[i].quality_db);
        CHECK(parsed[i].metric_kind == "masked_psnr");
    }
    const auto rows = bd_rows(parsed, spec.configs);
    CHECK(*rows[0].bd_rate == *r.rows[0].bd_rate);
    const std::string report = format_report(r, spec);
    CHECK(report.find("IPPP") != std::string::npos);
    CHECK(report.find("Average") != std::string::npos);

    spec.jobs = 1;
    CHECK(points_csv(run_sweep({seq}, spec).points) == csv);
}

TEST_CASE("sweep: erp source scored with ws-psnr") {
    SequenceInput seq;
    seq.name = "sphere";
    seq.format = {Projection::CMP, 16};
    seq.erp_source = true;
    seq.coded_width = 128;
    seq.coded_height = 96;
    seq.frames = {test::smooth_erp(128, 64), test::smooth_erp(128, 64)};
    SweepSpec spec;
    spec.search_range = 2;
    const SweepPoint p = run_point(seq, proposed_config(), 32, spec);
    CHECK(p.metric_kind == "ws_psnr");
    CHECK(p.quality_db > 30.0);
    CHECK(p.format == "CMP");
}

TEST_CASE("sweep errors name the configuration") {
    SequenceInput seq;
    seq.name = "broken";
    seq.format = {Projection::OHP, 16};
    seq.frames = synthesize(SynthKind::Orbit, 32, 32, 1, 1);
    seq.mask = ActivityMask(16, 16);
    SweepSpec spec;
    try {
        run_sweep({seq}, spec);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("config 'baseline'") != std::string::npos);
    }
    spec.qps = {22, 27};
    CHECK_THROWS_AS(run_sweep({seq}, spec), UsageError);
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irav/codec.hpp"
#include "irav/geometry.hpp"
#include "irav/metrics.hpp"

namespace irav {

struct ToolConfig {
    std::string name;
    ToolFlags tools;
};

/// baseline: the three mask tools off, SAO on. proposed: all on.
ToolConfig baseline_config();
ToolConfig proposed_config();

/// One input sequence. Native sequences are coded as given with `mask`; ERP
/// sequences are converted to `format` at coded_width x coded_height, coded,
/// converted back and scored with WS-PSNR.
struct SequenceInput {
    std::string name;
    std::vector<Frame420> frames;
    ProjectionFormat format;
    bool erp_source = false;
    int coded_width = 0;
    int coded_height = 0;
    std::optional<ActivityMask> mask;  // native only; generated from `format` when empty
};

struct SweepSpec {
    std::vector<int> qps{22, 27, 32, 37};
    std::vector<ToolConfig> configs{baseline_config(), proposed_config()};
    double fps = 30.0;
    int intra_period = 16;
    int search_range = 8;
    int jobs = 1;
};

struct SweepPoint {
    std::string sequence;
    std::string format;
    std::string config;
    int qp = 0;
    std::uint64_t bits = 0;
    double kbps = 0.0;
    double quality_db = 0.0;
    std::string metric_kind;
};

struct ReportRow {
    std::string sequence;
    std::string format;
    std::string config;      // the compared configuration; the anchor is configs[0]
    std::optional<double> bd_rate;  // empty when a curve is incomplete
};

struct SweepResult {
    std::vector<SweepPoint> points;  // sequence-major, then config, then qp
    std::vector<ReportRow> rows;
};

/// Codes one (sequence, config, qp) point.
SweepPoint run_point(const SequenceInput& seq, const ToolConfig& cfg, int qp, const SweepSpec& spec);

/// Runs every point on up to spec.jobs threads and computes BD-rates against
/// configs[0]. A failing point aborts the sweep with its configuration named.
SweepResult run_sweep(const std::vector<SequenceInput>& seqs, const SweepSpec& spec);

/// BD-rates of each non-anchor config, recomputed from points.
std::vector<ReportRow> bd_rows(const std::vector<SweepPoint>& points, const std::vector<ToolConfig>& configs);

std::string points_csv(const std::vector<SweepPoint>& points);
std::vector<SweepPoint> parse_points_csv(const std::string& text);
std::string format_report(const SweepResult& r, const SweepSpec& spec);

}  // namespace irav

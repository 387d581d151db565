#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irav/frame.hpp"

namespace irav {

enum class Projection { ERP, CMP, OHP, COHP, CISP, RSP, SSP };

struct ProjectionFormat {
    Projection kind = Projection::ERP;
    int guard_width = 16;
};

std::string_view to_string(Projection p);
/// Case-insensitive; throws UsageError for unknown names.
Projection parse_projection(std::string_view name);

/// Longitude in [-pi, pi), latitude in [-pi/2, pi/2].
struct SphereDirection {
    double longitude = 0.0;
    double latitude = 0.0;
};

struct PixelCoord {
    double x = 0.0;
    double y = 0.0;
};

struct WeightMap {
    int width = 0;
    int height = 0;
    std::vector<double> weights;

    double at(int x, int y) const { return weights[static_cast<std::size_t>(y) * width + x]; }
};

/// Inactive-region mask for a packed projection. Throws DataError naming the
/// violated layout constraint when (width, height) does not fit the format.
ActivityMask generate_mask(const ProjectionFormat& format, int width, int height);

/// Throws DataError if the dimensions are not a valid layout for `format`.
void check_layout(const ProjectionFormat& format, int width, int height);

PixelCoord dir_to_erp(const SphereDirection& d, int width, int height);
SphereDirection erp_to_dir(double x, double y, int width, int height);

/// Per-pixel sphere-area weights for an ERP frame.
WeightMap ws_weights_erp(int width, int height);

enum class ResampleFilter { Bilinear, Nearest };

/// Resamples between ERP and CMP or SSP. Inactive target samples are mid-gray.
Frame420 convert(const Frame420& frame, const ProjectionFormat& from, const ProjectionFormat& to, int out_width,
                 int out_height, ResampleFilter filter = ResampleFilter::Bilinear);

/// Target-format location of a sphere direction, in luma pixel units of a
/// `width` x `height` frame. Only CMP and SSP.
PixelCoord dir_to_packed(const ProjectionFormat& format, const SphereDirection& d, int width, int height);

/// Sphere direction of a packed-frame pixel centre; empty for inactive pixels.
std::optional<SphereDirection> packed_to_dir(const ProjectionFormat& format, double x, double y, int width,
                                             int height);

}  // namespace irav

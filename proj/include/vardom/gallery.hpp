#pragma once

#include "vardom/field.hpp"
#include "vardom/grid.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vardom {

/// Region between two graphs over a base interval:
/// { x in (x_lo, x_hi), lower(x) < y < upper(x) }.
struct GraphDomainSpec {
    double x_lo = 0.0;
    double x_hi = 1.0;
    std::function<double(double)> lower;
    std::function<double(double)> upper;
};

/// A named generator of (mask, field) members sharing one grid, together with
/// its documented analytic limit. Members are indexed 1..length.
struct GallerySequence {
    std::string name;
    std::string description;
    std::string limit_note;
    std::vector<std::pair<std::string, std::string>> params;

    GridSpec grid;
    int length = 16;
    std::function<DomainMask(int)> mask_at;
    bool has_fields = false;
    std::function<Field(int)> field_at;

    DomainMask limit_mask;
    std::optional<Field> limit_field;

    bool graph_based = false;
    std::function<GraphDomainSpec(int)> graph_at; // index 0 gives the limit graphs

    std::vector<DomainMask> masks() const;
    std::vector<Field> fields() const;
};

struct GalleryOptions {
    int length = 16;
    double spacing_1d = 1.0 / 256;
    double spacing_2d = 1.0 / 128;
    double blob_target_norm = 0.5; // calibrated L^p norm of every blob-gallery member
    double blob_norm_p = 2.0;
};

/// Channel section {0 < x < 1, |y| < r(x)} rasterized on the given grid.
DomainMask channel_mask(const GridSpec& spec, const std::function<double(double)>& radius);

/// Region between two graphs rasterized on the given grid.
DomainMask two_graphs_mask(const GridSpec& spec, const GraphDomainSpec& graphs);

/// 1D interval mask and 2D axis-aligned box / disk masks (test geometry).
DomainMask interval_mask(const GridSpec& spec, double a, double b);
DomainMask box_mask(const GridSpec& spec, double x0, double x1, double y0, double y1);
DomainMask disk_mask(const GridSpec& spec, double cx, double cy, double r);

/// Two unit squares joined by a horizontal neck of the given width; the
/// geometry whose second Neumann eigenvalue collapses as the neck thins.
DomainMask pinched_squares_mask(const GridSpec& spec, double neck_width, double neck_length);
GridSpec pinched_squares_grid(double spacing);

/// Gallery registry.
struct GalleryInfo {
    std::string name;
    std::string parameters;
    std::string description;
};
std::vector<GalleryInfo> list_galleries();
GallerySequence make_gallery(const std::string& name, const GalleryOptions& opts = {});

} // namespace vardom

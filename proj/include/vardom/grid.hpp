#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vardom {

/// Uniform rectangular grid over a bounded ambient box in 1 or 2 dimensions.
/// Cells are indexed row-major (axis 0 slowest); the cell (i0, i1) has center
/// origin + (i + 1/2) * spacing per axis.
struct GridSpec {
    int dim = 2;
    std::array<double, 2> origin{0.0, 0.0};
    double spacing = 1.0;
    std::array<int, 2> shape{1, 1}; // shape[1] == 1 when dim == 1

    void validate() const;

    std::int64_t cell_count() const {
        return static_cast<std::int64_t>(shape[0]) * (dim == 2 ? shape[1] : 1);
    }
    int stride() const { return dim == 2 ? shape[1] : 1; }
    std::int64_t index(int i0, int i1 = 0) const {
        return static_cast<std::int64_t>(i0) * stride() + i1;
    }
    double center(int axis, int i) const { return origin[axis] + (i + 0.5) * spacing; }
    double extent(int axis) const { return shape[axis] * spacing; }
    double cell_volume() const { return dim == 2 ? spacing * spacing : spacing; }

    bool operator==(const GridSpec& o) const;
};

/// Boolean inside/outside flags over a GridSpec. The discrete stand-in for an
/// open bounded domain: a cell belongs to the domain iff its center does.
class DomainMask {
public:
    DomainMask() = default;
    DomainMask(GridSpec spec, std::vector<std::uint8_t> inside);

    /// Rasterize an analytic membership predicate by center sampling.
    static DomainMask from_predicate(const GridSpec& spec,
                                     const std::function<bool(double, double)>& pred);

    const GridSpec& spec() const { return spec_; }
    const std::vector<std::uint8_t>& flags() const { return inside_; }
    bool inside(std::int64_t flat) const { return inside_[static_cast<std::size_t>(flat)] != 0; }
    bool inside(int i0, int i1) const { return inside(spec_.index(i0, i1)); }
    std::int64_t inside_count() const { return inside_count_; }
    bool empty() const { return inside_count_ == 0; }

    bool operator==(const DomainMask& o) const {
        return spec_ == o.spec_ && inside_ == o.inside_;
    }

    /// Complement within the ambient box.
    DomainMask complement() const;

    /// True if a is a subset of b (same spec required).
    static bool subset(const DomainMask& a, const DomainMask& b);

private:
    GridSpec spec_{};
    std::vector<std::uint8_t> inside_;
    std::int64_t inside_count_ = 0;
};

enum class HausdorffMode { Set, Complement };

/// Volume of the mask: (inside cell count) * spacing^dim.
double measure(const DomainMask& m);

/// Exact Euclidean distance from every cell center to the nearest center of
/// a flagged cell (0 on flagged cells). Two separable lower-envelope passes.
std::vector<double> distance_to(const DomainMask& m);

/// Hausdorff distance between the two cell-center sets (or between their
/// complements within the ambient box). Throws on spec mismatch or an empty
/// operand.
double hausdorff(const DomainMask& a, const DomainMask& b, HausdorffMode mode = HausdorffMode::Set);

/// Outer alpha-enlargement: cells within distance < alpha of the mask, plus
/// the mask itself (so alpha = 0 is the identity).
DomainMask enlarge(const DomainMask& m, double alpha);

/// Inner alpha-core: inside cells at distance >= alpha from the complement.
DomainMask shrink(const DomainMask& m, double alpha);

/// measure(enlarge) - measure(shrink): volume of the alpha-collar around the
/// boundary. Small collars certify a thin boundary.
double collar_measure(const DomainMask& m, double alpha);

struct BoxCountResult {
    double dimension = 0.0;                  // least-squares slope of log N vs log(1/alpha)
    std::vector<double> scales;              // the alpha values actually used
    std::vector<std::int64_t> box_counts;    // N(alpha)
};

/// Box-counting estimate of the boundary dimension. The discrete boundary is
/// the set of inside cells with an outside (or out-of-grid) 4-neighbor; boxes
/// are axis-aligned blocks of ceil(alpha/h) cells. Requires >= 3 scales, all
/// > 2h; throws SolverError if all counts are equal (degenerate fit).
BoxCountResult box_counting_dimension(const DomainMask& m, const std::vector<double>& scales);

struct ContainmentIndex {
    bool never = false;
    int index = 0; // smallest N with containment for all 1-based i > N
};

/// Smallest N such that every member past N is squeezed between the inner and
/// outer alpha-bodies of the limit. With complement_aware set, the same
/// containment is also required of the complements (which detects interior
/// gaps that plain set containment misses).
ContainmentIndex containment_index(const std::vector<DomainMask>& seq, const DomainMask& limit,
                                   double alpha, bool complement_aware = false);

/// Flat index of the nearest inside cell per grid cell (exact Euclidean,
/// ties broken by scan order); -1 everywhere if the mask is empty.
std::vector<std::int64_t> nearest_inside(const DomainMask& m);

/// Connected components of the inside cells under 4-adjacency.
int component_count(const DomainMask& m);
bool is_connected(const DomainMask& m);

/// Number of holes: connected components of the complement that do not touch
/// the ambient-box border.
int hole_count(const DomainMask& m);

} // namespace vardom

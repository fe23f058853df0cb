#include "vardom/gallery.hpp"

#include <cmath>
#include <stdexcept>

namespace vardom {

std::vector<DomainMask> GallerySequence::masks() const {
    std::vector<DomainMask> out;
    out.reserve(static_cast<std::size_t>(length));
    for (int i = 1; i <= length; ++i) out.push_back(mask_at(i));
    return out;
}

std::vector<Field> GallerySequence::fields() const {
    if (!has_fields) throw std::invalid_argument("gallery '" + name + "' has no fields");
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(length));
    for (int i = 1; i <= length; ++i) out.push_back(field_at(i));
    return out;
}

DomainMask channel_mask(const GridSpec& spec, const std::function<double(double)>& radius) {
    for (double x = 0.0; x <= 1.0; x += 1.0 / 64)
        if (!(radius(x) > 0.0))
            throw std::invalid_argument("channel_mask: radius must be positive on [0,1]");
    return DomainMask::from_predicate(spec, [&](double x, double y) {
        return x > 0.0 && x < 1.0 && std::abs(y) < radius(x);
    });
}

DomainMask two_graphs_mask(const GridSpec& spec, const GraphDomainSpec& g) {
    return DomainMask::from_predicate(spec, [&](double x, double y) {
        if (!(x > g.x_lo && x < g.x_hi)) return false;
        return g.lower(x) < y && y < g.upper(x);
    });
}

DomainMask interval_mask(const GridSpec& spec, double a, double b) {
    if (spec.dim != 1) throw std::invalid_argument("interval_mask: grid must be 1D");
    return DomainMask::from_predicate(spec, [&](double x, double) { return x > a && x < b; });
}

DomainMask box_mask(const GridSpec& spec, double x0, double x1, double y0, double y1) {
    return DomainMask::from_predicate(
        spec, [&](double x, double y) { return x > x0 && x < x1 && y > y0 && y < y1; });
}

DomainMask disk_mask(const GridSpec& spec, double cx, double cy, double r) {
    return DomainMask::from_predicate(spec, [&](double x, double y) {
        const double dx = x - cx, dy = y - cy;
        return dx * dx + dy * dy < r * r;
    });
}

GridSpec pinched_squares_grid(double spacing) {
    GridSpec spec;
    spec.dim = 2;
    spec.spacing = spacing;
    spec.origin = {-0.25, -0.25};
    spec.shape = {static_cast<int>(std::lround(3.3 / spacing)),
                  static_cast<int>(std::lround(1.5 / spacing))};
    return spec;
}

DomainMask pinched_squares_mask(const GridSpec& spec, double neck_width, double neck_length) {
    if (!(neck_width > 0.0) || !(neck_length > 0.0))
        throw std::invalid_argument("pinched_squares_mask: positive neck dimensions required");
    const double x_gap_lo = 1.0;
    const double x_gap_hi = 1.0 + neck_length;
    // keep at least one cell row in the neck no matter how thin it is asked to be
    const double w = std::max(neck_width, 1.1 * spec.spacing);
    return DomainMask::from_predicate(spec, [&](double x, double y) {
        if (y <= 0.0 || y >= 1.0) return false;
        if (x > 0.0 && x < x_gap_lo) return true;
        if (x > x_gap_hi && x < x_gap_hi + 1.0) return true;
        return x >= x_gap_lo && x <= x_gap_hi && std::abs(y - 0.5) < w / 2.0;
    });
}

namespace {

GridSpec grid_1d(double lo, double hi, double h) {
    GridSpec spec;
    spec.dim = 1;
    spec.spacing = h;
    spec.origin = {lo, 0.0};
    spec.shape = {static_cast<int>(std::lround((hi - lo) / h)), 1};
    return spec;
}

GridSpec grid_2d(double x_lo, double x_hi, double y_lo, double y_hi, double h) {
    GridSpec spec;
    spec.dim = 2;
    spec.spacing = h;
    spec.origin = {x_lo, y_lo};
    spec.shape = {static_cast<int>(std::lround((x_hi - x_lo) / h)),
                  static_cast<int>(std::lround((y_hi - y_lo) / h))};
    return spec;
}

GallerySequence make_channel(const GalleryOptions& opts) {
    GallerySequence g;
    g.name = "channel";
    g.description = "graph channel |y| < r(x) + 1/i widening perturbation; smooth restricted fields";
    g.limit_note = "channel of radius r(x) = 0.5 + 0.1 x(1-x); field sin(pi x) cos^2(pi y) restricted";
    g.params = {{"delta_i", "1/i"}, {"base_radius", "0.5 + 0.1 x (1-x)"}};
    g.grid = grid_2d(-0.25, 1.25, -1.75, 1.75, opts.spacing_2d);
    g.length = opts.length;
    auto radius = [](int i) {
        return [i](double x) {
            const double base = 0.5 + 0.1 * x * (1.0 - x);
            return i == 0 ? base : base + 1.0 / i;
        };
    };
    auto u = [](double x, double y) {
        const double c = std::cos(M_PI * y);
        return std::sin(M_PI * x) * c * c;
    };
    const GridSpec grid = g.grid;
    g.mask_at = [grid, radius](int i) { return channel_mask(grid, radius(i)); };
    g.has_fields = true;
    g.field_at = [grid, radius, u](int i) {
        return Field::from_function(channel_mask(grid, radius(i)), u);
    };
    g.limit_mask = channel_mask(grid, radius(0));
    g.limit_field = Field::from_function(g.limit_mask, u);
    g.graph_based = true;
    g.graph_at = [radius](int i) {
        GraphDomainSpec s;
        s.x_lo = 0.0;
        s.x_hi = 1.0;
        auto r = radius(i);
        s.lower = [r](double x) { return -r(x); };
        s.upper = r;
        return s;
    };
    return g;
}

GallerySequence make_two_graphs(const GalleryOptions& opts) {
    GallerySequence g;
    g.name = "cusp";
    g.description = "two-graph domain 0 < y < (x-1/2)^2 + 1/i; the limit pinches to zero thickness";
    g.limit_note = "region 0 < y < (x-1/2)^2: zero thickness at x = 1/2 (not a Lipschitz domain)";
    g.params = {{"thickness_i", "(x-1/2)^2 + 1/i"}};
    g.grid = grid_2d(-0.25, 1.25, -0.25, 1.5, opts.spacing_2d);
    g.length = opts.length;
    auto graphs = [](int i) {
        GraphDomainSpec s;
        s.x_lo = 0.0;
        s.x_hi = 1.0;
        s.lower = [](double) { return 0.0; };
        s.upper = [i](double x) {
            const double t = (x - 0.5) * (x - 0.5);
            return i == 0 ? t : t + 1.0 / i;
        };
        return s;
    };
    const GridSpec grid = g.grid;
    g.mask_at = [grid, graphs](int i) { return two_graphs_mask(grid, graphs(i)); };
    g.limit_mask = two_graphs_mask(grid, graphs(0));
    g.graph_based = true;
    g.graph_at = graphs;
    return g;
}

GallerySequence make_split_interval(const GalleryOptions& opts) {
    GallerySequence g;
    g.name = "split_interval";
    g.description = "(0,1) u (1+1/i, 2) with field 1 on the left part; the gap never leaves the complement";
    g.limit_note = "interval (0,2); the pointwise candidate limit is the indicator of (0,1), "
                   "which has no weak derivative across x = 1";
    g.params = {{"gap_i", "(1, 1+1/i)"}};
    g.grid = grid_1d(-0.5, 2.5, opts.spacing_1d);
    g.length = opts.length;
    const GridSpec grid = g.grid;
    g.mask_at = [grid](int i) {
        const double gap = 1.0 + 1.0 / i;
        return DomainMask::from_predicate(
            grid, [gap](double x, double) { return (x > 0.0 && x < 1.0) || (x > gap && x < 2.0); });
    };
    g.has_fields = true;
    g.field_at = [grid, mask_at = g.mask_at](int i) {
        return Field::from_function(mask_at(i), [](double x, double) { return x < 1.0 ? 1.0 : 0.0; });
    };
    g.limit_mask = interval_mask(grid, 0.0, 2.0);
    g.limit_field = Field::from_function(g.limit_mask, [](double x, double) { return x < 1.0 ? 1.0 : 0.0; });
    return g;
}

// i fingers of alternating sign above a main slab, each attached by a thin
// neck. Finger heights are snapped per column count so the total blob measure
// equals target_norm^p; the field is 0 on the slab, ramps through the necks
// and is +-1 on the fingers.
struct BlobLayout {
    std::vector<std::array<int, 2>> finger_cols; // [col_lo, col_hi)
    std::vector<int> finger_rows;                // rows above the neck band
    std::vector<std::array<int, 2>> neck_cols;
};

BlobLayout blob_layout(const GridSpec& spec, int i, double target_norm, double p) {
    const double h = spec.spacing;
    BlobLayout lay;
    const double per_blob = std::pow(target_norm, p) / i;
    for (int j = 1; j <= i; ++j) {
        const double xc = (j - 0.5) / i;
        const double w = 0.4 / i;
        int c_lo = static_cast<int>(std::ceil((xc - w / 2 - spec.origin[0]) / h - 0.5));
        int c_hi = static_cast<int>(std::floor((xc + w / 2 - spec.origin[0]) / h - 0.5)) + 1;
        if (c_hi <= c_lo) { // degenerate width: take the single nearest column
            c_lo = static_cast<int>(std::lround((xc - spec.origin[0]) / h - 0.5));
            c_hi = c_lo + 1;
        }
        const int cols = c_hi - c_lo;
        const int rows = std::max(1, static_cast<int>(std::lround(per_blob / (cols * h * h))));
        lay.finger_cols.push_back({c_lo, c_hi});
        lay.finger_rows.push_back(rows);

        const double wn = std::max(0.3 * w, 2.0 * h);
        int n_lo = static_cast<int>(std::ceil((xc - wn / 2 - spec.origin[0]) / h - 0.5));
        int n_hi = static_cast<int>(std::floor((xc + wn / 2 - spec.origin[0]) / h - 0.5)) + 1;
        if (n_hi <= n_lo) {
            n_lo = static_cast<int>(std::lround((xc - spec.origin[0]) / h - 0.5));
            n_hi = n_lo + 1;
        }
        lay.neck_cols.push_back({std::max(n_lo, c_lo), std::min(n_hi, c_hi)});
    }
    return lay;
}

GallerySequence make_blobs(const GalleryOptions& opts) {
    GallerySequence g;
    g.name = "blobs";
    g.description = "i alternating-sign fingers over a slab, joined by thin necks; fixed L^p norm, "
                    "vanishing weak pairings, no strong limit";
    g.limit_note = "main slab (0,1) x (0, 0.4) with the zero field; member norms are calibrated to "
                   "target_norm by snapping finger heights to whole cells";
    g.params = {{"blob_count", "i"}, {"target_norm", std::to_string(opts.blob_target_norm)}};
    g.grid = grid_2d(-0.25, 1.25, -0.25, 1.5, opts.spacing_2d);
    g.length = opts.length;
    const GridSpec grid = g.grid;
    const double h = grid.spacing;
    const double tn = opts.blob_target_norm;
    const double p = opts.blob_norm_p;

    const int slab_row_lo = static_cast<int>(std::lround((0.0 - grid.origin[1]) / h));
    const int slab_row_hi = static_cast<int>(std::lround((0.4 - grid.origin[1]) / h));
    const int neck_row_hi = static_cast<int>(std::lround((0.5 - grid.origin[1]) / h));
    const int col0 = static_cast<int>(std::lround((0.0 - grid.origin[0]) / h));
    const int col1 = static_cast<int>(std::lround((1.0 - grid.origin[0]) / h));

    auto build = [=](int i, bool want_field) -> std::pair<DomainMask, std::vector<double>> {
        const auto lay = blob_layout(grid, i, tn, p);
        std::vector<std::uint8_t> flags(static_cast<std::size_t>(grid.cell_count()), 0);
        std::vector<double> full(static_cast<std::size_t>(grid.cell_count()), 0.0);
        for (int c = col0; c < col1; ++c)
            for (int r = slab_row_lo; r < slab_row_hi; ++r)
                flags[static_cast<std::size_t>(grid.index(c, r))] = 1;
        for (int j = 0; j < i; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            for (int c = lay.neck_cols[static_cast<std::size_t>(j)][0]; c < lay.neck_cols[static_cast<std::size_t>(j)][1]; ++c) {
                for (int r = slab_row_hi; r < neck_row_hi; ++r) {
                    flags[static_cast<std::size_t>(grid.index(c, r))] = 1;
                    const double frac = (r - slab_row_hi + 0.5) / (neck_row_hi - slab_row_hi);
                    full[static_cast<std::size_t>(grid.index(c, r))] = sign * frac;
                }
            }
            for (int c = lay.finger_cols[static_cast<std::size_t>(j)][0]; c < lay.finger_cols[static_cast<std::size_t>(j)][1]; ++c) {
                for (int r = neck_row_hi; r < neck_row_hi + lay.finger_rows[static_cast<std::size_t>(j)]; ++r) {
                    flags[static_cast<std::size_t>(grid.index(c, r))] = 1;
                    full[static_cast<std::size_t>(grid.index(c, r))] = sign;
                }
            }
        }
        DomainMask mask(grid, std::move(flags));
        std::vector<double> vals;
        if (want_field) {
            vals.reserve(static_cast<std::size_t>(mask.inside_count()));
            const auto& fl = mask.flags();
            for (std::size_t c = 0; c < fl.size(); ++c)
                if (fl[c]) vals.push_back(full[c]);
        }
        return {std::move(mask), std::move(vals)};
    };

    g.mask_at = [build](int i) { return build(i, false).first; };
    g.has_fields = true;
    g.field_at = [build](int i) {
        auto [mask, vals] = build(i, true);
        return Field(std::move(mask), std::move(vals));
    };
    g.limit_mask = box_mask(grid, 0.0, 1.0, 0.0, 0.4);
    g.limit_field = Field::zeros(g.limit_mask);
    return g;
}

GallerySequence make_pinch(const GalleryOptions& opts) {
    GallerySequence g;
    g.name = "pinch";
    g.description = "two unit squares whose connecting neck thins (0.7/i^1.8) and stretches "
                    "(0.2 to 0.8); the mean-oscillation constant blows up along the sequence";
    g.limit_note = "two unit squares joined by a single-cell neck of length 0.8 (thinnest "
                   "representable pinch)";
    g.params = {{"neck_width_i", "0.7 / i^1.8"}, {"neck_length_i", "0.2 + 0.6 (i-1)/(N-1)"}};
    // coarser default grid: the pinched eigenproblems are the most
    // ill-conditioned solves in the suite
    g.grid = pinched_squares_grid(opts.spacing_2d * 2.0);
    g.length = std::min(opts.length, 10);
    const GridSpec grid = g.grid;
    const int n = g.length;
    auto width = [](int i) { return 0.7 / std::pow(static_cast<double>(i), 1.8); };
    auto len = [n](int i) { return n > 1 ? 0.2 + 0.6 * (i - 1) / (n - 1.0) : 0.2; };
    g.mask_at = [grid, width, len](int i) {
        return pinched_squares_mask(grid, width(i), len(i));
    };
    g.limit_mask = pinched_squares_mask(grid, 1e-12, 0.8);
    return g;
}

GallerySequence make_annuli(const GalleryOptions& opts) {
    GallerySequence g;
    g.name = "annuli";
    g.description = "unit disk minus a closed disk of radius 1/(i+1); members have a hole, the limit "
                    "does not";
    g.limit_note = "unit disk; member j uses inner radius 1/(j+1) so the first member is nondegenerate";
    g.params = {{"inner_radius", "1/(i+1)"}};
    g.grid = grid_2d(-1.25, 1.25, -1.25, 1.25, opts.spacing_2d);
    g.length = opts.length;
    const GridSpec grid = g.grid;
    auto u = [](double x, double y) { return 0.5 * (x + 1.0) * (0.5 - 0.3 * y); };
    auto mask = [grid](int i) {
        const double r = 1.0 / (i + 1);
        return DomainMask::from_predicate(grid, [r](double x, double y) {
            const double d2 = x * x + y * y;
            return d2 < 1.0 && d2 > r * r;
        });
    };
    g.mask_at = mask;
    g.has_fields = true;
    g.field_at = [mask, u](int i) { return Field::from_function(mask(i), u); };
    g.limit_mask = disk_mask(grid, 0.0, 0.0, 1.0);
    g.limit_field = Field::from_function(g.limit_mask, u);
    return g;
}

GallerySequence make_oscillation(const GalleryOptions& opts) {
    GallerySequence g;
    g.name = "oscillation";
    g.description = "sin(i pi x) on the fixed interval (0,1): weak null sequence with constant norm";
    g.limit_note = "interval (0,1) with the zero field";
    g.params = {{"field_i", "sin(i pi x)"}};
    g.grid = grid_1d(-0.25, 1.25, opts.spacing_1d);
    g.length = opts.length;
    const GridSpec grid = g.grid;
    const DomainMask mask = interval_mask(grid, 0.0, 1.0);
    g.mask_at = [mask](int) { return mask; };
    g.has_fields = true;
    g.field_at = [mask](int i) {
        return Field::from_function(mask, [i](double x, double) { return std::sin(i * M_PI * x); });
    };
    g.limit_mask = mask;
    g.limit_field = Field::zeros(mask);
    return g;
}

} // namespace

std::vector<GalleryInfo> list_galleries() {
    return {
        {"channel", "delta_i = 1/i", "widening graph channel with smooth restricted fields"},
        {"cusp", "thickness_i = (x-1/2)^2 + 1/i", "two-graph domain pinching to zero thickness"},
        {"split_interval", "gap_i = (1, 1+1/i)", "disconnected members whose gap never closes in the complement"},
        {"blobs", "blob_count = i", "alternating-sign fingers with calibrated norm and no strong limit"},
        {"pinch", "neck_width_i = 0.7/i^1.8", "two squares with a thinning, stretching neck (mean-oscillation blow-up)"},
        {"annuli", "inner_radius = 1/(i+1)", "disk with a shrinking hole (topology change)"},
        {"oscillation", "field_i = sin(i pi x)", "weak null oscillations on a fixed interval"},
    };
}

GallerySequence make_gallery(const std::string& name, const GalleryOptions& opts) {
    if (name == "channel") return make_channel(opts);
    if (name == "cusp") return make_two_graphs(opts);
    if (name == "split_interval") return make_split_interval(opts);
    if (name == "blobs") return make_blobs(opts);
    if (name == "pinch") return make_pinch(opts);
    if (name == "annuli") return make_annuli(opts);
    if (name == "oscillation") return make_oscillation(opts);
    throw std::invalid_argument("make_gallery: unknown gallery '" + name + "'");
}

} // namespace vardom

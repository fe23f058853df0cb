#include "vardom/grid.hpp"
#include "vardom/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vardom {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

void GridSpec::validate() const {
    if (dim != 1 && dim != 2) throw std::invalid_argument("GridSpec: dim must be 1 or 2");
    if (!(spacing > 0.0)) throw std::invalid_argument("GridSpec: spacing must be positive");
    if (shape[0] < 1 || (dim == 2 && shape[1] < 1))
        throw std::invalid_argument("GridSpec: every shape entry must be >= 1");
    if (dim == 1 && shape[1] != 1)
        throw std::invalid_argument("GridSpec: shape[1] must be 1 for dim == 1");
}

bool GridSpec::operator==(const GridSpec& o) const {
    return dim == o.dim && origin == o.origin && spacing == o.spacing && shape == o.shape;
}

DomainMask::DomainMask(GridSpec spec, std::vector<std::uint8_t> inside)
    : spec_(spec), inside_(std::move(inside)) {
    spec_.validate();
    if (static_cast<std::int64_t>(inside_.size()) != spec_.cell_count())
        throw std::invalid_argument("DomainMask: flag array length must equal cell count");
    for (auto f : inside_)
        if (f) ++inside_count_;
}

DomainMask DomainMask::from_predicate(const GridSpec& spec,
                                      const std::function<bool(double, double)>& pred) {
    spec.validate();
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(spec.cell_count()), 0);
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    for (int i = 0; i < n0; ++i) {
        const double x = spec.center(0, i);
        for (int j = 0; j < n1; ++j) {
            const double y = spec.dim == 2 ? spec.center(1, j) : 0.0;
            if (pred(x, y)) flags[static_cast<std::size_t>(spec.index(i, j))] = 1;
        }
    }
    return DomainMask(spec, std::move(flags));
}

DomainMask DomainMask::complement() const {
    std::vector<std::uint8_t> flags(inside_.size());
    for (std::size_t i = 0; i < inside_.size(); ++i) flags[i] = inside_[i] ? 0 : 1;
    return DomainMask(spec_, std::move(flags));
}

bool DomainMask::subset(const DomainMask& a, const DomainMask& b) {
    if (!(a.spec() == b.spec())) throw std::invalid_argument("subset: spec mismatch");
    for (std::size_t i = 0; i < a.inside_.size(); ++i)
        if (a.inside_[i] && !b.inside_[i]) return false;
    return true;
}

double measure(const DomainMask& m) {
    return static_cast<double>(m.inside_count()) * m.spec().cell_volume();
}

namespace {

// "No source" sentinel: large, exactly representable, and far above any
// squared cell distance on the grids we use.
constexpr double kBig = 1e12;

// 1D squared-distance transform (lower envelope of parabolas), cell units.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    d.assign(static_cast<std::size_t>(n), 0.0);
    v.assign(static_cast<std::size_t>(n), 0);
    z.assign(static_cast<std::size_t>(n) + 1, 0.0);
    auto intersect = [&f](int q, int p) {
        return ((f[static_cast<std::size_t>(q)] + static_cast<double>(q) * q) -
                (f[static_cast<std::size_t>(p)] + static_cast<double>(p) * p)) /
               (2.0 * (q - p));
    };
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        double s = intersect(q, v[static_cast<std::size_t>(k)]);
        while (s <= z[static_cast<std::size_t>(k)]) {
            --k;
            s = intersect(q, v[static_cast<std::size_t>(k)]);
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = s;
        z[static_cast<std::size_t>(k) + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
        const int p = v[static_cast<std::size_t>(k)];
        d[static_cast<std::size_t>(q)] = static_cast<double>(q - p) * (q - p) + f[static_cast<std::size_t>(p)];
    }
}

// Squared Euclidean distance (cell units) to the nearest flagged cell.
std::vector<double> squared_distance_cells(const GridSpec& spec,
                                           const std::vector<std::uint8_t>& flags) {
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    std::vector<double> dist(flags.size(), kBig);
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i]) dist[i] = 0.0;

    std::vector<double> line, out;
    std::vector<int> v;
    std::vector<double> z;

    // pass along axis 1 (contiguous)
    if (n1 > 1) {
        line.resize(static_cast<std::size_t>(n1));
        for (int i = 0; i < n0; ++i) {
            double* row = dist.data() + spec.index(i, 0);
            std::copy(row, row + n1, line.begin());
            edt_1d(line, out, v, z);
            std::copy(out.begin(), out.end(), row);
        }
    }
    // pass along axis 0
    if (n0 > 1) {
        line.resize(static_cast<std::size_t>(n0));
        for (int j = 0; j < n1; ++j) {
            for (int i = 0; i < n0; ++i) line[static_cast<std::size_t>(i)] = dist[static_cast<std::size_t>(spec.index(i, j))];
            edt_1d(line, out, v, z);
            for (int i = 0; i < n0; ++i) dist[static_cast<std::size_t>(spec.index(i, j))] = out[static_cast<std::size_t>(i)];
        }
    }
    return dist;
}

} // namespace

std::vector<double> distance_to(const DomainMask& m) {
    auto d2 = squared_distance_cells(m.spec(), m.flags());
    const double h = m.spec().spacing;
    for (auto& v : d2) v = v >= kBig ? kInf : std::sqrt(v) * h;
    return d2;
}

double hausdorff(const DomainMask& a, const DomainMask& b, HausdorffMode mode) {
    if (!(a.spec() == b.spec())) throw std::invalid_argument("hausdorff: spec mismatch");
    const DomainMask& ma = mode == HausdorffMode::Set ? a : a.complement();
    const DomainMask& mb = mode == HausdorffMode::Set ? b : b.complement();
    if (ma.empty() || mb.empty())
        throw std::invalid_argument("hausdorff: empty operand");
    const auto da = distance_to(ma);
    const auto db = distance_to(mb);
    double sup = 0.0;
    const auto& fa = ma.flags();
    const auto& fb = mb.flags();
    for (std::size_t i = 0; i < fa.size(); ++i) {
        if (fa[i]) sup = std::max(sup, db[i]);
        if (fb[i]) sup = std::max(sup, da[i]);
    }
    return sup;
}

// Cell centers sit half a cell away from the region they represent, so the
// region distance is the center distance less h/2. Without this correction
// the enlarge and shrink biases stack up in collar measures.

DomainMask enlarge(const DomainMask& m, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("enlarge: alpha must be >= 0");
    const auto d = distance_to(m);
    const double half = 0.5 * m.spec().spacing;
    const auto& in = m.flags();
    std::vector<std::uint8_t> flags(in.size(), 0);
    for (std::size_t i = 0; i < in.size(); ++i)
        flags[i] = (in[i] || d[i] - half < alpha) ? 1 : 0;
    return DomainMask(m.spec(), std::move(flags));
}

DomainMask shrink(const DomainMask& m, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("shrink: alpha must be >= 0");
    const auto d = distance_to(m.complement());
    const double half = 0.5 * m.spec().spacing;
    const auto& in = m.flags();
    std::vector<std::uint8_t> flags(in.size(), 0);
    for (std::size_t i = 0; i < in.size(); ++i)
        flags[i] = (in[i] && d[i] - half >= alpha) ? 1 : 0;
    return DomainMask(m.spec(), std::move(flags));
}

double collar_measure(const DomainMask& m, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("collar_measure: alpha must be > 0");
    return measure(enlarge(m, alpha)) - measure(shrink(m, alpha));
}

namespace {

std::vector<std::uint8_t> discrete_boundary(const DomainMask& m) {
    const auto& spec = m.spec();
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    std::vector<std::uint8_t> bd(m.flags().size(), 0);
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            if (!m.inside(i, j)) continue;
            bool edge = false;
            if (i == 0 || !m.inside(i - 1, j)) edge = true;
            if (i == n0 - 1 || !m.inside(i + 1, j)) edge = true;
            if (spec.dim == 2) {
                if (j == 0 || !m.inside(i, j - 1)) edge = true;
                if (j == n1 - 1 || !m.inside(i, j + 1)) edge = true;
            }
            if (edge) bd[static_cast<std::size_t>(spec.index(i, j))] = 1;
        }
    }
    return bd;
}

} // namespace

BoxCountResult box_counting_dimension(const DomainMask& m, const std::vector<double>& scales) {
    const double h = m.spec().spacing;
    if (scales.size() < 3) throw std::invalid_argument("box_counting_dimension: need >= 3 scales");
    for (double a : scales)
        if (!(a > 2.0 * h))
            throw std::invalid_argument("box_counting_dimension: every scale must exceed 2h");

    const auto bd = discrete_boundary(m);
    const auto& spec = m.spec();
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;

    BoxCountResult res;
    for (double alpha : scales) {
        const int s = std::max(1, static_cast<int>(std::lround(alpha / h)));
        const int b0 = (n0 + s - 1) / s;
        const int b1 = (n1 + s - 1) / s;
        std::vector<std::uint8_t> hit(static_cast<std::size_t>(b0) * b1, 0);
        for (int i = 0; i < n0; ++i)
            for (int j = 0; j < n1; ++j)
                if (bd[static_cast<std::size_t>(spec.index(i, j))])
                    hit[static_cast<std::size_t>(i / s) * b1 + j / s] = 1;
        std::int64_t count = 0;
        for (auto v : hit) count += v;
        res.scales.push_back(static_cast<double>(s) * h);
        res.box_counts.push_back(count);
    }

    bool all_equal = true;
    for (std::size_t i = 1; i < res.box_counts.size(); ++i)
        if (res.box_counts[i] != res.box_counts[0]) all_equal = false;
    if (all_equal) throw SolverError("box_counting_dimension: degenerate fit, all box counts equal");
    for (auto c : res.box_counts)
        if (c == 0) throw SolverError("box_counting_dimension: empty boundary at some scale");

    // least squares of log N against log(1/alpha)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(res.scales.size());
    for (std::size_t i = 0; i < res.scales.size(); ++i) {
        const double x = std::log(1.0 / res.scales[i]);
        const double y = std::log(static_cast<double>(res.box_counts[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    res.dimension = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return res;
}

ContainmentIndex containment_index(const std::vector<DomainMask>& seq, const DomainMask& limit,
                                   double alpha, bool complement_aware) {
    if (seq.empty()) throw std::invalid_argument("containment_index: empty sequence");
    for (const auto& m : seq)
        if (!(m.spec() == limit.spec()))
            throw std::invalid_argument("containment_index: spec mismatch");

    const DomainMask outer = enlarge(limit, alpha);
    const DomainMask inner = shrink(limit, alpha);
    const DomainMask co = complement_aware ? enlarge(limit.complement(), alpha) : DomainMask{};
    const DomainMask ci = complement_aware ? shrink(limit.complement(), alpha) : DomainMask{};

    auto contained = [&](const DomainMask& m) {
        bool ok = DomainMask::subset(m, outer) && DomainMask::subset(inner, m);
        if (ok && complement_aware) {
            const DomainMask mc = m.complement();
            ok = DomainMask::subset(mc, co) && DomainMask::subset(ci, mc);
        }
        return ok;
    };

    // walk backwards: last failing 1-based position determines N
    int last_fail = 0; // 0 means none fail
    for (int i = 0; i < static_cast<int>(seq.size()); ++i)
        if (!contained(seq[static_cast<std::size_t>(i)])) last_fail = i + 1;
    if (last_fail == static_cast<int>(seq.size())) return {true, 0};
    return {false, last_fail};
}

std::vector<std::int64_t> nearest_inside(const DomainMask& m) {
    const auto& spec = m.spec();
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    std::vector<std::int64_t> nearest(static_cast<std::size_t>(spec.cell_count()), -1);
    if (m.empty()) return nearest;

    // per-row nearest flagged cell along axis 1 (exact in 1D)
    std::vector<double> row_d2(static_cast<std::size_t>(spec.cell_count()), kBig);
    std::vector<int> row_src(static_cast<std::size_t>(spec.cell_count()), -1);
    for (int i = 0; i < n0; ++i) {
        int last = -1;
        for (int j = 0; j < n1; ++j) {
            if (m.inside(i, j)) last = j;
            if (last >= 0) row_src[static_cast<std::size_t>(spec.index(i, j))] = last;
        }
        last = -1;
        for (int j = n1 - 1; j >= 0; --j) {
            if (m.inside(i, j)) last = j;
            const std::size_t c = static_cast<std::size_t>(spec.index(i, j));
            const int fwd = row_src[c];
            int pick = fwd;
            if (last >= 0 && (fwd < 0 || last - j < j - fwd)) pick = last;
            row_src[c] = pick;
            if (pick >= 0) row_d2[c] = static_cast<double>(j - pick) * (j - pick);
        }
    }

    // axis-0 lower envelope with the winning parabola tracked
    std::vector<double> f(static_cast<std::size_t>(n0)), z(static_cast<std::size_t>(n0) + 1);
    std::vector<int> v(static_cast<std::size_t>(n0));
    for (int j = 0; j < n1; ++j) {
        for (int i = 0; i < n0; ++i) f[static_cast<std::size_t>(i)] = row_d2[static_cast<std::size_t>(spec.index(i, j))];
        auto intersect = [&f](int q, int pp) {
            return ((f[static_cast<std::size_t>(q)] + static_cast<double>(q) * q) -
                    (f[static_cast<std::size_t>(pp)] + static_cast<double>(pp) * pp)) /
                   (2.0 * (q - pp));
        };
        int k = 0;
        v[0] = 0;
        z[0] = -kInf;
        z[1] = kInf;
        for (int q = 1; q < n0; ++q) {
            double s = intersect(q, v[static_cast<std::size_t>(k)]);
            while (s <= z[static_cast<std::size_t>(k)]) {
                --k;
                s = intersect(q, v[static_cast<std::size_t>(k)]);
            }
            ++k;
            v[static_cast<std::size_t>(k)] = q;
            z[static_cast<std::size_t>(k)] = s;
            z[static_cast<std::size_t>(k) + 1] = kInf;
        }
        k = 0;
        for (int q = 0; q < n0; ++q) {
            while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
            const int win = v[static_cast<std::size_t>(k)];
            const int sj = row_src[static_cast<std::size_t>(spec.index(win, j))];
            if (sj >= 0)
                nearest[static_cast<std::size_t>(spec.index(q, j))] = spec.index(win, sj);
        }
    }
    return nearest;
}

namespace {

// flood fill over flagged cells, 4-adjacency; returns component label per cell
// (-1 off the flag set) and the component count.
int label_components(const GridSpec& spec, const std::vector<std::uint8_t>& flags,
                     std::vector<int>& label) {
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    label.assign(flags.size(), -1);
    int next = 0;
    std::vector<std::int64_t> stack;
    for (std::int64_t start = 0; start < static_cast<std::int64_t>(flags.size()); ++start) {
        if (!flags[static_cast<std::size_t>(start)] || label[static_cast<std::size_t>(start)] >= 0) continue;
        stack.push_back(start);
        label[static_cast<std::size_t>(start)] = next;
        while (!stack.empty()) {
            const std::int64_t c = stack.back();
            stack.pop_back();
            const int i = static_cast<int>(c / spec.stride());
            const int j = static_cast<int>(c % spec.stride());
            const std::array<std::array<int, 2>, 4> nbrs{{{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}}};
            for (const auto& nb : nbrs) {
                if (nb[0] < 0 || nb[0] >= n0 || nb[1] < 0 || nb[1] >= n1) continue;
                const std::int64_t f = spec.index(nb[0], nb[1]);
                if (flags[static_cast<std::size_t>(f)] && label[static_cast<std::size_t>(f)] < 0) {
                    label[static_cast<std::size_t>(f)] = next;
                    stack.push_back(f);
                }
            }
        }
        ++next;
    }
    return next;
}

} // namespace

int component_count(const DomainMask& m) {
    std::vector<int> label;
    return label_components(m.spec(), m.flags(), label);
}

bool is_connected(const DomainMask& m) { return component_count(m) == 1; }

int hole_count(const DomainMask& m) {
    const auto comp = m.complement();
    std::vector<int> label;
    const int n = label_components(m.spec(), comp.flags(), label);
    if (n == 0) return 0;
    std::vector<std::uint8_t> touches(static_cast<std::size_t>(n), 0);
    const auto& spec = m.spec();
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            if (i != 0 && i != n0 - 1 && j != 0 && j != n1 - 1) continue;
            const int l = label[static_cast<std::size_t>(spec.index(i, j))];
            if (l >= 0) touches[static_cast<std::size_t>(l)] = 1;
        }
    }
    int holes = 0;
    for (auto t : touches)
        if (!t) ++holes;
    return holes;
}

} // namespace vardom

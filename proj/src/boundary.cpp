#include "vardom/boundary.hpp"
#include "vardom/util.hpp"

#include <cmath>
#include <stdexcept>

namespace vardom {

TraceChart TraceChart::from_graph(const GraphDomainSpec& graphs, int n_samples, bool top) {
    if (n_samples < 2) throw std::invalid_argument("TraceChart: need >= 2 samples");
    TraceChart c;
    c.param_step = (graphs.x_hi - graphs.x_lo) / n_samples;
    c.inward = top ? -1.0 : 1.0;
    for (int k = 0; k < n_samples; ++k) {
        const double x = graphs.x_lo + (k + 0.5) * c.param_step;
        c.param.push_back(x);
        c.height.push_back(top ? graphs.upper(x) : graphs.lower(x));
    }
    return c;
}

namespace {

// Bilinear interpolation of inside-cell values with weight renormalization;
// returns nothing when no inside cell carries weight.
std::optional<double> interp_inside(const DomainMask& m, const std::vector<double>& full, double x,
                                    double y) {
    const auto& spec = m.spec();
    const double h = spec.spacing;
    const double fx = (x - spec.origin[0]) / h - 0.5;
    const double fy = spec.dim == 2 ? (y - spec.origin[1]) / h - 0.5 : 0.0;
    const int i0 = static_cast<int>(std::floor(fx));
    const int j0 = spec.dim == 2 ? static_cast<int>(std::floor(fy)) : 0;
    const double tx = fx - i0;
    const double ty = fy - j0;

    double acc = 0.0, wsum = 0.0;
    for (int di = 0; di <= 1; ++di) {
        const int i = i0 + di;
        if (i < 0 || i >= spec.shape[0]) continue;
        const double wx = di == 0 ? 1.0 - tx : tx;
        if (spec.dim == 1) {
            if (wx > 0.0 && m.inside(i, 0)) {
                acc += wx * full[static_cast<std::size_t>(spec.index(i, 0))];
                wsum += wx;
            }
            continue;
        }
        for (int dj = 0; dj <= 1; ++dj) {
            const int j = j0 + dj;
            if (j < 0 || j >= spec.shape[1]) continue;
            const double w = wx * (dj == 0 ? 1.0 - ty : ty);
            if (w > 0.0 && m.inside(i, j)) {
                acc += w * full[static_cast<std::size_t>(spec.index(i, j))];
                wsum += w;
            }
        }
    }
    if (wsum <= 0.0) return std::nullopt;
    return acc / wsum;
}

} // namespace

std::vector<double> trace(const Field& f, const TraceChart& chart) {
    const auto& m = f.domain();
    const double h = m.spec().spacing;
    const auto full = f.scatter();
    std::vector<double> out;
    out.reserve(chart.param.size());
    for (std::size_t k = 0; k < chart.param.size(); ++k) {
        const double x = chart.param[k];
        const double y = chart.height[k] + chart.inward * h;
        const auto v = interp_inside(m, full, x, y);
        if (!v)
            throw std::invalid_argument("trace: chart point at x = " + format_double(x) +
                                        " has no inside neighbors");
        out.push_back(*v);
    }
    return out;
}

double trace_lp_norm(const std::vector<double>& values, const TraceChart& chart, double p) {
    if (p < 1.0) throw std::invalid_argument("trace_lp_norm: p must be >= 1");
    double acc = 0.0;
    for (double v : values) acc += std::pow(std::abs(v), p);
    return std::pow(acc * chart.param_step, 1.0 / p);
}

TraceConvergenceResult trace_convergence(const std::vector<Field>& fields,
                                         const std::vector<TraceChart>& charts,
                                         const Field& limit_field, const TraceChart& limit_chart,
                                         double p, double tol) {
    if (fields.size() != charts.size())
        throw std::invalid_argument("trace_convergence: one chart per field required");
    const int cols = static_cast<int>(limit_chart.param.size());

    // column-wise samples; a column is kept only if every chart accepts it
    auto sample_columns = [cols](const Field& f, const TraceChart& c) {
        std::vector<std::optional<double>> out(static_cast<std::size_t>(cols));
        const auto full = f.scatter();
        const double h = f.domain().spec().spacing;
        for (int k = 0; k < cols; ++k)
            out[static_cast<std::size_t>(k)] =
                interp_inside(f.domain(), full, c.param[static_cast<std::size_t>(k)],
                              c.height[static_cast<std::size_t>(k)] + c.inward * h);
        return out;
    };

    std::vector<std::vector<std::optional<double>>> member(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (static_cast<int>(charts[i].param.size()) != cols)
            throw std::invalid_argument("trace_convergence: charts must share the parameter grid");
        member[i] = sample_columns(fields[i], charts[i]);
    }
    const auto lim = sample_columns(limit_field, limit_chart);

    std::vector<bool> valid(static_cast<std::size_t>(cols), true);
    for (int k = 0; k < cols; ++k) {
        if (!lim[static_cast<std::size_t>(k)]) valid[static_cast<std::size_t>(k)] = false;
        for (const auto& tr : member)
            if (!tr[static_cast<std::size_t>(k)]) valid[static_cast<std::size_t>(k)] = false;
    }

    TraceConvergenceResult res;
    res.tol = tol;
    res.total_columns = cols;
    for (bool v : valid)
        if (v) ++res.valid_columns;
    res.partial = res.valid_columns < cols;
    if (res.valid_columns == 0)
        throw std::invalid_argument("trace_convergence: every chart column was refused");

    for (const auto& tr : member) {
        double acc = 0.0;
        for (int k = 0; k < cols; ++k)
            if (valid[static_cast<std::size_t>(k)])
                acc += std::pow(std::abs(*tr[static_cast<std::size_t>(k)] - *lim[static_cast<std::size_t>(k)]), p);
        res.distances.push_back(std::pow(acc * limit_chart.param_step, 1.0 / p));
    }
    const std::size_t tail = res.distances.size() - (res.distances.size() + 1) / 2;
    res.converged = true;
    for (std::size_t i = tail; i < res.distances.size(); ++i)
        if (res.distances[i] >= tol) res.converged = false;
    return res;
}

double trace_norm_bound(const Field& f, const TraceChart& chart, double p) {
    const double denom = wkp_norm(f, 1, p);
    if (denom == 0.0) throw std::invalid_argument("trace_norm_bound: zero field");
    return trace_lp_norm(trace(f, chart), chart, p) / denom;
}

Field inner_cutoff(const Field& u, double epsilon) {
    const auto& m = u.domain();
    const double h = m.spec().spacing;
    if (!(epsilon > 4.0 * h))
        throw std::invalid_argument("inner_cutoff: epsilon must exceed 4h");
    const auto d = distance_to(m.complement());

    const double zero_band = epsilon + 2.0 * h; // widened so the support clears shrink(m, epsilon)
    std::vector<double> vals;
    vals.reserve(u.values().size());
    std::size_t k = 0;
    const auto& flags = m.flags();
    for (std::size_t c = 0; c < flags.size(); ++c) {
        if (!flags[c]) continue;
        const double t = (d[c] - zero_band) / epsilon;
        double psi = 0.0;
        if (t >= 1.0) {
            psi = 1.0;
        } else if (t > 0.0) {
            psi = t * t * (3.0 - 2.0 * t);
        }
        vals.push_back(u.values()[k] * psi);
        ++k;
    }
    return Field(m, std::move(vals));
}

Field transfer_zero_boundary(const Field& u, const DomainMask& target, double epsilon) {
    const DomainMask core = shrink(u.domain(), epsilon);
    if (!DomainMask::subset(core, target))
        throw std::invalid_argument(
            "transfer_zero_boundary: target does not contain shrink(domain, epsilon)");
    const Field cut = inner_cutoff(u, epsilon);
    return restrict_to(zero_extend(cut), target, 0.0);
}

} // namespace vardom

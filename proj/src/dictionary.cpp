#include "vardom/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vardom {

namespace {

double bump1d(double t) {
    const double t2 = t * t;
    if (t2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t2));
}

double bump1d_deriv(double t) {
    const double t2 = t * t;
    if (t2 >= 1.0) return 0.0;
    const double d = 1.0 - t2;
    return bump1d(t) * (-2.0 * t / (d * d));
}

} // namespace

double Bump::value(double x, double y, int dim) const {
    double v = bump1d((x - center[0]) / radius);
    if (dim == 2) v *= bump1d((y - center[1]) / radius);
    return v;
}

double Bump::derivative(double x, double y, int dim, int axis) const {
    const double tx = (x - center[0]) / radius;
    const double ty = (y - center[1]) / radius;
    if (axis == 0) {
        double v = bump1d_deriv(tx) / radius;
        if (dim == 2) v *= bump1d(ty);
        return v;
    }
    return bump1d(tx) * bump1d_deriv(ty) / radius;
}

TestDictionary::TestDictionary(GridSpec spec, std::vector<TrigMode> modes, std::vector<Bump> bumps)
    : spec_(spec), modes_(std::move(modes)), bumps_(std::move(bumps)) {
    spec_.validate();
    for (const auto& b : bumps_)
        if (!(b.radius > 0.0)) throw std::invalid_argument("TestDictionary: bump radius must be > 0");
}

TestDictionary TestDictionary::defaults(const GridSpec& spec, int max_freq, int n_bumps,
                                        std::uint64_t seed) {
    spec.validate();
    std::vector<TrigMode> modes;
    auto axis_label = [](int kind, int k) {
        if (kind == 0) return std::string("1");
        return (kind == 1 ? "cos" : "sin") + std::to_string(k);
    };
    auto axis_entries = [&](int) {
        std::vector<std::pair<int, int>> e; // (kind, freq)
        e.emplace_back(0, 0);
        for (int k = 1; k <= max_freq; ++k) {
            e.emplace_back(1, k);
            e.emplace_back(2, k);
        }
        return e;
    };
    const auto e0 = axis_entries(0);
    if (spec.dim == 1) {
        for (const auto& [kind, k] : e0) {
            TrigMode m;
            m.kind = {kind, 0};
            m.freq = {k, 0};
            m.label = axis_label(kind, k);
            modes.push_back(m);
        }
    } else {
        const auto e1 = axis_entries(1);
        for (const auto& [ka, fa] : e0) {
            for (const auto& [kb, fb] : e1) {
                TrigMode m;
                m.kind = {ka, kb};
                m.freq = {fa, fb};
                m.label = axis_label(ka, fa) + "*" + axis_label(kb, fb);
                modes.push_back(m);
            }
        }
    }

    std::vector<Bump> bumps;
    Rng rng(seed);
    const double lx = spec.extent(0);
    const double ly = spec.dim == 2 ? spec.extent(1) : 0.0;
    const double lmin = spec.dim == 2 ? std::min(lx, ly) : lx;
    std::uniform_real_distribution<double> ur(0.05, 0.15);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int b = 0; b < n_bumps; ++b) {
        Bump bp;
        bp.radius = ur(rng) * lmin;
        bp.center[0] = spec.origin[0] + bp.radius + u01(rng) * (lx - 2 * bp.radius);
        bp.center[1] = spec.dim == 2 ? spec.origin[1] + bp.radius + u01(rng) * (ly - 2 * bp.radius) : 0.0;
        bumps.push_back(bp);
    }
    return TestDictionary(spec, std::move(modes), std::move(bumps));
}

TestDictionary TestDictionary::interior_bumps(const DomainMask& mask, int per_axis) {
    const auto& spec = mask.spec();
    const double h = spec.spacing;
    const auto dist = distance_to(mask.complement());

    std::vector<Bump> bumps;
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    for (int si = 0; si < per_axis; ++si) {
        const int i = static_cast<int>((si + 0.5) * n0 / per_axis);
        for (int sj = 0; sj < (spec.dim == 2 ? per_axis : 1); ++sj) {
            const int j = spec.dim == 2 ? static_cast<int>((sj + 0.5) * n1 / per_axis) : 0;
            if (!mask.inside(i, j)) continue;
            const double room = dist[static_cast<std::size_t>(spec.index(i, j))] - 2.0 * h;
            if (room <= 2.0 * h) continue;
            Bump b;
            b.center[0] = spec.center(0, i);
            b.center[1] = spec.dim == 2 ? spec.center(1, j) : 0.0;
            // the tensor support box has half-diagonal radius*sqrt(dim)
            b.radius = room / (spec.dim == 2 ? std::sqrt(2.0) : 1.0);
            if (support_inside(b, mask)) bumps.push_back(b);
        }
    }
    if (bumps.empty())
        throw std::invalid_argument("interior_bumps: mask admits no interior bump");
    return TestDictionary(spec, {}, std::move(bumps));
}

std::vector<double> TestDictionary::sample(const TrigMode& mode) const {
    const int n0 = spec_.shape[0];
    const int n1 = spec_.dim == 2 ? spec_.shape[1] : 1;
    auto axis_samples = [&](int axis, int n) {
        std::vector<double> s(static_cast<std::size_t>(n), 1.0);
        const int kind = mode.kind[static_cast<std::size_t>(axis)];
        const int k = mode.freq[static_cast<std::size_t>(axis)];
        if (kind != 0) {
            const double len = spec_.extent(axis);
            for (int i = 0; i < n; ++i) {
                const double t = (spec_.center(axis, i) - spec_.origin[axis]) / len;
                s[static_cast<std::size_t>(i)] =
                    kind == 1 ? std::cos(2.0 * M_PI * k * t) : std::sin(2.0 * M_PI * k * t);
            }
        }
        return s;
    };
    const auto s0 = axis_samples(0, n0);
    const auto s1 = spec_.dim == 2 ? axis_samples(1, n1) : std::vector<double>{1.0};
    std::vector<double> out(static_cast<std::size_t>(spec_.cell_count()));
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j)
            out[static_cast<std::size_t>(spec_.index(i, j))] =
                s0[static_cast<std::size_t>(i)] * s1[static_cast<std::size_t>(j)];
    return out;
}

std::vector<double> TestDictionary::sample(const Bump& bump) const {
    const int n0 = spec_.shape[0];
    const int n1 = spec_.dim == 2 ? spec_.shape[1] : 1;
    std::vector<double> out(static_cast<std::size_t>(spec_.cell_count()), 0.0);
    for (int i = 0; i < n0; ++i) {
        const double x = spec_.center(0, i);
        for (int j = 0; j < n1; ++j) {
            const double y = spec_.dim == 2 ? spec_.center(1, j) : 0.0;
            out[static_cast<std::size_t>(spec_.index(i, j))] = bump.value(x, y, spec_.dim);
        }
    }
    return out;
}

bool TestDictionary::support_inside(const Bump& bump, const DomainMask& mask) {
    const auto& spec = mask.spec();
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    // support must clear the grid border by one cell
    if (bump.center[0] - bump.radius < spec.center(0, 0) ||
        bump.center[0] + bump.radius > spec.center(0, n0 - 1))
        return false;
    if (spec.dim == 2 && (bump.center[1] - bump.radius < spec.center(1, 0) ||
                          bump.center[1] + bump.radius > spec.center(1, n1 - 1)))
        return false;
    for (int i = 0; i < n0; ++i) {
        const double x = spec.center(0, i);
        if (std::abs(x - bump.center[0]) > bump.radius) continue;
        for (int j = 0; j < n1; ++j) {
            const double y = spec.dim == 2 ? spec.center(1, j) : 0.0;
            if (spec.dim == 2 && std::abs(y - bump.center[1]) > bump.radius) continue;
            if (!mask.inside(i, j)) return false;
        }
    }
    return true;
}

} // namespace vardom

#include "vardom/compare.hpp"
#include "vardom/util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vardom {

AleChart AleChart::from_graphs(const GridSpec& grid, const GraphDomainSpec& reference,
                               const std::vector<GraphDomainSpec>& members,
                               const GraphDomainSpec& limit) {
    AleChart chart;
    chart.grid_ = grid;
    chart.ref_mask_ = two_graphs_mask(grid, reference);
    const int cols = grid.shape[0];

    auto fit = [&](const GraphDomainSpec& target) {
        std::vector<double> a(static_cast<std::size_t>(cols), 0.0);
        std::vector<double> b(static_cast<std::size_t>(cols), 1.0);
        for (int i = 0; i < cols; ++i) {
            const double x = grid.center(0, i);
            if (x <= reference.x_lo || x >= reference.x_hi) continue;
            const double lo0 = reference.lower(x), hi0 = reference.upper(x);
            const double lo1 = target.lower(x), hi1 = target.upper(x);
            const double den = hi0 - lo0;
            if (!(den > 0.0))
                throw std::invalid_argument("AleChart: reference fiber has no thickness");
            const double bb = (hi1 - lo1) / den;
            if (!(bb > 0.0))
                throw std::invalid_argument("AleChart: degenerate fiber map (b <= 0) at x = " +
                                            format_double(x));
            b[static_cast<std::size_t>(i)] = bb;
            a[static_cast<std::size_t>(i)] = lo1 - bb * lo0;
        }
        chart.a_.push_back(std::move(a));
        chart.b_.push_back(std::move(b));
    };

    fit(limit);
    for (const auto& m : members) fit(m);
    return chart;
}

namespace {

std::optional<double> interp_masked(const DomainMask& m, const std::vector<double>& full,
                                    const std::vector<std::uint8_t>* valid, double x, double y) {
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
        for (int dj = 0; dj <= (spec.dim == 2 ? 1 : 0); ++dj) {
            const int j = j0 + dj;
            if (spec.dim == 2 && (j < 0 || j >= spec.shape[1])) continue;
            double w = wx;
            if (spec.dim == 2) w *= dj == 0 ? 1.0 - ty : ty;
            if (w <= 0.0) continue;
            const std::size_t c = static_cast<std::size_t>(spec.index(i, j));
            const bool ok = valid ? (*valid)[c] != 0 : m.inside(i, j);
            if (ok) {
                acc += w * full[c];
                wsum += w;
            }
        }
    }
    if (wsum <= 0.0) return std::nullopt;
    return acc / wsum;
}

} // namespace

double ale_distance(const Field& u_i, const Field& u_limit, const AleChart& chart, int chart_index,
                    double p) {
    if (p < 1.0) throw std::invalid_argument("ale_distance: p must be >= 1");
    if (chart_index < 1 || chart_index > chart.members())
        throw std::invalid_argument("ale_distance: chart index out of range");
    const auto& grid = chart.grid();
    if (!(u_i.domain().spec() == grid) || !(u_limit.domain().spec() == grid))
        throw std::invalid_argument("ale_distance: grid mismatch");

    const DomainMask& ref = chart.reference_mask();
    const double h = grid.spacing;
    const double vol = grid.cell_volume();
    const int n0 = grid.shape[0];
    const int n1 = grid.dim == 2 ? grid.shape[1] : 1;

    struct Pullback {
        const Field& f;
        const std::vector<double>& a;
        const std::vector<double>& b;
        std::vector<double> full;
        GradientField grad;
    };
    Pullback pulls[2] = {
        {u_i, chart.offset(chart_index), chart.scale(chart_index), u_i.scatter(), gradient(u_i)},
        {u_limit, chart.offset(0), chart.scale(0), u_limit.scatter(), gradient(u_limit)},
    };

    auto coeff_deriv = [&](const std::vector<double>& c, int i) {
        const int lo = std::max(i - 1, 0);
        const int hi = std::min(i + 1, n0 - 1);
        return (c[static_cast<std::size_t>(hi)] - c[static_cast<std::size_t>(lo)]) /
               ((hi - lo) * h);
    };

    double acc_val = 0.0;
    std::array<double, 2> acc_grad{0.0, 0.0};
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            if (!ref.inside(i, j)) continue;
            const double x = grid.center(0, i);
            const double y = grid.dim == 2 ? grid.center(1, j) : 0.0;

            double vals[2];
            double gx[2], gy[2];
            for (int s = 0; s < 2; ++s) {
                auto& pb = pulls[s];
                const double a = pb.a[static_cast<std::size_t>(i)];
                const double b = pb.b[static_cast<std::size_t>(i)];
                const double ym = a + b * y;
                const auto v = interp_masked(pb.f.domain(), pb.full, nullptr, x, ym);
                if (!v)
                    throw std::invalid_argument("ale_distance: pullback point left the member domain");
                vals[s] = *v;
                const auto ux = interp_masked(pb.f.domain(), pb.grad.component(0), &pb.grad.stencil(0), x, ym);
                const auto uy = grid.dim == 2
                    ? interp_masked(pb.f.domain(), pb.grad.component(1), &pb.grad.stencil(1), x, ym)
                    : std::optional<double>(0.0);
                const double uxv = ux.value_or(0.0);
                const double uyv = uy.value_or(0.0);
                const double da = coeff_deriv(pb.a, i);
                const double db = coeff_deriv(pb.b, i);
                gx[s] = uxv + uyv * (da + db * y);
                gy[s] = uyv * b;
            }
            acc_val += std::pow(std::abs(vals[0] - vals[1]), p);
            acc_grad[0] += std::pow(std::abs(gx[0] - gx[1]), p);
            if (grid.dim == 2) acc_grad[1] += std::pow(std::abs(gy[0] - gy[1]), p);
        }
    }
    double d = std::pow(acc_val * vol, 1.0 / p) + std::pow(acc_grad[0] * vol, 1.0 / p);
    if (grid.dim == 2) d += std::pow(acc_grad[1] * vol, 1.0 / p);
    return d;
}

ExtendedField extension_operator(const Field& u, double collar) {
    const auto& m = u.domain();
    const auto& spec = m.spec();
    const double h = spec.spacing;
    if (!(collar > 2.0 * h)) throw std::invalid_argument("extension_operator: collar must exceed 2h");
    const auto full = u.scatter();
    const auto src = nearest_inside(m);
    const auto d = distance_to(m);

    std::vector<double> out(static_cast<std::size_t>(spec.cell_count()), 0.0);
    for (std::size_t c = 0; c < out.size(); ++c) {
        if (m.inside(static_cast<std::int64_t>(c)))
            out[c] = full[c];
        else if (src[c] >= 0 && d[c] < collar)
            out[c] = full[static_cast<std::size_t>(src[c])];
    }
    return ExtendedField(spec, std::move(out));
}

Field connect(const Field& u_limit, const DomainMask& member, const ConnectingSystem& sys) {
    if (!(u_limit.domain().spec() == member.spec()))
        throw std::invalid_argument("connect: spec mismatch");
    if (sys.kind == ConnectingSystem::Kind::PlainRestriction) {
        if (!DomainMask::subset(member, u_limit.domain()))
            throw std::invalid_argument("connect: plain restriction requires the member to be "
                                        "contained in the limit domain");
        const auto full = u_limit.scatter();
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>(member.inside_count()));
        const auto& flags = member.flags();
        for (std::size_t c = 0; c < flags.size(); ++c)
            if (flags[c]) vals.push_back(full[c]);
        return Field(member, std::move(vals));
    }
    const auto ext = extension_operator(u_limit, sys.collar);
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(member.inside_count()));
    const auto& flags = member.flags();
    for (std::size_t c = 0; c < flags.size(); ++c)
        if (flags[c]) vals.push_back(ext.values()[c]);
    return Field(member, std::move(vals));
}

double e_distance(const Field& u_i, const Field& u_limit, const ConnectingSystem& sys, double p) {
    if (p < 1.0) throw std::invalid_argument("e_distance: p must be >= 1");
    const Field eu = connect(u_limit, u_i.domain(), sys);
    std::vector<double> diff(u_i.values().size());
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = u_i.values()[k] - eu.values()[k];
    return wkp_norm(Field(u_i.domain(), std::move(diff)), 1, p);
}

std::string notion_verdict_name(NotionVerdict v) {
    switch (v) {
    case NotionVerdict::Strong: return "strong";
    case NotionVerdict::Fails: return "fails";
    default: return "not-applicable";
    }
}

EquivalenceReport equivalence_report(const SequencePair& seq, const std::optional<AleChart>& chart,
                                     const ConnectingSystem& sys, std::optional<double> tol) {
    seq.validate();
    if (!seq.limit_field) throw std::invalid_argument("equivalence_report: missing limit field");
    const int n = seq.size();
    EquivalenceReport rep;
    rep.tol = tol.value_or(default_tolerance(seq));
    const int tail_start = n - std::max(1, (n + 1) / 2);

    auto verdict_from = [&](const std::vector<double>& d) {
        for (int i = tail_start; i < n; ++i)
            if (!(d[static_cast<std::size_t>(i)] < rep.tol)) return NotionVerdict::Fails;
        return NotionVerdict::Strong;
    };

    rep.ze_distances.resize(static_cast<std::size_t>(n));
    parallel_for(n, [&](int i) {
        rep.ze_distances[static_cast<std::size_t>(i)] =
            ze_distance(seq.fields[static_cast<std::size_t>(i)], *seq.limit_field, seq.k, seq.p);
    });
    rep.ze = verdict_from(rep.ze_distances);

    if (chart) {
        rep.ale_distances.resize(static_cast<std::size_t>(n));
        try {
            parallel_for(n, [&](int i) {
                rep.ale_distances[static_cast<std::size_t>(i)] = ale_distance(
                    seq.fields[static_cast<std::size_t>(i)], *seq.limit_field, *chart, i + 1, seq.p);
            });
            rep.ale = verdict_from(rep.ale_distances);
        } catch (const std::exception& e) {
            rep.ale = NotionVerdict::NotApplicable;
            rep.ale_distances.clear();
            rep.notes += std::string("ale: ") + e.what() + "; ";
        }
    } else {
        rep.notes += "ale: no chart (topology change or non-graph members); ";
    }

    try {
        rep.e_distances.resize(static_cast<std::size_t>(n));
        parallel_for(n, [&](int i) {
            rep.e_distances[static_cast<std::size_t>(i)] =
                e_distance(seq.fields[static_cast<std::size_t>(i)], *seq.limit_field, sys, seq.p);
        });
        rep.e = verdict_from(rep.e_distances);
    } catch (const std::exception& e) {
        rep.e = NotionVerdict::NotApplicable;
        rep.e_distances.clear();
        rep.notes += std::string("e: ") + e.what() + "; ";
    }

    auto agree = [](NotionVerdict a, NotionVerdict b) {
        if (a == NotionVerdict::NotApplicable || b == NotionVerdict::NotApplicable) return -1;
        return a == b ? 1 : 0;
    };
    rep.agree_ze_ale = agree(rep.ze, rep.ale);
    rep.agree_ze_e = agree(rep.ze, rep.e);
    rep.agree_ale_e = agree(rep.ale, rep.e);
    return rep;
}

EquiintegrabilityTable equiintegrability_probe(const ConnectingOperator& op, const Field& u_limit,
                                               const std::vector<DomainMask>& members,
                                               const std::vector<double>& deltas, double p) {
    if (members.empty()) throw std::invalid_argument("equiintegrability_probe: no members");
    if (deltas.size() < 2) throw std::invalid_argument("equiintegrability_probe: need >= 2 deltas");
    EquiintegrabilityTable tab;
    tab.deltas = deltas;
    std::sort(tab.deltas.rbegin(), tab.deltas.rend());

    tab.mass.assign(tab.deltas.size(), std::vector<double>(members.size(), 0.0));
    for (std::size_t mi = 0; mi < members.size(); ++mi) {
        const auto& m = members[mi];
        const Field eu = op(u_limit, m);
        const auto full = eu.scatter();
        const auto d = distance_to(m.complement());
        const double vol = m.spec().cell_volume();

        // sort inside cells by boundary distance; a collar of measure <= delta
        // is the prefix of this ordering
        std::vector<std::pair<double, std::size_t>> cells;
        const auto& flags = m.flags();
        for (std::size_t c = 0; c < flags.size(); ++c)
            if (flags[c]) cells.emplace_back(d[c], c);
        std::sort(cells.begin(), cells.end());

        for (std::size_t di = 0; di < tab.deltas.size(); ++di) {
            const std::size_t count = std::min(
                cells.size(), static_cast<std::size_t>(tab.deltas[di] / vol));
            double acc = 0.0;
            for (std::size_t k = 0; k < count; ++k)
                acc += std::pow(std::abs(full[cells[k].second]), p);
            tab.mass[di][mi] = acc * vol;
        }
    }

    for (std::size_t di = 0; di < tab.deltas.size(); ++di) {
        double mx = 0.0;
        for (double v : tab.mass[di]) mx = std::max(mx, v);
        tab.max_mass.push_back(mx);
    }
    bool decreasing = true;
    for (std::size_t di = 1; di < tab.max_mass.size(); ++di)
        if (tab.max_mass[di] > tab.max_mass[di - 1] * 1.0001) decreasing = false;
    const double first = tab.max_mass.front();
    const double last = tab.max_mass.back();
    tab.equiintegrable = first == 0.0 || (decreasing && last < 0.25 * first);
    return tab;
}

EquiintegrabilityTable equiintegrability_probe(const ConnectingSystem& sys, const Field& u_limit,
                                               const std::vector<DomainMask>& members,
                                               const std::vector<double>& deltas, double p) {
    return equiintegrability_probe(
        [&sys](const Field& u, const DomainMask& m) { return connect(u, m, sys); }, u_limit,
        members, deltas, p);
}

} // namespace vardom

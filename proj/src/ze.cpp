#include "vardom/ze.hpp"
#include "vardom/util.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace vardom {

SequencePair SequencePair::from_gallery(const GallerySequence& g, int k, double p) {
    SequencePair seq;
    seq.fields = g.fields();
    seq.limit_domain = g.limit_mask;
    seq.limit_field = g.limit_field;
    seq.k = k;
    seq.p = p;
    seq.validate();
    return seq;
}

void SequencePair::validate() const {
    if (fields.empty()) throw std::invalid_argument("SequencePair: empty sequence");
    if (k != 0 && k != 1) throw std::invalid_argument("SequencePair: k must be 0 or 1");
    if (p < 1.0) throw std::invalid_argument("SequencePair: p must be >= 1");
    const auto& spec = limit_domain.spec();
    for (const auto& f : fields)
        if (!(f.domain().spec() == spec))
            throw std::invalid_argument("SequencePair: members must share the limit's grid");
    if (limit_field && !(limit_field->domain() == limit_domain))
        throw std::invalid_argument("SequencePair: limit field must live on the limit domain");
}

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Strong: return "strong";
    case Verdict::WeakOnly: return "weak-only";
    default: return "none-w.r.t.-dictionary";
    }
}

namespace {

double lp_diff(const std::vector<double>& a, const std::vector<double>& b, double vol, double p) {
    double acc = 0.0;
    if (p == 2.0) {
        for (std::size_t c = 0; c < a.size(); ++c) {
            const double d = a[c] - b[c];
            acc += d * d;
        }
    } else {
        for (std::size_t c = 0; c < a.size(); ++c) acc += std::pow(std::abs(a[c] - b[c]), p);
    }
    return std::pow(acc * vol, 1.0 / p);
}

double pairing(const std::vector<double>& f, const std::vector<double>& psi, double vol) {
    double acc = 0.0;
    for (std::size_t c = 0; c < f.size(); ++c) acc += f[c] * psi[c];
    return acc * vol;
}

} // namespace

double ze_distance(const Field& u, const Field& v, int k, double p) {
    if (k != 0 && k != 1) throw std::invalid_argument("ze_distance: k must be 0 or 1");
    if (p < 1.0) throw std::invalid_argument("ze_distance: p must be >= 1");
    const auto& spec = u.domain().spec();
    if (!(spec == v.domain().spec())) throw std::invalid_argument("ze_distance: spec mismatch");
    const double vol = spec.cell_volume();
    double d = lp_diff(u.scatter(), v.scatter(), vol, p);
    if (k == 1) {
        const auto gu = gradient(u);
        const auto gv = gradient(v);
        for (int a = 0; a < spec.dim; ++a) d += lp_diff(gu.component(a), gv.component(a), vol, p);
    }
    return d;
}

double pair_distance(const Field& a, const Field& b, HausdorffMode mode, int k, double p) {
    return hausdorff(a.domain(), b.domain(), mode) + ze_distance(a, b, k, p);
}

std::vector<CauchyEntry> cauchy_modulus(const SequencePair& seq, int pairs_budget,
                                        std::uint64_t seed) {
    seq.validate();
    const int n = seq.size();
    if (n < 2) throw std::invalid_argument("cauchy_modulus: need at least 2 fields");

    std::set<std::pair<int, int>> pairs; // 0-based (i < j)
    for (int i = 0; i + 1 < n; ++i) pairs.insert({i, i + 1});
    Rng rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int b = 0; b < pairs_budget; ++b) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        pairs.insert({std::min(i, j), std::max(i, j)});
    }

    std::vector<std::tuple<int, int, double>> dists;
    dists.reserve(pairs.size());
    for (const auto& [i, j] : pairs)
        dists.emplace_back(i, j, ze_distance(seq.fields[static_cast<std::size_t>(i)],
                                             seq.fields[static_cast<std::size_t>(j)], seq.k, seq.p));

    std::vector<CauchyEntry> table;
    for (int start = 0; start + 1 < n; ++start) {
        double m = 0.0;
        for (const auto& [i, j, d] : dists)
            if (i >= start) m = std::max(m, d);
        table.push_back({start + 1, m});
    }
    return table;
}

std::vector<PairingResiduals> weak_pairings(const SequencePair& seq, const TestDictionary& dict) {
    seq.validate();
    if (!seq.limit_field) throw std::invalid_argument("weak_pairings: missing limit field");
    const auto& spec = seq.limit_domain.spec();
    if (!(dict.spec() == spec)) throw std::invalid_argument("weak_pairings: dictionary grid mismatch");
    const double vol = spec.cell_volume();
    const int n = seq.size();

    std::vector<ExtensionPack> packs(static_cast<std::size_t>(n));
    parallel_for(n, [&](int i) {
        packs[static_cast<std::size_t>(i)] = seq.k == 1
            ? w1p_distance_data(seq.fields[static_cast<std::size_t>(i)])
            : ExtensionPack{zero_extend(seq.fields[static_cast<std::size_t>(i)]), {}};
    });
    const ExtensionPack lim = seq.k == 1 ? w1p_distance_data(*seq.limit_field)
                                         : ExtensionPack{zero_extend(*seq.limit_field), {}};

    std::vector<PairingResiduals> out;
    auto run_entry = [&](const std::string& label, const std::vector<double>& psi) {
        for (int alpha = 0; alpha <= (seq.k == 1 ? spec.dim : 0); ++alpha) {
            PairingResiduals pr;
            pr.label = label;
            pr.alpha = alpha;
            pr.residuals.resize(static_cast<std::size_t>(n));
            const auto& ref = alpha == 0 ? lim.value.values()
                                         : lim.gradients[static_cast<std::size_t>(alpha - 1)].values();
            const double ref_pair = pairing(ref, psi, vol);
            for (int i = 0; i < n; ++i) {
                const auto& e = alpha == 0
                    ? packs[static_cast<std::size_t>(i)].value.values()
                    : packs[static_cast<std::size_t>(i)].gradients[static_cast<std::size_t>(alpha - 1)].values();
                pr.residuals[static_cast<std::size_t>(i)] = std::abs(pairing(e, psi, vol) - ref_pair);
            }
            out.push_back(std::move(pr));
        }
    };
    for (const auto& m : dict.modes()) run_entry("psi:" + m.label, dict.sample(m));
    for (std::size_t b = 0; b < dict.bumps().size(); ++b)
        run_entry("bump:" + std::to_string(b), dict.sample(dict.bumps()[b]));
    return out;
}

WeakLimitCandidate candidate_weak_limit(const SequencePair& seq, double tail_fraction) {
    seq.validate();
    const int n = seq.size();
    if (n < 4) throw std::invalid_argument("candidate_weak_limit: need at least 4 fields");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw std::invalid_argument("candidate_weak_limit: tail fraction must be in (0, 1]");
    const int count = std::max(1, static_cast<int>(std::ceil(tail_fraction * n)));
    const int start = n - count; // 0-based

    const auto& spec = seq.limit_domain.spec();
    const auto cells = static_cast<std::size_t>(spec.cell_count());
    std::vector<double> avg(cells, 0.0);
    std::vector<std::vector<double>> gavg(static_cast<std::size_t>(seq.k == 1 ? spec.dim : 0),
                                          std::vector<double>(cells, 0.0));
    for (int i = start; i < n; ++i) {
        const auto& f = seq.fields[static_cast<std::size_t>(i)];
        const auto full = f.scatter();
        for (std::size_t c = 0; c < cells; ++c) avg[c] += full[c];
        if (seq.k == 1) {
            const auto g = gradient(f);
            for (int a = 0; a < spec.dim; ++a)
                for (std::size_t c = 0; c < cells; ++c) gavg[static_cast<std::size_t>(a)][c] += g.component(a)[c];
        }
    }
    const double inv = 1.0 / count;
    for (auto& v : avg) v *= inv;
    for (auto& g : gavg)
        for (auto& v : g) v *= inv;

    WeakLimitCandidate cand;
    cand.value = ExtendedField(spec, std::move(avg));
    for (auto& g : gavg) cand.gradients.emplace_back(spec, std::move(g));
    cand.tail_start = start + 1;
    return cand;
}

double field_scale(const SequencePair& seq, double tail_fraction) {
    const int n = seq.size();
    const int count = std::max(1, static_cast<int>(std::ceil(tail_fraction * n)));
    double scale = 0.0;
    for (int i = n - count; i < n; ++i)
        for (double v : seq.fields[static_cast<std::size_t>(i)].values())
            scale = std::max(scale, std::abs(v));
    if (seq.limit_field)
        for (double v : seq.limit_field->values()) scale = std::max(scale, std::abs(v));
    return scale > 1e-300 ? scale : 1.0;
}

double default_tolerance(const SequencePair& seq, double tail_fraction) {
    return 10.0 * std::sqrt(seq.limit_domain.spec().spacing) * field_scale(seq, tail_fraction);
}

ConvergenceReport classify(const SequencePair& seq, const TestDictionary& dict,
                           const ClassifyOptions& opts) {
    seq.validate();
    if (!seq.limit_field) throw std::invalid_argument("classify: missing limit field");
    const int n = seq.size();
    const auto& spec = seq.limit_domain.spec();
    const double h = spec.spacing;

    ConvergenceReport rep;
    rep.k = seq.k;
    rep.p = seq.p;
    rep.tail_fraction = opts.tail_fraction;
    rep.seed = opts.seed;
    const double tol_default = default_tolerance(seq, opts.tail_fraction);
    rep.tol_strong = opts.tol_strong.value_or(tol_default);
    rep.tol_weak = opts.tol_weak.value_or(tol_default);
    rep.symdiff_tol = opts.symdiff_tol.value_or(0.1 * measure(seq.limit_domain));
    const int tail_count = std::max(1, static_cast<int>(std::ceil(opts.tail_fraction * n)));
    rep.tail_start = n - tail_count + 1;

    rep.strong_distance.resize(static_cast<std::size_t>(n));
    rep.norm_gap.resize(static_cast<std::size_t>(n));
    const double limit_norm = wkp_norm(*seq.limit_field, seq.k, seq.p);
    parallel_for(n, [&](int i) {
        rep.strong_distance[static_cast<std::size_t>(i)] =
            ze_distance(seq.fields[static_cast<std::size_t>(i)], *seq.limit_field, seq.k, seq.p);
        rep.norm_gap[static_cast<std::size_t>(i)] =
            std::abs(wkp_norm(seq.fields[static_cast<std::size_t>(i)], seq.k, seq.p) - limit_norm);
    });

    rep.cauchy = n >= 2 ? cauchy_modulus(seq, opts.cauchy_budget, opts.seed) : std::vector<CauchyEntry>{};

    // weak-limit candidate from the tail averages
    std::optional<WeakLimitCandidate> cand;
    if (n >= 4) cand = candidate_weak_limit(seq, opts.tail_fraction);

    // pairings: values against the limit, gradients against the candidate
    // (the limit's own forward differences would see jumps the sequence never
    // produced, so the candidate is the right reference for the weak side)
    const double vol = spec.cell_volume();
    {
        std::vector<ExtensionPack> packs(static_cast<std::size_t>(n));
        parallel_for(n, [&](int i) {
            packs[static_cast<std::size_t>(i)] = seq.k == 1
                ? w1p_distance_data(seq.fields[static_cast<std::size_t>(i)])
                : ExtensionPack{zero_extend(seq.fields[static_cast<std::size_t>(i)]), {}};
        });
        const ExtendedField lim_value = zero_extend(*seq.limit_field);
        std::vector<const std::vector<double>*> grad_ref;
        std::optional<GradientField> lim_grad;
        if (seq.k == 1) {
            if (cand) {
                for (const auto& g : cand->gradients) grad_ref.push_back(&g.values());
            } else {
                lim_grad = gradient(*seq.limit_field);
                for (int a = 0; a < spec.dim; ++a) grad_ref.push_back(&lim_grad->component(a));
            }
        }
        auto run_entry = [&](const std::string& label, const std::vector<double>& psi) {
            for (int alpha = 0; alpha <= (seq.k == 1 ? spec.dim : 0); ++alpha) {
                PairingResiduals pr;
                pr.label = label;
                pr.alpha = alpha;
                pr.residuals.resize(static_cast<std::size_t>(n));
                const auto& ref = alpha == 0 ? lim_value.values() : *grad_ref[static_cast<std::size_t>(alpha - 1)];
                const double ref_pair = pairing(ref, psi, vol);
                for (int i = 0; i < n; ++i) {
                    const auto& e = alpha == 0
                        ? packs[static_cast<std::size_t>(i)].value.values()
                        : packs[static_cast<std::size_t>(i)].gradients[static_cast<std::size_t>(alpha - 1)].values();
                    pr.residuals[static_cast<std::size_t>(i)] = std::abs(pairing(e, psi, vol) - ref_pair);
                }
                double t = 0.0;
                for (int i = rep.tail_start - 1; i < n; ++i)
                    t = std::max(t, pr.residuals[static_cast<std::size_t>(i)]);
                pr.tail_max = t;
                rep.pairings.push_back(std::move(pr));
            }
        };
        for (const auto& m : dict.modes()) run_entry("psi:" + m.label, dict.sample(m));
        for (std::size_t b = 0; b < dict.bumps().size(); ++b)
            run_entry("bump:" + std::to_string(b), dict.sample(dict.bumps()[b]));
    }

    for (int i = rep.tail_start - 1; i < n; ++i)
        rep.strong_tail = std::max(rep.strong_tail, rep.strong_distance[static_cast<std::size_t>(i)]);
    for (const auto& pr : rep.pairings) rep.weak_tail = std::max(rep.weak_tail, pr.tail_max);

    // support check: the candidate may not carry mass beyond a 2h fattening
    // of the limit domain
    if (cand) {
        const DomainMask fat = enlarge(seq.limit_domain, 2.0 * h);
        const auto& flags = fat.flags();
        const auto& vals = cand->value.values();
        double acc = 0.0;
        for (std::size_t c = 0; c < flags.size(); ++c)
            if (!flags[c]) acc += std::pow(std::abs(vals[c]), seq.p);
        rep.support_leakage = std::pow(acc * vol, 1.0 / seq.p);
    }

    for (int i = rep.tail_start - 1; i < n; ++i)
        rep.symdiff_tail = std::max(
            rep.symdiff_tail, symmetric_difference_measure(seq.domain(i), seq.limit_domain));

    // membership: the candidate gradient must act as the weak derivative of
    // the limit field against bumps compactly inside the limit domain
    if (seq.k == 1 && cand) {
        std::vector<std::vector<double>> comp(static_cast<std::size_t>(spec.dim));
        std::vector<std::vector<std::uint8_t>> sten(static_cast<std::size_t>(spec.dim));
        const auto lim_sten = gradient(*seq.limit_field); // reuse its stencil layout
        for (int a = 0; a < spec.dim; ++a) {
            sten[static_cast<std::size_t>(a)] = lim_sten.stencil(a);
            comp[static_cast<std::size_t>(a)].assign(static_cast<std::size_t>(spec.cell_count()), 0.0);
            const auto& gv = cand->gradients[static_cast<std::size_t>(a)].values();
            for (std::size_t c = 0; c < gv.size(); ++c)
                if (sten[static_cast<std::size_t>(a)][c]) comp[static_cast<std::size_t>(a)][c] = gv[c];
        }
        GradientField cand_grad(seq.limit_domain, std::move(comp), std::move(sten));
        const auto bumps = TestDictionary::interior_bumps(seq.limit_domain, 5);
        rep.weak_derivative_residual = verify_weak_derivative(*seq.limit_field, cand_grad, bumps);
    }

    const bool strong_ok = rep.strong_tail < rep.tol_strong;
    const bool pairings_ok = rep.weak_tail < rep.tol_weak;
    const bool symdiff_ok = rep.symdiff_tail < rep.symdiff_tol;
    const bool membership_ok = seq.k == 0 || !cand || rep.weak_derivative_residual < rep.tol_weak;

    if (strong_ok && pairings_ok) {
        rep.verdict = Verdict::Strong;
    } else if (pairings_ok && symdiff_ok && membership_ok) {
        rep.verdict = Verdict::WeakOnly;
    } else {
        rep.verdict = Verdict::None;
        if (strong_ok) rep.notes += "strong tail passed but pairings failed; ";
        if (pairings_ok && !symdiff_ok)
            rep.notes += "pairings passed but domain symmetric difference does not shrink; ";
        if (pairings_ok && symdiff_ok && !membership_ok)
            rep.notes += "pairings passed but the candidate gradient is rejected as a weak "
                         "derivative of the limit (residual " +
                         format_double(rep.weak_derivative_residual) + "); ";
    }
    return rep;
}

} // namespace vardom

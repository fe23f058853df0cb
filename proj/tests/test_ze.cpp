#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vardom/dictionary.hpp"
#include "vardom/field.hpp"
#include "vardom/gallery.hpp"
#include "vardom/util.hpp"
#include "vardom/ze.hpp"

#include <cmath>
#include <random>

using namespace vardom;

namespace {

GridSpec spec_1d(double lo, double hi, double h) {
    GridSpec s;
    s.dim = 1;
    s.origin = {lo, 0.0};
    s.spacing = h;
    s.shape = {static_cast<int>(std::lround((hi - lo) / h)), 1};
    return s;
}

Field random_field(const DomainMask& m, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> vals(static_cast<std::size_t>(m.inside_count()));
    for (auto& v : vals) v = u(rng);
    return Field(m, std::move(vals));
}

TestDictionary small_dict(const GridSpec& s) {
    return TestDictionary::defaults(s, 4, 4, default_seed());
}

} // namespace

TEST_CASE("ze_distance basics") {
    const double h = 1.0 / 256;
    const auto s = spec_1d(-0.5, 2.5, h);
    const auto m1 = interval_mask(s, 0.0, 1.0);

    SUBCASE("identical fields at distance zero") {
        const auto f = random_field(m1, 42);
        CHECK(ze_distance(f, f, 1, 2.0) == 0.0);
    }
    SUBCASE("constant one on widening interval: extra strip mass, p = 1") {
        const double delta = 0.25;
        const auto wide = interval_mask(s, 0.0, 1.0 + delta);
        const auto f = Field::from_function(m1, [](double, double) { return 1.0; });
        const auto g = Field::from_function(wide, [](double, double) { return 1.0; });
        CHECK(std::abs(ze_distance(f, g, 0, 1.0) - delta) < 2 * h);
    }
    SUBCASE("symmetry is exact, triangle holds with grid slack") {
        std::vector<Field> fields;
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            const auto m = interval_mask(s, 0.1 * seed, 1.0 + 0.1 * seed);
            fields.push_back(random_field(m, seed + 100));
        }
        for (const auto& a : fields)
            for (const auto& b : fields) {
                CHECK(ze_distance(a, b, 1, 2.0) == ze_distance(b, a, 1, 2.0));
                for (const auto& c : fields)
                    CHECK(ze_distance(a, b, 1, 2.0) <=
                          ze_distance(a, c, 1, 2.0) + ze_distance(c, b, 1, 2.0) + 4 * h);
            }
    }
    SUBCASE("invalid arguments") {
        const auto f = random_field(m1, 1);
        CHECK_THROWS_AS(ze_distance(f, f, 2, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(ze_distance(f, f, 1, 0.5), std::invalid_argument);
        const auto other = interval_mask(spec_1d(-0.5, 2.5, 1.0 / 128), 0.0, 1.0);
        CHECK_THROWS_AS(ze_distance(f, random_field(other, 2), 1, 2.0), std::invalid_argument);
    }
}

TEST_CASE("pair_distance separates zero fields on distinct domains") {
    const double h = 1.0 / 256;
    const auto s = spec_1d(-0.5, 2.5, h);
    const auto a = Field::zeros(interval_mask(s, 0.0, 1.0));
    const auto b = Field::zeros(interval_mask(s, 0.0, 2.0));

    CHECK(pair_distance(a, a, HausdorffMode::Set, 1, 2.0) == 0.0);
    // the field part vanishes, the domain part does not
    CHECK(ze_distance(a, b, 1, 2.0) == 0.0);
    const double d = pair_distance(a, b, HausdorffMode::Set, 1, 2.0);
    CHECK(d > 0.9);
    CHECK(std::abs(d - 1.0) < 2 * h);
}

TEST_CASE("pair_distance: split member against its limit stays far in complement mode") {
    GalleryOptions opts;
    const auto g = make_gallery("split_interval", opts);
    const auto member = g.field_at(10);
    const double d = pair_distance(member, *g.limit_field, HausdorffMode::Complement, 0, 2.0);
    // the extension parts coincide, so the whole distance is the complement
    // gap, which never closes
    CHECK(d > 0.9);
    CHECK(ze_distance(member, *g.limit_field, 0, 2.0) == 0.0);
}

TEST_CASE("cauchy modulus") {
    GalleryOptions opts;

    SUBCASE("constant sequence: all zeros") {
        const auto g = make_gallery("oscillation", opts);
        SequencePair seq;
        const auto f = g.field_at(3);
        seq.fields = std::vector<Field>(6, f);
        seq.limit_domain = g.limit_mask;
        seq.limit_field = g.limit_field;
        seq.k = 0;
        seq.p = 2.0;
        for (const auto& e : cauchy_modulus(seq, 8)) CHECK(e.modulus == 0.0);
    }
    SUBCASE("channel gallery: modulus decays with the strip width") {
        const auto g = make_gallery("channel", opts);
        const auto seq = SequencePair::from_gallery(g, 0, 2.0);
        const auto table = cauchy_modulus(seq, 24);
        REQUIRE(table.size() == static_cast<std::size_t>(g.length - 1));
        // monotone nonincreasing
        for (std::size_t k = 1; k < table.size(); ++k)
            CHECK(table[k].modulus <= table[k - 1].modulus + 1e-12);
        CHECK(table.back().modulus < table.front().modulus);
        CHECK(table.back().modulus < 1e-2);
    }
    SUBCASE("blob gallery: modulus bounded below") {
        const auto g = make_gallery("blobs", opts);
        const auto seq = SequencePair::from_gallery(g, 0, 2.0);
        const auto table = cauchy_modulus(seq, 24);
        // alternating-sign members never get close to one another
        CHECK(table.back().modulus > 0.1);
    }
}

TEST_CASE("weak pairings") {
    GalleryOptions opts;

    SUBCASE("constant sequence: all residuals vanish") {
        const auto g = make_gallery("oscillation", opts);
        SequencePair seq;
        seq.fields = std::vector<Field>(5, g.field_at(2));
        seq.limit_domain = g.limit_mask;
        seq.limit_field = g.field_at(2);
        seq.k = 0;
        seq.p = 2.0;
        const auto prs = weak_pairings(seq, small_dict(g.grid));
        for (const auto& pr : prs)
            for (double r : pr.residuals) CHECK(r < 1e-12);
    }
    SUBCASE("oscillations: residuals decay like 1/i against fixed duals") {
        const auto g = make_gallery("oscillation", opts);
        const auto seq = SequencePair::from_gallery(g, 0, 2.0);
        // analytic: |int_0^1 sin(i pi x) psi| <= (2 max|psi| + int|psi'|) / (i pi);
        // check the computed residuals against the analytic envelope for the
        // constant mode psi = 1: |int sin(i pi x)| = (1 - cos(i pi)) / (i pi)
        const TestDictionary dict(g.grid, {TrigMode{{0, 0}, {0, 0}, "1"}}, {});
        const auto prs = weak_pairings(seq, dict);
        REQUIRE(prs.size() == 1);
        for (int i = 1; i <= g.length; ++i) {
            const double analytic = (1.0 - std::cos(i * M_PI)) / (i * M_PI);
            CHECK(std::abs(prs[0].residuals[static_cast<std::size_t>(i - 1)] - analytic) < 0.01);
        }
        CHECK(prs[0].residuals.back() < 0.05);
    }
    SUBCASE("blobs: value pairings converge while the strong distance does not") {
        const auto g = make_gallery("blobs", opts);
        const auto seq = SequencePair::from_gallery(g, 0, 2.0);
        const auto prs = weak_pairings(seq, small_dict(g.grid));
        double worst_tail = 0.0;
        for (const auto& pr : prs) worst_tail = std::max(worst_tail, pr.residuals.back());
        CHECK(worst_tail < 0.2);
        CHECK(ze_distance(seq.fields.back(), *seq.limit_field, 0, 2.0) > 0.4);
    }
    SUBCASE("missing limit is an error") {
        const auto g = make_gallery("oscillation", opts);
        auto seq = SequencePair::from_gallery(g, 0, 2.0);
        seq.limit_field.reset();
        CHECK_THROWS_AS(weak_pairings(seq, small_dict(g.grid)), std::invalid_argument);
    }
}

TEST_CASE("candidate weak limit") {
    GalleryOptions opts;

    SUBCASE("constant sequence averages to itself") {
        const auto g = make_gallery("oscillation", opts);
        SequencePair seq;
        seq.fields = std::vector<Field>(6, g.field_at(2));
        seq.limit_domain = g.limit_mask;
        seq.limit_field = g.field_at(2);
        seq.k = 0;
        seq.p = 2.0;
        const auto cand = candidate_weak_limit(seq, 0.5);
        const auto expect = zero_extend(g.field_at(2));
        for (std::size_t c = 0; c < cand.value.values().size(); ++c)
            CHECK(cand.value.values()[c] == doctest::Approx(expect.values()[c]).epsilon(1e-12));
    }
    SUBCASE("oscillation tail averages shrink like one over the tail length") {
        const auto g = make_gallery("oscillation", opts);
        const auto seq = SequencePair::from_gallery(g, 0, 2.0);
        const auto cand = candidate_weak_limit(seq, 0.5);
        // orthogonality oracle: the average of `count` orthogonal modes of
        // norm sqrt(1/2) has norm sqrt(1/2) / sqrt(count)
        const int count = g.length - cand.tail_start + 1;
        const double expect = std::sqrt(0.5 / count);
        CHECK(lp_norm(cand.value, 2.0) == doctest::Approx(expect).epsilon(0.02));
        // cellwise: the geometric sum bound |sum sin(i pi x)| <= 1/sin(pi x/2)
        const auto& spec = g.grid;
        for (int c = 0; c < spec.shape[0]; ++c) {
            const double x = spec.center(0, c);
            if (x < 0.1 || x > 0.9) continue;
            const double envelope = 1.0 / (count * std::sin(M_PI * x / 2.0));
            CHECK(std::abs(cand.value.values()[static_cast<std::size_t>(c)]) <= envelope + 1e-9);
        }
    }
    SUBCASE("blob averages shrink with the alternation") {
        const auto g = make_gallery("blobs", opts);
        const auto seq = SequencePair::from_gallery(g, 1, 2.0);
        const auto cand = candidate_weak_limit(seq, 0.5);
        REQUIRE(cand.gradients.size() == 2);
        CHECK(lp_norm(cand.value, 2.0) < 0.25);
    }
    SUBCASE("needs at least four fields") {
        const auto g = make_gallery("oscillation", opts);
        SequencePair seq;
        seq.fields = {g.field_at(1), g.field_at(2), g.field_at(3)};
        seq.limit_domain = g.limit_mask;
        seq.limit_field = g.limit_field;
        seq.k = 0;
        CHECK_THROWS_AS(candidate_weak_limit(seq, 0.5), std::invalid_argument);
    }
}

TEST_CASE("classify: channel gallery is strong") {
    GalleryOptions opts;
    const auto g = make_gallery("channel", opts);
    const auto seq = SequencePair::from_gallery(g, 1, 2.0);
    const auto rep = classify(seq, small_dict(g.grid));
    CHECK(rep.verdict == Verdict::Strong);
    // abstract clause one: norms converge with the strong tail
    CHECK(rep.norm_gap.back() < rep.tol_strong);
    // strong implies the weak side also settled
    CHECK(rep.weak_tail < rep.tol_weak);
    CHECK(rep.support_leakage < rep.tol_weak);
}

TEST_CASE("classify: oscillation gallery is weak-only") {
    GalleryOptions opts;
    const auto g = make_gallery("oscillation", opts);
    const auto seq = SequencePair::from_gallery(g, 0, 2.0);
    ClassifyOptions copts;
    // the strong distances sit at sqrt(1/2) = 0.707 for every member; the
    // default 10 sqrt(h) tolerance (0.625) would only just exclude them, so
    // pin a tolerance well below the plateau
    copts.tol_strong = 0.3;
    const auto rep = classify(seq, small_dict(g.grid), copts);
    CHECK(rep.verdict == Verdict::WeakOnly);
    for (double s : rep.strong_distance) CHECK(s == doctest::Approx(std::sqrt(0.5)).epsilon(0.02));
}

TEST_CASE("classify: split interval is rejected at the membership check") {
    GalleryOptions opts;
    const auto g = make_gallery("split_interval", opts);
    const auto seq = SequencePair::from_gallery(g, 1, 2.0);
    const auto rep = classify(seq, small_dict(g.grid));
    CHECK(rep.verdict == Verdict::None);
    // the jump candidate is rejected as a weak derivative with an order-one
    // residual, while the value pairings themselves settle
    CHECK(rep.weak_derivative_residual > 0.5);
    double value_tail = 0.0;
    for (const auto& pr : rep.pairings)
        if (pr.alpha == 0) value_tail = std::max(value_tail, pr.tail_max);
    CHECK(value_tail < rep.tol_weak);
}

TEST_CASE("classify: subsequence stability") {
    GalleryOptions opts;
    const auto g = make_gallery("channel", opts);
    const auto full = SequencePair::from_gallery(g, 1, 2.0);
    SequencePair half = full;
    half.fields.clear();
    for (int i = 2; i <= g.length; i += 2) half.fields.push_back(g.field_at(i));
    const auto dict = small_dict(g.grid);
    CHECK(classify(full, dict).verdict == Verdict::Strong);
    CHECK(classify(half, dict).verdict == Verdict::Strong);
}

TEST_CASE("classify: cauchy tail below tolerance implies low candidate leakage") {
    GalleryOptions opts;
    const auto g = make_gallery("channel", opts);
    const auto seq = SequencePair::from_gallery(g, 1, 2.0);
    const auto rep = classify(seq, small_dict(g.grid));
    if (rep.cauchy.back().modulus < rep.tol_strong) {
        const auto cand = candidate_weak_limit(seq, 0.5);
        CHECK_NOTHROW(restrict_to(cand.value, enlarge(seq.limit_domain, 2 * g.grid.spacing),
                                  rep.tol_strong, seq.p));
    }
}

TEST_CASE("default tolerance scales with the field") {
    GalleryOptions opts;
    const auto g = make_gallery("oscillation", opts);
    auto seq = SequencePair::from_gallery(g, 0, 2.0);
    const double base = default_tolerance(seq);
    for (auto& f : seq.fields) {
        std::vector<double> v(f.values());
        for (auto& x : v) x *= 3.0;
        f = Field(f.domain(), std::move(v));
    }
    CHECK(default_tolerance(seq) == doctest::Approx(3.0 * base).epsilon(1e-9));
}

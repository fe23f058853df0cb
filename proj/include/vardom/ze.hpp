#pragma once

#include "vardom/dictionary.hpp"
#include "vardom/field.hpp"
#include "vardom/gallery.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vardom {

/// A sequence of fields on changing domains together with the limit pair it
/// is tested against. All members share one grid.
struct SequencePair {
    std::vector<Field> fields;
    DomainMask limit_domain;
    std::optional<Field> limit_field;
    double p = 2.0;
    int k = 1;

    static SequencePair from_gallery(const GallerySequence& g, int k, double p);

    void validate() const;
    int size() const { return static_cast<int>(fields.size()); }
    const DomainMask& domain(int i) const { return fields[static_cast<std::size_t>(i)].domain(); }
};

enum class Verdict { Strong, WeakOnly, None };
std::string verdict_name(Verdict v); // "strong" / "weak-only" / "none-w.r.t.-dictionary"

struct PairingResiduals {
    std::string label; // dictionary entry
    int alpha = 0;     // 0 = values, a >= 1 = gradient axis a-1
    std::vector<double> residuals;
    double tail_max = 0.0;
};

struct CauchyEntry {
    int start = 1;        // 1-based N
    double modulus = 0.0; // max sampled pairwise distance over i, j >= N
};

/// Distance diagnostics and the verdict for one sequence run. The weak side
/// is always relative to the dictionary that was used; the gradient pairings
/// are taken against the averaged weak-limit candidate, and the candidate is
/// additionally required to be a consistent weak derivative of the limit
/// field (the membership check below).
struct ConvergenceReport {
    int k = 1;
    double p = 2.0;
    double tol_strong = 0.0;
    double tol_weak = 0.0;
    double symdiff_tol = 0.0;
    double tail_fraction = 0.5;
    int tail_start = 1;
    std::uint64_t seed = 0;

    std::vector<double> strong_distance; // s_i
    std::vector<double> norm_gap;        // | ||u_i|| - ||u|| |
    std::vector<PairingResiduals> pairings;
    std::vector<CauchyEntry> cauchy;

    double strong_tail = 0.0;
    double weak_tail = 0.0;
    double support_leakage = 0.0;
    double weak_derivative_residual = 0.0;
    double symdiff_tail = 0.0;

    Verdict verdict = Verdict::None;
    std::string notes;
};

/// Sum over orders <= k of the L^p distance between zero-extensions (values
/// and forward-difference gradients). A pseudometric on fields over a shared
/// grid: it vanishes for distinct zero fields on distinct masks.
double ze_distance(const Field& u, const Field& v, int k, double p);

/// Domain distance plus field distance: hausdorff(mode) + ze_distance.
double pair_distance(const Field& a, const Field& b, HausdorffMode mode, int k, double p);

/// Monotone table N -> max sampled pairwise ze_distance over members i,j >= N.
/// Samples every consecutive pair plus pairs_budget random ones.
std::vector<CauchyEntry> cauchy_modulus(const SequencePair& seq, int pairs_budget,
                                        std::uint64_t seed = default_seed());

/// Residuals |<(D^a u_i)~, psi> - <(D^a u)~, psi>| per dictionary entry and
/// order, against the limit field's own data.
std::vector<PairingResiduals> weak_pairings(const SequencePair& seq, const TestDictionary& dict);

/// Cellwise averages of the extended fields (and gradients, for k = 1) over
/// the tail of the sequence: the constructive stand-in for picking a weakly
/// convergent subsequence.
struct WeakLimitCandidate {
    ExtendedField value;
    std::vector<ExtendedField> gradients;
    int tail_start = 1;
};
WeakLimitCandidate candidate_weak_limit(const SequencePair& seq, double tail_fraction = 0.5);

struct ClassifyOptions {
    std::optional<double> tol_strong;  // default 10 sqrt(h) * field scale
    std::optional<double> tol_weak;    // default same
    std::optional<double> symdiff_tol; // default 0.1 * measure(limit)
    double tail_fraction = 0.5;
    int cauchy_budget = 24;
    std::uint64_t seed = default_seed();
};

/// Scale used by the default tolerances: the largest field magnitude over the
/// tail and the limit (1 if everything vanishes).
double field_scale(const SequencePair& seq, double tail_fraction = 0.5);
double default_tolerance(const SequencePair& seq, double tail_fraction = 0.5);

/// Full verdict: strong when the tail of ze distances to the limit is below
/// tolerance; weak-only when the dictionary pairings settle but the strong
/// tail does not; none otherwise. Weak verdicts additionally require the
/// domain symmetric differences to shrink and, at k = 1, the averaged
/// candidate gradient to pass the weak-derivative membership check on the
/// limit domain.
ConvergenceReport classify(const SequencePair& seq, const TestDictionary& dict,
                           const ClassifyOptions& opts = {});

} // namespace vardom

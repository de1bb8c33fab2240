#pragma once
// Degree-truncated depth diagnostics for presented graded-commutative rings:
// regular-sequence certificates (certified two ways - stepwise injectivity
// and the Hilbert-series factorization - which must agree), detection
// injectivity against a family of maps, the three bounded depth numbers, the
// injection-lifting checker, and associated-prime annihilator witnesses.
//
// Every positive verdict is bound-stamped: "regular" or "injective" means
// "through the stated degree".  Witnesses, by contrast, are unconditional.

#include <optional>
#include <string>
#include <vector>

#include "cohdepth/polarise.hpp"

namespace cohdepth {

struct ZeroDivisorWitness {
    int position = 0;  // index into the sequence of the element that failed
    Element witness;   // w outside the prefix ideal with seq[position]*w inside
    int degree = 0;
};

struct RegSeqCertificate {
    std::vector<Element> seq;
    int bound = 0;
    int regular_prefix = 0;  // leading elements certified regular through bound
    std::optional<ZeroDivisorWitness> failure;
    bool hilbert_agrees = false;  // series criterion matched the verdict at every step

    bool regular() const { return !failure.has_value(); }
};

// Stepwise certificate: at step k, multiplication by seq[k] on the quotient
// by the prefix ideal is checked injective in every degree <= bound minus
// deg seq[k].  The first failure is returned as an explicit witness, chosen
// of lowest degree and then lexicographically smallest coordinates.  Each
// step is cross-checked against H_(A/I+(theta)) == (1 - t^deg) * H_(A/I)
// truncated at the bound.
RegSeqCertificate is_regular_sequence(const AlgebraPtr& A, const std::vector<Element>& seq, int bound);

struct DetectionResult {
    bool injective = false;
    int bound = 0;
    std::optional<Element> witness;  // nonzero class modulo the ideal killed by every map
    std::string note;                // set when the verdict could not be computed
    bool known = true;
};

// Is the product of the maps injective on R/(mod_ideal) through the bound?
// The target of each map is taken modulo the ideal generated by the images
// of mod_ideal.
DetectionResult detection_injective(const AlgebraPtr& R, const std::vector<AlgebraMap>& maps,
                                    const std::vector<Element>& mod_ideal, int bound);

struct TauEntry {
    int value = -1;
    bool known = false;
    int bound = 0;
    std::string note;
};

struct DepthReport {
    int z = 0, r = 0, bound = 0;
    TauEntry tau_a;   // z + longest regular kappa-prefix
    TauEntry tau_aH;  // z + largest s whose quotient is detected on the rank-(z+s) centralizers
    TauEntry tau_H;   // largest d whose centralizer family detects the whole ring
    int s_a = -1;
    int s_aH = -1;
    std::vector<int> S_aH;  // the achieved set; must come out an initial segment
    std::optional<ZeroDivisorWitness> kappa_failure;
    std::optional<Element> detection_witness;
    bool red_alert = false;  // a bounded verdict contradicted the governing identity
    std::vector<std::string> notes;
};

// The three depth numbers for a system over the loaded ring data.  Numbers
// whose inputs are missing (no presented ring, no restriction map, a
// centralizer with no usable cohomology) are reported unknown, never
// guessed.  tau_a == tau_aH is expected; a bounded disagreement sets
// red_alert.
DepthReport tau_numbers(const CohomologySystem& sys, const ParameterSystem& ps, int bound);

struct LiftResult {
    bool concluded = false;  // false when no valid regularity certificate was supplied
    std::string reason;
    bool hypothesis_injective = false;  // detection modulo the powered ideal
    bool conclusion_injective = false;  // detection modulo the first powers, checked directly
    bool consistent = true;             // hypothesis true but direct check false => false
    int bound = 0;
};

// Power-lifting checker: given a certificate that cert.seq is regular, an
// injectivity verdict modulo (seq[i]^powers[i]) transfers down to the ideal
// of first powers.  Both sides are computed and compared; the implication
// failing at the bound is flagged, not hidden.
LiftResult lift_injection_through_powers(const AlgebraPtr& R, const std::vector<AlgebraMap>& maps,
                                         const RegSeqCertificate& cert, const std::vector<int>& powers,
                                         int bound);

// Smallest-degree x outside the ideal I with kappa_j * x in I for every j,
// ties broken by lexicographically smallest coordinates.  Certifies the
// annihilator containment only - no primality claim is made.
std::optional<Element> assoc_prime_witness(const AlgebraPtr& R, const std::vector<Element>& I,
                                          const std::vector<Element>& kappas, int bound);

// Degreewise span of the ideal generated by gens, as a subspace of the
// coordinate space over the canonical basis of A in degree d.
Subspace ideal_span_in_degree(const AlgebraPtr& A, const std::vector<Element>& gens, int d);

struct DuflotReport {
    Verdict3 tight;                // is the depth stuck at the central rank?
    Verdict3 regularity_says;      // kappa_1 fails to extend the zeta-sequence
    Verdict3 detection_says;       // the rank-(z+1) centralizer family fails to detect
    Verdict3 annihilator_says;     // some nonzero class is killed by every kappa
    bool consistent = true;        // computable verdicts must agree
    int bound = 0;
    std::vector<std::string> notes;
};

// Evaluates the three equivalent characterizations of depth == z and checks
// them against each other; any computable disagreement is reported as an
// inconsistency to be resolved by raising the bound.
DuflotReport duflot_tightness(const CohomologySystem& sys, const ParameterSystem& ps, int bound);

// 2 * max parameter degree + max relation degree; the empirical default that
// captures the shipped fixtures' behaviour.
int default_depth_bound(const CohomologySystem& sys, const ParameterSystem& ps);

}  // namespace cohdepth

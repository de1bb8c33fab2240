#include "cohdepth/depth.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cohdepth {

namespace {

void check_sequence_element(const AlgebraPtr& A, const Element& x, size_t pos) {
    std::ostringstream msg;
    if (x.host() != A) {
        msg << "sequence element " << pos << " lives on a different algebra";
        throw std::invalid_argument(msg.str());
    }
    if (x.is_zero()) {
        msg << "sequence element " << pos << " is zero";
        throw std::invalid_argument(msg.str());
    }
    if (!x.is_homogeneous()) {
        msg << "sequence element " << pos << " is not homogeneous";
        throw std::invalid_argument(msg.str());
    }
    if (x.degree() <= 0) {
        msg << "sequence element " << pos << " has degree 0";
        throw std::invalid_argument(msg.str());
    }
}

// Degreewise spans of the ideal generated by a fixed list, built on demand.
class IdealSpans {
public:
    IdealSpans(AlgebraPtr A, std::vector<Element> gens) : A_(std::move(A)) {
        for (const Element& g : gens)
            if (!g.is_zero()) gens_.push_back(g);
    }

    const Subspace& at(int d) {
        auto it = cache_.find(d);
        if (it != cache_.end()) return it->second;
        const int n = A_->dim_in_degree(d);
        std::vector<std::vector<uint8_t>> rows;
        for (const Element& g : gens_) {
            const int dg = g.degree();
            if (dg > d) continue;
            const int m = A_->dim_in_degree(d - dg);
            for (int j = 0; j < m; ++j) {
                Element prod = A_->from_basis_coords(d - dg, unit_vector(m, j)) * g;
                rows.push_back(A_->basis_coords(prod, d));
            }
        }
        FpMatrix mat(A_->p(), static_cast<int>(rows.size()), n);
        for (size_t r = 0; r < rows.size(); ++r)
            for (int c = 0; c < n; ++c) mat.at(static_cast<int>(r), c) = rows[r][c];
        RrefResult rr = rref(mat);
        Subspace span;
        span.p = A_->p();
        span.ambient = n;
        span.pivots = rr.pivots;
        for (int r = 0; r < rr.rank; ++r) {
            std::vector<uint8_t> row(n);
            for (int c = 0; c < n; ++c) row[c] = rr.mat.at(r, c);
            span.basis.push_back(std::move(row));
        }
        return cache_.emplace(d, std::move(span)).first->second;
    }

    int quotient_dim(int d) { return A_->dim_in_degree(d) - at(d).dim(); }

private:
    static std::vector<uint8_t> unit_vector(int n, int j) {
        std::vector<uint8_t> v(n, 0);
        v[j] = 1;
        return v;
    }

    AlgebraPtr A_;
    std::vector<Element> gens_;
    std::map<int, Subspace> cache_;
};

// The lexicographically smallest rref basis row of `inside` not contained in
// `avoid` (rows are scanned from the last, whose leading entry is furthest
// right and which therefore compares smallest).  Empty when inside <= avoid.
std::optional<std::vector<uint8_t>> smallest_row_outside(const Subspace& inside, const Subspace& avoid) {
    for (auto it = inside.basis.rbegin(); it != inside.basis.rend(); ++it)
        if (!avoid.contains(*it)) return *it;
    return std::nullopt;
}

}  // namespace

Subspace ideal_span_in_degree(const AlgebraPtr& A, const std::vector<Element>& gens, int d) {
    IdealSpans spans(A, gens);
    return spans.at(d);
}

RegSeqCertificate is_regular_sequence(const AlgebraPtr& A, const std::vector<Element>& seq, int bound) {
    if (bound < 0) throw std::invalid_argument("negative bound");
    for (size_t i = 0; i < seq.size(); ++i) check_sequence_element(A, seq[i], i);

    RegSeqCertificate cert;
    cert.seq = seq;
    cert.bound = bound;
    cert.hilbert_agrees = true;

    // spans[k] is the ideal of the length-k prefix
    std::vector<IdealSpans> spans;
    for (size_t k = 0; k <= seq.size(); ++k)
        spans.emplace_back(A, std::vector<Element>(seq.begin(), seq.begin() + k));

    for (size_t k = 0; k < seq.size(); ++k) {
        const Element& theta = seq[k];
        const int dt = theta.degree();

        // Multiplication by theta on the quotient by the prefix, degree by degree.
        bool step_injective = true;
        for (int e = 0; e + dt <= bound && step_injective; ++e) {
            const int n = A->dim_in_degree(e);
            if (n == 0) continue;
            const Subspace& target_ideal = spans[k].at(e + dt);
            const int m = target_ideal.ambient;
            FpMatrix M(A->p(), m, n);
            for (int j = 0; j < n; ++j) {
                std::vector<uint8_t> unit(n, 0);
                unit[j] = 1;
                Element image = A->from_basis_coords(e, unit) * theta;
                std::vector<uint8_t> v = target_ideal.reduce(A->basis_coords(image, e + dt));
                for (int rrow = 0; rrow < m; ++rrow) M.at(rrow, j) = v[rrow];
            }
            Subspace ker = kernel_basis(M);
            if (ker.dim() == 0) continue;
            auto bad = smallest_row_outside(ker, spans[k].at(e));
            if (bad) {
                step_injective = false;
                cert.failure = ZeroDivisorWitness{static_cast<int>(k), A->from_basis_coords(e, *bad), e};
            }
        }

        // Independent route: the quotient series must drop by exactly the
        // (1 - t^dt) factor if and only if the step was injective in range.
        bool series_clean = true;
        for (int e = 0; e <= bound; ++e) {
            const int q_before = spans[k].quotient_dim(e);
            const int q_after = spans[k + 1].quotient_dim(e);
            const int expected = q_before - (e >= dt ? spans[k].quotient_dim(e - dt) : 0);
            if (q_after != expected) {
                series_clean = false;
                break;
            }
        }
        if (series_clean != step_injective) cert.hilbert_agrees = false;

        if (!step_injective) {
            cert.regular_prefix = static_cast<int>(k);
            return cert;
        }
    }
    cert.regular_prefix = static_cast<int>(seq.size());
    return cert;
}

DetectionResult detection_injective(const AlgebraPtr& R, const std::vector<AlgebraMap>& maps,
                                    const std::vector<Element>& mod_ideal, int bound) {
    for (const AlgebraMap& h : maps)
        if (h.source() != R) throw std::invalid_argument("detection maps must share their source");
    for (const Element& x : mod_ideal)
        if (!x.is_zero() && x.host() != R)
            throw std::invalid_argument("ideal element lives on a different algebra");

    DetectionResult res;
    res.bound = bound;

    IdealSpans source_ideal(R, mod_ideal);
    std::vector<IdealSpans> target_ideals;
    for (const AlgebraMap& h : maps) {
        std::vector<Element> images;
        for (const Element& x : mod_ideal) images.push_back(h.apply(x));
        target_ideals.emplace_back(h.target(), std::move(images));
    }

    for (int e = 0; e <= bound; ++e) {
        const int n = R->dim_in_degree(e);
        if (n == 0) continue;
        if (source_ideal.quotient_dim(e) == 0) continue;

        std::vector<std::vector<uint8_t>> rows;
        std::vector<Element> basis;
        for (int j = 0; j < n; ++j) {
            std::vector<uint8_t> unit(n, 0);
            unit[j] = 1;
            basis.push_back(R->from_basis_coords(e, unit));
        }
        for (size_t hidx = 0; hidx < maps.size(); ++hidx) {
            const Subspace& J = target_ideals[hidx].at(e);
            std::vector<std::vector<uint8_t>> cols;
            for (int j = 0; j < n; ++j) {
                Element y = maps[hidx].apply(basis[j]);
                cols.push_back(J.reduce(maps[hidx].target()->basis_coords(y, e)));
            }
            for (int rrow = 0; rrow < J.ambient; ++rrow) {
                std::vector<uint8_t> row(n);
                for (int j = 0; j < n; ++j) row[j] = cols[j][rrow];
                rows.push_back(std::move(row));
            }
        }
        FpMatrix M(R->p(), static_cast<int>(rows.size()), n);
        for (size_t rrow = 0; rrow < rows.size(); ++rrow)
            for (int j = 0; j < n; ++j) M.at(static_cast<int>(rrow), j) = rows[rrow][j];
        Subspace ker = kernel_basis(M);
        if (ker.dim() == 0) continue;
        auto bad = smallest_row_outside(ker, source_ideal.at(e));
        if (bad) {
            res.injective = false;
            res.witness = R->from_basis_coords(e, *bad);
            return res;
        }
    }
    res.injective = true;
    return res;
}

namespace {

bool ring_mode_usable(const CohomologySystem& sys, const ParameterSystem& ps, std::string* why) {
    if (ps.restriction_only) {
        *why = "the system carries restriction images only, no ring elements";
        return false;
    }
    if (!sys.ring || sys.ring->generators().empty()) {
        *why = "no presented ring is available";
        return false;
    }
    for (const Element& x : ps.zetas)
        if (x.host() != sys.ring) {
            *why = "a zeta lives outside the loaded ring";
            return false;
        }
    for (const Element& x : ps.kappas)
        if (x.host() != sys.ring) {
            *why = "a kappa lives outside the loaded ring";
            return false;
        }
    return true;
}

// Restriction maps for the degree-d centralizer family: the identity for the
// whole group, the block map for a self-centralizing member, nothing we can
// use otherwise.
std::optional<std::vector<AlgebraMap>> family_maps(const CohomologySystem& sys, int d, std::string* why) {
    if (!sys.group) {
        *why = "no group table in the loaded system";
        return std::nullopt;
    }
    const GroupTable& G = *sys.group;
    SubgroupFamily ac = enumerate_ACd(G, d);
    SubgroupFamily hc = centralizer_family(G, ac);
    std::vector<AlgebraMap> maps;
    for (const Subgroup& H : hc.members) {
        if (H.order() == G.order()) {
            maps.push_back(AlgebraMap::identity(sys.ring));
            continue;
        }
        const SubgroupBlock* block = sys.block_by_id(H.id(G));
        if (block && block->restriction) {
            maps.push_back(*block->restriction);
            continue;
        }
        std::ostringstream msg;
        msg << "no usable cohomology for a rank-" << d << " centralizer of order " << H.order();
        *why = msg.str();
        return std::nullopt;
    }
    return maps;
}

}  // namespace

DepthReport tau_numbers(const CohomologySystem& sys, const ParameterSystem& ps, int bound) {
    DepthReport rep;
    rep.z = ps.z;
    rep.r = ps.r;
    rep.bound = bound;
    rep.tau_a.bound = rep.tau_aH.bound = rep.tau_H.bound = bound;

    std::string why;
    const bool ring_ok = ring_mode_usable(sys, ps, &why);
    if (!ring_ok) {
        rep.tau_a.note = rep.tau_aH.note = rep.tau_H.note = why;
        rep.notes.push_back(why);
        return rep;
    }

    std::vector<Element> params;
    params.insert(params.end(), ps.zetas.begin(), ps.zetas.end());
    params.insert(params.end(), ps.kappas.begin(), ps.kappas.end());

    // tau_a: the longest regular prefix of the kappas after the zetas.
    RegSeqCertificate cert = is_regular_sequence(sys.ring, params, bound);
    if (!cert.hilbert_agrees)
        rep.notes.push_back("regularity certification routes disagreed; treat the report as suspect");
    if (cert.regular_prefix < ps.z) {
        rep.tau_a.note = "the central parameters themselves are not a regular sequence here";
        rep.notes.push_back(rep.tau_a.note);
        if (cert.failure) rep.kappa_failure = cert.failure;
    } else {
        rep.s_a = cert.regular_prefix - ps.z;
        rep.tau_a.value = ps.z + rep.s_a;
        rep.tau_a.known = true;
        if (cert.failure) rep.kappa_failure = cert.failure;
    }

    // S_aH: s belongs when the quotient by the first z+s-1 parameters is
    // detected on the rank-(z+s) centralizer family.  Every s is computed so
    // the initial-segment property is a check, not an assumption; an s whose
    // family lacks cohomology stays unknown rather than counting as absent.
    enum { kOut = 0, kIn = 1, kUndecided = -1 };
    std::vector<int> status(ps.r - ps.z + 1, kUndecided);
    for (int s = 0; s <= ps.r - ps.z; ++s) {
        std::string fam_why;
        auto maps = family_maps(sys, ps.z + s, &fam_why);
        if (!maps) {
            rep.notes.push_back("rank " + std::to_string(ps.z + s) + ": " + fam_why);
            continue;
        }
        const int keep = std::max(0, ps.z + s - 1);
        std::vector<Element> mod(params.begin(), params.begin() + std::min<size_t>(keep, params.size()));
        DetectionResult det = detection_injective(sys.ring, *maps, mod, bound);
        status[s] = det.injective ? kIn : kOut;
        if (det.injective)
            rep.S_aH.push_back(s);
        else if (!rep.detection_witness)
            rep.detection_witness = det.witness;
    }
    for (size_t lo = 0; lo < status.size(); ++lo)
        for (size_t hi = lo + 1; hi < status.size(); ++hi)
            if (status[lo] == kOut && status[hi] == kIn) {
                rep.red_alert = true;
                rep.notes.push_back("the achieved detection set is not an initial segment");
            }
    const bool saH_complete =
        std::none_of(status.begin(), status.end(), [](int v) { return v == kUndecided; });
    if (saH_complete && !rep.S_aH.empty() && !rep.red_alert) {
        rep.s_aH = rep.S_aH.back();
        rep.tau_aH.value = ps.z + rep.s_aH;
        rep.tau_aH.known = true;
    } else if (!saH_complete) {
        rep.tau_aH.note = "some centralizer families were not computable";
    } else if (rep.S_aH.empty()) {
        rep.tau_aH.note = "detection failed even over the central family";
    }

    // tau_H: the largest d whose centralizer family detects the ring itself.
    // The maximum is settled once every rank above the best detecting one has
    // a definite (non-detecting) verdict.
    int best = -1;
    int undecided_above = -1;
    for (int d = ps.z; d <= ps.r; ++d) {
        std::string fam_why;
        auto maps = family_maps(sys, d, &fam_why);
        if (!maps) {
            rep.notes.push_back("rank " + std::to_string(d) + ": " + fam_why);
            undecided_above = std::max(undecided_above, d);
            continue;
        }
        DetectionResult det = detection_injective(sys.ring, *maps, {}, bound);
        if (det.injective) best = std::max(best, d);
    }
    if (best >= 0 && undecided_above <= best) {
        rep.tau_H.value = best;
        rep.tau_H.known = true;
    } else if (undecided_above >= 0) {
        rep.tau_H.note = "some centralizer families were not computable";
    } else {
        rep.tau_H.note = "no centralizer family detects the ring through this bound";
    }

    if (rep.tau_a.known && rep.tau_aH.known && rep.tau_a.value != rep.tau_aH.value) {
        rep.red_alert = true;
        rep.notes.push_back("tau_a and tau_aH disagree at this bound; expected equal");
    }
    if (rep.tau_H.known && rep.tau_aH.known && rep.tau_H.value < rep.tau_aH.value) {
        rep.red_alert = true;
        rep.notes.push_back("tau_H fell below tau_aH at this bound; expected >=");
    }
    if (rep.tau_a.known && rep.tau_aH.known && rep.tau_a.value < rep.tau_aH.value) {
        rep.red_alert = true;
        rep.notes.push_back("tau_a fell below tau_aH at this bound; expected >=");
    }
    return rep;
}

LiftResult lift_injection_through_powers(const AlgebraPtr& R, const std::vector<AlgebraMap>& maps,
                                         const RegSeqCertificate& cert, const std::vector<int>& powers,
                                         int bound) {
    LiftResult out;
    out.bound = bound;
    if (powers.size() != cert.seq.size())
        throw std::invalid_argument("one exponent per sequence element is required");
    for (int n : powers)
        if (n < 1) throw std::invalid_argument("exponents must be positive");
    if (!cert.regular()) {
        out.reason = "the sequence carries a zero-divisor witness, so nothing lifts";
        return out;
    }
    if (cert.bound < bound) {
        out.reason = "the regularity certificate stops below the requested bound";
        return out;
    }
    for (const Element& x : cert.seq)
        if (x.host() != R) {
            out.reason = "the certificate belongs to a different algebra";
            return out;
        }

    std::vector<Element> powered;
    for (size_t i = 0; i < cert.seq.size(); ++i) powered.push_back(cert.seq[i].pow(powers[i]));

    DetectionResult hyp = detection_injective(R, maps, powered, bound);
    DetectionResult dir = detection_injective(R, maps, cert.seq, bound);
    out.concluded = true;
    out.hypothesis_injective = hyp.injective;
    out.conclusion_injective = dir.injective;
    out.consistent = !(hyp.injective && !dir.injective);
    if (!out.consistent)
        out.reason = "injectivity modulo the powers did not transfer to the first powers";
    return out;
}

std::optional<Element> assoc_prime_witness(const AlgebraPtr& R, const std::vector<Element>& I,
                                          const std::vector<Element>& kappas, int bound) {
    for (const Element& x : I)
        if (!x.is_zero() && x.host() != R)
            throw std::invalid_argument("ideal element lives on a different algebra");
    for (const Element& x : kappas) {
        if (x.host() != R) throw std::invalid_argument("kappa lives on a different algebra");
        if (x.is_zero() || !x.is_homogeneous())
            throw std::invalid_argument("kappas must be nonzero homogeneous");
    }

    IdealSpans ideal(R, I);
    for (int e = 0; e <= bound; ++e) {
        const int n = R->dim_in_degree(e);
        if (n == 0) continue;
        if (ideal.quotient_dim(e) == 0) continue;

        std::vector<std::vector<uint8_t>> rows;
        for (const Element& kappa : kappas) {
            const int dk = kappa.degree();
            const Subspace& J = ideal.at(e + dk);
            std::vector<std::vector<uint8_t>> cols;
            for (int j = 0; j < n; ++j) {
                std::vector<uint8_t> unit(n, 0);
                unit[j] = 1;
                Element prod = R->from_basis_coords(e, unit) * kappa;
                cols.push_back(J.reduce(R->basis_coords(prod, e + dk)));
            }
            for (int rrow = 0; rrow < J.ambient; ++rrow) {
                std::vector<uint8_t> row(n);
                for (int j = 0; j < n; ++j) row[j] = cols[j][rrow];
                rows.push_back(std::move(row));
            }
        }
        FpMatrix M(R->p(), static_cast<int>(rows.size()), n);
        for (size_t rrow = 0; rrow < rows.size(); ++rrow)
            for (int j = 0; j < n; ++j) M.at(static_cast<int>(rrow), j) = rows[rrow][j];
        Subspace ker = kernel_basis(M);
        if (ker.dim() == 0) continue;
        auto hit = smallest_row_outside(ker, ideal.at(e));
        if (hit) return R->from_basis_coords(e, *hit);
    }
    return std::nullopt;
}

DuflotReport duflot_tightness(const CohomologySystem& sys, const ParameterSystem& ps, int bound) {
    DuflotReport rep;
    rep.bound = bound;

    if (ps.r == ps.z) {
        rep.tight = {Verdict::kNo, "the p-rank equals the central rank, so the depth window is empty"};
        rep.regularity_says = {Verdict::kNo, "no kappas to test"};
        rep.detection_says = {Verdict::kNo, "no larger family exists; detection holds trivially"};
        rep.annihilator_says = {Verdict::kNo, "no kappas to annihilate"};
        return rep;
    }

    std::string why;
    const bool ring_ok = ring_mode_usable(sys, ps, &why);

    if (ring_ok && !ps.kappas.empty()) {
        std::vector<Element> seq = ps.zetas;
        seq.push_back(ps.kappas.front());
        RegSeqCertificate cert = is_regular_sequence(sys.ring, seq, bound);
        if (cert.regular())
            rep.regularity_says = {Verdict::kNo, "the first kappa extends the central sequence"};
        else if (cert.regular_prefix >= ps.z)
            rep.regularity_says = {Verdict::kYes, "zero divisor in degree " +
                                                   std::to_string(cert.failure->degree)};
        else
            rep.regularity_says = {Verdict::kUnknown, "the central parameters already fail"};
    } else {
        rep.regularity_says = {Verdict::kUnknown, why};
    }

    if (ring_ok) {
        std::string fam_why;
        auto maps = family_maps(sys, ps.z + 1, &fam_why);
        if (maps) {
            DetectionResult det = detection_injective(sys.ring, *maps, {}, bound);
            if (det.injective)
                rep.detection_says = {Verdict::kNo, "the rank-(z+1) centralizers detect the ring"};
            else
                rep.detection_says = {Verdict::kYes, "undetected class: " + det.witness->to_string()};
        } else {
            rep.detection_says = {Verdict::kUnknown, fam_why};
        }
    } else {
        rep.detection_says = {Verdict::kUnknown, why};
    }

    if (ring_ok && !ps.kappas.empty()) {
        auto hit = assoc_prime_witness(sys.ring, {}, ps.kappas, bound);
        if (hit)
            rep.annihilator_says = {Verdict::kYes, "annihilated class: " + hit->to_string()};
        else
            rep.annihilator_says = {Verdict::kNo, "no class annihilated by every kappa through the bound"};
    } else {
        rep.annihilator_says = {Verdict::kUnknown, why};
    }

    std::vector<Verdict> votes;
    for (const Verdict3* v : {&rep.regularity_says, &rep.detection_says, &rep.annihilator_says})
        if (v->v != Verdict::kUnknown) votes.push_back(v->v);
    if (votes.empty()) {
        rep.tight = {Verdict::kUnknown, "no statement was computable"};
        return rep;
    }
    const bool all_same = std::all_of(votes.begin(), votes.end(), [&](Verdict v) { return v == votes.front(); });
    if (!all_same) {
        rep.consistent = false;
        rep.tight = {Verdict::kUnknown, "the computable statements disagree; raise the bound"};
        rep.notes.push_back("equivalent characterizations disagreed at this bound");
        return rep;
    }
    rep.tight = {votes.front(), votes.front() == Verdict::kYes
                                    ? "every computable statement reports depth stuck at the central rank"
                                    : "every computable statement reports depth above the central rank"};
    return rep;
}

int default_depth_bound(const CohomologySystem& sys, const ParameterSystem& ps) {
    int max_param = 0;
    for (int d : ps.zeta_degrees) max_param = std::max(max_param, d);
    for (int d : ps.kappa_degrees) max_param = std::max(max_param, d);
    int max_rel = 0;
    if (sys.ring)
        for (const Poly& rel : sys.ring->relations())
            for (const auto& [mono, coeff] : rel) {
                (void)coeff;
                max_rel = std::max(max_rel, sys.ring->monomial_degree(mono));
            }
    return 2 * max_param + max_rel;
}

}  // namespace cohdepth

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cohdepth/algebra.hpp"
#include "cohdepth/fplin.hpp"

namespace cohdepth {

// Ceiling on the number of vectors a span enumeration may touch.
inline constexpr long long kDefaultSpanCap = 81;

std::vector<std::string> dual_generator_names(int m);

// Polynomial algebra k[V*] on m generators of degree 2.  With classical=true
// (p = 2 only) the generators carry degree 1 instead, halving all degrees.
AlgebraPtr dual_space_algebra(int p, int m, bool classical = false);

// The expanded product prod_{v in span(basis)} (X - v), collected by X-power.
// f(X) = sum_s (-1)^s D[s] X^{p^{m-s}} with D[0] = 1; every X-exponent that
// occurs is a power of p (checked).
struct SpanProduct {
    AlgebraPtr host;
    std::vector<Element> basis;          // independent linear forms in host generators
    std::map<long long, Element> coeff;  // X-exponent -> coefficient
    std::vector<Element> D;              // D[0..m]
};

// Literal expansion over all p^m span vectors, associated so that partial
// products run over subspace cosets and stay sparse.  Throws when p^m > cap
// or when the basis forms are dependent.
SpanProduct expand_span(const std::vector<Element>& basis, long long cap = kDefaultSpanCap);
// Same, with the host passed explicitly so the basis may be empty (rank 0).
SpanProduct expand_span(const AlgebraPtr& host, const std::vector<Element>& basis,
                        long long cap = kDefaultSpanCap);

// Classical rank-m invariants inside dual_space_algebra(p, m).
SpanProduct expand_fv(int p, int m, long long cap = kDefaultSpanCap, bool classical = false);

// f evaluated at an algebra element (pass host->one() for f(1)).
Element evaluate_span(const SpanProduct& f, const Element& at);

int dickson_degree(int p, int m, int s, bool classical = false);

// Substitution gen_i -> sum_j g(i,j) gen_j on x's host.
Element substitute_linear(const Element& x, const FpMatrix& g);

struct GlInvarianceReport {
    bool ok = true;
    int trials_run = 0;
    int failed_index = -1;  // s with D_s moved, when !ok
    FpMatrix counterexample{2, 0, 0};
};

// Substitutes `trials` seeded-random invertible matrices into each D_s and
// demands the result come back unchanged.
GlInvarianceReport check_gl_invariance(const SpanProduct& fv, int trials, uint64_t seed);

struct RestrictionRow {
    int s;
    Element image;     // D_s with the last l generators killed, living in k[U*]
    Element expected;  // D_s(U)^{p^l}, zero once s exceeds m - l
    bool match;
};

// The mapping table for the projection k[V*] -> k[U*] of corank l, verified
// by direct substitution.
std::vector<RestrictionRow> restrict_dickson(int p, int m, int l, long long cap = kDefaultSpanCap,
                                             bool classical = false);

struct ChernClasses {
    AlgebraPtr host;
    Element total;                  // the full evaluated product
    std::vector<Element> zeta_bar;  // zeta_bar[i] = (-1)^i D_i, i = 0..z
};

// Total Chern class of the regular representation of a rank-z elementary
// abelian group, read off as f(1) and split into homogeneous pieces.
ChernClasses regular_rep_chern(int p, int z, long long cap = kDefaultSpanCap);

// prod(1 + lambda) over linear characters given by coordinate vectors in U*.
Element chern_of_character_sum(const AlgebraPtr& dual, const std::vector<std::vector<uint8_t>>& chars);

// Homogeneous piece of a total class with the given Chern index (degree
// gen_degree * index in the host grading).
Element chern_component(const Element& total, int chern_index);

}  // namespace cohdepth

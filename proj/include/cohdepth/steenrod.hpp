#pragma once

#include <cstdint>
#include <vector>

#include "cohdepth/algebra.hpp"
#include "cohdepth/dickson.hpp"

namespace cohdepth {

// P^i on elements of a relation-free host, defined generatorwise by
// P(g) = g + g^p and extended by the Cartan formula.  Input must be
// homogeneous, avoid exterior generators, and touch generators of one common
// degree only; P^i vanishes once i exceeds the generator count of a monomial,
// so instability comes for free.
Element apply_power(long long i, const Element& x);

// [P^0(x), ..., P^max_i(x)], the truncated total power.
std::vector<Element> total_power(const Element& x, int max_i);

struct KappaChainResult {
    Element value;               // the composite applied to eta_bar
    std::vector<long long> ops;  // the P-indices used, in application order
    Element oracle;              // D_j(W)^{p^(n-z-s)}, zero once j exceeds s = rank W
    bool matches_oracle = false;
};

// Carries eta_bar = D_1(W)^{p^(n-z-s)} to the j-th class by the composite of
// power operations with indices p^(n-z-2), p^(n-z-3), ..., p^(n-z-j), applied
// largest first.  The result is compared against the span-product oracle and
// any mismatch is flagged, never hidden.
KappaChainResult kappa_chain(int n, int z, int j, const Element& eta_bar,
                             const std::vector<Element>& w_basis, long long cap = kDefaultSpanCap);

}  // namespace cohdepth

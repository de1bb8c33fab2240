#include "cohdepth/steenrod.hpp"

#include <stdexcept>

namespace cohdepth {

namespace {

// Distribute the remaining power index over the monomial positions.
void convolve(const Monomial& m, const std::vector<int>& positions, size_t at, long long remaining, int coeff,
              Monomial& cur, int p, Poly& out) {
    if (at == positions.size()) {
        if (remaining) return;
        int v = (out.count(cur) ? out[cur] : 0) + coeff;
        v %= p;
        if (v)
            out[cur] = v;
        else
            out.erase(cur);
        return;
    }
    int gi = positions[at];
    int e = m.e[gi];
    long long top = std::min<long long>(e, remaining);
    for (long long k = 0; k <= top; ++k) {
        int b = binom_mod_p(e, k, p);
        if (!b) continue;
        cur.e[gi] = static_cast<uint16_t>(e + k * (p - 1));
        convolve(m, positions, at + 1, remaining - k, coeff * b % p, cur, p, out);
    }
    cur.e[gi] = m.e[gi];
}

}  // namespace

Element apply_power(long long i, const Element& x) {
    if (i < 0) throw std::invalid_argument("apply_power: negative index");
    AlgebraPtr host = x.host();
    if (!host) throw std::invalid_argument("apply_power: element without host");
    if (i == 0 || x.is_zero()) return x;
    if (!host->is_free()) throw std::invalid_argument("apply_power: host must be relation-free");
    if (!x.is_homogeneous()) throw std::invalid_argument("apply_power: input must be homogeneous");
    const int p = host->p();
    int common_degree = 0;
    for (const auto& [m, c] : x.terms())
        for (size_t g = 0; g < m.e.size(); ++g) {
            if (!m.e[g]) continue;
            const GeneratorSpec& spec = host->generators()[g];
            if (spec.odd) throw std::invalid_argument("apply_power: exterior generator '" + spec.name + "' in input");
            if (!common_degree)
                common_degree = spec.degree;
            else if (common_degree != spec.degree)
                throw std::invalid_argument("apply_power: generators of mixed degree in input");
        }
    Poly out;
    std::vector<int> positions;
    Monomial cur;
    for (const auto& [m, c] : x.terms()) {
        positions.clear();
        for (size_t g = 0; g < m.e.size(); ++g)
            if (m.e[g]) positions.push_back(static_cast<int>(g));
        cur = m;
        convolve(m, positions, 0, i, c, cur, p, out);
    }
    return Element(host, std::move(out));
}

std::vector<Element> total_power(const Element& x, int max_i) {
    std::vector<Element> out;
    for (int i = 0; i <= max_i; ++i) out.push_back(apply_power(i, x));
    return out;
}

KappaChainResult kappa_chain(int n, int z, int j, const Element& eta_bar, const std::vector<Element>& w_basis,
                             long long cap) {
    if (j < 1) throw std::invalid_argument("kappa_chain: index must be at least 1");
    AlgebraPtr host = eta_bar.host();
    const int p = host->p();
    const int s = static_cast<int>(w_basis.size());
    if (n - z - s < 0) throw std::invalid_argument("kappa_chain: rank of W exceeds n - z");
    if (j >= 2 && n - z - j < 0) throw std::invalid_argument("kappa_chain: composite index p^(n-z-j) undefined");

    long long index_pow = 1;
    for (int t = 0; t < n - z - s; ++t) index_pow *= p;

    SpanProduct fw = expand_span(w_basis, cap);
    KappaChainResult res;
    res.oracle = (j <= s) ? fw.D[j].pow(index_pow) : host->zero();
    res.value = eta_bar;
    for (int t = n - z - 2; t >= n - z - j; --t) {
        long long i = 1;
        for (int q = 0; q < t; ++q) i *= p;
        res.value = apply_power(i, res.value);
        res.ops.push_back(i);
    }
    res.matches_oracle = (res.value == res.oracle);
    return res;
}

}  // namespace cohdepth

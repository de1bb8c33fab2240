#include "cohdepth/dickson.hpp"

#include <mutex>
#include <random>
#include <stdexcept>
#include <tuple>

namespace cohdepth {

namespace {

long long ipow(long long base, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

bool is_p_power(long long v, int p) {
    if (v < 1) return false;
    while (v % p == 0) v /= p;
    return v == 1;
}

// Coordinates of a linear form with respect to the host generators; throws if
// the element is not a combination of single generators.
std::vector<uint8_t> linear_coords(const Element& x) {
    const auto& gens = x.host()->generators();
    std::vector<uint8_t> out(gens.size(), 0);
    for (const auto& [m, c] : x.terms()) {
        int which = -1;
        for (size_t i = 0; i < m.e.size(); ++i) {
            if (!m.e[i]) continue;
            if (which >= 0 || m.e[i] != 1) throw std::invalid_argument("expected a linear form, got " + x.to_string());
            which = static_cast<int>(i);
        }
        if (which < 0) throw std::invalid_argument("expected a linear form, got " + x.to_string());
        out[which] = static_cast<uint8_t>(c);
    }
    return out;
}

}  // namespace

std::vector<std::string> dual_generator_names(int m) {
    if (m <= 3) {
        static const char* few[] = {"x", "y", "z"};
        return std::vector<std::string>(few, few + m);
    }
    std::vector<std::string> out;
    for (int i = 1; i <= m; ++i) out.push_back("x" + std::to_string(i));
    return out;
}

AlgebraPtr dual_space_algebra(int p, int m, bool classical) {
    if (m < 0) throw std::invalid_argument("dual_space_algebra: negative rank");
    if (classical && p != 2) throw std::invalid_argument("classical degree-1 generators exist only for p = 2");
    std::vector<GeneratorSpec> gens;
    for (const std::string& n : dual_generator_names(m)) gens.push_back({n, classical ? 1 : 2, false});
    return Algebra::make(p, std::move(gens));
}

SpanProduct expand_span(const std::vector<Element>& basis, long long cap) {
    if (basis.empty()) throw std::invalid_argument("expand_span: empty basis (pass the host explicitly)");
    return expand_span(basis[0].host(), basis, cap);
}

SpanProduct expand_span(const AlgebraPtr& host, const std::vector<Element>& basis, long long cap) {
    const int p = host->p();
    const int m = static_cast<int>(basis.size());
    long long count = 1;
    for (int i = 0; i < m; ++i) {
        count *= p;
        if (count > cap)
            throw std::invalid_argument("span enumeration needs " + std::to_string(ipow(p, m)) +
                                        " vectors, above the cap of " + std::to_string(cap) +
                                        "; raise the cap to proceed");
    }
    // independence check on the coordinate matrix of the forms
    {
        FpMatrix coords(p, m, static_cast<int>(host->generators().size()));
        for (int i = 0; i < m; ++i) {
            if (basis[i].host() != host) throw std::invalid_argument("expand_span: mixed hosts");
            std::vector<uint8_t> row = linear_coords(basis[i]);
            for (size_t j = 0; j < row.size(); ++j) coords.at(i, static_cast<int>(j)) = row[j];
        }
        if (rank_of(coords) != m) throw std::invalid_argument("expand_span: basis forms are dependent");
    }

    using XPoly = std::map<long long, Element>;
    // leaves (X - v) in span-vector order: consecutive runs of p^k share the
    // high digits, so every partial product below runs over a subspace coset
    // and keeps only p-power X-exponents plus a constant
    std::vector<XPoly> blocks;
    blocks.reserve(count);
    for (long long t = 0; t < count; ++t) {
        Element v = host->zero();
        long long rest = t;
        for (int i = 0; i < m; ++i) {
            int digit = static_cast<int>(rest % p);
            rest /= p;
            if (digit) v = v + basis[i].scaled(digit);
        }
        XPoly leaf;
        leaf[1] = host->one();
        if (!v.is_zero()) leaf[0] = v.scaled(-1);
        blocks.push_back(std::move(leaf));
    }
    while (blocks.size() > 1) {
        std::vector<XPoly> next;
        for (size_t b = 0; b < blocks.size(); b += p) {
            XPoly prod = std::move(blocks[b]);
            for (size_t k = 1; k < static_cast<size_t>(p); ++k) {
                XPoly out;
                for (const auto& [ea, ca] : prod)
                    for (const auto& [eb, cb] : blocks[b + k]) {
                        Element c = ca * cb;
                        if (c.is_zero()) continue;
                        auto it = out.find(ea + eb);
                        if (it == out.end())
                            out.emplace(ea + eb, c);
                        else {
                            it->second = it->second + c;
                            if (it->second.is_zero()) out.erase(it);
                        }
                    }
                prod = std::move(out);
            }
            next.push_back(std::move(prod));
        }
        blocks = std::move(next);
    }

    SpanProduct out;
    out.host = host;
    out.basis = basis;
    out.coeff = std::move(blocks[0]);
    for (const auto& [e, c] : out.coeff)
        if (!is_p_power(e, p)) throw std::logic_error("span product has X-exponent " + std::to_string(e));
    for (int s = 0; s <= m; ++s) {
        long long e = ipow(p, m - s);
        auto it = out.coeff.find(e);
        Element c = (it == out.coeff.end()) ? host->zero() : it->second;
        out.D.push_back(s % 2 ? c.scaled(-1) : c);
    }
    return out;
}

SpanProduct expand_fv(int p, int m, long long cap, bool classical) {
    // honor the cap before consulting the memo so the error contract does not
    // depend on call history
    long long count = 1;
    for (int i = 0; i < m; ++i) {
        count *= p;
        if (count > cap)
            throw std::invalid_argument("span enumeration needs " + std::to_string(ipow(p, m)) +
                                        " vectors, above the cap of " + std::to_string(cap) +
                                        "; raise the cap to proceed");
    }
    static std::mutex memo_mu;
    static std::map<std::tuple<int, int, bool>, SpanProduct> memo;
    const std::tuple<int, int, bool> key{p, m, classical};
    {
        std::lock_guard lk(memo_mu);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    AlgebraPtr dual = dual_space_algebra(p, m, classical);
    std::vector<Element> basis;
    for (int i = 0; i < m; ++i) basis.push_back(dual->gen(i));
    SpanProduct out = expand_span(dual, basis, cap);
    std::lock_guard lk(memo_mu);
    return memo.try_emplace(key, std::move(out)).first->second;
}

Element evaluate_span(const SpanProduct& f, const Element& at) {
    Element out = f.host->zero();
    for (const auto& [e, c] : f.coeff) out = out + c * at.pow(e);
    return out;
}

int dickson_degree(int p, int m, int s, bool classical) {
    if (s < 0 || s > m) throw std::invalid_argument("dickson_degree: index out of range");
    long long d = ipow(p, m) - ipow(p, m - s);
    return static_cast<int>(classical ? d : 2 * d);
}

namespace {

struct ElemOp {
    enum Kind { kSwap, kScale, kShear } kind;
    int i, j;  // kSwap: exchange x_i, x_j; kShear: x_i -> x_i + c x_j
    int c;     // kScale: x_i -> c x_i
};

// Decompose an invertible matrix into elementary factors g = E_1 E_2 ... E_r;
// the matching substitutions compose first-factor-first.  Returns false when
// the matrix is singular.
bool elementary_factors(FpMatrix a, std::vector<ElemOp>& out) {
    const int n = a.rows(), p = a.p();
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (a.at(r, c)) {
                piv = r;
                break;
            }
        if (piv < 0) return false;
        if (piv != c) {
            for (int k = 0; k < n; ++k) std::swap(a.at(piv, k), a.at(c, k));
            out.push_back({ElemOp::kSwap, piv, c, 0});
        }
        int d = a.at(c, c);
        if (d != 1) {
            int f = mod_inv(d, p);
            for (int k = 0; k < n; ++k) a.at(c, k) = static_cast<uint8_t>(a.at(c, k) * f % p);
            out.push_back({ElemOp::kScale, c, c, d});
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || !a.at(r, c)) continue;
            int f = a.at(r, c);
            for (int k = 0; k < n; ++k) a.at(r, k) = static_cast<uint8_t>((a.at(r, k) + f * (p - a.at(c, k))) % p);
            out.push_back({ElemOp::kShear, r, c, f});
        }
    }
    return true;
}

void add_term(Poly& out, const Monomial& m, int c, int p) {
    int v = (out.count(m) ? out[m] : 0) + c;
    v %= p;
    if (v)
        out[m] = v;
    else
        out.erase(m);
}

// Expand x_i -> x_i + c x_j across a polynomial, one base-p digit at a time,
// so a monomial spawns at most prod(digit+1) successors.
Poly apply_shear(const Poly& in, int i, int j, int c, int p) {
    Poly out;
    for (const auto& [m, coeff] : in) {
        int e = m.e[i];
        if (!e) {
            add_term(out, m, coeff, p);
            continue;
        }
        std::vector<std::pair<int, int>> moved{{0, coeff}};  // (amount shifted to j, coefficient)
        long long place = 1;
        for (int rest = e; rest > 0; rest /= p, place *= p) {
            int digit = rest % p;
            if (!digit) continue;
            std::vector<std::pair<int, int>> next;
            for (int k = 0; k <= digit; ++k) {
                int f = binom_mod_p(digit, k, p) * mod_pow(c, k, p) % p;
                if (!f) continue;
                for (const auto& [mv, co] : moved) next.emplace_back(mv + static_cast<int>(k * place), co * f % p);
            }
            moved = std::move(next);
        }
        for (const auto& [mv, co] : moved) {
            Monomial m2 = m;
            m2.e[i] = static_cast<uint16_t>(e - mv);
            m2.e[j] = static_cast<uint16_t>(m2.e[j] + mv);
            add_term(out, m2, co, p);
        }
    }
    return out;
}

}  // namespace

Element substitute_linear(const Element& x, const FpMatrix& g) {
    AlgebraPtr host = x.host();
    const int n = static_cast<int>(host->generators().size());
    if (g.rows() != n || g.cols() != n) throw std::invalid_argument("substitute_linear: matrix shape mismatch");
    const int p = host->p();
    if (g.p() != p) throw std::invalid_argument("substitute_linear: modulus mismatch");

    std::vector<ElemOp> ops;
    if (host->is_free() && elementary_factors(g, ops)) {
        Poly terms = x.terms();
        for (const ElemOp& op : ops) {
            switch (op.kind) {
                case ElemOp::kSwap: {
                    Poly next;
                    for (const auto& [m, c] : terms) {
                        Monomial m2 = m;
                        std::swap(m2.e[op.i], m2.e[op.j]);
                        next[m2] = c;
                    }
                    terms = std::move(next);
                    break;
                }
                case ElemOp::kScale: {
                    Poly next;
                    for (const auto& [m, c] : terms) {
                        int f = c * mod_pow(op.c, m.e[op.i], p) % p;
                        if (f) next[m] = f;
                    }
                    terms = std::move(next);
                    break;
                }
                case ElemOp::kShear:
                    terms = apply_shear(terms, op.i, op.j, op.c, p);
                    break;
            }
        }
        return Element(host, std::move(terms));
    }

    // singular matrix or presented host: generic substitution
    std::vector<Element> images;
    for (int i = 0; i < n; ++i) {
        Element im = host->zero();
        for (int j = 0; j < n; ++j)
            if (g.at(i, j)) im = im + host->gen(j).scaled(g.at(i, j));
        images.push_back(im);
    }
    return AlgebraMap(host, host, std::move(images)).apply(x);
}

GlInvarianceReport check_gl_invariance(const SpanProduct& fv, int trials, uint64_t seed) {
    GlInvarianceReport rep;
    const int p = fv.host->p();
    const int m = static_cast<int>(fv.basis.size());
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(0, p - 1);
    for (int t = 0; t < trials; ++t) {
        FpMatrix g(p, m, m);
        do {
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) g.at(i, j) = static_cast<uint8_t>(dist(rng));
        } while (rank_of(g) != m);
        ++rep.trials_run;
        for (int s = 1; s <= m; ++s) {
            if (substitute_linear(fv.D[s], g) == fv.D[s]) continue;
            rep.ok = false;
            rep.failed_index = s;
            rep.counterexample = g;
            return rep;
        }
    }
    return rep;
}

std::vector<RestrictionRow> restrict_dickson(int p, int m, int l, long long cap, bool classical) {
    if (l < 0 || l > m) throw std::invalid_argument("restrict_dickson: need 0 <= l <= m");
    const int u = m - l;
    SpanProduct big = expand_fv(p, m, cap, classical);
    SpanProduct small = expand_fv(p, u, cap, classical);
    AlgebraPtr U = small.host;
    std::vector<Element> images;
    for (int i = 0; i < m; ++i) images.push_back(i < u ? U->gen(i) : U->zero());
    AlgebraMap proj(big.host, U, std::move(images));
    long long q = ipow(p, l);
    std::vector<RestrictionRow> rows;
    for (int s = 1; s <= m; ++s) {
        RestrictionRow row;
        row.s = s;
        row.image = proj.apply(big.D[s]);
        row.expected = (s <= u) ? small.D[s].pow(q) : U->zero();
        row.match = (row.image == row.expected);
        rows.push_back(std::move(row));
    }
    return rows;
}

ChernClasses regular_rep_chern(int p, int z, long long cap) {
    SpanProduct fv = expand_fv(p, z, cap);
    ChernClasses out;
    out.host = fv.host;
    out.total = evaluate_span(fv, fv.host->one());
    for (int i = 0; i <= z; ++i) {
        Element zi = (i % 2) ? fv.D[i].scaled(-1) : fv.D[i];
        Element piece = out.total.component(dickson_degree(p, z, i));
        if (!(piece == zi))
            throw std::logic_error("regular representation classes disagree with the span expansion at index " +
                                   std::to_string(i));
        out.zeta_bar.push_back(std::move(zi));
    }
    return out;
}

Element chern_of_character_sum(const AlgebraPtr& dual, const std::vector<std::vector<uint8_t>>& chars) {
    Element out = dual->one();
    for (const auto& coords : chars) {
        if (coords.size() != dual->generators().size())
            throw std::invalid_argument("chern_of_character_sum: character coordinate length mismatch");
        Element lambda = dual->zero();
        for (size_t j = 0; j < coords.size(); ++j)
            if (coords[j]) lambda = lambda + dual->gen(static_cast<int>(j)).scaled(coords[j]);
        out = out * (dual->one() + lambda);
    }
    return out;
}

Element chern_component(const Element& total, int chern_index) {
    const auto& gens = total.host()->generators();
    int gd = gens.empty() ? 2 : gens[0].degree;
    return total.component(gd * chern_index);
}

}  // namespace cohdepth

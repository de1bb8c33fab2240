#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "cohdepth/steenrod.hpp"
#include "doctest.h"

using namespace cohdepth;

namespace {

Element random_homogeneous(const AlgebraPtr& a, int d, std::mt19937_64& rng) {
    int dim = a->dim_in_degree(d);
    std::uniform_int_distribution<int> dist(0, a->p() - 1);
    std::vector<uint8_t> coords(dim);
    for (auto& c : coords) c = static_cast<uint8_t>(dist(rng));
    return a->from_basis_coords(d, coords);
}

}  // namespace

TEST_CASE("binomials mod p by Lucas") {
    CHECK(binom_mod_p(5, 2, 3) == 1);   // 10 = 1 mod 3
    CHECK(binom_mod_p(4, 2, 2) == 0);   // 6 even
    CHECK(binom_mod_p(7, 3, 2) == 1);   // all digits set
    CHECK(binom_mod_p(9, 3, 3) == 0);   // carry in base 3
    CHECK(binom_mod_p(10, 0, 5) == 1);
    CHECK(binom_mod_p(3, 4, 5) == 0);
    for (int n = 0; n < 12; ++n)
        for (int k = 0; k <= n; ++k) {
            long long exact = 1;
            for (int t = 1; t <= k; ++t) exact = exact * (n - k + t) / t;
            for (int p : {2, 3, 5, 7}) CHECK(binom_mod_p(n, k, p) == static_cast<int>(exact % p));
        }
}

TEST_CASE("index zero is the identity") {
    auto dual = dual_space_algebra(3, 2);
    Element e = dual->parse("x^2 + 2*x*y");
    CHECK(apply_power(0, e) == e);
}

TEST_CASE("a single generator supports only the first power") {
    auto dual = dual_space_algebra(3, 1);
    Element x = dual->gen("x");
    CHECK(apply_power(1, x) == dual->parse("x^3"));
    CHECK(apply_power(2, x).is_zero());
    CHECK(apply_power(5, x).is_zero());
}

TEST_CASE("first power carries D_1 to D_2 in rank two over F_2") {
    SpanProduct f = expand_fv(2, 2);
    CHECK(apply_power(1, f.D[1]) == f.D[2]);
}

TEST_CASE("top power is the p-th power") {
    auto dual = dual_space_algebra(3, 2);
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        int d = 2 * (1 + t % 4);
        Element e = random_homogeneous(dual, d, rng);
        // exponent count of a homogeneous element of degree d is d/2
        CHECK(apply_power(d / 2, e) == e.pow(3));
        CHECK(apply_power(d / 2 + 1, e).is_zero());
    }
}

TEST_CASE("cartan formula on random pairs") {
    for (int p : {2, 3}) {
        auto dual = dual_space_algebra(p, 2);
        std::mt19937_64 rng(32 + p);
        std::uniform_int_distribution<int> degd(1, 5);
        for (int t = 0; t < 100; ++t) {
            Element a = random_homogeneous(dual, 2 * degd(rng), rng);
            Element b = random_homogeneous(dual, 2 * degd(rng), rng);
            for (long long i = 0; i <= 6; ++i) {
                Element direct = apply_power(i, a * b);
                Element conv = dual->zero();
                for (long long j = 0; j <= i; ++j) conv = conv + apply_power(j, a) * apply_power(i - j, b);
                REQUIRE(direct == conv);
            }
        }
    }
}

TEST_CASE("the total power is multiplicative") {
    auto dual = dual_space_algebra(3, 2);
    std::mt19937_64 rng(33);
    for (int t = 0; t < 30; ++t) {
        Element a = random_homogeneous(dual, 2 * (1 + t % 3), rng);
        Element b = random_homogeneous(dual, 2 * (1 + (t / 3) % 3), rng);
        if (a.is_zero() || b.is_zero()) continue;
        auto sum = [&](const Element& x) {
            Element s = dual->zero();
            for (const Element& piece : total_power(x, x.degree() / 2)) s = s + piece;
            return s;
        };
        CHECK(sum(a * b) == sum(a) * sum(b));
    }
}

TEST_CASE("power operations refuse exterior input and mixed degrees") {
    auto alg = Algebra::make(3, {{"a", 1, true}, {"x", 2, false}, {"w", 4, false}});
    CHECK_THROWS(apply_power(1, alg->gen("a")));
    CHECK_THROWS(apply_power(1, alg->gen("x") * alg->gen("x") + alg->gen("w")));  // mixed generator degrees
    CHECK_NOTHROW(apply_power(1, alg->gen("x")));
    auto quot = dual_space_algebra(2, 1)->with_extra_relations({dual_space_algebra(2, 1)->parse("x^2")});
    CHECK_THROWS(apply_power(1, quot->gen("x")));
}

TEST_CASE("chain with no factors returns the input") {
    SpanProduct f = expand_fv(3, 2);
    // rank-2 subgroup of full rank inside a group of order 3^3 with rank-1 center
    KappaChainResult res = kappa_chain(3, 1, 1, f.D[1], {f.host->gen("x"), f.host->gen("y")});
    CHECK(res.ops.empty());
    CHECK(res.value == f.D[1]);
    CHECK(res.oracle == f.D[1]);
    CHECK(res.matches_oracle);
}

TEST_CASE("chain past the rank collapses to zero on dihedral parameters") {
    // order 2^3, center of rank 1, maximal elementary abelian of rank 2:
    // W has rank 1 and the second class must vanish
    auto dual = dual_space_algebra(2, 1);
    Element eta = dual->parse("x^2");  // D_1(W)^2, the index being 2
    KappaChainResult res = kappa_chain(3, 1, 2, eta, {dual->gen("x")});
    CHECK(res.ops == std::vector<long long>{1});
    CHECK(res.value.is_zero());
    CHECK(res.oracle.is_zero());
    CHECK(res.matches_oracle);
}

TEST_CASE("chain over F_3 with index three matches the rank-two oracle") {
    SpanProduct f = expand_fv(3, 2);
    Element eta = f.D[1].pow(3);
    KappaChainResult res = kappa_chain(4, 1, 2, eta, {f.host->gen("x"), f.host->gen("y")});
    CHECK(res.ops == std::vector<long long>{3});
    CHECK(res.matches_oracle);
    CHECK(res.value == f.D[2].pow(3));
}

TEST_CASE("full-rank chains reach every class") {
    // direct check in ranks two and three at a = 0: the composite really
    // walks D_1 down to D_j
    for (auto [p, s] : {std::pair{2, 2}, {2, 3}, {3, 2}}) {
        SpanProduct f = expand_fv(p, s);
        std::vector<Element> basis;
        for (int i = 0; i < s; ++i) basis.push_back(f.host->gen(i));
        for (int j = 1; j <= s; ++j) {
            KappaChainResult res = kappa_chain(s + 1, 1, j, f.D[1], basis);
            INFO("p=", p, " s=", s, " j=", j);
            CHECK(res.matches_oracle);
            CHECK(res.value == f.D[j]);
            CHECK(res.ops.size() == static_cast<size_t>(j - 1));
        }
    }
}

TEST_CASE("a deliberate mismatch is flagged, not hidden") {
    SpanProduct f = expand_fv(2, 2);
    Element wrong = f.D[1] + f.host->parse("x*y");  // not the correct starting class
    KappaChainResult res = kappa_chain(3, 1, 2, wrong, {f.host->gen("x"), f.host->gen("y")});
    CHECK_FALSE(res.matches_oracle);
}

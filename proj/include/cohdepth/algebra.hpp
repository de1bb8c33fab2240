#pragma once
// Graded-commutative algebras over F_p, presented by generators and
// homogeneous relations.  Everything is computed degree by degree: the
// degree-d piece of the defining ideal is spanned by monomial multiples of
// the relations, and a row reduction of that span gives a canonical basis
// of the quotient in degree d (the non-pivot monomials).  Results above the
// requested bound are never claimed.
//
// Sign convention: generators carry a parity; odd generators anticommute
// and square to zero, even generators are central.  For p = 2 every
// generator is even.  Monomials are kept in generator declaration order.

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cohdepth/fplin.hpp"

namespace cohdepth {

struct GeneratorSpec {
    std::string name;
    int degree = 1;
    bool odd = false;
    bool operator==(const GeneratorSpec&) const = default;
};

struct Monomial {
    std::vector<uint16_t> e;  // exponent per generator, declaration order

    Monomial() = default;
    explicit Monomial(size_t n) : e(n, 0) {}
    Monomial(std::vector<uint16_t> exps) : e(std::move(exps)) {}
    auto operator<=>(const Monomial&) const = default;
};

using Poly = std::map<Monomial, int>;  // coefficients in 1..p-1, never 0

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

class Element {
public:
    Element() = default;
    explicit Element(AlgebraPtr host) : host_(std::move(host)) {}
    Element(AlgebraPtr host, Poly terms);  // reduces modulo the host relations

    const AlgebraPtr& host() const { return host_; }
    const Poly& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_homogeneous() const;
    int degree() const;  // throws on zero or inhomogeneous input
    std::map<int, Element> components() const;
    Element component(int d) const;

    Element operator+(const Element&) const;
    Element operator-(const Element&) const;
    Element operator*(const Element&) const;
    Element scaled(int c) const;
    Element pow(long long n) const;        // base-p splitting, Frobenius for p-power part
    Element frobenius(int times = 1) const;  // x -> x^(p^times)

    bool operator==(const Element& o) const { return host_ == o.host_ && terms_ == o.terms_; }
    std::string to_string() const;

private:
    AlgebraPtr host_;
    Poly terms_;
    friend class Algebra;
};

// Per-degree data: the monomial basis of the free algebra in this degree and
// a row reduction of the ideal's span, giving a canonical quotient basis.
struct DegreeData {
    std::vector<Monomial> monomials;  // ascending lex
    std::map<Monomial, int> index;
    std::vector<std::vector<uint8_t>> rel_rows;  // rref of ideal span
    std::vector<int> rel_pivots;
    std::vector<int> basis_cols;  // non-pivot monomial positions = quotient basis
    int dim = 0;
};

class Algebra : public std::enable_shared_from_this<Algebra> {
public:
    static AlgebraPtr make(int p, std::vector<GeneratorSpec> gens, std::vector<Poly> relations = {});

    int p() const { return p_; }
    const std::vector<GeneratorSpec>& generators() const { return gens_; }
    int generator_index(const std::string& name) const;  // -1 if absent
    const std::vector<Poly>& relations() const { return relations_; }
    bool is_free() const { return relations_.empty(); }
    int max_generator_degree() const;

    Element zero() const;
    Element one() const;
    Element constant(int c) const;
    Element gen(int i) const;
    Element gen(const std::string& name) const;
    Element parse(const std::string& s) const;
    Element element(Poly raw) const { return Element(shared_from_this(), std::move(raw)); }

    int monomial_degree(const Monomial& m) const;
    std::string monomial_to_string(const Monomial& m, int coeff) const;

    const DegreeData& degree_data(int d) const;  // memoized; safe for concurrent readers
    int dim_in_degree(int d) const { return degree_data(d).dim; }
    std::vector<long> hilbert_series(int bound) const;

    // Coordinates of a homogeneous element over the canonical quotient basis
    // in its degree (element must already be reduced, which Element enforces).
    std::vector<uint8_t> basis_coords(const Element& x, int d) const;
    Element from_basis_coords(int d, const std::vector<uint8_t>& coords) const;

    // Same generators, relations extended by `extra` (each homogeneous).
    AlgebraPtr with_extra_relations(const std::vector<Element>& extra) const;

    // -- raw polynomial arithmetic in the free algebra on gens_ --
    Poly raw_mul(const Poly& a, const Poly& b) const;
    void raw_add_into(Poly& dst, const Poly& src, int scale = 1) const;
    Poly reduce(Poly raw) const;

private:
    Algebra() = default;
    int p_ = 2;
    std::vector<GeneratorSpec> gens_;
    std::vector<Poly> relations_;  // homogeneous, in free-monomial form
    std::vector<int> odd_indices_;
    mutable std::shared_mutex mu_;
    mutable std::map<int, std::unique_ptr<DegreeData>> cache_;

    void enumerate_monomials(int d, int from, Monomial& cur, std::vector<Monomial>& out) const;
    const DegreeData& degree_data_locked(int d) const;
};

class AlgebraMap {
public:
    // Validates: degree preservation, odd generators land on odd-degree (or
    // square-zero) images, and every source relation maps to zero exactly.
    AlgebraMap(AlgebraPtr src, AlgebraPtr dst, std::vector<Element> images);
    static AlgebraMap identity(const AlgebraPtr& a);

    const AlgebraPtr& source() const { return src_; }
    const AlgebraPtr& target() const { return dst_; }
    const std::vector<Element>& images() const { return images_; }

    Element apply(const Element& x) const;
    // Image of an unreduced polynomial; this is what the relation check needs,
    // since relations reduce to zero inside their own quotient.
    Element apply_raw(const Poly& terms) const;
    AlgebraMap then(const AlgebraMap& next) const;  // x -> next(this(x))

    // Basis of the kernel of the induced map source_d -> target_d.
    Subspace kernel_in_degree(int d) const;
    std::vector<Element> kernel_elements_in_degree(int d) const;

private:
    AlgebraPtr src_, dst_;
    std::vector<Element> images_;
};

struct TensorResult {
    AlgebraPtr algebra;
    AlgebraMap inc_left;   // A -> A (x) B
    AlgebraMap inc_right;  // B -> A (x) B
};

// Graded tensor product: disjoint generators (right-hand names gain a prime
// on collision), both relation sets carried over, Koszul signs from parity.
TensorResult tensor(const AlgebraPtr& a, const AlgebraPtr& b);

}  // namespace cohdepth

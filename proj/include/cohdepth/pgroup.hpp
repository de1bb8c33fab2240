#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cohdepth {

inline constexpr int kDefaultGroupCap = 1024;

// Finite p-group as a full multiplication table over element indices.
class GroupTable {
public:
    // Validates: rows/columns are permutations, a two-sided identity exists,
    // the order is a p-power within the cap, and associativity holds on a
    // seeded random sample of triples (use check_associativity_full for all).
    static GroupTable from_table(int p, std::vector<std::vector<int>> table, int cap = kDefaultGroupCap);

    // Central product of n generator pairs with commutator pinned to the
    // center: order p^(2n+1), exponent p for odd p, "+" type for p = 2.
    static GroupTable extraspecial_plus(int p, int n, int cap = kDefaultGroupCap);

    static GroupTable elementary_abelian(int p, int m, int cap = kDefaultGroupCap);

    int p() const { return p_; }
    int order() const { return static_cast<int>(table_.size()); }
    int identity() const { return identity_; }
    int mul(int a, int b) const { return table_[a][b]; }
    int inv(int a) const { return inv_[a]; }
    int conj(int a, int g) const { return mul(mul(inv(g), a), g); }  // a^g
    int element_order(int a) const;
    bool commute(int a, int b) const { return mul(a, b) == mul(b, a); }

    void check_associativity_full() const;  // throws std::logic_error on failure

private:
    GroupTable() = default;
    int p_ = 2;
    int identity_ = 0;
    std::vector<std::vector<int>> table_;
    std::vector<int> inv_;
};

// Load { "p", "order", "table" } or { "p", "pc_presentation": ... } JSON.
GroupTable load_group_file(const std::string& path, int cap = kDefaultGroupCap);

struct Subgroup {
    std::vector<int> elems;  // sorted, includes the identity

    int order() const { return static_cast<int>(elems.size()); }
    bool contains(int g) const;
    bool contains_all(const Subgroup& other) const;
    bool operator==(const Subgroup& other) const { return elems == other.elems; }
    bool operator<(const Subgroup& other) const { return elems < other.elems; }

    // Stable content-derived identifier "sg" + 16 hex digits, used by the
    // JSON file formats to refer to subgroups of a fixed table.
    std::string id(const GroupTable& G) const;
};

Subgroup whole_group(const GroupTable& G);
Subgroup subgroup_closure(const GroupTable& G, const std::vector<int>& gens);
Subgroup conjugate_subgroup(const GroupTable& G, const Subgroup& S, int g);
bool is_subgroup(const GroupTable& G, const Subgroup& S);
bool is_elementary_abelian(const GroupTable& G, const Subgroup& S);
int subgroup_rank(const GroupTable& G, const Subgroup& S);  // log_p order for elementary abelian S

Subgroup center(const GroupTable& G);
// The greatest central elementary abelian subgroup and its rank.
std::pair<Subgroup, int> center_omega1(const GroupTable& G);

Subgroup centralizer(const GroupTable& G, const Subgroup& V);
Subgroup normalizer(const GroupTable& G, const Subgroup& V);

struct SubgroupFamily {
    std::string role;  // "AC" (elementary abelian over the center) or "HC" (their centralizers)
    int d = 0;
    std::vector<Subgroup> members;
    std::string warning;  // set when the request was vacuous (d below the central rank)
};

// All elementary abelian subgroups of rank d containing C, by backtracking
// over commuting order-p elements; deterministic order.
SubgroupFamily enumerate_ACd(const GroupTable& G, int d);
SubgroupFamily centralizer_family(const GroupTable& G, const SubgroupFamily& ac);
int p_rank(const GroupTable& G);

struct ConjOrbit {
    Subgroup rep;  // first member of the orbit in family order
    long orbit_size = 0;
    long normalizer_order = 0;
};
std::vector<ConjOrbit> conjugation_orbits(const GroupTable& G, const SubgroupFamily& fam);

// Number of (U,V)-double cosets containing some g with U^g = U'; zero when U'
// is not a conjugate of U.
long double_coset_count(const GroupTable& G, const Subgroup& U, const Subgroup& V, const Subgroup& Uprime);

// Ordered F_p-basis of an elementary abelian subgroup with the C-part last,
// plus coordinates for every member.
struct EaBasis {
    std::vector<int> basis;  // extension part first, then a basis of C
    int z = 0;               // length of the C-part
    std::map<int, std::vector<uint8_t>> coords;
};
EaBasis ea_normal_basis(const GroupTable& G, const Subgroup& U, const Subgroup& C);

// The |U|/|C| linear characters of U restricting to chi_C on C, as coordinate
// vectors in U* dual to ea_normal_basis(G, U, C); chi_C must be nontrivial.
std::vector<std::vector<uint8_t>> linear_characters_extending(const GroupTable& G, const Subgroup& U,
                                                              const Subgroup& C, const std::vector<uint8_t>& chi_C);

}  // namespace cohdepth

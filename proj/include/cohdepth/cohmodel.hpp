#pragma once
// Cohomology data layer: exact models for elementary abelian groups, the
// comodule structure coming from multiplication by the central subgroup, and
// the file-backed bundle of a presented ring with its restriction maps.

#include <optional>
#include <string>
#include <vector>

#include "cohdepth/algebra.hpp"
#include "cohdepth/dickson.hpp"
#include "cohdepth/pgroup.hpp"

namespace cohdepth {

enum class Verdict { kYes, kNo, kUnknown };

struct Verdict3 {
    Verdict v = Verdict::kUnknown;
    std::string reason;  // witness description for kNo, explanation for kUnknown
};

// The cohomology of a rank-m elementary abelian group.  For p = 2 this is a
// polynomial algebra on degree-1 generators; for odd p an exterior algebra on
// degree-1 generators tensored with a polynomial algebra on their degree-2
// Bockstein images.  Either way `poly` is a distinguished copy of k[V*] on
// degree-2 generators (the shared host the span-product machinery uses), and
// `embed` identifies it with the polynomial part of `full`.
struct ElemAbCohomology {
    int p = 2;
    int m = 0;
    AlgebraPtr full;
    AlgebraPtr poly;
    std::optional<AlgebraMap> embed;       // poly -> full
    std::vector<Element> duals_in_full;    // image of each dual coordinate (degree 2)
};

// Memoized per (p, m): repeated calls return identical hosts, so elements
// built from different call sites still compare equal.
ElemAbCohomology elementary_abelian_cohomology(int p, int m);

// Everything inflated from the rank-(m-z) quotient, with the convention that
// the central subgroup always occupies the last z coordinates.
struct InflationImage {
    int z = 0;
    int w_dim = 0;                  // m - z
    std::vector<Element> poly_gens;  // generators of the polynomial part, in `full`
    std::vector<Element> ext_gens;   // exterior generators (odd p only), in `full`
    std::vector<Element> w_basis;    // the first w_dim generators of `poly` - a basis of Ann(C)
};
InflationImage inflation_image(const ElemAbCohomology& V, int z);

// Degreewise membership test in the inflation subalgebra.
bool in_inflation_image(const ElemAbCohomology& V, int z, const Element& x);

struct ComoduleMap {
    ElemAbCohomology c_part;  // the rank-z cohomology being coacted by
    AlgebraPtr target;        // full (x) H*(C)
    AlgebraMap map;           // phi -> phi (x) 1 + 1 (x) phi|_C on dual generators
    AlgebraMap inc_left;      // full -> target
    AlgebraMap inc_right;     // c_part.full -> target
};
ComoduleMap comodule_map_elementary(const ElemAbCohomology& V, int z);

bool is_primitive_elementary(const ComoduleMap& mu, const Element& x);

struct PrimitiveRow {
    int degree = 0;
    long primitive_dim = 0;
    long inflation_dim = 0;
};
struct PrimitivesReport {
    std::vector<PrimitiveRow> rows;  // degrees 0..bound
    bool equal = true;               // primitive_dim == inflation_dim everywhere
};
PrimitivesReport primitives_equal_inflation(const ElemAbCohomology& V, int z, int bound);

// One subgroup of the family with its target cohomology and (when supplied or
// derivable) the restriction map out of the system ring.
struct SubgroupBlock {
    Subgroup subgroup;
    std::string id;
    int rank = 0;
    ElemAbCohomology target;
    std::optional<AlgebraMap> restriction;  // ring -> target.full
    EaBasis basis;                          // extension coordinates first, center last
    bool derived = false;                   // synthesized from larger subgroups, not loaded
};

struct CohomologySystem {
    int p = 2, n = 0, z = 0, r = 0;
    std::optional<GroupTable> group;
    Subgroup C;
    AlgebraPtr ring;
    std::vector<SubgroupBlock> subgroups;  // ranks z..r in deterministic order
    std::optional<TensorResult> comodule_target;  // ring (x) H*(C)
    std::optional<AlgebraMap> comodule;           // ring -> ring (x) H*(C)
    std::vector<std::string> errors;  // validation failures; empty when fully valid

    const SubgroupBlock* block_by_id(const std::string& id) const;
    std::vector<const SubgroupBlock*> blocks_of_rank(int d) const;
};

// Manifest { "group": file, "ring": file, "restrictions": {id: file},
// "comodule": file? } with paths relative to the manifest.  Loads everything
// it can and accumulates validation failures in `errors`.
CohomologySystem load_system(const std::string& manifest_path);

// The same skeleton built from a group alone: subgroup blocks with their
// target cohomologies but no presented ring and no restriction maps.  This is
// the substrate for workflows that only need restriction images.
CohomologySystem system_from_group(const GroupTable& G);

// Writes group/ring/map files plus manifest.json into dir (created if
// needed); returns the manifest path.  load_system on the result reproduces
// the system.
std::string save_system(const CohomologySystem& sys, const std::string& dir);

// Primitivity against the system's comodule data; "unknown" when no comodule
// map was supplied - never a silent pass.
Verdict3 is_primitive(const CohomologySystem& sys, const Element& x);

// Shared file plumbing (also used by the CLI).
AlgebraPtr load_ring_file(const std::string& path);
AlgebraMap load_map_file(const std::string& path, const AlgebraPtr& src, const AlgebraPtr& dst);

}  // namespace cohdepth

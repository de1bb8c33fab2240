#include "cohdepth/cohmodel.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cohdepth {

namespace {

// Generator names follow the small-rank conventions: single letters while
// they stay readable, numbered past that.
std::vector<std::string> numbered(const std::string& stem, int count) {
    std::vector<std::string> names;
    for (int i = 1; i <= count; ++i) names.push_back(stem + std::to_string(i));
    return names;
}

std::string raw_poly_to_string(const Algebra& host, const Poly& poly) {
    if (poly.empty()) return "0";
    std::string out;
    for (const auto& [mono, coeff] : poly) {
        if (!out.empty()) out += " + ";
        out += host.monomial_to_string(mono, coeff);
    }
    return out;
}

}  // namespace

ElemAbCohomology elementary_abelian_cohomology(int p, int m) {
    static std::mutex memo_mu;
    static std::map<std::pair<int, int>, ElemAbCohomology> memo;
    std::lock_guard<std::mutex> lock(memo_mu);
    auto it = memo.find({p, m});
    if (it != memo.end()) return it->second;

    ElemAbCohomology V;
    V.p = p;
    V.m = m;
    std::vector<GeneratorSpec> gens;
    if (p == 2) {
        std::vector<std::string> names = m == 1 ? std::vector<std::string>{"t"} : numbered("t", m);
        for (const auto& nm : names) gens.push_back({nm, 1, false});
        V.full = Algebra::make(2, gens);
        for (int i = 0; i < m; ++i) V.duals_in_full.push_back(V.full->gen(i) * V.full->gen(i));
    } else {
        std::vector<std::string> ext = m == 1 ? std::vector<std::string>{"a"} : numbered("a", m);
        std::vector<std::string> pol = m == 1 ? std::vector<std::string>{"x"} : numbered("x", m);
        for (const auto& nm : ext) gens.push_back({nm, 1, true});
        for (const auto& nm : pol) gens.push_back({nm, 2, false});
        V.full = Algebra::make(p, gens);
        for (int i = 0; i < m; ++i) V.duals_in_full.push_back(V.full->gen(m + i));
    }
    V.poly = dual_space_algebra(p, m);
    V.embed.emplace(V.poly, V.full, V.duals_in_full);
    memo[{p, m}] = V;
    return V;
}

InflationImage inflation_image(const ElemAbCohomology& V, int z) {
    if (z < 0 || z > V.m) throw std::invalid_argument("inflation_image: central rank out of range");
    InflationImage inf;
    inf.z = z;
    inf.w_dim = V.m - z;
    for (int i = 0; i < inf.w_dim; ++i) {
        if (V.p == 2) {
            inf.poly_gens.push_back(V.full->gen(i));
        } else {
            inf.ext_gens.push_back(V.full->gen(i));
            inf.poly_gens.push_back(V.full->gen(V.m + i));
        }
        inf.w_basis.push_back(V.poly->gen(i));
    }
    return inf;
}

namespace {

// The inflation map H*(V/C) -> H*(V) hitting the first m-z coordinates.
AlgebraMap inflation_map(const ElemAbCohomology& V, int z, const ElemAbCohomology& quotient) {
    std::vector<Element> images;
    const int w = V.m - z;
    if (V.p == 2) {
        for (int i = 0; i < w; ++i) images.push_back(V.full->gen(i));
    } else {
        for (int i = 0; i < w; ++i) images.push_back(V.full->gen(i));
        for (int i = 0; i < w; ++i) images.push_back(V.full->gen(V.m + i));
    }
    return AlgebraMap(quotient.full, V.full, images);
}

}  // namespace

bool in_inflation_image(const ElemAbCohomology& V, int z, const Element& x) {
    if (x.host() != V.full) throw std::invalid_argument("in_inflation_image: element lives elsewhere");
    if (z < 0 || z > V.m) throw std::invalid_argument("in_inflation_image: central rank out of range");
    if (x.is_zero()) return true;
    if (V.full->is_free()) {
        // On a free host the image is spanned by the monomials supported on
        // the first m-z coordinates, so a term-by-term support scan settles it.
        const int w = V.m - z;
        for (const auto& [mono, coeff] : x.terms()) {
            (void)coeff;
            for (size_t i = 0; i < mono.e.size(); ++i) {
                if (mono.e[i] == 0) continue;
                const int pos = static_cast<int>(i) % V.m;  // exterior/polynomial halves align
                if (pos >= w) return false;
            }
        }
        return true;
    }
    ElemAbCohomology Q = elementary_abelian_cohomology(V.p, V.m - z);
    AlgebraMap inf = inflation_map(V, z, Q);
    for (const auto& [d, comp] : x.components()) {
        if (d == 0) continue;
        const int cols = Q.full->dim_in_degree(d);
        const int rows = V.full->dim_in_degree(d);
        FpMatrix A(V.p, rows, cols);
        for (int j = 0; j < cols; ++j) {
            std::vector<uint8_t> e(cols, 0);
            e[j] = 1;
            Element img = inf.apply(Q.full->from_basis_coords(d, e));
            std::vector<uint8_t> coords = V.full->basis_coords(img, d);
            for (int i = 0; i < rows; ++i) A.at(i, j) = coords[i];
        }
        if (!solve(A, V.full->basis_coords(comp, d))) return false;
    }
    return true;
}

ComoduleMap comodule_map_elementary(const ElemAbCohomology& V, int z) {
    if (z < 0 || z > V.m) throw std::invalid_argument("comodule_map_elementary: central rank out of range");
    ElemAbCohomology C = elementary_abelian_cohomology(V.p, z);
    TensorResult T = tensor(V.full, C.full);
    const int w = V.m - z;
    std::vector<Element> images;
    if (V.p == 2) {
        for (int i = 0; i < V.m; ++i) {
            Element img = T.inc_left.apply(V.full->gen(i));
            if (i >= w) img = img + T.inc_right.apply(C.full->gen(i - w));
            images.push_back(img);
        }
    } else {
        for (int i = 0; i < V.m; ++i) {  // exterior generators
            Element img = T.inc_left.apply(V.full->gen(i));
            if (i >= w) img = img + T.inc_right.apply(C.full->gen(i - w));
            images.push_back(img);
        }
        for (int i = 0; i < V.m; ++i) {  // polynomial generators
            Element img = T.inc_left.apply(V.full->gen(V.m + i));
            if (i >= w) img = img + T.inc_right.apply(C.full->gen(z + (i - w)));
            images.push_back(img);
        }
    }
    AlgebraMap mu(V.full, T.algebra, std::move(images));
    return ComoduleMap{std::move(C), T.algebra, std::move(mu), std::move(T.inc_left), std::move(T.inc_right)};
}

bool is_primitive_elementary(const ComoduleMap& mu, const Element& x) {
    if (x.host() != mu.map.source())
        throw std::invalid_argument("is_primitive_elementary: element lives elsewhere");
    return (mu.map.apply(x) - mu.inc_left.apply(x)).is_zero();
}

PrimitivesReport primitives_equal_inflation(const ElemAbCohomology& V, int z, int bound) {
    ComoduleMap mu = comodule_map_elementary(V, z);
    ElemAbCohomology Q = elementary_abelian_cohomology(V.p, V.m - z);
    PrimitivesReport report;
    for (int d = 0; d <= bound; ++d) {
        const int sdim = V.full->dim_in_degree(d);
        const int tdim = mu.target->dim_in_degree(d);
        FpMatrix M(V.p, tdim, sdim);
        for (int j = 0; j < sdim; ++j) {
            std::vector<uint8_t> e(sdim, 0);
            e[j] = 1;
            Element b = V.full->from_basis_coords(d, e);
            Element diff = mu.map.apply(b) - mu.inc_left.apply(b);
            if (diff.is_zero()) continue;
            std::vector<uint8_t> coords = mu.target->basis_coords(diff, d);
            for (int i = 0; i < tdim; ++i) M.at(i, j) = coords[i];
        }
        PrimitiveRow row;
        row.degree = d;
        row.primitive_dim = sdim - rank_of(M);
        row.inflation_dim = Q.full->dim_in_degree(d);
        if (row.primitive_dim != row.inflation_dim) report.equal = false;
        report.rows.push_back(row);
    }
    return report;
}

// ---------------------------------------------------------------------------
// file plumbing

AlgebraPtr load_ring_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ring file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("ring file " + path + ": " + e.what());
    }
    int p = j.at("p").get<int>();
    std::vector<GeneratorSpec> gens;
    for (const auto& g : j.at("generators")) {
        GeneratorSpec spec;
        spec.name = g.at("name").get<std::string>();
        spec.degree = g.at("degree").get<int>();
        spec.odd = (p != 2) && (spec.degree % 2 == 1);
        if (g.count("parity")) {
            std::string parity = g.at("parity").get<std::string>();
            if (parity != "even" && parity != "odd")
                throw std::runtime_error("ring file " + path + ": parity of '" + spec.name +
                                         "' must be \"even\" or \"odd\"");
            if ((parity == "odd") != spec.odd)
                throw std::runtime_error("ring file " + path + ": parity of '" + spec.name +
                                         "' contradicts its degree over F_" + std::to_string(p));
        }
        gens.push_back(std::move(spec));
    }
    AlgebraPtr free_host = Algebra::make(p, gens);
    std::vector<Poly> relations;
    if (j.count("relations")) {
        for (const auto& r : j.at("relations")) relations.push_back(free_host->parse(r.get<std::string>()).terms());
    }
    return Algebra::make(p, gens, relations);
}

AlgebraMap load_map_file(const std::string& path, const AlgebraPtr& src, const AlgebraPtr& dst) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("map file " + path + ": " + e.what());
    }
    const auto& images_json = j.at("images");
    std::vector<Element> images;
    for (const auto& g : src->generators()) {
        if (!images_json.count(g.name))
            throw std::runtime_error("map file " + path + ": no image for generator '" + g.name + "'");
        images.push_back(dst->parse(images_json.at(g.name).get<std::string>()));
    }
    for (auto it = images_json.begin(); it != images_json.end(); ++it) {
        if (src->generator_index(it.key()) < 0)
            throw std::runtime_error("map file " + path + ": image for unknown generator '" + it.key() + "'");
    }
    return AlgebraMap(src, dst, std::move(images));
}

namespace {

// Restriction H*(V) -> H*(C) along the inclusion of the central subgroup:
// the first rank-z coordinates die, the last z map onto the center's.
AlgebraMap central_projection(const ElemAbCohomology& V, int z, const ElemAbCohomology& C) {
    const int w = V.m - z;
    std::vector<Element> images;
    if (V.p == 2) {
        for (int i = 0; i < V.m; ++i) images.push_back(i < w ? C.full->zero() : C.full->gen(i - w));
    } else {
        for (int i = 0; i < V.m; ++i) images.push_back(i < w ? C.full->zero() : C.full->gen(i - w));
        for (int i = 0; i < V.m; ++i) images.push_back(i < w ? C.full->zero() : C.full->gen(z + (i - w)));
    }
    return AlgebraMap(V.full, C.full, std::move(images));
}

}  // namespace

const SubgroupBlock* CohomologySystem::block_by_id(const std::string& id) const {
    for (const auto& b : subgroups)
        if (b.id == id) return &b;
    return nullptr;
}

std::vector<const SubgroupBlock*> CohomologySystem::blocks_of_rank(int d) const {
    std::vector<const SubgroupBlock*> out;
    for (const auto& b : subgroups)
        if (b.rank == d) out.push_back(&b);
    return out;
}

CohomologySystem system_from_group(const GroupTable& G) {
    CohomologySystem sys;
    sys.group = G;
    sys.p = G.p();
    int order = G.order();
    sys.n = 0;
    while (order > 1) {
        order /= sys.p;
        ++sys.n;
    }
    auto [C, z] = center_omega1(G);
    sys.C = C;
    sys.z = z;
    sys.r = p_rank(G);
    sys.ring = Algebra::make(sys.p, {});
    for (int d = sys.z; d <= sys.r; ++d) {
        SubgroupFamily fam = enumerate_ACd(G, d);
        for (const Subgroup& U : fam.members) {
            SubgroupBlock b;
            b.subgroup = U;
            b.id = U.id(G);
            b.rank = d;
            b.target = elementary_abelian_cohomology(sys.p, d);
            b.basis = ea_normal_basis(G, U, sys.C);
            sys.subgroups.push_back(std::move(b));
        }
    }
    return sys;
}

CohomologySystem load_system(const std::string& manifest_path) {
    CohomologySystem sys;
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("manifest " + manifest_path + ": " + e.what());
    }
    const std::filesystem::path dir = std::filesystem::path(manifest_path).parent_path();

    try {
        sys.group = load_group_file((dir / j.at("group").get<std::string>()).string());
    } catch (const std::exception& e) {
        sys.errors.push_back(std::string("group: ") + e.what());
        return sys;
    }
    const GroupTable& G = *sys.group;
    sys.p = G.p();
    int order = G.order();
    sys.n = 0;
    while (order > 1) {
        order /= sys.p;
        ++sys.n;
    }
    auto [C, z] = center_omega1(G);
    sys.C = C;
    sys.z = z;
    sys.r = p_rank(G);

    try {
        sys.ring = load_ring_file((dir / j.at("ring").get<std::string>()).string());
    } catch (const std::exception& e) {
        sys.errors.push_back(std::string("ring: ") + e.what());
        return sys;
    }
    if (sys.ring->p() != sys.p) {
        sys.errors.push_back("ring: characteristic differs from the group's prime");
        return sys;
    }

    for (int d = sys.z; d <= sys.r; ++d) {
        SubgroupFamily fam = enumerate_ACd(G, d);
        for (const Subgroup& U : fam.members) {
            SubgroupBlock b;
            b.subgroup = U;
            b.id = U.id(G);
            b.rank = d;
            b.target = elementary_abelian_cohomology(sys.p, d);
            b.basis = ea_normal_basis(G, U, C);
            sys.subgroups.push_back(std::move(b));
        }
    }

    if (j.count("restrictions")) {
        for (auto it = j.at("restrictions").begin(); it != j.at("restrictions").end(); ++it) {
            SubgroupBlock* block = nullptr;
            for (auto& b : sys.subgroups)
                if (b.id == it.key()) block = &b;
            if (!block) {
                sys.errors.push_back("restrictions: unknown subgroup id '" + it.key() + "'");
                continue;
            }
            try {
                block->restriction = load_map_file((dir / it.value().get<std::string>()).string(), sys.ring,
                                                   block->target.full);
            } catch (const std::exception& e) {
                sys.errors.push_back("restriction " + it.key() + ": " + e.what());
            }
        }
    }

    // Restriction to the center: derived through each supplied map and
    // cross-checked; any two routes that disagree are a validation failure.
    SubgroupBlock* cblock = nullptr;
    for (auto& b : sys.subgroups)
        if (b.rank == sys.z) cblock = &b;
    if (cblock) {
        for (const auto& b : sys.subgroups) {
            if (b.rank == sys.z || !b.restriction) continue;
            AlgebraMap proj = central_projection(b.target, sys.z, cblock->target);
            AlgebraMap through = b.restriction->then(proj);
            if (!cblock->restriction) {
                cblock->restriction = through;
                cblock->derived = true;
            } else {
                for (size_t i = 0; i < through.images().size(); ++i) {
                    if (!(through.images()[i] == cblock->restriction->images()[i])) {
                        sys.errors.push_back("restriction to the center via " + b.id +
                                             " disagrees at generator '" + sys.ring->generators()[i].name + "'");
                        break;
                    }
                }
            }
        }
    }

    if (j.count("comodule")) {
        ElemAbCohomology Ccoh = elementary_abelian_cohomology(sys.p, sys.z);
        sys.comodule_target = tensor(sys.ring, Ccoh.full);
        try {
            sys.comodule = load_map_file((dir / j.at("comodule").get<std::string>()).string(), sys.ring,
                                         sys.comodule_target->algebra);
            // counit check: collapsing the center factor must give the identity
            std::vector<Element> aug_images;
            for (size_t i = 0; i < sys.ring->generators().size(); ++i) aug_images.push_back(sys.ring->gen(static_cast<int>(i)));
            for (size_t i = 0; i < Ccoh.full->generators().size(); ++i) aug_images.push_back(Element(sys.ring));
            AlgebraMap aug(sys.comodule_target->algebra, sys.ring, std::move(aug_images));
            for (size_t i = 0; i < sys.ring->generators().size(); ++i) {
                Element round_trip = aug.apply(sys.comodule->apply(sys.ring->gen(static_cast<int>(i))));
                if (!(round_trip == sys.ring->gen(static_cast<int>(i))))
                    sys.errors.push_back("comodule: not counital at generator '" +
                                         sys.ring->generators()[i].name + "'");
            }
        } catch (const std::exception& e) {
            sys.errors.push_back(std::string("comodule: ") + e.what());
        }
    }
    return sys;
}

std::string save_system(const CohomologySystem& sys, const std::string& dir) {
    if (!sys.group) throw std::invalid_argument("save_system: no group table present");
    if (!sys.ring) throw std::invalid_argument("save_system: no ring present");
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const GroupTable& G = *sys.group;

    {
        nlohmann::json g;
        g["p"] = G.p();
        g["order"] = G.order();
        std::vector<std::vector<int>> table(G.order(), std::vector<int>(G.order()));
        for (int a = 0; a < G.order(); ++a)
            for (int b = 0; b < G.order(); ++b) table[a][b] = G.mul(a, b);
        g["table"] = table;
        std::ofstream out(fs::path(dir) / "group.json");
        out << g.dump(2) << "\n";
    }
    {
        nlohmann::json r;
        r["p"] = sys.ring->p();
        nlohmann::json gens = nlohmann::json::array();
        for (const auto& g : sys.ring->generators()) {
            gens.push_back({{"name", g.name}, {"degree", g.degree}, {"parity", g.odd ? "odd" : "even"}});
        }
        r["generators"] = gens;
        nlohmann::json rels = nlohmann::json::array();
        for (const Poly& rel : sys.ring->relations()) rels.push_back(raw_poly_to_string(*sys.ring, rel));
        r["relations"] = rels;
        std::ofstream out(fs::path(dir) / "ring.json");
        out << r.dump(2) << "\n";
    }

    nlohmann::json manifest;
    manifest["group"] = "group.json";
    manifest["ring"] = "ring.json";
    nlohmann::json restrictions = nlohmann::json::object();
    for (const auto& b : sys.subgroups) {
        if (!b.restriction || b.derived) continue;
        std::string fname = "res_" + b.id + ".json";
        nlohmann::json m;
        m["source"] = "ring";
        m["target"] = b.id;
        nlohmann::json images = nlohmann::json::object();
        for (size_t i = 0; i < sys.ring->generators().size(); ++i)
            images[sys.ring->generators()[i].name] = b.restriction->images()[i].to_string();
        m["images"] = images;
        std::ofstream out(fs::path(dir) / fname);
        out << m.dump(2) << "\n";
        restrictions[b.id] = fname;
    }
    manifest["restrictions"] = restrictions;
    if (sys.comodule) {
        nlohmann::json m;
        m["source"] = "ring";
        m["target"] = "ring (x) center";
        nlohmann::json images = nlohmann::json::object();
        for (size_t i = 0; i < sys.ring->generators().size(); ++i)
            images[sys.ring->generators()[i].name] = sys.comodule->images()[i].to_string();
        m["images"] = images;
        std::ofstream out(fs::path(dir) / "comodule.json");
        out << m.dump(2) << "\n";
        manifest["comodule"] = "comodule.json";
    }
    std::string manifest_path = (fs::path(dir) / "manifest.json").string();
    std::ofstream out(manifest_path);
    out << manifest.dump(2) << "\n";
    return manifest_path;
}

Verdict3 is_primitive(const CohomologySystem& sys, const Element& x) {
    if (x.host() != sys.ring) throw std::invalid_argument("is_primitive: element is not in the system ring");
    if (!sys.comodule || !sys.comodule_target)
        return {Verdict::kUnknown, "no comodule data supplied for this ring"};
    Element diff = sys.comodule->apply(x) - sys.comodule_target->inc_left.apply(x);
    if (diff.is_zero()) return {Verdict::kYes, ""};
    return {Verdict::kNo, "coaction differs from x (x) 1 by " + diff.to_string()};
}

}  // namespace cohdepth

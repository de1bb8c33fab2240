#include "cohdepth/pgroup.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

#include "cohdepth/util.hpp"

namespace cohdepth {

namespace {

bool is_prime_int(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// order must be p^k; returns k or -1
int p_log(int p, int order) {
    int k = 0;
    while (order > 1) {
        if (order % p != 0) return -1;
        order /= p;
        ++k;
    }
    return k;
}

uint64_t fnv1a64(const std::vector<uint32_t>& data) {
    uint64_t h = 14695981039346656037ULL;
    for (uint32_t w : data) {
        for (int shift = 0; shift < 32; shift += 8) {
            h ^= (w >> shift) & 0xffu;
            h *= 1099511628211ULL;
        }
    }
    return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// GroupTable

GroupTable GroupTable::from_table(int p, std::vector<std::vector<int>> table, int cap) {
    if (!is_prime_int(p)) throw std::invalid_argument("group table: p must be prime");
    const int n = static_cast<int>(table.size());
    if (n == 0) throw std::invalid_argument("group table: empty table");
    if (n > cap) {
        throw std::invalid_argument("group table: order " + std::to_string(n) + " exceeds the cap " +
                                    std::to_string(cap));
    }
    if (p_log(p, n) < 0)
        throw std::invalid_argument("group table: order " + std::to_string(n) + " is not a power of " + std::to_string(p));
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("group table: table is not square");
        for (int v : row)
            if (v < 0 || v >= n) throw std::invalid_argument("group table: entry out of range");
    }

    // rows and columns must be permutations
    for (int a = 0; a < n; ++a) {
        std::vector<char> seen_row(n, 0), seen_col(n, 0);
        for (int b = 0; b < n; ++b) {
            if (seen_row[table[a][b]]++) throw std::invalid_argument("group table: repeated entry in a row");
            if (seen_col[table[b][a]]++) throw std::invalid_argument("group table: repeated entry in a column");
        }
    }

    int identity = -1;
    for (int e = 0; e < n && identity < 0; ++e) {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x) ok = table[e][x] == x && table[x][e] == x;
        if (ok) identity = e;
    }
    if (identity < 0) throw std::invalid_argument("group table: no two-sided identity");

    GroupTable G;
    G.p_ = p;
    G.identity_ = identity;
    G.table_ = std::move(table);
    G.inv_.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (G.table_[a][b] == identity) {
                if (G.table_[b][a] != identity) throw std::invalid_argument("group table: one-sided inverse");
                G.inv_[a] = b;
                break;
            }
        }
        if (G.inv_[a] < 0) throw std::invalid_argument("group table: element without inverse");
    }

    // Random spot check; callers that want certainty run check_associativity_full.
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int t = 0; t < 500; ++t) {
        int a = pick(rng), b = pick(rng), c = pick(rng);
        if (G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c)))
            throw std::invalid_argument("group table: associativity fails");
    }
    return G;
}

void GroupTable::check_associativity_full() const {
    const int n = order();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                    throw std::logic_error("group table: associativity fails at (" + std::to_string(a) + "," +
                                           std::to_string(b) + "," + std::to_string(c) + ")");
}

int GroupTable::element_order(int a) const {
    int ord = 1;
    int x = a;
    while (x != identity_) {
        x = mul(x, a);
        ++ord;
        if (ord > order()) throw std::logic_error("group table: element order exceeds group order");
    }
    return ord;
}

GroupTable GroupTable::elementary_abelian(int p, int m, int cap) {
    if (!is_prime_int(p)) throw std::invalid_argument("elementary_abelian: p must be prime");
    if (m < 0) throw std::invalid_argument("elementary_abelian: negative rank");
    long long n = 1;
    for (int i = 0; i < m; ++i) {
        n *= p;
        if (n > cap) throw std::invalid_argument("elementary_abelian: order exceeds the cap");
    }
    const int N = static_cast<int>(n);
    std::vector<std::vector<int>> table(N, std::vector<int>(N));
    for (int a = 0; a < N; ++a) {
        for (int b = 0; b < N; ++b) {
            // digitwise sum mod p
            int x = a, y = b, s = 0, stride = 1;
            for (int i = 0; i < m; ++i) {
                s += ((x % p + y % p) % p) * stride;
                x /= p;
                y /= p;
                stride *= p;
            }
            table[a][b] = s;
        }
    }
    return from_table(p, std::move(table), cap);
}

namespace {

// Element (a, b, t) with a, b in F_p^n and t in F_p, multiplied by
// (a,b,t)(a',b',t') = (a+a', b+b', t+t'+a.b').  The commutator of the
// generator pair (x_i, y_i) is the central coordinate, squares/p-th powers
// land in the center, and for p = 2 the squaring form is the hyperbolic one.
struct EsIndexing {
    int p, n;
    long long pn;  // p^n

    std::tuple<std::vector<int>, std::vector<int>, int> unpack(long long idx) const {
        int t = static_cast<int>(idx % p);
        idx /= p;
        std::vector<int> b(n), a(n);
        long long bi = idx % pn, ai = idx / pn;
        for (int i = 0; i < n; ++i) {
            b[i] = static_cast<int>(bi % p);
            bi /= p;
            a[i] = static_cast<int>(ai % p);
            ai /= p;
        }
        return {a, b, t};
    }

    long long pack(const std::vector<int>& a, const std::vector<int>& b, int t) const {
        long long ai = 0, bi = 0, stride = 1;
        for (int i = 0; i < n; ++i) {
            ai += a[i] * stride;
            bi += b[i] * stride;
            stride *= p;
        }
        return (ai * pn + bi) * p + t;
    }
};

}  // namespace

GroupTable GroupTable::extraspecial_plus(int p, int n, int cap) {
    if (!is_prime_int(p)) throw std::invalid_argument("extraspecial_plus: p must be prime");
    if (n < 1) throw std::invalid_argument("extraspecial_plus: need at least one generator pair");
    long long N = 1;
    for (int i = 0; i < 2 * n + 1; ++i) {
        N *= p;
        if (N > cap) throw std::invalid_argument("extraspecial_plus: order exceeds the cap");
    }
    long long pn = 1;
    for (int i = 0; i < n; ++i) pn *= p;
    EsIndexing ix{p, n, pn};

    std::vector<std::vector<int>> table(N, std::vector<int>(N));
    for (long long x = 0; x < N; ++x) {
        auto [a, b, t] = ix.unpack(x);
        for (long long y = 0; y < N; ++y) {
            auto [a2, b2, t2] = ix.unpack(y);
            std::vector<int> as(n), bs(n);
            int dot = 0;
            for (int i = 0; i < n; ++i) {
                as[i] = (a[i] + a2[i]) % p;
                bs[i] = (b[i] + b2[i]) % p;
                dot += a[i] * b2[i];
            }
            table[x][y] = static_cast<int>(ix.pack(as, bs, (t + t2 + dot) % p));
        }
    }
    GroupTable G = from_table(p, std::move(table), cap);

    // sanity: the center, derived subgroup and Frattini subgroup all coincide
    // with the order-p central coordinate, and the rank comes out to n + 1
    Subgroup Z = center(G);
    if (Z.order() != p) throw std::logic_error("extraspecial_plus: center has wrong order");
    std::vector<int> frat_gens;
    for (int g = 0; g < G.order(); ++g) {
        int gp = G.identity();
        for (int i = 0; i < p; ++i) gp = G.mul(gp, g);
        frat_gens.push_back(gp);
        for (int h = 0; h < G.order(); ++h)
            frat_gens.push_back(G.mul(G.mul(G.inv(g), G.inv(h)), G.mul(g, h)));
    }
    Subgroup F = subgroup_closure(G, frat_gens);
    if (!(F == Z)) throw std::logic_error("extraspecial_plus: derived/Frattini subgroup differs from the center");
    if (p % 2 == 1) {
        for (int g = 0; g < G.order(); ++g)
            if (G.element_order(g) > p) throw std::logic_error("extraspecial_plus: exponent exceeds p");
    }
    if (p_rank(G) != n + 1) throw std::logic_error("extraspecial_plus: rank check failed");
    return G;
}

// ---------------------------------------------------------------------------
// pc-presentation loader

namespace {

struct PcData {
    int p = 2;
    std::vector<std::string> names;
    std::vector<int> rel_orders;
    std::map<int, std::vector<int>> powers;                 // gen -> word
    std::map<std::pair<int, int>, std::vector<int>> comms;  // (hi, lo) -> word for g_hi g_lo swaps
};

std::vector<int> parse_pc_word(const std::string& text, const std::map<std::string, int>& index) {
    std::vector<int> word;
    std::string s = trim(text);
    if (s.empty() || s == "1") return word;
    for (const std::string& factor : split(s, '*')) {
        std::string f = trim(factor);
        size_t caret = f.find('^');
        std::string name = caret == std::string::npos ? f : trim(f.substr(0, caret));
        int exp = 1;
        if (caret != std::string::npos) {
            exp = std::stoi(f.substr(caret + 1));
            if (exp < 0) throw std::invalid_argument("pc presentation: negative exponent in word '" + text + "'");
        }
        auto it = index.find(name);
        if (it == index.end()) throw std::invalid_argument("pc presentation: unknown generator '" + name + "'");
        for (int i = 0; i < exp; ++i) word.push_back(it->second);
    }
    return word;
}

// Rewrite into the sorted normal form by bubbling out-of-order adjacent pairs
// (inserting the stored commutator word) and folding full p-th-power runs.
std::vector<int> pc_collect(const PcData& pc, std::vector<int> word) {
    for (long long steps = 0;; ++steps) {
        if (steps > 2000000) throw std::invalid_argument("pc presentation: collection does not terminate");
        bool changed = false;
        for (size_t i = 0; i + 1 < word.size(); ++i) {
            if (word[i] > word[i + 1]) {
                std::vector<int> tail;
                auto key = std::make_pair(word[i], word[i + 1]);
                auto it = pc.comms.find(key);
                if (it != pc.comms.end()) tail = it->second;
                std::swap(word[i], word[i + 1]);
                word.insert(word.begin() + i + 2, tail.begin(), tail.end());
                changed = true;
                break;
            }
        }
        if (changed) continue;
        // word is sorted; fold runs reaching the relative order
        for (size_t i = 0; i < word.size();) {
            size_t j = i;
            while (j < word.size() && word[j] == word[i]) ++j;
            size_t run = j - i;
            size_t ord = static_cast<size_t>(pc.rel_orders[word[i]]);
            if (run >= ord) {
                std::vector<int> repl;
                auto it = pc.powers.find(word[i]);
                if (it != pc.powers.end()) repl = it->second;
                std::vector<int> next(word.begin(), word.begin() + i);
                for (size_t k = 0; k < run - ord; ++k) next.push_back(word[i]);
                next.insert(next.end(), repl.begin(), repl.end());
                next.insert(next.end(), word.begin() + j, word.end());
                word = std::move(next);
                changed = true;
                break;
            }
            i = j;
        }
        if (!changed) return word;
    }
}

GroupTable group_from_pc(const nlohmann::json& j, int p, int cap) {
    PcData pc;
    pc.p = p;
    const auto& names_json = j.at("generators");
    std::map<std::string, int> index;
    for (const auto& nm : names_json) {
        std::string name = nm.get<std::string>();
        if (index.count(name)) throw std::invalid_argument("pc presentation: duplicate generator '" + name + "'");
        index[name] = static_cast<int>(pc.names.size());
        pc.names.push_back(name);
    }
    const int k = static_cast<int>(pc.names.size());
    if (k == 0) throw std::invalid_argument("pc presentation: no generators");
    pc.rel_orders.assign(k, p);
    if (j.count("relative_orders")) {
        const auto& ro = j.at("relative_orders");
        if (static_cast<int>(ro.size()) != k)
            throw std::invalid_argument("pc presentation: relative_orders length mismatch");
        for (int i = 0; i < k; ++i) {
            pc.rel_orders[i] = ro[i].get<int>();
            if (pc.rel_orders[i] < 2) throw std::invalid_argument("pc presentation: relative order below 2");
        }
    }
    if (j.count("powers")) {
        for (auto it = j.at("powers").begin(); it != j.at("powers").end(); ++it) {
            auto gi = index.find(it.key());
            if (gi == index.end()) throw std::invalid_argument("pc presentation: power of unknown generator");
            pc.powers[gi->second] = parse_pc_word(it.value().get<std::string>(), index);
        }
    }
    if (j.count("commutators")) {
        for (auto it = j.at("commutators").begin(); it != j.at("commutators").end(); ++it) {
            auto parts = split(it.key(), ',');
            if (parts.size() != 2) throw std::invalid_argument("pc presentation: commutator key must be 'a,b'");
            auto hi = index.find(trim(parts[0])), lo = index.find(trim(parts[1]));
            if (hi == index.end() || lo == index.end())
                throw std::invalid_argument("pc presentation: commutator of unknown generator");
            if (hi->second <= lo->second)
                throw std::invalid_argument("pc presentation: commutator key must list the later generator first");
            pc.comms[{hi->second, lo->second}] = parse_pc_word(it.value().get<std::string>(), index);
        }
    }

    long long N = 1;
    for (int i = 0; i < k; ++i) {
        N *= pc.rel_orders[i];
        if (N > cap) throw std::invalid_argument("pc presentation: order exceeds the cap");
    }

    // index <-> exponent vector, first generator most significant
    std::vector<long long> stride(k, 1);
    for (int i = k - 2; i >= 0; --i) stride[i] = stride[i + 1] * pc.rel_orders[i + 1];
    auto word_of = [&](long long idx) {
        std::vector<int> w;
        for (int i = 0; i < k; ++i) {
            int e = static_cast<int>(idx / stride[i]);
            idx %= stride[i];
            for (int c = 0; c < e; ++c) w.push_back(i);
        }
        return w;
    };
    auto index_of = [&](const std::vector<int>& word) {
        long long idx = 0;
        size_t pos = 0;
        for (int i = 0; i < k; ++i) {
            int e = 0;
            while (pos < word.size() && word[pos] == i) {
                ++e;
                ++pos;
            }
            if (e >= pc.rel_orders[i]) throw std::logic_error("pc presentation: uncollected exponent");
            idx += e * stride[i];
        }
        if (pos != word.size()) throw std::logic_error("pc presentation: uncollected word");
        return idx;
    };

    std::vector<std::vector<int>> table(N, std::vector<int>(N));
    for (long long x = 0; x < N; ++x) {
        std::vector<int> wx = word_of(x);
        for (long long y = 0; y < N; ++y) {
            std::vector<int> w = wx;
            std::vector<int> wy = word_of(y);
            w.insert(w.end(), wy.begin(), wy.end());
            table[x][y] = static_cast<int>(index_of(pc_collect(pc, std::move(w))));
        }
    }
    return GroupTable::from_table(p, std::move(table), cap);
}

}  // namespace

GroupTable load_group_file(const std::string& path, int cap) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open group file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("group file " + path + ": " + e.what());
    }
    if (!j.count("p")) throw std::runtime_error("group file " + path + ": missing \"p\"");
    int p = j.at("p").get<int>();
    if (j.count("table")) {
        auto table = j.at("table").get<std::vector<std::vector<int>>>();
        if (j.count("order") && j.at("order").get<int>() != static_cast<int>(table.size()))
            throw std::runtime_error("group file " + path + ": \"order\" disagrees with the table size");
        return GroupTable::from_table(p, std::move(table), cap);
    }
    if (j.count("pc_presentation")) return group_from_pc(j.at("pc_presentation"), p, cap);
    throw std::runtime_error("group file " + path + ": need \"table\" or \"pc_presentation\"");
}

// ---------------------------------------------------------------------------
// subgroups

bool Subgroup::contains(int g) const { return std::binary_search(elems.begin(), elems.end(), g); }

bool Subgroup::contains_all(const Subgroup& other) const {
    return std::includes(elems.begin(), elems.end(), other.elems.begin(), other.elems.end());
}

std::string Subgroup::id(const GroupTable& G) const {
    std::vector<uint32_t> data;
    data.push_back(static_cast<uint32_t>(G.p()));
    data.push_back(static_cast<uint32_t>(G.order()));
    for (int e : elems) data.push_back(static_cast<uint32_t>(e));
    std::ostringstream out;
    out << "sg" << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(data);
    return out.str();
}

Subgroup whole_group(const GroupTable& G) {
    Subgroup S;
    S.elems.resize(G.order());
    for (int i = 0; i < G.order(); ++i) S.elems[i] = i;
    return S;
}

Subgroup subgroup_closure(const GroupTable& G, const std::vector<int>& gens) {
    std::set<int> seen{G.identity()};
    seen.insert(gens.begin(), gens.end());
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> cur(seen.begin(), seen.end());
        for (int a : cur)
            for (int b : cur)
                if (seen.insert(G.mul(a, b)).second) changed = true;
    }
    Subgroup S;
    S.elems.assign(seen.begin(), seen.end());
    return S;
}

Subgroup conjugate_subgroup(const GroupTable& G, const Subgroup& S, int g) {
    Subgroup T;
    T.elems.reserve(S.elems.size());
    for (int s : S.elems) T.elems.push_back(G.conj(s, g));
    std::sort(T.elems.begin(), T.elems.end());
    return T;
}

bool is_subgroup(const GroupTable& G, const Subgroup& S) {
    if (S.elems.empty() || !S.contains(G.identity())) return false;
    for (int a : S.elems)
        for (int b : S.elems)
            if (!S.contains(G.mul(a, b))) return false;
    return true;
}

bool is_elementary_abelian(const GroupTable& G, const Subgroup& S) {
    for (int a : S.elems) {
        int ap = G.identity();
        for (int i = 0; i < G.p(); ++i) ap = G.mul(ap, a);
        if (ap != G.identity()) return false;
        for (int b : S.elems)
            if (!G.commute(a, b)) return false;
    }
    return true;
}

int subgroup_rank(const GroupTable& G, const Subgroup& S) {
    int r = p_log(G.p(), S.order());
    if (r < 0) throw std::invalid_argument("subgroup_rank: order is not a p-power");
    return r;
}

Subgroup center(const GroupTable& G) {
    Subgroup Z;
    for (int g = 0; g < G.order(); ++g) {
        bool central = true;
        for (int h = 0; h < G.order() && central; ++h) central = G.commute(g, h);
        if (central) Z.elems.push_back(g);
    }
    return Z;
}

std::pair<Subgroup, int> center_omega1(const GroupTable& G) {
    Subgroup Z = center(G);
    Subgroup C;
    for (int g : Z.elems) {
        int gp = G.identity();
        for (int i = 0; i < G.p(); ++i) gp = G.mul(gp, g);
        if (gp == G.identity()) C.elems.push_back(g);
    }
    return {C, subgroup_rank(G, C)};
}

Subgroup centralizer(const GroupTable& G, const Subgroup& V) {
    Subgroup H;
    for (int g = 0; g < G.order(); ++g) {
        bool ok = true;
        for (int v : V.elems) {
            if (!G.commute(g, v)) {
                ok = false;
                break;
            }
        }
        if (ok) H.elems.push_back(g);
    }
    return H;
}

Subgroup normalizer(const GroupTable& G, const Subgroup& V) {
    Subgroup N;
    for (int g = 0; g < G.order(); ++g) {
        if (conjugate_subgroup(G, V, g) == V) N.elems.push_back(g);
    }
    return N;
}

// ---------------------------------------------------------------------------
// families

namespace {

void extend_family(const GroupTable& G, const Subgroup& S, int last_gen, int target_rank,
                   std::set<Subgroup>& out) {
    if (subgroup_rank(G, S) == target_rank) {
        out.insert(S);
        return;
    }
    for (int x = last_gen + 1; x < G.order(); ++x) {
        if (S.contains(x)) continue;
        if (G.element_order(x) != G.p()) continue;
        bool commutes = true;
        for (int s : S.elems) {
            if (!G.commute(x, s)) {
                commutes = false;
                break;
            }
        }
        if (!commutes) continue;
        // span of S and x: multiply the p cosets directly
        Subgroup T;
        T.elems.reserve(S.elems.size() * G.p());
        int xp = G.identity();
        for (int i = 0; i < G.p(); ++i) {
            for (int s : S.elems) T.elems.push_back(G.mul(s, xp));
            xp = G.mul(xp, x);
        }
        std::sort(T.elems.begin(), T.elems.end());
        extend_family(G, T, x, target_rank, out);
    }
}

}  // namespace

SubgroupFamily enumerate_ACd(const GroupTable& G, int d) {
    auto [C, z] = center_omega1(G);
    SubgroupFamily fam;
    fam.role = "AC";
    fam.d = d;
    if (d < z) {
        fam.warning = "rank " + std::to_string(d) + " is below the central rank " + std::to_string(z) +
                      "; no subgroup in this family can exist";
        return fam;
    }
    std::set<Subgroup> out;
    extend_family(G, C, -1, d, out);
    fam.members.assign(out.begin(), out.end());
    return fam;
}

SubgroupFamily centralizer_family(const GroupTable& G, const SubgroupFamily& ac) {
    SubgroupFamily fam;
    fam.role = "HC";
    fam.d = ac.d;
    fam.warning = ac.warning;
    fam.members.reserve(ac.members.size());
    for (const Subgroup& U : ac.members) fam.members.push_back(centralizer(G, U));
    return fam;
}

int p_rank(const GroupTable& G) {
    auto [C, z] = center_omega1(G);
    (void)C;
    int r = z;
    while (true) {
        SubgroupFamily next = enumerate_ACd(G, r + 1);
        if (next.members.empty()) return r;
        ++r;
    }
}

std::vector<ConjOrbit> conjugation_orbits(const GroupTable& G, const SubgroupFamily& fam) {
    std::map<Subgroup, int> index;
    for (int i = 0; i < static_cast<int>(fam.members.size()); ++i) index[fam.members[i]] = i;
    std::vector<char> visited(fam.members.size(), 0);
    std::vector<ConjOrbit> orbits;
    for (size_t i = 0; i < fam.members.size(); ++i) {
        if (visited[i]) continue;
        ConjOrbit orb;
        orb.rep = fam.members[i];
        std::set<Subgroup> seen;
        for (int g = 0; g < G.order(); ++g) {
            Subgroup T = conjugate_subgroup(G, fam.members[i], g);
            if (!seen.insert(T).second) continue;
            auto it = index.find(T);
            if (it == index.end())
                throw std::logic_error("conjugation_orbits: conjugate leaves the family");
            visited[it->second] = 1;
        }
        orb.orbit_size = static_cast<long>(seen.size());
        orb.normalizer_order = normalizer(G, fam.members[i]).order();
        orbits.push_back(std::move(orb));
    }
    return orbits;
}

long double_coset_count(const GroupTable& G, const Subgroup& U, const Subgroup& V, const Subgroup& Uprime) {
    std::vector<int> witnesses;
    for (int g = 0; g < G.order(); ++g) {
        if (conjugate_subgroup(G, U, g) == Uprime) witnesses.push_back(g);
    }
    if (witnesses.empty()) return 0;
    std::set<int> visited;
    long count = 0;
    for (int g : witnesses) {
        if (visited.count(g)) continue;
        ++count;
        for (int u : U.elems)
            for (int v : V.elems) visited.insert(G.mul(G.mul(u, g), v));
    }
    return count;
}

// ---------------------------------------------------------------------------
// bases and characters

EaBasis ea_normal_basis(const GroupTable& G, const Subgroup& U, const Subgroup& C) {
    if (!is_elementary_abelian(G, U)) throw std::invalid_argument("ea_normal_basis: subgroup is not elementary abelian");
    if (!U.contains_all(C)) throw std::invalid_argument("ea_normal_basis: subgroup does not contain the central part");

    auto greedy = [&](const std::vector<int>& pool, Subgroup& span, std::vector<int>& out) {
        for (int x : pool) {
            if (span.contains(x)) continue;
            out.push_back(x);
            Subgroup next;
            next.elems.reserve(span.elems.size() * G.p());
            int xp = G.identity();
            for (int i = 0; i < G.p(); ++i) {
                for (int s : span.elems) next.elems.push_back(G.mul(s, xp));
                xp = G.mul(xp, x);
            }
            std::sort(next.elems.begin(), next.elems.end());
            span = std::move(next);
        }
    };

    Subgroup span;
    span.elems.push_back(G.identity());
    std::vector<int> c_basis, ext_basis;
    greedy(C.elems, span, c_basis);
    greedy(U.elems, span, ext_basis);
    if (span.order() != U.order()) throw std::logic_error("ea_normal_basis: basis does not span");

    EaBasis B;
    B.basis = ext_basis;
    B.basis.insert(B.basis.end(), c_basis.begin(), c_basis.end());
    B.z = static_cast<int>(c_basis.size());

    const int m = static_cast<int>(B.basis.size());
    std::vector<uint8_t> e(m, 0);
    while (true) {
        int g = G.identity();
        for (int i = 0; i < m; ++i)
            for (int c = 0; c < e[i]; ++c) g = G.mul(g, B.basis[i]);
        if (!B.coords.emplace(g, e).second) throw std::logic_error("ea_normal_basis: coordinates collide");
        int i = m - 1;
        while (i >= 0 && e[i] == G.p() - 1) e[i--] = 0;
        if (i < 0) break;
        ++e[i];
    }
    return B;
}

std::vector<std::vector<uint8_t>> linear_characters_extending(const GroupTable& G, const Subgroup& U,
                                                              const Subgroup& C, const std::vector<uint8_t>& chi_C) {
    EaBasis B = ea_normal_basis(G, U, C);
    if (static_cast<int>(chi_C.size()) != B.z)
        throw std::invalid_argument("linear_characters_extending: character length does not match the central rank");
    bool trivial = true;
    for (uint8_t v : chi_C)
        if (v % G.p() != 0) trivial = false;
    if (trivial) throw std::invalid_argument("linear_characters_extending: the central character must be nontrivial");

    const int s = static_cast<int>(B.basis.size()) - B.z;
    std::vector<std::vector<uint8_t>> out;
    std::vector<uint8_t> f(s, 0);
    while (true) {
        std::vector<uint8_t> chi = f;
        for (uint8_t v : chi_C) chi.push_back(static_cast<uint8_t>(v % G.p()));
        out.push_back(std::move(chi));
        int i = s - 1;
        while (i >= 0 && f[i] == G.p() - 1) f[i--] = 0;
        if (i < 0) break;
        ++f[i];
    }
    return out;
}

}  // namespace cohdepth

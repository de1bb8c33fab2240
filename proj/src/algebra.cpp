#include "cohdepth/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "cohdepth/util.hpp"

namespace cohdepth {

// ---------------------------------------------------------------- Algebra

AlgebraPtr Algebra::make(int p, std::vector<GeneratorSpec> gens, std::vector<Poly> relations) {
    if (!is_prime(p)) throw std::invalid_argument("Algebra: p must be prime");
    auto a = std::shared_ptr<Algebra>(new Algebra());
    a->p_ = p;
    a->gens_ = std::move(gens);
    for (size_t i = 0; i < a->gens_.size(); ++i) {
        const GeneratorSpec& g = a->gens_[i];
        if (g.degree <= 0) throw std::invalid_argument("generator '" + g.name + "' must have positive degree");
        if (g.name.empty()) throw std::invalid_argument("generator with empty name");
        for (size_t j = 0; j < i; ++j)
            if (a->gens_[j].name == g.name)
                throw std::invalid_argument("duplicate generator name '" + g.name + "'");
        if (p == 2) {
            if (g.odd) throw std::invalid_argument("generator '" + g.name + "': odd parity requires odd p");
        } else if (g.odd != (g.degree % 2 == 1)) {
            throw std::invalid_argument("generator '" + g.name + "': for odd p parity must equal degree mod 2");
        }
        if (g.odd) a->odd_indices_.push_back(static_cast<int>(i));
    }
    for (Poly& r : relations) {
        Poly norm;
        int deg = -1;
        for (auto& [m, c] : r) {
            int cc = ((c % p) + p) % p;
            if (!cc) continue;
            if (m.e.size() != a->gens_.size()) throw std::invalid_argument("relation monomial arity mismatch");
            bool dead = false;
            for (int oi : a->odd_indices_)
                if (m.e[oi] > 1) { dead = true; break; }
            if (dead) continue;
            int d = a->monomial_degree(m);
            if (deg < 0) deg = d;
            else if (deg != d) throw std::invalid_argument("relations must be homogeneous");
            norm[m] = cc;
        }
        if (norm.empty()) continue;  // trivial relation, drop
        if (deg == 0) throw std::invalid_argument("constant relation kills the unit");
        a->relations_.push_back(std::move(norm));
    }
    return a;
}

int Algebra::generator_index(const std::string& name) const {
    for (size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name) return static_cast<int>(i);
    return -1;
}

int Algebra::max_generator_degree() const {
    int m = 1;
    for (const auto& g : gens_) m = std::max(m, g.degree);
    return m;
}

int Algebra::monomial_degree(const Monomial& m) const {
    int d = 0;
    for (size_t i = 0; i < gens_.size(); ++i) d += gens_[i].degree * m.e[i];
    return d;
}

Element Algebra::zero() const { return Element(shared_from_this()); }

Element Algebra::one() const { return constant(1); }

Element Algebra::constant(int c) const {
    Poly t;
    int cc = ((c % p_) + p_) % p_;
    if (cc) t[Monomial(gens_.size())] = cc;
    return Element(shared_from_this(), std::move(t));
}

Element Algebra::gen(int i) const {
    if (i < 0 || i >= static_cast<int>(gens_.size())) throw std::out_of_range("generator index");
    Monomial m(gens_.size());
    m.e[i] = 1;
    Poly t;
    t[m] = 1;
    return Element(shared_from_this(), std::move(t));
}

Element Algebra::gen(const std::string& name) const {
    int i = generator_index(name);
    if (i < 0) throw std::invalid_argument("unknown generator '" + name + "'");
    return gen(i);
}

// -------------------------------------------------------- raw arithmetic

void Algebra::raw_add_into(Poly& dst, const Poly& src, int scale) const {
    scale = ((scale % p_) + p_) % p_;
    if (!scale) return;
    for (const auto& [m, c] : src) {
        int v = (dst.count(m) ? dst[m] : 0) + scale * c;
        v %= p_;
        if (v)
            dst[m] = v;
        else
            dst.erase(m);
    }
}

Poly Algebra::raw_mul(const Poly& a, const Poly& b) const {
    Poly out;
    const size_t n = gens_.size();
    std::vector<int> a_odd;
    for (const auto& [ma, ca] : a) {
        a_odd.clear();
        for (int oi : odd_indices_)
            if (ma.e[oi]) a_odd.push_back(oi);
        for (const auto& [mb, cb] : b) {
            // odd generators square to zero; count crossings for the Koszul sign
            bool dead = false;
            int crossings = 0;
            for (int oi : odd_indices_) {
                if (!mb.e[oi]) continue;
                if (ma.e[oi]) { dead = true; break; }
                for (int ai : a_odd)
                    if (ai > oi) ++crossings;
            }
            if (dead) continue;
            Monomial m(n);
            for (size_t i = 0; i < n; ++i) m.e[i] = static_cast<uint16_t>(ma.e[i] + mb.e[i]);
            int c = ca * cb % p_;
            if (crossings & 1) c = (p_ - c) % p_;
            if (!c) continue;
            int v = (out.count(m) ? out[m] : 0) + c;
            v %= p_;
            if (v)
                out[m] = v;
            else
                out.erase(m);
        }
    }
    return out;
}

// ----------------------------------------------------------- degree data

void Algebra::enumerate_monomials(int d, int from, Monomial& cur, std::vector<Monomial>& out) const {
    if (d == 0) {
        out.push_back(cur);
        return;
    }
    if (from >= static_cast<int>(gens_.size())) return;
    const GeneratorSpec& g = gens_[from];
    int maxe = g.odd ? 1 : d / g.degree;
    for (int e = 0; e <= maxe; ++e) {
        if (e * g.degree > d) break;
        cur.e[from] = static_cast<uint16_t>(e);
        enumerate_monomials(d - e * g.degree, from + 1, cur, out);
    }
    cur.e[from] = 0;
}

const DegreeData& Algebra::degree_data(int d) const {
    {
        std::shared_lock lk(mu_);
        auto it = cache_.find(d);
        if (it != cache_.end()) return *it->second;
    }
    auto data = std::make_unique<DegreeData>();
    if (d >= 0) {
        Monomial cur(gens_.size());
        enumerate_monomials(d, 0, cur, data->monomials);
        std::sort(data->monomials.begin(), data->monomials.end());
        for (size_t i = 0; i < data->monomials.size(); ++i)
            data->index[data->monomials[i]] = static_cast<int>(i);
        const int cols = static_cast<int>(data->monomials.size());
        if (!relations_.empty() && cols > 0) {
            // span of { mu * rel : deg(mu) + deg(rel) = d }
            std::vector<std::vector<uint8_t>> rows;
            for (const Poly& rel : relations_) {
                int dr = monomial_degree(rel.begin()->first);
                if (dr > d) continue;
                std::vector<Monomial> mults;
                Monomial mcur(gens_.size());
                enumerate_monomials(d - dr, 0, mcur, mults);
                for (const Monomial& mu : mults) {
                    Poly mono;
                    mono[mu] = 1;
                    Poly prod = raw_mul(mono, rel);
                    if (prod.empty()) continue;
                    std::vector<uint8_t> row(cols, 0);
                    for (const auto& [m, c] : prod) row[data->index.at(m)] = static_cast<uint8_t>(c);
                    rows.push_back(std::move(row));
                }
            }
            if (!rows.empty()) {
                FpMatrix mat(p_, static_cast<int>(rows.size()), cols);
                for (size_t r = 0; r < rows.size(); ++r)
                    for (int c = 0; c < cols; ++c) mat.at(static_cast<int>(r), c) = rows[r][c];
                RrefResult rr = rref(mat);
                data->rel_pivots = rr.pivots;
                for (int r = 0; r < rr.rank; ++r) {
                    std::vector<uint8_t> row(cols);
                    for (int c = 0; c < cols; ++c) row[c] = rr.mat.at(r, c);
                    data->rel_rows.push_back(std::move(row));
                }
            }
        }
        std::vector<bool> is_pivot(data->monomials.size(), false);
        for (int c : data->rel_pivots) is_pivot[c] = true;
        for (size_t i = 0; i < data->monomials.size(); ++i)
            if (!is_pivot[i]) data->basis_cols.push_back(static_cast<int>(i));
        data->dim = static_cast<int>(data->basis_cols.size());
    }
    std::unique_lock lk(mu_);
    auto [it, inserted] = cache_.try_emplace(d, std::move(data));
    return *it->second;
}

std::vector<long> Algebra::hilbert_series(int bound) const {
    std::vector<long> out;
    for (int d = 0; d <= bound; ++d) out.push_back(dim_in_degree(d));
    return out;
}

Poly Algebra::reduce(Poly raw) const {
    if (relations_.empty()) return raw;
    // split by degree, reduce each part against the ideal rref
    std::map<int, Poly> parts;
    for (auto& [m, c] : raw) parts[monomial_degree(m)][m] = c;
    Poly out;
    for (auto& [d, part] : parts) {
        const DegreeData& dd = degree_data(d);
        std::vector<int> v(dd.monomials.size(), 0);
        for (auto& [m, c] : part) v[dd.index.at(m)] = c;
        for (size_t i = 0; i < dd.rel_rows.size(); ++i) {
            int piv = dd.rel_pivots[i];
            int f = v[piv];
            if (!f) continue;
            const std::vector<uint8_t>& row = dd.rel_rows[i];
            for (size_t k = 0; k < row.size(); ++k) {
                if (!row[k]) continue;
                v[k] = (v[k] + f * (p_ - row[k])) % p_;
            }
        }
        for (size_t k = 0; k < v.size(); ++k)
            if (v[k]) out[dd.monomials[k]] = v[k];
    }
    return out;
}

std::vector<uint8_t> Algebra::basis_coords(const Element& x, int d) const {
    const DegreeData& dd = degree_data(d);
    std::vector<uint8_t> out(dd.basis_cols.size(), 0);
    if (x.is_zero()) return out;
    std::vector<int> v(dd.monomials.size(), 0);
    for (const auto& [m, c] : x.terms()) {
        if (monomial_degree(m) != d) throw std::invalid_argument("basis_coords: element not homogeneous of given degree");
        v[dd.index.at(m)] = c;
    }
    for (size_t i = 0; i < dd.basis_cols.size(); ++i) out[i] = static_cast<uint8_t>(v[dd.basis_cols[i]]);
    return out;
}

Element Algebra::from_basis_coords(int d, const std::vector<uint8_t>& coords) const {
    const DegreeData& dd = degree_data(d);
    if (coords.size() != dd.basis_cols.size()) throw std::invalid_argument("from_basis_coords: length mismatch");
    Poly t;
    for (size_t i = 0; i < coords.size(); ++i) {
        int c = coords[i] % p_;
        if (c) t[dd.monomials[dd.basis_cols[i]]] = c;
    }
    return Element(shared_from_this(), std::move(t));
}

AlgebraPtr Algebra::with_extra_relations(const std::vector<Element>& extra) const {
    std::vector<Poly> rels = relations_;
    for (const Element& e : extra) {
        if (e.host()->p() != p_ || !(e.host()->generators() == gens_))
            throw std::invalid_argument("with_extra_relations: generator mismatch");
        if (e.is_zero()) continue;
        if (!e.is_homogeneous()) throw std::invalid_argument("with_extra_relations: relations must be homogeneous");
        rels.push_back(e.terms());
    }
    return make(p_, gens_, std::move(rels));
}

// ---------------------------------------------------------------- Element

Element::Element(AlgebraPtr host, Poly terms) : host_(std::move(host)) {
    if (!host_) throw std::invalid_argument("Element: null host");
    const int p = host_->p();
    Poly norm;
    for (auto& [m, c] : terms) {
        int cc = ((c % p) + p) % p;
        if (!cc) continue;
        if (m.e.size() != host_->generators().size()) throw std::invalid_argument("Element: monomial arity mismatch");
        bool dead = false;
        for (size_t i = 0; i < m.e.size(); ++i)
            if (host_->generators()[i].odd && m.e[i] > 1) { dead = true; break; }
        if (!dead) norm[m] = cc;
    }
    terms_ = host_->reduce(std::move(norm));
}

bool Element::is_homogeneous() const {
    if (terms_.empty()) return true;
    int d = host_->monomial_degree(terms_.begin()->first);
    for (const auto& [m, c] : terms_)
        if (host_->monomial_degree(m) != d) return false;
    return true;
}

int Element::degree() const {
    if (terms_.empty()) throw std::domain_error("degree of zero element");
    int d = host_->monomial_degree(terms_.begin()->first);
    for (const auto& [m, c] : terms_)
        if (host_->monomial_degree(m) != d) throw std::domain_error("degree of inhomogeneous element");
    return d;
}

std::map<int, Element> Element::components() const {
    std::map<int, Poly> parts;
    for (const auto& [m, c] : terms_) parts[host_->monomial_degree(m)][m] = c;
    std::map<int, Element> out;
    for (auto& [d, poly] : parts) out.emplace(d, Element(host_, std::move(poly)));
    return out;
}

Element Element::component(int d) const {
    Poly part;
    for (const auto& [m, c] : terms_)
        if (host_->monomial_degree(m) == d) part[m] = c;
    return Element(host_, std::move(part));
}

static void check_hosts(const Element& a, const Element& b) {
    if (a.host() != b.host()) throw std::invalid_argument("element host mismatch");
    if (!a.host()) throw std::invalid_argument("operation on default-constructed element");
}

Element Element::operator+(const Element& o) const {
    check_hosts(*this, o);
    Poly t = terms_;
    host_->raw_add_into(t, o.terms_);
    return Element(host_, std::move(t));
}

Element Element::operator-(const Element& o) const {
    check_hosts(*this, o);
    Poly t = terms_;
    host_->raw_add_into(t, o.terms_, host_->p() - 1);
    return Element(host_, std::move(t));
}

Element Element::operator*(const Element& o) const {
    check_hosts(*this, o);
    return Element(host_, host_->raw_mul(terms_, o.terms_));
}

Element Element::scaled(int c) const {
    if (!host_) throw std::invalid_argument("scaled: null host");
    Poly t;
    host_->raw_add_into(t, terms_, c);
    return Element(host_, std::move(t));
}

Element Element::frobenius(int times) const {
    if (!host_) throw std::invalid_argument("frobenius: null host");
    Element cur = *this;
    for (int t = 0; t < times; ++t) {
        Poly out;
        const int p = cur.host_->p();
        for (const auto& [m, c] : cur.terms_) {
            bool has_odd = false;
            for (size_t i = 0; i < m.e.size(); ++i)
                if (cur.host_->generators()[i].odd && m.e[i]) { has_odd = true; break; }
            if (has_odd) continue;  // p-th power of an exterior factor vanishes
            Monomial mp(m.e.size());
            for (size_t i = 0; i < m.e.size(); ++i) mp.e[i] = static_cast<uint16_t>(m.e[i] * p);
            out[mp] = c;  // c^p = c in F_p
        }
        cur = Element(cur.host_, std::move(out));
    }
    return cur;
}

Element Element::pow(long long n) const {
    if (!host_) throw std::invalid_argument("pow: null host");
    if (n < 0) throw std::invalid_argument("pow: negative exponent");
    Element result = host_->one();
    if (n == 0) return result;
    const int p = host_->p();
    Element cur = *this;
    while (n > 0) {
        int digit = static_cast<int>(n % p);
        for (int i = 0; i < digit; ++i) result = result * cur;
        n /= p;
        if (n > 0) cur = cur.frobenius();
    }
    return result;
}

std::string Algebra::monomial_to_string(const Monomial& m, int coeff) const {
    std::ostringstream os;
    bool first = true;
    if (coeff != 1) {
        os << coeff;
        first = false;
    }
    for (size_t i = 0; i < gens_.size(); ++i) {
        if (!m.e[i]) continue;
        if (!first) os << "*";
        os << gens_[i].name;
        if (m.e[i] > 1) os << "^" << m.e[i];
        first = false;
    }
    if (first) os << "1";
    return os.str();
}

std::string Element::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!first) os << " + ";
        os << host_->monomial_to_string(it->first, it->second);
        first = false;
    }
    return os.str();
}

// ----------------------------------------------------------------- parse

namespace {

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

}  // namespace

Element Algebra::parse(const std::string& s) const {
    Poly acc;
    for (const std::string& raw_term : split(s, '+')) {
        std::string term = trim(raw_term);
        if (term.empty()) throw std::invalid_argument("parse: empty term in '" + s + "'");
        if (term == "0") continue;
        long long coeff = 1;
        Monomial m(gens_.size());
        for (const std::string& raw_factor : split(term, '*')) {
            std::string f = trim(raw_factor);
            if (f.empty()) throw std::invalid_argument("parse: empty factor in '" + term + "'");
            if (std::isdigit(static_cast<unsigned char>(f[0]))) {
                size_t pos = 0;
                long long v = std::stoll(f, &pos);
                if (pos != f.size()) throw std::invalid_argument("parse: bad number '" + f + "'");
                coeff = coeff * (v % p_) % p_;
                continue;
            }
            size_t i = 0;
            while (i < f.size() && is_name_char(f[i]) && f[i] != '^') ++i;
            std::string name = f.substr(0, i);
            long long exp = 1;
            if (i < f.size()) {
                if (f[i] != '^') throw std::invalid_argument("parse: unexpected character in '" + f + "'");
                std::string es = f.substr(i + 1);
                size_t pos = 0;
                exp = std::stoll(es, &pos);
                if (pos != es.size() || exp < 0) throw std::invalid_argument("parse: bad exponent in '" + f + "'");
            }
            int gi = generator_index(name);
            if (gi < 0) throw std::invalid_argument("parse: unknown generator '" + name + "'");
            m.e[gi] = static_cast<uint16_t>(m.e[gi] + exp);
        }
        int c = static_cast<int>(((coeff % p_) + p_) % p_);
        if (!c) continue;
        Poly t;
        t[m] = c;
        raw_add_into(acc, t);
    }
    // the Element constructor normalizes coefficients and kills odd squares
    return Element(shared_from_this(), std::move(acc));
}

// ------------------------------------------------------------- AlgebraMap

AlgebraMap::AlgebraMap(AlgebraPtr src, AlgebraPtr dst, std::vector<Element> images)
    : src_(std::move(src)), dst_(std::move(dst)), images_(std::move(images)) {
    if (!src_ || !dst_) throw std::invalid_argument("AlgebraMap: null algebra");
    if (src_->p() != dst_->p()) throw std::invalid_argument("AlgebraMap: field mismatch");
    if (images_.size() != src_->generators().size())
        throw std::invalid_argument("AlgebraMap: need one image per generator");
    for (size_t i = 0; i < images_.size(); ++i) {
        const Element& im = images_[i];
        const GeneratorSpec& g = src_->generators()[i];
        if (im.host() != dst_) throw std::invalid_argument("AlgebraMap: image of '" + g.name + "' lives in the wrong algebra");
        if (!im.is_zero()) {
            if (!im.is_homogeneous() || im.degree() != g.degree)
                throw std::invalid_argument("AlgebraMap: image of '" + g.name + "' must be homogeneous of degree " +
                                            std::to_string(g.degree));
        }
        if (g.odd && !(im * im).is_zero())
            throw std::invalid_argument("AlgebraMap: image of odd generator '" + g.name + "' must square to zero");
    }
    for (const Poly& rel : src_->relations()) {
        Element img = apply_raw(rel);
        if (!img.is_zero()) {
            std::string rel_str;
            for (const auto& [m, c] : rel) {
                if (!rel_str.empty()) rel_str += " + ";
                rel_str += src_->monomial_to_string(m, c);
            }
            throw std::invalid_argument("AlgebraMap: relation " + rel_str + " does not map to zero (image " +
                                        img.to_string() + ")");
        }
    }
}

AlgebraMap AlgebraMap::identity(const AlgebraPtr& a) {
    std::vector<Element> images;
    for (size_t i = 0; i < a->generators().size(); ++i) images.push_back(a->gen(static_cast<int>(i)));
    return AlgebraMap(a, a, std::move(images));
}

Element AlgebraMap::apply(const Element& x) const {
    if (x.host() != src_) throw std::invalid_argument("AlgebraMap::apply: element not in source");
    return apply_raw(x.terms());
}

Element AlgebraMap::apply_raw(const Poly& terms) const {
    Element out = dst_->zero();
    for (const auto& [m, c] : terms) {
        Element term = dst_->constant(c);
        for (size_t i = 0; i < m.e.size(); ++i) {
            if (!m.e[i]) continue;
            term = term * images_[i].pow(m.e[i]);
            if (term.is_zero()) break;
        }
        out = out + term;
    }
    return out;
}

AlgebraMap AlgebraMap::then(const AlgebraMap& next) const {
    if (next.src_ != dst_) throw std::invalid_argument("AlgebraMap::then: composition mismatch");
    std::vector<Element> images;
    for (const Element& im : images_) images.push_back(next.apply(im));
    return AlgebraMap(src_, next.dst_, std::move(images));
}

Subspace AlgebraMap::kernel_in_degree(int d) const {
    const int sdim = src_->dim_in_degree(d);
    const int tdim = dst_->dim_in_degree(d);
    FpMatrix mat(src_->p(), tdim, sdim);
    for (int j = 0; j < sdim; ++j) {
        std::vector<uint8_t> e(sdim, 0);
        e[j] = 1;
        Element x = src_->from_basis_coords(d, e);
        std::vector<uint8_t> y = dst_->basis_coords(apply(x), d);
        for (int r = 0; r < tdim; ++r) mat.at(r, j) = y[r];
    }
    return kernel_basis(mat);
}

std::vector<Element> AlgebraMap::kernel_elements_in_degree(int d) const {
    Subspace ker = kernel_in_degree(d);
    std::vector<Element> out;
    for (const auto& v : ker.basis) out.push_back(src_->from_basis_coords(d, v));
    return out;
}

// ----------------------------------------------------------------- tensor

TensorResult tensor(const AlgebraPtr& a, const AlgebraPtr& b) {
    if (a->p() != b->p()) throw std::invalid_argument("tensor: field mismatch");
    std::vector<GeneratorSpec> gens = a->generators();
    const size_t na = gens.size(), nb = b->generators().size();
    for (const GeneratorSpec& g : b->generators()) {
        GeneratorSpec g2 = g;
        auto taken = [&](const std::string& n) {
            for (const auto& h : gens)
                if (h.name == n) return true;
            return false;
        };
        while (taken(g2.name)) g2.name += "'";
        gens.push_back(g2);
    }
    std::vector<Poly> rels;
    for (const Poly& r : a->relations()) {
        Poly r2;
        for (const auto& [m, c] : r) {
            Monomial m2(na + nb);
            std::copy(m.e.begin(), m.e.end(), m2.e.begin());
            r2[m2] = c;
        }
        rels.push_back(std::move(r2));
    }
    for (const Poly& r : b->relations()) {
        Poly r2;
        for (const auto& [m, c] : r) {
            Monomial m2(na + nb);
            std::copy(m.e.begin(), m.e.end(), m2.e.begin() + na);
            r2[m2] = c;
        }
        rels.push_back(std::move(r2));
    }
    AlgebraPtr t = Algebra::make(a->p(), std::move(gens), std::move(rels));
    std::vector<Element> imA, imB;
    for (size_t i = 0; i < na; ++i) imA.push_back(t->gen(static_cast<int>(i)));
    for (size_t i = 0; i < nb; ++i) imB.push_back(t->gen(static_cast<int>(na + i)));
    return TensorResult{t, AlgebraMap(a, t, std::move(imA)), AlgebraMap(b, t, std::move(imB))};
}

}  // namespace cohdepth

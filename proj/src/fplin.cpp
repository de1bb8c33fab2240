#include "cohdepth/fplin.hpp"

#include <stdexcept>

namespace cohdepth {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int mod_inv(int a, int p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) throw std::domain_error("mod_inv of zero");
    return mod_pow(a, p - 2, p);
}

int mod_pow(int a, long long e, int p) {
    long long r = 1, b = a % p;
    if (b < 0) b += p;
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<int>(r);
}

FpMatrix::FpMatrix(int p, int rows, int cols) : p_(p), rows_(rows), cols_(cols) {
    if (!is_prime(p) || p > 251) throw std::invalid_argument("FpMatrix: p must be a small prime");
    if (rows < 0 || cols < 0) throw std::invalid_argument("FpMatrix: negative shape");
    a_.assign(static_cast<size_t>(rows) * cols, 0);
}

FpMatrix FpMatrix::identity(int p, int n) {
    FpMatrix m(p, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FpMatrix FpMatrix::transpose() const {
    FpMatrix t(p_, cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

FpMatrix FpMatrix::mul(const FpMatrix& other) const {
    if (p_ != other.p_ || cols_ != other.rows_)
        throw std::invalid_argument("FpMatrix::mul: shape/field mismatch");
    FpMatrix out(p_, rows_, other.cols_);
    for (int r = 0; r < rows_; ++r)
        for (int k = 0; k < cols_; ++k) {
            int f = at(r, k);
            if (!f) continue;
            const uint8_t* src = other.row(k);
            uint8_t* dst = out.row(r);
            for (int c = 0; c < other.cols_; ++c)
                dst[c] = static_cast<uint8_t>((dst[c] + f * src[c]) % p_);
        }
    return out;
}

std::vector<uint8_t> FpMatrix::apply(const std::vector<uint8_t>& v) const {
    if (static_cast<int>(v.size()) != cols_)
        throw std::invalid_argument("FpMatrix::apply: length mismatch");
    std::vector<uint8_t> out(rows_, 0);
    for (int r = 0; r < rows_; ++r) {
        int acc = 0;
        const uint8_t* src = row(r);
        for (int c = 0; c < cols_; ++c) acc += src[c] * v[c];
        out[r] = static_cast<uint8_t>(acc % p_);
    }
    return out;
}

namespace detail {

RrefResult rref_generic(const FpMatrix& m) {
    const int p = m.p();
    FpMatrix w = m;
    const int rows = w.rows(), cols = w.cols();
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (w.at(i, c)) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int k = c; k < cols; ++k) std::swap(w.at(piv, k), w.at(r, k));
        int inv = mod_inv(w.at(r, c), p);
        if (inv != 1)
            for (int k = c; k < cols; ++k) w.at(r, k) = static_cast<uint8_t>(w.at(r, k) * inv % p);
        // small lookup table: t[f][b] = (f * (p - b)) % p, so row += t avoids per-entry negation
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            int f = w.at(i, c);
            if (!f) continue;
            const uint8_t* src = w.row(r);
            uint8_t* dst = w.row(i);
            for (int k = c; k < cols; ++k) {
                int t = dst[k] + f * (p - src[k]);
                dst[k] = static_cast<uint8_t>(t % p);
            }
        }
        pivots.push_back(c);
        ++r;
    }
    RrefResult out;
    out.rank = r;
    out.pivots = std::move(pivots);
    out.mat = FpMatrix(p, r, cols);
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < cols; ++k) out.mat.at(i, k) = w.at(i, k);
    return out;
}

RrefResult rref_packed2(const FpMatrix& m) {
    const int rows = m.rows(), cols = m.cols();
    const int words = (cols + 63) / 64;
    std::vector<uint64_t> bits(static_cast<size_t>(rows) * words, 0);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (m.at(r, c)) bits[static_cast<size_t>(r) * words + c / 64] |= 1ull << (c % 64);
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        const int wi = c / 64;
        const uint64_t mask = 1ull << (c % 64);
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (bits[static_cast<size_t>(i) * words + wi] & mask) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int k = 0; k < words; ++k)
                std::swap(bits[static_cast<size_t>(piv) * words + k], bits[static_cast<size_t>(r) * words + k]);
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            if (bits[static_cast<size_t>(i) * words + wi] & mask) {
                const uint64_t* src = &bits[static_cast<size_t>(r) * words];
                uint64_t* dst = &bits[static_cast<size_t>(i) * words];
                for (int k = 0; k < words; ++k) dst[k] ^= src[k];
            }
        }
        pivots.push_back(c);
        ++r;
    }
    RrefResult out;
    out.rank = r;
    out.pivots = std::move(pivots);
    out.mat = FpMatrix(2, r, cols);
    for (int i = 0; i < r; ++i)
        for (int c = 0; c < cols; ++c)
            out.mat.at(i, c) = (bits[static_cast<size_t>(i) * words + c / 64] >> (c % 64)) & 1;
    return out;
}

}  // namespace detail

RrefResult rref(const FpMatrix& m) {
    if (m.p() == 2) return detail::rref_packed2(m);
    return detail::rref_generic(m);
}

int rank_of(const FpMatrix& m) { return rref(m).rank; }

Subspace kernel_basis(const FpMatrix& m) {
    RrefResult r = rref(m);
    const int cols = m.cols(), p = m.p();
    std::vector<bool> is_pivot(cols, false);
    for (int c : r.pivots) is_pivot[c] = true;
    Subspace ker;
    ker.p = p;
    ker.ambient = cols;
    // one basis vector per free column; these come out already in rref shape
    for (int c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        std::vector<uint8_t> v(cols, 0);
        v[c] = 1;
        for (int i = 0; i < r.rank; ++i)
            v[r.pivots[i]] = static_cast<uint8_t>((p - r.mat.at(i, c)) % p);
        ker.basis.push_back(std::move(v));
        ker.pivots.push_back(c);
    }
    return ker;
}

std::optional<std::vector<uint8_t>> solve(const FpMatrix& m, const std::vector<uint8_t>& rhs) {
    if (static_cast<int>(rhs.size()) != m.rows())
        throw std::invalid_argument("solve: rhs length mismatch");
    const int p = m.p();
    FpMatrix aug(p, m.rows(), m.cols() + 1);
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, m.cols()) = rhs[r] % p;
    }
    RrefResult rr = rref(aug);
    for (int i = 0; i < rr.rank; ++i)
        if (rr.pivots[i] == m.cols()) return std::nullopt;  // inconsistent
    std::vector<uint8_t> x(m.cols(), 0);
    for (int i = 0; i < rr.rank; ++i) x[rr.pivots[i]] = rr.mat.at(i, m.cols());
    return x;
}

bool Subspace::contains(const std::vector<uint8_t>& v) const {
    std::vector<uint8_t> r = reduce(v);
    for (uint8_t x : r)
        if (x) return false;
    return true;
}

std::vector<uint8_t> Subspace::reduce(std::vector<uint8_t> v) const {
    if (static_cast<int>(v.size()) != ambient)
        throw std::invalid_argument("Subspace::reduce: length mismatch");
    for (size_t i = 0; i < basis.size(); ++i) {
        int c = pivots[i];
        int f = v[c] % p;
        if (!f) continue;
        for (int k = 0; k < ambient; ++k)
            v[k] = static_cast<uint8_t>((v[k] + f * (p - basis[i][k])) % p);
    }
    return v;
}

namespace {

int small_binom(int n, int k, int p) {
    // n, k < p; multiplicative formula with an inverse mod p
    if (k < 0 || k > n) return 0;
    long long num = 1, den = 1;
    for (int t = 1; t <= k; ++t) {
        num = num * ((n - k + t) % p) % p;
        den = den * t % p;
    }
    return static_cast<int>(num * mod_pow(static_cast<int>(den), p - 2, p) % p);
}

}  // namespace

int binom_mod_p(long long n, long long k, int p) {
    if (k < 0 || k > n) return 0;
    int out = 1;
    while (n > 0 || k > 0) {
        int nd = static_cast<int>(n % p), kd = static_cast<int>(k % p);
        if (kd > nd) return 0;
        out = out * small_binom(nd, kd, p) % p;
        n /= p;
        k /= p;
    }
    return out;
}

}  // namespace cohdepth

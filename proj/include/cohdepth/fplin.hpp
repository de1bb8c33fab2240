#pragma once
// Exact dense linear algebra over a prime field F_p.
// Entries are residues 0..p-1 stored as bytes; all results are exact.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cohdepth {

bool is_prime(int n);

class FpMatrix {
public:
    FpMatrix() : p_(2), rows_(0), cols_(0) {}
    FpMatrix(int p, int rows, int cols);
    static FpMatrix identity(int p, int n);

    int p() const { return p_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    uint8_t& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    uint8_t at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }
    uint8_t* row(int r) { return a_.data() + static_cast<size_t>(r) * cols_; }
    const uint8_t* row(int r) const { return a_.data() + static_cast<size_t>(r) * cols_; }

    FpMatrix transpose() const;
    FpMatrix mul(const FpMatrix& other) const;
    std::vector<uint8_t> apply(const std::vector<uint8_t>& v) const;  // matrix * column vector
    bool operator==(const FpMatrix&) const = default;

private:
    int p_, rows_, cols_;
    std::vector<uint8_t> a_;
};

struct RrefResult {
    FpMatrix mat;                // reduced row-echelon form, zero rows trimmed off
    std::vector<int> pivots;     // pivot column per nonzero row, strictly increasing
    int rank = 0;
};

// A subspace of F_p^ambient, held as a reduced row-echelon basis.
struct Subspace {
    int p = 2;
    int ambient = 0;
    std::vector<std::vector<uint8_t>> basis;  // rref rows, pivot-normalized
    std::vector<int> pivots;

    int dim() const { return static_cast<int>(basis.size()); }
    bool contains(const std::vector<uint8_t>& v) const;
    // v reduced against the basis; zero iff contained.
    std::vector<uint8_t> reduce(std::vector<uint8_t> v) const;
};

// Deterministic Gauss-Jordan: pivot = first row with nonzero entry in the
// leftmost unfinished column.  For p=2 a bit-packed path is used internally;
// both paths produce identical output.
RrefResult rref(const FpMatrix& m);
int rank_of(const FpMatrix& m);

// Basis of { v : M v = 0 }.
Subspace kernel_basis(const FpMatrix& m);

// One solution of M x = rhs, if consistent.
std::optional<std::vector<uint8_t>> solve(const FpMatrix& m, const std::vector<uint8_t>& rhs);

namespace detail {
RrefResult rref_generic(const FpMatrix& m);   // byte arithmetic, any p
RrefResult rref_packed2(const FpMatrix& m);   // p=2, 64 columns per word
}  // namespace detail

// Small mod-p helpers used across the library.
inline int mod_add(int a, int b, int p) { int t = a + b; return t >= p ? t - p : t; }
inline int mod_sub(int a, int b, int p) { int t = a - b; return t < 0 ? t + p : t; }
inline int mod_mul(int a, int b, int p) { return (a * b) % p; }
int mod_inv(int a, int p);
int mod_pow(int a, long long e, int p);

// C(n, k) mod p by Lucas' theorem.
int binom_mod_p(long long n, long long k, int p);

}  // namespace cohdepth

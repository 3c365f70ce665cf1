#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "cmsr/gf.hpp"

namespace cmsr {

using gf::Field;

/// Dense row-major matrix over GF(2^m). Plain value type; arithmetic goes
/// through free functions that take the field context. Block structure is
/// never inferred: operations that act on block matrices (box_kron, blow_up)
/// take the partition explicitly.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols, 0) {}

    static Matrix identity(std::size_t n);
    static Matrix ones(std::size_t rows, std::size_t cols);
    /// e_g as a 1 x n row (the g-th row of the identity).
    static Matrix unit_row(std::size_t n, std::size_t g);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return e_.empty(); }

    uint32_t operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
    uint32_t& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }

    const uint32_t* row_ptr(std::size_t i) const { return e_.data() + i * cols_; }
    uint32_t* row_ptr(std::size_t i) { return e_.data() + i * cols_; }
    std::span<const uint32_t> entries() const { return e_; }

    bool operator==(const Matrix&) const = default;

    bool is_zero() const;
    /// Row-per-line hex dump for debugging.
    void dump(std::ostream& os) const;

private:
    std::size_t rows_, cols_;
    std::vector<uint32_t> e_;
};

// Products. mat_mul parallelizes across rows for large operands; the serial
// variant is the reference implementation and produces identical results.
Matrix mat_mul(const Field& f, const Matrix& a, const Matrix& b);
Matrix mat_mul_serial(const Field& f, const Matrix& a, const Matrix& b);
std::vector<uint32_t> mat_vec(const Field& f, const Matrix& a, std::span<const uint32_t> x);

Matrix mat_add(const Field& f, const Matrix& a, const Matrix& b);
Matrix mat_sub(const Field& f, const Matrix& a, const Matrix& b);
Matrix scalar_mul(const Field& f, uint32_t c, const Matrix& a);
Matrix transpose(const Matrix& a);

// Gauss-Jordan with full pivoting (first nonzero in scan order, so results
// are deterministic). det is multiplicative; solve requires invertible a.
Matrix mat_inverse(const Field& f, const Matrix& a);
uint32_t mat_det(const Field& f, const Matrix& a);
std::vector<uint32_t> solve(const Field& f, const Matrix& a, std::span<const uint32_t> b);
bool is_invertible(const Field& f, const Matrix& a);

Matrix kron(const Field& f, const Matrix& a, const Matrix& b);

/// Block Kronecker product: b is viewed as a block_rows x block_cols uniform
/// block matrix and block (i,j) of the result is kron(a, b_ij).
Matrix box_kron(const Field& f, const Matrix& a, const Matrix& b,
                std::size_t block_rows, std::size_t block_cols);

/// Blow-up of an s x s uniform block matrix k along digit a of [s^t]:
/// identity(s^(t-a-1)) (x) (identity(s^a) box (x) k).
Matrix blow_up(const Field& f, const Matrix& k, unsigned t, unsigned a, unsigned s);

Matrix hadamard(const Field& f, const Matrix& a, const Matrix& b);

/// Column (1, x, x^2, ..., x^(t-1))^T.
Matrix vandermonde_col(const Field& f, uint32_t x, std::size_t t);

/// Circulant of a polynomial in F_q[x]/(x^s - 1): row 0 holds the
/// coefficients, each following row is rotated right by one.
Matrix circulant(std::span<const uint32_t> coeffs);

Matrix blkdiag(std::span<const Matrix> blocks);
Matrix hconcat(std::span<const Matrix> blocks);
Matrix vconcat(std::span<const Matrix> blocks);

}  // namespace cmsr

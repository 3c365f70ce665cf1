#include "cmsr/matrix.hpp"

#include <cassert>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cmsr {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(Errc::dimension_mismatch, std::string(op) + ": shapes differ");
}

std::size_t pow_sz(std::size_t base, unsigned e) {
    std::size_t r = 1;
    while (e--) r *= base;
    return r;
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::ones(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i) m.e_[i] = 1;
    return m;
}

Matrix Matrix::unit_row(std::size_t n, std::size_t g) {
    Matrix m(1, n);
    m(0, g) = 1;
    return m;
}

bool Matrix::is_zero() const {
    for (uint32_t v : e_)
        if (v) return false;
    return true;
}

void Matrix::dump(std::ostream& os) const {
    const char* hex = "0123456789abcdef";
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            uint32_t v = (*this)(i, j);
            if (j) os << ' ';
            if (v == 0) {
                os << '0';
            } else {
                char buf[9];
                int p = 8;
                buf[8] = 0;
                while (v) {
                    buf[--p] = hex[v & 0xF];
                    v >>= 4;
                }
                os << (buf + p);
            }
        }
        os << '\n';
    }
}

namespace {

inline void mul_row(const Field& f, const Matrix& a, const Matrix& b, Matrix& c, std::size_t i) {
    const std::size_t n = a.cols(), w = b.cols();
    const uint32_t* arow = a.row_ptr(i);
    uint32_t* crow = c.row_ptr(i);
    for (std::size_t k = 0; k < n; ++k)
        if (arow[k]) f.mul_acc(crow, arow[k], b.row_ptr(k), w);
}

}  // namespace

Matrix mat_mul_serial(const Field& f, const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) fail(Errc::dimension_mismatch, "mat_mul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) mul_row(f, a, b, c, i);
    return c;
}

Matrix mat_mul(const Field& f, const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) fail(Errc::dimension_mismatch, "mat_mul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
#ifdef _OPENMP
    if (a.rows() > 1 && a.rows() * a.cols() * b.cols() >= (1u << 16)) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < static_cast<long>(a.rows()); ++i)
            mul_row(f, a, b, c, static_cast<std::size_t>(i));
        return c;
    }
#endif
    for (std::size_t i = 0; i < a.rows(); ++i) mul_row(f, a, b, c, i);
    return c;
}

std::vector<uint32_t> mat_vec(const Field& f, const Matrix& a, std::span<const uint32_t> x) {
    if (a.cols() != x.size()) fail(Errc::dimension_mismatch, "mat_vec: vector length differs");
    std::vector<uint32_t> y(a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const uint32_t* arow = a.row_ptr(i);
        uint32_t acc = 0;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (arow[j] && x[j]) acc = f.add(acc, f.mul(arow[j], x[j]));
        y[i] = acc;
    }
    return y;
}

Matrix mat_add(const Field& f, const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "mat_add");
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = f.add(a(i, j), b(i, j));
    return c;
}

Matrix mat_sub(const Field& f, const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "mat_sub");
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = f.sub(a(i, j), b(i, j));
    return c;
}

Matrix scalar_mul(const Field& f, uint32_t c, const Matrix& a) {
    Matrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = f.mul(c, a(i, j));
    return r;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

namespace {

// Gauss-Jordan on [a | aug] with full pivoting. Column swaps are recorded so
// callers can un-permute. Returns false as soon as the matrix proves
// singular (det == 0); in that case out parameters are unspecified.
bool gauss_jordan(const Field& f, Matrix a, Matrix* aug, uint32_t* det,
                  std::vector<std::size_t>* col_perm, bool reduce_up) {
    const std::size_t n = a.rows();
    assert(a.cols() == n);
    std::vector<std::size_t> cols(n);
    std::iota(cols.begin(), cols.end(), 0);
    uint32_t d = 1;
    unsigned swaps = 0;
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t pr = n, pc = n;
        for (std::size_t i = p; i < n && pr == n; ++i)
            for (std::size_t j = p; j < n; ++j)
                if (a(i, j)) {
                    pr = i;
                    pc = j;
                    break;
                }
        if (pr == n) return false;
        if (pr != p) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(pr, j));
            if (aug)
                for (std::size_t j = 0; j < aug->cols(); ++j) std::swap((*aug)(p, j), (*aug)(pr, j));
            ++swaps;
        }
        if (pc != p) {
            for (std::size_t i = 0; i < n; ++i) std::swap(a(i, p), a(i, pc));
            std::swap(cols[p], cols[pc]);
            ++swaps;
        }
        const uint32_t piv = a(p, p);
        d = f.mul(d, piv);
        const uint32_t piv_inv = f.inv(piv);
        for (std::size_t j = p; j < n; ++j) a(p, j) = f.mul(a(p, j), piv_inv);
        if (aug)
            for (std::size_t j = 0; j < aug->cols(); ++j) (*aug)(p, j) = f.mul((*aug)(p, j), piv_inv);
        const std::size_t lo = reduce_up ? 0 : p + 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n >= 64)
#endif
        for (long li = static_cast<long>(lo); li < static_cast<long>(n); ++li) {
            const std::size_t i = static_cast<std::size_t>(li);
            if (i == p) continue;
            const uint32_t factor = a(i, p);
            if (!factor) continue;
            a(i, p) = 0;
            for (std::size_t j = p + 1; j < n; ++j)
                a(i, j) = f.sub(a(i, j), f.mul(factor, a(p, j)));
            if (aug) {
                const uint32_t* prow = aug->row_ptr(p);
                uint32_t* irow = aug->row_ptr(i);
                for (std::size_t j = 0; j < aug->cols(); ++j)
                    irow[j] = f.sub(irow[j], f.mul(factor, prow[j]));
            }
        }
    }
    if (det) *det = (swaps % 2) ? f.neg(d) : d;
    if (col_perm) *col_perm = cols;
    return true;
}

}  // namespace

Matrix mat_inverse(const Field& f, const Matrix& a) {
    if (a.rows() != a.cols()) fail(Errc::dimension_mismatch, "mat_inverse: matrix not square");
    const std::size_t n = a.rows();
    Matrix aug = Matrix::identity(n);
    std::vector<std::size_t> cols;
    if (!gauss_jordan(f, a, &aug, nullptr, &cols, true))
        fail(Errc::singular_matrix, "mat_inverse: singular matrix");
    // Column swaps in a permute rows of the inverse.
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(cols[i], j) = aug(i, j);
    return inv;
}

uint32_t mat_det(const Field& f, const Matrix& a) {
    if (a.rows() != a.cols()) fail(Errc::dimension_mismatch, "mat_det: matrix not square");
    uint32_t d = 0;
    if (!gauss_jordan(f, a, nullptr, &d, nullptr, false)) return 0;
    return d;
}

bool is_invertible(const Field& f, const Matrix& a) {
    return a.rows() == a.cols() && mat_det(f, a) != 0;
}

std::vector<uint32_t> solve(const Field& f, const Matrix& a, std::span<const uint32_t> b) {
    if (a.rows() != a.cols()) fail(Errc::dimension_mismatch, "solve: matrix not square");
    if (a.rows() != b.size()) fail(Errc::dimension_mismatch, "solve: rhs length differs");
    Matrix aug(a.rows(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) aug(i, 0) = b[i];
    std::vector<std::size_t> cols;
    if (!gauss_jordan(f, a, &aug, nullptr, &cols, true))
        fail(Errc::singular_matrix, "solve: singular matrix");
    std::vector<uint32_t> x(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) x[cols[i]] = aug(i, 0);
    return x;
}

Matrix kron(const Field& f, const Matrix& a, const Matrix& b) {
    Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const uint32_t v = a(i, j);
            if (!v) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    c(i * b.rows() + p, j * b.cols() + q) = f.mul(v, b(p, q));
        }
    return c;
}

Matrix box_kron(const Field& f, const Matrix& a, const Matrix& b,
                std::size_t block_rows, std::size_t block_cols) {
    if (block_rows == 0 || block_cols == 0 || b.rows() % block_rows || b.cols() % block_cols)
        fail(Errc::bad_partition, "box_kron: partition does not divide the matrix");
    const std::size_t p = b.rows() / block_rows, q = b.cols() / block_cols;
    Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t bi = 0; bi < block_rows; ++bi)
        for (std::size_t bj = 0; bj < block_cols; ++bj)
            for (std::size_t i = 0; i < a.rows(); ++i)
                for (std::size_t j = 0; j < a.cols(); ++j) {
                    const uint32_t v = a(i, j);
                    if (!v) continue;
                    for (std::size_t u = 0; u < p; ++u)
                        for (std::size_t w = 0; w < q; ++w)
                            c(bi * a.rows() * p + i * p + u, bj * a.cols() * q + j * q + w) =
                                f.mul(v, b(bi * p + u, bj * q + w));
                }
    return c;
}

Matrix blow_up(const Field& f, const Matrix& k, unsigned t, unsigned a, unsigned s) {
    if (a >= t) fail(Errc::bad_index, "blow_up: digit index out of range");
    if (s == 0 || k.rows() % s || k.cols() % s)
        fail(Errc::bad_partition, "blow_up: matrix is not s x s blocked");
    Matrix inner = box_kron(f, Matrix::identity(pow_sz(s, a)), k, s, s);
    return kron(f, Matrix::identity(pow_sz(s, t - a - 1)), inner);
}

Matrix hadamard(const Field& f, const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "hadamard");
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = f.mul(a(i, j), b(i, j));
    return c;
}

Matrix vandermonde_col(const Field& f, uint32_t x, std::size_t t) {
    Matrix c(t, 1);
    uint32_t v = 1;
    for (std::size_t i = 0; i < t; ++i) {
        c(i, 0) = v;
        v = f.mul(v, x);
    }
    return c;
}

Matrix circulant(std::span<const uint32_t> coeffs) {
    const std::size_t s = coeffs.size();
    Matrix c(s, s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) c(i, j) = coeffs[(j + s - i) % s];
    return c;
}

Matrix blkdiag(std::span<const Matrix> blocks) {
    std::size_t rows = 0, cols = 0;
    for (const Matrix& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Matrix c(rows, cols);
    std::size_t ro = 0, co = 0;
    for (const Matrix& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) c(ro + i, co + j) = b(i, j);
        ro += b.rows();
        co += b.cols();
    }
    return c;
}

Matrix hconcat(std::span<const Matrix> blocks) {
    if (blocks.empty()) return {};
    std::size_t cols = 0;
    for (const Matrix& b : blocks) {
        if (b.rows() != blocks[0].rows()) fail(Errc::dimension_mismatch, "hconcat: row counts differ");
        cols += b.cols();
    }
    Matrix c(blocks[0].rows(), cols);
    std::size_t co = 0;
    for (const Matrix& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, co + j) = b(i, j);
        co += b.cols();
    }
    return c;
}

Matrix vconcat(std::span<const Matrix> blocks) {
    if (blocks.empty()) return {};
    std::size_t rows = 0;
    for (const Matrix& b : blocks) {
        if (b.cols() != blocks[0].cols()) fail(Errc::dimension_mismatch, "vconcat: column counts differ");
        rows += b.rows();
    }
    Matrix c(rows, blocks[0].cols());
    std::size_t ro = 0;
    for (const Matrix& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) c(ro + i, j) = b(i, j);
        ro += b.rows();
    }
    return c;
}

}  // namespace cmsr

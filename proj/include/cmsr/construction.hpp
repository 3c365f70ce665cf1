#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cmsr/matrix.hpp"

namespace cmsr {

/// Validated code parameters. For odd n the code is built at the even
/// internal length n_int = n + 1 and the last node is punctured: it is never
/// exposed, never used as a helper, and decode treats it as a standing
/// erasure.
struct CodeParams {
    int n = 0;                 // public code length
    int k = 0;                 // dimension
    int d = 0;                 // repair degree
    std::vector<int> h_set;    // supported failure counts, sorted
    int n_int = 0;             // internal even length
    int half = 0;              // n_int / 2
    int r = 0;                 // n_int - k
    int s = 0;                 // d - k + 1
    long l_tilde = 0;          // s^half
    int rho = 0;               // lcm(s + h - 1 : h in h_set)
    long l = 0;                // rho * l_tilde
    unsigned m = 0;            // field degree

    bool punctured() const { return n_int != n; }
    bool supports_h(int h) const;
};

CodeParams derive_params(int n, int k, int d, const std::set<int>& h_set,
                         std::optional<unsigned> field_override = {});

/// The cooperative pairing data of a code: circulant polynomials F0, F1 with
/// F0*F1 = 1 in F_q[x]/(x^s - 1), and the four s x s matrices derived from
/// them (U0 = V1 = I, V0 = rot(F0), U1 = rot(F1)).
struct PairingMatrices {
    std::vector<uint32_t> f0, f1;  // coefficient vectors, degree < s
    Matrix u0, u1, v0, v1;
};

uint32_t gamma_poly(const Field& f, int s, uint32_t gamma);  // g(gamma)
PairingMatrices pairing_polynomials(const Field& f, int s, uint32_t gamma);

/// st x s kernel map: every block row is [L(x_0) ... L(x_{s-1})].
Matrix kernel_map(const Field& f, std::span<const uint32_t> xs, std::size_t t);

/// Determinant of the 2s x 2s group matrix built from one node pair.
uint32_t f_det(const Field& f, std::span<const uint32_t> xs, uint32_t gamma);

bool check_flr(const Field& f, const CodeParams& p, std::span<const uint32_t> lambda,
               uint32_t gamma);

/// Deterministic parameter choice: lambda_i = omega^i and the first gamma in
/// the scan order 0, 1, omega, omega^2, ... that satisfies the nonvanishing
/// condition.
std::pair<std::vector<uint32_t>, uint32_t> select_parameters(const Field& f, const CodeParams& p);

class CodeDescriptor {
public:
    /// Build with automatically selected (lambda, gamma).
    static CodeDescriptor build(const CodeParams& p);
    /// Build with explicit values; they must satisfy the same constraints.
    static CodeDescriptor build(const CodeParams& p, std::vector<uint32_t> lambda, uint32_t gamma);

    const CodeParams& params() const { return p_; }
    const Field& field() const { return *field_; }
    std::shared_ptr<const Field> field_ptr() const { return field_; }
    const std::vector<uint32_t>& lambda() const { return lambda_; }
    uint32_t gamma() const { return gamma_; }
    const PairingMatrices& pairing() const { return pair_; }

    /// Kernel matrix K^(t)_{a,b} for group a, in-group index b.
    Matrix kernel_matrix(int a, int b, std::size_t t) const;

    /// Cached parity-check sub-matrix of the intermediate code, i in [n_int].
    const Matrix& parity_submatrix(int i) const;

    /// Inverse of [H~_k ... H~_{n_int-1}], computed on first use.
    const Matrix& parity_block_inverse() const;

    std::string to_json() const;
    static CodeDescriptor from_json(const std::string& text);

private:
    CodeDescriptor() = default;
    static CodeDescriptor build_impl(const CodeParams& p, std::shared_ptr<const Field> field,
                                     std::vector<uint32_t> lambda, uint32_t gamma);

    CodeParams p_;
    std::shared_ptr<const Field> field_;
    std::vector<uint32_t> lambda_;
    uint32_t gamma_ = 0;
    PairingMatrices pair_;
    std::vector<Matrix> h_tilde_;

    mutable std::shared_ptr<std::mutex> cache_lock_ = std::make_shared<std::mutex>();
    mutable std::shared_ptr<const Matrix> parity_inv_;
};

struct MdsMode {
    bool exhaustive = true;
    int samples = 0;
    uint64_t seed = 0;
};

struct MdsReport {
    uint64_t subsets_checked = 0;
    std::vector<std::vector<int>> failing_subsets;
    double elapsed_ms = 0;
    bool pass() const { return failing_subsets.empty(); }
};

/// Checks invertibility of every (or a sample of) r-subset concatenation of
/// the H~ blocks. Subsets are evaluated in parallel; the report is merged in
/// deterministic subset order.
MdsReport verify_mds(const CodeDescriptor& desc, const MdsMode& mode = {});

}  // namespace cmsr

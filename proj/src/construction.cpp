#include "cmsr/construction.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "json.hpp"

namespace cmsr {

namespace {

long pow_long(long base, int e) {
    long r = 1;
    while (e--) r *= base;
    return r;
}

}  // namespace

bool CodeParams::supports_h(int h) const {
    return std::find(h_set.begin(), h_set.end(), h) != h_set.end();
}

CodeParams derive_params(int n, int k, int d, const std::set<int>& h_set,
                         std::optional<unsigned> field_override) {
    if (k < 1) fail(Errc::invalid_params, "k >= 1 violated");
    if (n <= k) fail(Errc::invalid_params, "n > k violated");
    if (h_set.empty()) fail(Errc::invalid_params, "h_set must be nonempty");
    if (d < k + 1) fail(Errc::invalid_params, "d >= k+1 violated");
    for (int h : h_set) {
        if (h < 1) fail(Errc::invalid_params, "h >= 1 violated");
        if (d > n - h)
            fail(Errc::invalid_params,
                 "d <= n-h violated for h=" + std::to_string(h));
    }

    CodeParams p;
    p.n = n;
    p.k = k;
    p.d = d;
    p.h_set.assign(h_set.begin(), h_set.end());
    p.s = d - k + 1;
    p.n_int = (n % 2 == 0) ? n : n + 1;
    p.half = p.n_int / 2;
    p.r = p.n_int - k;
    p.l_tilde = pow_long(p.s, p.half);
    long rho = 1;
    for (int h : p.h_set) rho = std::lcm(rho, static_cast<long>(p.s + h - 1));
    p.rho = static_cast<int>(rho);
    p.l = p.rho * p.l_tilde;

    const long need = static_cast<long>(p.s) * p.n_int + 1;  // q >= s*n_int + 1
    unsigned m = gf::Field::kMinDegree;
    while ((1L << m) < need) {
        if (++m > gf::Field::kMaxDegree)
            fail(Errc::invalid_params, "parameters need a field beyond GF(2^20)");
    }
    if (field_override) {
        if (*field_override < m)
            fail(Errc::field_too_small,
                 "field degree " + std::to_string(*field_override) + " below minimum " +
                     std::to_string(m));
        if (*field_override > gf::Field::kMaxDegree)
            fail(Errc::unsupported_degree, "field degree above 20");
        m = *field_override;
    }
    p.m = m;
    return p;
}

uint32_t gamma_poly(const Field& f, int s, uint32_t gamma) {
    // g(gamma) = gamma (gamma-1) (gamma+s-1) (gamma+s-2)
    const uint32_t t0 = gamma;
    const uint32_t t1 = f.sub(gamma, 1);
    const uint32_t t2 = f.add(gamma, f.from_int(s - 1));
    const uint32_t t3 = f.add(gamma, f.from_int(s - 2));
    return f.mul(f.mul(t0, t1), f.mul(t2, t3));
}

PairingMatrices pairing_polynomials(const Field& f, int s, uint32_t gamma) {
    if (gamma_poly(f, s, gamma) == 0)
        fail(Errc::degenerate_gamma, "g(gamma) = 0");
    PairingMatrices pm;
    pm.f0.assign(s, 1);
    pm.f0[0] = gamma;
    // F1 = (x^{s-1} + ... + x - (gamma+s-2)) / (-(gamma-1)(gamma+s-1))
    const uint32_t denom =
        f.neg(f.mul(f.sub(gamma, 1), f.add(gamma, f.from_int(s - 1))));
    const uint32_t denom_inv = f.inv(denom);
    pm.f1.assign(s, denom_inv);
    pm.f1[0] = f.mul(f.neg(f.add(gamma, f.from_int(s - 2))), denom_inv);
    pm.v0 = circulant(pm.f0);
    pm.u1 = circulant(pm.f1);
    pm.u0 = Matrix::identity(s);
    pm.v1 = Matrix::identity(s);
    if (mat_mul(f, pm.v0, pm.u1) != Matrix::identity(s))
        fail(Errc::degenerate_gamma, "rot(F0) rot(F1) != I");
    for (std::size_t i = 0; i < pm.v0.rows(); ++i)
        for (std::size_t j = 0; j < pm.v0.cols(); ++j)
            if (pm.v0(i, j) == 0 || pm.u1(i, j) == 0)
                fail(Errc::degenerate_gamma, "pairing circulant has a zero entry");
    return pm;
}

Matrix kernel_map(const Field& f, std::span<const uint32_t> xs, std::size_t t) {
    const std::size_t s = xs.size();
    std::vector<Matrix> cols(s);
    for (std::size_t j = 0; j < s; ++j) cols[j] = vandermonde_col(f, xs[j], t);
    Matrix row = hconcat(cols);
    return box_kron(f, Matrix::ones(s, 1), row, 1, s);
}

uint32_t f_det(const Field& f, std::span<const uint32_t> xs, uint32_t gamma) {
    const std::size_t s = xs.size() / 2;
    if (xs.size() != 2 * s || s == 0) fail(Errc::dimension_mismatch, "f_det: need 2s values");
    PairingMatrices pm = pairing_polynomials(f, static_cast<int>(s), gamma);
    const Matrix ones2 = Matrix::ones(2, 1);
    Matrix left = hadamard(f, kron(f, pm.v0, ones2), kernel_map(f, xs.subspan(0, s), 2));
    Matrix right = hadamard(f, kron(f, pm.v1, ones2), kernel_map(f, xs.subspan(s, s), 2));
    const Matrix both[] = {left, right};
    return mat_det(f, hconcat(both));
}

bool check_flr(const Field& f, const CodeParams& p, std::span<const uint32_t> lambda,
               uint32_t gamma) {
    const std::size_t need = static_cast<std::size_t>(p.s) * p.n_int;
    if (lambda.size() != need) fail(Errc::invalid_params, "lambda has wrong length");
    std::vector<uint32_t> sorted(lambda.begin(), lambda.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        fail(Errc::duplicate_lambda, "lambda values must be pairwise distinct");
    for (uint32_t v : lambda)
        if (v >= f.order()) fail(Errc::invalid_params, "lambda value outside the field");
    if (gamma_poly(f, p.s, gamma) == 0) return false;
    // Every group determinant is evaluated directly; no reliance on the
    // geometric-lambda scaling identity, so arbitrary lambda vectors work.
    for (int a = 0; a < p.half; ++a) {
        auto group = lambda.subspan(static_cast<std::size_t>(2 * p.s) * a, 2 * p.s);
        if (f_det(f, group, gamma) == 0) return false;
    }
    return true;
}

std::pair<std::vector<uint32_t>, uint32_t> select_parameters(const Field& f, const CodeParams& p) {
    const std::size_t count = static_cast<std::size_t>(p.s) * p.n_int;
    if (f.order() < count + 1) fail(Errc::field_too_small, "q >= s*n+1 violated");
    std::vector<uint32_t> lambda(count);
    uint32_t v = 1;
    for (std::size_t i = 0; i < count; ++i) {
        lambda[i] = v;
        v = f.mul(v, f.omega());
    }
    // Scan order 0, 1, omega, omega^2, ..., first hit wins.
    if (check_flr(f, p, lambda, 0)) return {lambda, 0};
    uint32_t g = 1;
    for (uint32_t j = 0; j + 1 < f.order(); ++j) {
        if (check_flr(f, p, lambda, g)) return {lambda, g};
        g = f.mul(g, f.omega());
    }
    fail(Errc::no_valid_gamma, "no gamma satisfies the nonvanishing condition");
}

CodeDescriptor CodeDescriptor::build(const CodeParams& p) {
    auto field = std::make_shared<const Field>(p.m);
    auto [lambda, gamma] = select_parameters(*field, p);
    return build_impl(p, field, std::move(lambda), gamma);
}

CodeDescriptor CodeDescriptor::build(const CodeParams& p, std::vector<uint32_t> lambda,
                                     uint32_t gamma) {
    auto field = std::make_shared<const Field>(p.m);
    return build_impl(p, field, std::move(lambda), gamma);
}

CodeDescriptor CodeDescriptor::build_impl(const CodeParams& p, std::shared_ptr<const Field> field,
                                          std::vector<uint32_t> lambda, uint32_t gamma) {
    const Field& f = *field;
    if (!check_flr(f, p, lambda, gamma)) {
        if (gamma_poly(f, p.s, gamma) == 0)
            fail(Errc::degenerate_gamma, "g(gamma) = 0");
        fail(Errc::invalid_params, "(lambda, gamma) fail the nonvanishing condition");
    }
    CodeDescriptor desc;
    desc.p_ = p;
    desc.field_ = std::move(field);
    desc.lambda_ = std::move(lambda);
    desc.gamma_ = gamma;
    desc.pair_ = pairing_polynomials(f, p.s, gamma);
    desc.h_tilde_.resize(p.n_int);
    for (int i = 0; i < p.n_int; ++i) {
        const int a = i / 2, b = i % 2;
        Matrix kb = desc.kernel_matrix(a, b, static_cast<std::size_t>(p.r));
        desc.h_tilde_[i] = blow_up(f, kb, p.half, a, p.s);
    }
    return desc;
}

Matrix CodeDescriptor::kernel_matrix(int a, int b, std::size_t t) const {
    if (a < 0 || a >= p_.half || b < 0 || b > 1) fail(Errc::bad_index, "kernel_matrix: bad (a, b)");
    const Field& f = *field_;
    const Matrix& vb = (b == 0) ? pair_.v0 : pair_.v1;
    auto xs = std::span<const uint32_t>(lambda_).subspan(
        static_cast<std::size_t>(p_.s) * (2 * a + b), p_.s);
    return hadamard(f, kron(f, vb, Matrix::ones(t, 1)), kernel_map(f, xs, t));
}

const Matrix& CodeDescriptor::parity_submatrix(int i) const {
    if (i < 0 || i >= p_.n_int) fail(Errc::bad_index, "parity_submatrix: node out of range");
    return h_tilde_[i];
}

const Matrix& CodeDescriptor::parity_block_inverse() const {
    std::lock_guard<std::mutex> lock(*cache_lock_);
    if (!parity_inv_) {
        std::vector<Matrix> blocks;
        for (int i = p_.k; i < p_.n_int; ++i) blocks.push_back(h_tilde_[i]);
        Matrix concat = hconcat(blocks);
        try {
            parity_inv_ = std::make_shared<const Matrix>(mat_inverse(*field_, concat));
        } catch (const Error&) {
            fail(Errc::singular_parity_block, "parity block not invertible");
        }
    }
    return *parity_inv_;
}

std::string CodeDescriptor::to_json() const {
    nlohmann::json j;
    j["version"] = 1;
    j["n"] = p_.n;
    j["k"] = p_.k;
    j["d"] = p_.d;
    j["h_set"] = p_.h_set;
    j["m"] = p_.m;
    j["prim_poly"] = field_->prim_poly();
    j["lambda"] = lambda_;
    j["gamma"] = gamma_;
    return j.dump(2) + "\n";
}

CodeDescriptor CodeDescriptor::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::invalid_params, std::string("descriptor parse error: ") + e.what());
    }
    try {
        if (j.at("version").get<int>() != 1)
            fail(Errc::invalid_params, "unsupported descriptor version");
        std::set<int> hs;
        for (int h : j.at("h_set").get<std::vector<int>>()) hs.insert(h);
        CodeParams p = derive_params(j.at("n").get<int>(), j.at("k").get<int>(),
                                     j.at("d").get<int>(), hs, j.at("m").get<unsigned>());
        auto lambda = j.at("lambda").get<std::vector<uint32_t>>();
        auto gamma = j.at("gamma").get<uint32_t>();
        CodeDescriptor desc = build(p, std::move(lambda), gamma);
        if (j.at("prim_poly").get<uint32_t>() != desc.field().prim_poly())
            fail(Errc::invalid_params, "prim_poly does not match the built-in polynomial");
        return desc;
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::invalid_params, std::string("descriptor field error: ") + e.what());
    }
}

MdsReport verify_mds(const CodeDescriptor& desc, const MdsMode& mode) {
    const auto t0 = std::chrono::steady_clock::now();
    const CodeParams& p = desc.params();
    const Field& f = desc.field();

    std::vector<std::vector<int>> subsets;
    if (mode.exhaustive) {
        std::vector<int> pick(p.r);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            subsets.push_back(pick);
            int i = p.r - 1;
            while (i >= 0 && pick[i] == p.n_int - p.r + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < p.r; ++j) pick[j] = pick[j - 1] + 1;
        }
    } else {
        std::mt19937_64 rng(mode.seed);
        for (int t = 0; t < mode.samples; ++t) {
            std::vector<int> all(p.n_int);
            std::iota(all.begin(), all.end(), 0);
            for (int i = 0; i < p.r; ++i)
                std::swap(all[i], all[i + rng() % (all.size() - i)]);
            std::vector<int> pick(all.begin(), all.begin() + p.r);
            std::sort(pick.begin(), pick.end());
            subsets.push_back(pick);
        }
    }

    std::vector<char> ok(subsets.size(), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long idx = 0; idx < static_cast<long>(subsets.size()); ++idx) {
        std::vector<Matrix> blocks;
        for (int i : subsets[idx]) blocks.push_back(desc.parity_submatrix(i));
        ok[idx] = is_invertible(f, hconcat(blocks)) ? 1 : 0;
    }

    MdsReport rep;
    rep.subsets_checked = subsets.size();
    for (std::size_t idx = 0; idx < subsets.size(); ++idx)
        if (!ok[idx]) rep.failing_subsets.push_back(subsets[idx]);
    rep.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace cmsr

// Compares the OpenMP kernels against the serial reference paths: matrix
// products at a few sizes, a Gauss-Jordan inverse, and stripe encoding.
// Results must be identical; only the wall time differs.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cmsr/pipeline.hpp"

using namespace cmsr;

namespace {

double seconds_of(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix random_matrix(const Field& f, std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng() % f.order();
    return m;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "threads: 1 (built without OpenMP)\n";
#endif

    Field f(16);
    std::mt19937_64 rng(1234);

    std::cout << "\nmat_mul GF(2^16), serial vs parallel\n";
    for (std::size_t n : {128u, 256u, 512u}) {
        Matrix a = random_matrix(f, rng, n, n);
        Matrix b = random_matrix(f, rng, n, n);
        Matrix serial, parallel;
        double ts = seconds_of([&] { serial = mat_mul_serial(f, a, b); });
        double tp = seconds_of([&] { parallel = mat_mul(f, a, b); });
        const bool same = serial == parallel;
        std::cout << "  n=" << n << "  serial " << ts * 1e3 << " ms, parallel " << tp * 1e3
                  << " ms, speedup " << (tp > 0 ? ts / tp : 0.0) << ", identical "
                  << (same ? "yes" : "NO") << "\n";
        if (!same) return 1;
    }

    std::cout << "\nmat_inverse GF(2^16)\n";
    for (std::size_t n : {192u, 384u}) {
        Matrix a = random_matrix(f, rng, n, n);
        while (!is_invertible(f, a)) a = random_matrix(f, rng, n, n);
        Matrix inv;
        double t = seconds_of([&] { inv = mat_inverse(f, a); });
        std::cout << "  n=" << n << "  " << t * 1e3 << " ms, check "
                  << (mat_mul(f, a, inv) == Matrix::identity(n) ? "ok" : "BAD") << "\n";
    }

    std::cout << "\nstripe encode (n=6,k=3,d=4,h=2), parallel stripes vs single stripe loop\n";
    CodeDescriptor desc = CodeDescriptor::build(derive_params(6, 3, 4, {2}));
    const CodeParams& p = desc.params();
    const int stripes = 4000;
    std::vector<uint8_t> data(static_cast<std::size_t>(stripes) * p.k * p.l);
    for (auto& b : data) b = static_cast<uint8_t>(rng());

    std::vector<Shard> shards;
    double tp = seconds_of([&] { shards = encode_file(desc, data); });

    // serial reference: one stripe at a time through the same codec
    std::vector<uint32_t> message = bytes_to_symbols(data, p.m);
    const std::size_t stripe_syms = static_cast<std::size_t>(p.k) * p.l;
    std::vector<std::vector<uint32_t>> serial_nodes(p.n);
    double ts = seconds_of([&] {
        for (int st = 0; st < stripes; ++st) {
            auto cw = encode_systematic(
                desc, std::span<const uint32_t>(message).subspan(st * stripe_syms, stripe_syms));
            for (int i = 0; i < p.n; ++i)
                serial_nodes[i].insert(serial_nodes[i].end(), cw.nodes[i].begin(),
                                       cw.nodes[i].end());
        }
    });
    bool same = true;
    for (int i = 0; i < p.n; ++i) same = same && serial_nodes[i] == shards[i].symbols;
    std::cout << "  " << stripes << " stripes  serial " << ts * 1e3 << " ms, parallel " << tp * 1e3
              << " ms, speedup " << (tp > 0 ? ts / tp : 0.0) << ", identical "
              << (same ? "yes" : "NO") << "\n";
    return same ? 0 : 1;
}

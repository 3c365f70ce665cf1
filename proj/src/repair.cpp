#include "cmsr/repair.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace cmsr {

namespace {

long pow_long(long base, int e) {
    long r = 1;
    while (e--) r *= base;
    return r;
}

uint64_t fnv1a64(std::span<const uint32_t> v) {
    uint64_t h = 1469598103934665603ULL;
    for (uint32_t x : v)
        for (int b = 0; b < 4; ++b) {
            h ^= (x >> (8 * b)) & 0xFF;
            h *= 1099511628211ULL;
        }
    return h;
}

// Small-code coordinate layout for failed node i: nodes j < i keep their
// index, the s self pieces sit at i..i+s-1, nodes j > i shift up by s-1.
int pos_of_node(int j, int i, int s) { return j < i ? j : j + s - 1; }

struct FailedView {
    std::vector<int> failed;
    int h = 0;

    int rank_of(int i) const {
        auto it = std::lower_bound(failed.begin(), failed.end(), i);
        if (it == failed.end() || *it != i) fail(Errc::not_failed, "node not in the failed set");
        return static_cast<int>(it - failed.begin());
    }
};

FailedView check_failed_set(const CodeParams& p, const std::vector<int>& failed) {
    if (failed.empty()) fail(Errc::bad_failure_count, "failed set is empty");
    FailedView fv;
    fv.failed = failed;
    std::sort(fv.failed.begin(), fv.failed.end());
    if (std::adjacent_find(fv.failed.begin(), fv.failed.end()) != fv.failed.end())
        fail(Errc::bad_index, "failed set has duplicates");
    if (fv.failed.front() < 0 || fv.failed.back() >= p.n)
        fail(Errc::bad_index, "failed node out of range");
    fv.h = static_cast<int>(fv.failed.size());
    if (!p.supports_h(fv.h))
        fail(Errc::bad_failure_count,
             "h=" + std::to_string(fv.h) + " not in the descriptor's h_set");
    if (p.rho % (p.s + fv.h - 1))
        fail(Errc::bad_failure_count, "replication factor not divisible by s+h-1");
    return fv;
}

Matrix group_parity(const CodeDescriptor& desc, int j, int group_size) {
    return kron(desc.field(), Matrix::identity(group_size), desc.parity_submatrix(j));
}

}  // namespace

Matrix row_selector(int s, int half, int a, int g) {
    if (a < 0 || a >= half || g < 0 || g >= s) fail(Errc::bad_index, "row_selector: bad (a, g)");
    const long hi = pow_long(s, half - a - 1), lo = pow_long(s, a);
    Matrix r(hi * lo, hi * lo * s);
    for (long u = 0; u < hi; ++u)
        for (long w = 0; w < lo; ++w)
            r(u * lo + w, u * lo * s + g * lo + w) = 1;
    return r;
}

Matrix selection_matrix(int s, int half, int h, int a, int g, int z) {
    if (h < 1 || z < 0 || z >= h) fail(Errc::bad_index, "selection_matrix: bad (h, z)");
    if (a < 0 || a >= half || g < 0 || g >= s) fail(Errc::bad_index, "selection_matrix: bad (a, g)");
    const long lt = pow_long(s, half);
    const long per_block = lt / s;
    const int gs = s + h - 1;
    Matrix m(lt, static_cast<std::size_t>(gs) * lt);
    for (int i = 0; i < s; ++i) {
        Matrix r = row_selector(s, half, a, (g + i) % s);
        auto place = [&](long col0) {
            for (std::size_t u = 0; u < r.rows(); ++u)
                for (std::size_t v = 0; v < r.cols(); ++v)
                    if (r(u, v)) m(i * per_block + u, col0 + v) = r(u, v);
        };
        place(static_cast<long>(i) * lt);
        if (z < h - 1) place(static_cast<long>(z + s) * lt);
    }
    return m;
}

Matrix q_matrix(const Field& f, int s, int half, int h, int z) {
    if (h < 1 || z < 0 || z >= h) fail(Errc::bad_index, "q_matrix: bad (h, z)");
    const long lt = pow_long(s, half);
    const int gs = s + h - 1;
    Matrix q(static_cast<std::size_t>(gs) * lt, static_cast<std::size_t>(gs) * lt);
    for (int i = s; i < gs; ++i)
        for (long t = 0; t < lt; ++t) q(i * lt + t, i * lt + t) = 1;
    if (z < h - 1)
        for (int i = 0; i < s; ++i)
            for (long t = 0; t < lt; ++t) q(i * lt + t, (z + s) * lt + t) = f.neg(1);
    return q;
}

Matrix repair_matrix(const CodeDescriptor& desc, const std::vector<int>& failed, int i) {
    const CodeParams& p = desc.params();
    FailedView fv = check_failed_set(p, failed);
    const int ihat = fv.rank_of(i);
    const int a = i / 2, b = i % 2;
    Matrix sel = selection_matrix(p.s, p.half, fv.h, a, 0, ihat);
    const Matrix& ub = (b == 0) ? desc.pairing().u0 : desc.pairing().u1;
    Matrix blown = blow_up(desc.field(), ub, p.half, a, p.s);
    Matrix e = kron(desc.field(), Matrix::identity(p.s + fv.h - 1), blown);
    return mat_mul(desc.field(), sel, e);
}

SmallCodeMatrices small_code_matrices(const CodeDescriptor& desc, const std::vector<int>& failed,
                                      int i) {
    const CodeParams& p = desc.params();
    const Field& f = desc.field();
    FailedView fv = check_failed_set(p, failed);
    const int ihat = fv.rank_of(i);
    const int a = i / 2;
    const int gs = p.s + fv.h - 1;

    Matrix rep = repair_matrix(desc, failed, i);
    Matrix rep_k = kron(f, rep, Matrix::identity(p.r));
    Matrix sel0 = selection_matrix(p.s, p.half, fv.h, a, 0, ihat);
    Matrix sel0_k = kron(f, sel0, Matrix::identity(p.r));

    std::vector<Matrix> sel_t(p.s);
    for (int g = 0; g < p.s; ++g)
        sel_t[g] = transpose(selection_matrix(p.s, p.half, fv.h, a, g, fv.h - 1));

    SmallCodeMatrices sc;
    Matrix hi_full = group_parity(desc, i, gs);
    Matrix folded_i = mat_mul(f, rep_k, hi_full);
    for (int g = 0; g < p.s; ++g) {
        sc.self_h.push_back(mat_mul(f, folded_i, sel_t[g]));
        sc.self_d.push_back(selection_matrix(p.s, p.half, fv.h, a, g, ihat));
    }
    for (int j = 0; j < p.n_int; ++j) {
        if (j == i) continue;
        Matrix hj_full = group_parity(desc, j, gs);
        if (j / 2 == a) {
            sc.cross_h[j] = mat_mul(f, mat_mul(f, rep_k, hj_full), sel_t[0]);
            sc.cross_d[j] = sel0;
        } else {
            sc.cross_h[j] = mat_mul(f, mat_mul(f, sel0_k, hj_full), sel_t[0]);
            sc.cross_d[j] = rep;
        }
    }
    return sc;
}

std::vector<uint32_t> helper_compute(const CodeDescriptor& desc, const std::vector<int>& failed,
                                     int i, int j, std::span<const uint32_t> c_j) {
    const CodeParams& p = desc.params();
    FailedView fv = check_failed_set(p, failed);
    const int ihat = fv.rank_of(i);
    if (j == i || j < 0 || j >= p.n) fail(Errc::bad_index, "helper_compute: bad contributor");
    if (c_j.size() != static_cast<std::size_t>(p.l))
        fail(Errc::dimension_mismatch, "helper_compute: node vector has wrong length");
    const int gs = p.s + fv.h - 1;
    const int groups = p.rho / gs;
    Matrix d = (j / 2 == i / 2) ? selection_matrix(p.s, p.half, fv.h, i / 2, 0, ihat)
                                : repair_matrix(desc, failed, i);
    std::vector<uint32_t> out;
    out.reserve(static_cast<std::size_t>(groups) * p.l_tilde);
    const std::size_t glen = static_cast<std::size_t>(gs) * p.l_tilde;
    for (int g = 0; g < groups; ++g) {
        auto piece = mat_vec(desc.field(), d, c_j.subspan(g * glen, glen));
        out.insert(out.end(), piece.begin(), piece.end());
    }
    return out;
}

uint64_t cut_set_bound(const CodeParams& p, int h) {
    if (!p.supports_h(h)) fail(Errc::bad_failure_count, "h not in h_set");
    const uint64_t num = static_cast<uint64_t>(h) * (p.d + h - 1) * p.l;
    const uint64_t den = p.s + h - 1;  // d - k + h
    return num / den;
}

RepairPlan::RepairPlan(const CodeDescriptor& desc, std::vector<int> failed,
                       std::vector<int> helpers)
    : desc_(&desc) {
    const CodeParams& p = desc.params();
    FailedView fv = check_failed_set(p, failed);
    failed_ = fv.failed;
    helpers_ = std::move(helpers);
    std::sort(helpers_.begin(), helpers_.end());
    if (static_cast<int>(helpers_.size()) != p.d)
        fail(Errc::bad_helper_count, "need exactly d helpers");
    if (std::adjacent_find(helpers_.begin(), helpers_.end()) != helpers_.end())
        fail(Errc::bad_index, "helper set has duplicates");
    if (helpers_.front() < 0 || helpers_.back() >= p.n)
        fail(Errc::bad_index, "helper out of range");
    for (int j : helpers_)
        if (std::binary_search(failed_.begin(), failed_.end(), j))
            fail(Errc::overlap, "node " + std::to_string(j) + " is both failed and helper");

    group_size_ = p.s + fv.h - 1;
    num_groups_ = p.rho / group_size_;

    for (int i : failed_) {
        NodePlan np;
        np.node = i;
        np.sc = small_code_matrices(desc, failed_, i);
        std::vector<char> known(p.n_int + p.s - 1, 0);
        for (int j : helpers_) known[pos_of_node(j, i, p.s)] = 1;
        std::vector<Matrix> unknown_blocks;
        for (int pos = 0; pos < p.n_int + p.s - 1; ++pos) {
            if (known[pos]) continue;
            np.unknown_slot[pos] = static_cast<int>(np.unknown_positions.size());
            np.unknown_positions.push_back(pos);
            if (pos >= i && pos < i + p.s)
                unknown_blocks.push_back(np.sc.self_h[pos - i]);
            else
                unknown_blocks.push_back(np.sc.cross_h.at(pos < i ? pos : pos - p.s + 1));
        }
        try {
            np.step1_inv = mat_inverse(desc.field(), hconcat(unknown_blocks));
        } catch (const Error&) {
            fail(Errc::singular_system, "step-1 system not invertible");
        }
        nodes_.push_back(std::move(np));
    }

    // The step-2 stack for node i interleaves matrices owned by its peers, so
    // it is assembled after every small code exists.
    for (std::size_t fi = 0; fi < nodes_.size(); ++fi) {
        const int i = failed_[fi];
        std::vector<Matrix> stack = nodes_[fi].sc.self_d;
        for (std::size_t fj = 0; fj < nodes_.size(); ++fj) {
            if (fj == fi) continue;
            stack.push_back(nodes_[fj].sc.cross_d.at(i));
        }
        try {
            nodes_[fi].step2_inv = mat_inverse(desc.field(), vconcat(stack));
        } catch (const Error&) {
            fail(Errc::singular_system, "step-2 stack not invertible");
        }
    }
}

const SmallCodeMatrices& RepairPlan::small_code(int i) const {
    for (const auto& np : nodes_)
        if (np.node == i) return np.sc;
    fail(Errc::not_failed, "node not in the failed set");
}

Step1Result RepairPlan::solve_node(const NodePlan& np,
                                   const std::map<int, std::vector<uint32_t>>& payloads) const {
    const CodeParams& p = desc_->params();
    const Field& f = desc_->field();
    const std::size_t lt = p.l_tilde;
    const std::size_t plen = lt * num_groups_;
    for (int j : helpers_) {
        auto it = payloads.find(j);
        if (it == payloads.end())
            fail(Errc::missing_payload, "no payload from helper " + std::to_string(j));
        if (it->second.size() != plen)
            fail(Errc::dimension_mismatch, "payload from helper has wrong length");
    }

    Step1Result out;
    out.self_pieces.assign(p.s, std::vector<uint32_t>(plen, 0));
    for (int j : failed_)
        if (j != np.node) out.peer_pieces[j].assign(plen, 0);

    for (int g = 0; g < num_groups_; ++g) {
        std::vector<uint32_t> rhs(p.r * lt, 0);
        for (int j : helpers_) {
            auto slice = std::span<const uint32_t>(payloads.at(j)).subspan(g * lt, lt);
            auto contrib = mat_vec(f, np.sc.cross_h.at(j), slice);
            for (std::size_t t = 0; t < rhs.size(); ++t) rhs[t] = f.add(rhs[t], contrib[t]);
        }
        for (auto& v : rhs) v = f.neg(v);
        auto x = mat_vec(f, np.step1_inv, rhs);
        for (int s_idx = 0; s_idx < p.s; ++s_idx) {
            const int slot = np.unknown_slot.at(np.node + s_idx);
            std::copy_n(x.begin() + static_cast<std::size_t>(slot) * lt, lt,
                        out.self_pieces[s_idx].begin() + g * lt);
        }
        for (int j : failed_) {
            if (j == np.node) continue;
            const int slot = np.unknown_slot.at(pos_of_node(j, np.node, p.s));
            std::copy_n(x.begin() + static_cast<std::size_t>(slot) * lt, lt,
                        out.peer_pieces[j].begin() + g * lt);
        }
    }
    return out;
}

RepairResult RepairPlan::apply(const std::map<int, std::vector<uint32_t>>& survivors,
                               Transcript* transcript) const {
    const CodeParams& p = desc_->params();
    const Field& f = desc_->field();
    const std::size_t lt = p.l_tilde;
    const std::size_t glen = static_cast<std::size_t>(group_size_) * lt;
    const uint64_t per_edge = static_cast<uint64_t>(lt) * num_groups_;

    for (int j : helpers_) {
        auto it = survivors.find(j);
        if (it == survivors.end())
            fail(Errc::missing_payload, "survivor data for helper " + std::to_string(j) + " absent");
        if (it->second.size() != static_cast<std::size_t>(p.l))
            fail(Errc::dimension_mismatch, "helper node vector has wrong length");
    }

    RepairResult res;

    // Step 1: every helper computes one piece per failed node.
    std::vector<std::map<int, std::vector<uint32_t>>> payloads(nodes_.size());
    for (std::size_t fi = 0; fi < nodes_.size(); ++fi) {
        const int i = failed_[fi];
        for (int j : helpers_) {
            const auto& cj = survivors.at(j);
            std::vector<uint32_t> pay(per_edge, 0);
            const Matrix& d = nodes_[fi].sc.cross_d.at(j);
            for (int g = 0; g < num_groups_; ++g) {
                auto piece = mat_vec(f, d, std::span<const uint32_t>(cj).subspan(g * glen, glen));
                std::copy(piece.begin(), piece.end(), pay.begin() + g * lt);
            }
            res.ledger.edges[{j, i}] += per_edge;
            res.ledger.step1 += per_edge;
            if (transcript) transcript->push_back({1, j, i, per_edge, fnv1a64(pay)});
            payloads[fi].emplace(j, std::move(pay));
        }
    }

    std::vector<Step1Result> solved(nodes_.size());
    for (std::size_t fi = 0; fi < nodes_.size(); ++fi)
        solved[fi] = solve_node(nodes_[fi], payloads[fi]);

    // Step 2: failed nodes exchange the pieces recovered for each other, then
    // invert the stacked selection.
    for (std::size_t fi = 0; fi < nodes_.size(); ++fi) {
        const int i = failed_[fi];
        for (std::size_t fj = 0; fj < nodes_.size(); ++fj) {
            if (fj == fi) continue;
            const int j = failed_[fj];
            const auto& piece = solved[fj].peer_pieces.at(i);
            res.ledger.edges[{j, i}] += per_edge;
            res.ledger.step2 += per_edge;
            if (transcript) transcript->push_back({2, j, i, per_edge, fnv1a64(piece)});
        }
    }
    for (std::size_t fi = 0; fi < nodes_.size(); ++fi) {
        const int i = failed_[fi];
        std::vector<uint32_t> rebuilt(p.l, 0);
        for (int g = 0; g < num_groups_; ++g) {
            std::vector<uint32_t> stacked;
            stacked.reserve(glen);
            for (int s_idx = 0; s_idx < p.s; ++s_idx) {
                const auto& sp = solved[fi].self_pieces[s_idx];
                stacked.insert(stacked.end(), sp.begin() + g * lt, sp.begin() + (g + 1) * lt);
            }
            for (std::size_t fj = 0; fj < nodes_.size(); ++fj) {
                if (fj == fi) continue;
                const auto& pp = solved[fj].peer_pieces.at(i);
                stacked.insert(stacked.end(), pp.begin() + g * lt, pp.begin() + (g + 1) * lt);
            }
            auto seg = mat_vec(f, nodes_[fi].step2_inv, stacked);
            std::copy(seg.begin(), seg.end(), rebuilt.begin() + g * glen);
        }
        res.repaired.emplace(i, std::move(rebuilt));
    }
    return res;
}

RepairResult cooperative_repair(const CodeDescriptor& desc,
                                const std::map<int, std::vector<uint32_t>>& survivors,
                                const std::vector<int>& failed, const std::vector<int>& helpers,
                                Transcript* transcript) {
    RepairPlan plan(desc, failed, helpers);
    return plan.apply(survivors, transcript);
}

Step1Result step1_solve(const CodeDescriptor& desc, const std::vector<int>& failed,
                        const std::vector<int>& helpers, int i,
                        const std::map<int, std::vector<uint32_t>>& payloads) {
    RepairPlan plan(desc, failed, helpers);
    for (const auto& np : plan.nodes_)
        if (np.node == i) return plan.solve_node(np, payloads);
    fail(Errc::not_failed, "node not in the failed set");
}

std::vector<uint32_t> step2_combine(const CodeDescriptor& desc, const std::vector<int>& failed,
                                    int i, const std::vector<std::vector<uint32_t>>& self_pieces,
                                    const std::map<int, std::vector<uint32_t>>& peer_pieces) {
    const CodeParams& p = desc.params();
    const Field& f = desc.field();
    FailedView fv = check_failed_set(p, failed);
    fv.rank_of(i);
    const int gs = p.s + fv.h - 1;
    const int groups = p.rho / gs;
    const std::size_t lt = p.l_tilde;
    const std::size_t plen = lt * groups;
    if (static_cast<int>(self_pieces.size()) != p.s)
        fail(Errc::missing_piece, "need s self pieces");
    for (const auto& sp : self_pieces)
        if (sp.size() != plen) fail(Errc::dimension_mismatch, "self piece has wrong length");
    for (int j : fv.failed) {
        if (j == i) continue;
        auto it = peer_pieces.find(j);
        if (it == peer_pieces.end())
            fail(Errc::missing_piece, "piece from failed peer " + std::to_string(j) + " absent");
        if (it->second.size() != plen) fail(Errc::dimension_mismatch, "peer piece has wrong length");
    }

    std::vector<Matrix> stack;
    SmallCodeMatrices sc_i = small_code_matrices(desc, fv.failed, i);
    for (int g = 0; g < p.s; ++g) stack.push_back(sc_i.self_d[g]);
    for (int j : fv.failed) {
        if (j == i) continue;
        stack.push_back(small_code_matrices(desc, fv.failed, j).cross_d.at(i));
    }
    Matrix inv;
    try {
        inv = mat_inverse(f, vconcat(stack));
    } catch (const Error&) {
        fail(Errc::singular_system, "step-2 stack not invertible");
    }

    std::vector<uint32_t> rebuilt(p.l, 0);
    const std::size_t glen = static_cast<std::size_t>(gs) * lt;
    for (int g = 0; g < groups; ++g) {
        std::vector<uint32_t> stacked;
        stacked.reserve(glen);
        for (int s_idx = 0; s_idx < p.s; ++s_idx)
            stacked.insert(stacked.end(), self_pieces[s_idx].begin() + g * lt,
                           self_pieces[s_idx].begin() + (g + 1) * lt);
        for (int j : fv.failed) {
            if (j == i) continue;
            const auto& pp = peer_pieces.at(j);
            stacked.insert(stacked.end(), pp.begin() + g * lt, pp.begin() + (g + 1) * lt);
        }
        auto seg = mat_vec(f, inv, stacked);
        std::copy(seg.begin(), seg.end(), rebuilt.begin() + g * glen);
    }
    return rebuilt;
}

namespace {

Matrix closed_form_self(const CodeDescriptor& desc, int i, int g) {
    const CodeParams& p = desc.params();
    const Field& f = desc.field();
    const int b = i % 2;
    const auto& coeffs = (b == 0) ? desc.pairing().f0 : desc.pairing().f1;
    std::vector<Matrix> diag;
    for (int x = 0; x < p.s; ++x) {
        const int lam = p.s * i + (g + x) % p.s;
        diag.push_back(vandermonde_col(f, desc.lambda()[lam], p.r));
    }
    Matrix blown = blow_up(f, blkdiag(diag), p.half, p.half - 1, p.s);
    return scalar_mul(f, coeffs[g], blown);
}

Matrix closed_form_same_group(const CodeDescriptor& desc, int j) {
    const CodeParams& p = desc.params();
    const Field& f = desc.field();
    std::vector<Matrix> diag;
    for (int x = 0; x < p.s; ++x)
        diag.push_back(vandermonde_col(f, desc.lambda()[p.s * j + x], p.r));
    return blow_up(f, blkdiag(diag), p.half, p.half - 1, p.s);
}

Matrix closed_form_cross_group(const CodeDescriptor& desc, int i, int j) {
    const CodeParams& p = desc.params();
    const int a = i / 2, c = j / 2;
    const int shifted = (c < a) ? c : c - 1;
    Matrix kj = desc.kernel_matrix(c, j % 2, static_cast<std::size_t>(p.r));
    return blow_up(desc.field(), kj, p.half, shifted, p.s);
}

}  // namespace

IdentityReport verify_repair_identities(const CodeDescriptor& desc, const std::vector<int>& failed,
                                        uint64_t seed) {
    const CodeParams& p = desc.params();
    const Field& f = desc.field();
    FailedView fv = check_failed_set(p, failed);
    const int gs = p.s + fv.h - 1;
    const std::size_t glen = static_cast<std::size_t>(gs) * p.l_tilde;
    IdentityReport rep;
    auto add = [&](const std::string& name, bool pass, const std::string& details = "") {
        rep.checks.push_back({name, pass, details});
    };

    // Selector completeness: sum_g S^T_{a,g,h-1} S_{a,g,z} + Q_z = I.
    {
        bool ok = true;
        for (int a = 0; a < p.half && ok; ++a)
            for (int z = 0; z < fv.h && ok; ++z) {
                Matrix acc = q_matrix(f, p.s, p.half, fv.h, z);
                for (int g = 0; g < p.s; ++g) {
                    Matrix st = transpose(selection_matrix(p.s, p.half, fv.h, a, g, fv.h - 1));
                    acc = mat_add(f, acc, mat_mul(f, st, selection_matrix(p.s, p.half, fv.h, a, g, z)));
                }
                ok = acc == Matrix::identity(glen);
            }
        add("selector_completeness", ok);
    }

    // Selector annihilation: (S_{a,0,z} (x) I_r)(I (x) M) Q_z = 0 for any M.
    {
        std::mt19937_64 rng(seed ^ 0x51e1ec70ull);
        bool ok = true;
        Matrix m(static_cast<std::size_t>(p.r) * p.l_tilde, p.l_tilde);
        for (std::size_t t = 0; t < m.rows(); ++t)
            for (std::size_t u = 0; u < m.cols(); ++u) m(t, u) = rng() % f.order();
        for (int a = 0; a < p.half && ok; ++a)
            for (int z = 0; z < fv.h && ok; ++z) {
                Matrix sk = kron(f, selection_matrix(p.s, p.half, fv.h, a, 0, z),
                                 Matrix::identity(p.r));
                Matrix mid = kron(f, Matrix::identity(gs), m);
                Matrix prod = mat_mul(f, mat_mul(f, sk, mid), q_matrix(f, p.s, p.half, fv.h, z));
                ok = prod.is_zero();
            }
        add("selector_annihilation", ok);
    }

    for (int i : fv.failed) {
        const int a = i / 2, b = i % 2;
        SmallCodeMatrices sc = small_code_matrices(desc, fv.failed, i);
        const std::string tag = "[i=" + std::to_string(i) + "]";

        bool self_ok = true;
        for (int g = 0; g < p.s; ++g)
            self_ok = self_ok && sc.self_h[g] == closed_form_self(desc, i, g);
        add("closed_form_self" + tag, self_ok);

        bool same_ok = true, cross_ok = true;
        for (const auto& [j, hj] : sc.cross_h) {
            if (j / 2 == a)
                same_ok = same_ok && hj == closed_form_same_group(desc, j);
            else
                cross_ok = cross_ok && hj == closed_form_cross_group(desc, i, j);
        }
        add("closed_form_same_group" + tag, same_ok);
        add("closed_form_cross_group" + tag, cross_ok);

        // Folding the group parity equations hits exactly the small-code terms.
        {
            Matrix rep_k = kron(f, repair_matrix(desc, fv.failed, i), Matrix::identity(p.r));
            bool ok = true;
            for (int j = 0; j < p.n_int && ok; ++j) {
                Matrix lhs = mat_mul(f, rep_k, group_parity(desc, j, gs));
                Matrix rhs(lhs.rows(), lhs.cols());
                if (j == i) {
                    for (int g = 0; g < p.s; ++g)
                        rhs = mat_add(f, rhs, mat_mul(f, sc.self_h[g], sc.self_d[g]));
                } else {
                    rhs = mat_mul(f, sc.cross_h.at(j), sc.cross_d.at(j));
                }
                ok = lhs == rhs;
            }
            add("fold_decomposition" + tag, ok);
        }

        // Pairing identities on the kernel matrices.
        {
            const Matrix& ub = (b == 0) ? desc.pairing().u0 : desc.pairing().u1;
            const Matrix& rot_fb = (b == 0) ? desc.pairing().v0 : desc.pairing().u1;
            Matrix ub_k = kron(f, ub, Matrix::identity(p.r));
            auto lam = std::span<const uint32_t>(desc.lambda());
            Matrix lhs_ii = mat_mul(f, ub_k, desc.kernel_matrix(a, b, p.r));
            Matrix rhs_ii = hadamard(f, kron(f, rot_fb, Matrix::ones(p.r, 1)),
                                     kernel_map(f, lam.subspan(static_cast<std::size_t>(p.s) * i, p.s), p.r));
            add("kernel_fold_own" + tag, lhs_ii == rhs_ii);

            const int jp = 2 * a + (1 - b);
            Matrix lhs_ij = mat_mul(f, ub_k, desc.kernel_matrix(a, 1 - b, p.r));
            Matrix rhs_ij = hadamard(f, kron(f, Matrix::identity(p.s), Matrix::ones(p.r, 1)),
                                     kernel_map(f, lam.subspan(static_cast<std::size_t>(p.s) * jp, p.s), p.r));
            add("kernel_fold_partner" + tag, lhs_ij == rhs_ij);
        }

        // Step-2 stack invertibility (the reassembly matrix).
        {
            std::vector<Matrix> stack = sc.self_d;
            for (int j : fv.failed) {
                if (j == i) continue;
                stack.push_back(small_code_matrices(desc, fv.failed, j).cross_d.at(i));
            }
            add("step2_stack_invertible" + tag, is_invertible(f, vconcat(stack)));
        }

        // Sampled r-subsets of the small code concatenate to invertible blocks.
        {
            const int positions = p.n_int + p.s - 1;
            auto matrix_at = [&](int pos) -> const Matrix& {
                if (pos >= i && pos < i + p.s) return sc.self_h[pos - i];
                return sc.cross_h.at(pos < i ? pos : pos - p.s + 1);
            };
            std::mt19937_64 rng(seed ^ (0xACCE55ull + i));
            bool ok = true;
            for (int trial = 0; trial < 20 && ok; ++trial) {
                std::vector<int> all(positions);
                std::iota(all.begin(), all.end(), 0);
                for (int t = 0; t < p.r; ++t)
                    std::swap(all[t], all[t + rng() % (all.size() - t)]);
                std::vector<Matrix> blocks;
                for (int t = 0; t < p.r; ++t) blocks.push_back(matrix_at(all[t]));
                ok = is_invertible(f, hconcat(blocks));
            }
            add("small_code_mds" + tag, ok);
        }
    }
    return rep;
}

}  // namespace cmsr

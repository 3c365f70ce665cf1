#include "cmsr/pipeline.hpp"

#include <algorithm>
#include <map>

namespace cmsr {

std::vector<Shard> encode_file(const CodeDescriptor& desc, std::span<const uint8_t> data) {
    const CodeParams& p = desc.params();
    const std::size_t stripe_syms = static_cast<std::size_t>(p.k) * p.l;
    std::vector<uint32_t> message = bytes_to_symbols(data, p.m);
    const std::size_t stripes = std::max<std::size_t>(1, (message.size() + stripe_syms - 1) / stripe_syms);
    message.resize(stripes * stripe_syms, 0);

    std::vector<Shard> shards(p.n);
    for (int i = 0; i < p.n; ++i) {
        shards[i].header = {static_cast<uint16_t>(p.n),   static_cast<uint16_t>(p.k),
                            static_cast<uint16_t>(p.d),   static_cast<uint16_t>(p.rho),
                            static_cast<uint16_t>(p.m),   static_cast<uint16_t>(i),
                            static_cast<uint32_t>(stripes), data.size()};
        shards[i].symbols.assign(stripes * p.l, 0);
    }

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long st = 0; st < static_cast<long>(stripes); ++st) {
        auto msg = std::span<const uint32_t>(message).subspan(st * stripe_syms, stripe_syms);
        Codeword cw = encode_systematic(desc, msg);
        for (int i = 0; i < p.n; ++i)
            std::copy(cw.nodes[i].begin(), cw.nodes[i].end(),
                      shards[i].symbols.begin() + static_cast<std::size_t>(st) * p.l);
    }
    return shards;
}

std::vector<uint8_t> decode_file(const CodeDescriptor& desc, const std::vector<Shard>& available) {
    const CodeParams& p = desc.params();
    std::map<int, const Shard*> by_node;
    for (const Shard& s : available) {
        check_shard_matches(s, desc);
        by_node.emplace(s.header.node_index, &s);
    }
    if (static_cast<int>(by_node.size()) < p.k)
        fail(Errc::too_many_erasures, "need at least k distinct shards");
    const Shard* first = by_node.begin()->second;
    const uint32_t stripes = first->header.stripe_count;
    const uint64_t byte_len = first->header.original_byte_length;
    for (const auto& [node, s] : by_node)
        if (s->header.stripe_count != stripes || s->header.original_byte_length != byte_len)
            fail(Errc::bad_shard, "shards disagree on stripe count or length");

    std::set<int> erased;
    for (int i = 0; i < p.n; ++i)
        if (!by_node.count(i)) erased.insert(i);

    const std::size_t stripe_syms = static_cast<std::size_t>(p.k) * p.l;
    std::vector<uint32_t> message(static_cast<std::size_t>(stripes) * stripe_syms);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long st = 0; st < static_cast<long>(stripes); ++st) {
        std::vector<std::vector<uint32_t>> nodes(p.n);
        for (const auto& [node, s] : by_node)
            nodes[node].assign(s->symbols.begin() + static_cast<std::size_t>(st) * p.l,
                               s->symbols.begin() + static_cast<std::size_t>(st + 1) * p.l);
        Codeword cw = erased.empty() && !p.punctured()
                          ? Codeword{std::move(nodes)}
                          : decode_erasures(desc, nodes, erased);
        for (int i = 0; i < p.k; ++i)
            std::copy(cw.nodes[i].begin(), cw.nodes[i].end(),
                      message.begin() + static_cast<std::size_t>(st) * stripe_syms +
                          static_cast<std::size_t>(i) * p.l);
    }
    return symbols_to_bytes(message, p.m, byte_len);
}

ShardRepairResult repair_shards(const CodeDescriptor& desc, const std::vector<Shard>& available,
                                const std::vector<int>& failed, std::vector<int> helpers) {
    const CodeParams& p = desc.params();
    std::map<int, const Shard*> by_node;
    for (const Shard& s : available) {
        check_shard_matches(s, desc);
        by_node.emplace(s.header.node_index, &s);
    }
    std::vector<int> failed_sorted = failed;
    std::sort(failed_sorted.begin(), failed_sorted.end());
    if (helpers.empty()) {
        for (int i = 0; i < p.n && static_cast<int>(helpers.size()) < p.d; ++i)
            if (!std::binary_search(failed_sorted.begin(), failed_sorted.end(), i) && by_node.count(i))
                helpers.push_back(i);
    }

    uint32_t stripes = 0;
    uint64_t byte_len = 0;
    for (int j : helpers) {
        auto it = by_node.find(j);
        if (it == by_node.end())
            fail(Errc::missing_payload, "helper shard " + std::to_string(j) + " not supplied");
        stripes = it->second->header.stripe_count;
        byte_len = it->second->header.original_byte_length;
    }

    RepairPlan plan(desc, failed_sorted, helpers);

    ShardRepairResult out;
    out.helpers = plan.helpers();
    out.stripe_count = stripes;
    out.regenerated.resize(failed_sorted.size());
    for (std::size_t fi = 0; fi < failed_sorted.size(); ++fi) {
        out.regenerated[fi].header = {static_cast<uint16_t>(p.n),
                                      static_cast<uint16_t>(p.k),
                                      static_cast<uint16_t>(p.d),
                                      static_cast<uint16_t>(p.rho),
                                      static_cast<uint16_t>(p.m),
                                      static_cast<uint16_t>(failed_sorted[fi]),
                                      stripes,
                                      byte_len};
        out.regenerated[fi].symbols.assign(static_cast<std::size_t>(stripes) * p.l, 0);
    }

    std::vector<BandwidthLedger> ledgers(std::max<uint32_t>(stripes, 1));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long st = 0; st < static_cast<long>(stripes); ++st) {
        std::map<int, std::vector<uint32_t>> survivors;
        for (int j : plan.helpers()) {
            const Shard* s = by_node.at(j);
            survivors[j].assign(s->symbols.begin() + static_cast<std::size_t>(st) * p.l,
                                s->symbols.begin() + static_cast<std::size_t>(st + 1) * p.l);
        }
        RepairResult rr = plan.apply(survivors);
        ledgers[st] = rr.ledger;
        for (std::size_t fi = 0; fi < failed_sorted.size(); ++fi) {
            const auto& vec = rr.repaired.at(failed_sorted[fi]);
            std::copy(vec.begin(), vec.end(),
                      out.regenerated[fi].symbols.begin() + static_cast<std::size_t>(st) * p.l);
        }
    }
    if (stripes > 0) out.per_stripe = ledgers[0];
    return out;
}

}  // namespace cmsr

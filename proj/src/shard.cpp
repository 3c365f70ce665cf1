#include "cmsr/shard.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace cmsr {

namespace {

constexpr char kMagic[4] = {'C', 'M', 'S', 'R'};
constexpr uint8_t kVersion = 0x01;

std::array<uint32_t, 256> make_crc_table() {
    std::array<uint32_t, 256> t{};
    for (uint32_t i = 0; i < 256; ++i) {
        uint32_t c = i;
        for (int b = 0; b < 8; ++b) c = (c & 1) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
        t[i] = c;
    }
    return t;
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(v & 0xFF);
    out.push_back(v >> 8);
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back((v >> (8 * b)) & 0xFF);
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back((v >> (8 * b)) & 0xFF);
}

struct Reader {
    std::span<const uint8_t> d;
    std::size_t at = 0;

    void need(std::size_t n) {
        if (at + n > d.size()) fail(Errc::bad_shard, "shard truncated");
    }
    uint16_t u16() {
        need(2);
        uint16_t v = static_cast<uint16_t>(d[at] | (d[at + 1] << 8));
        at += 2;
        return v;
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int b = 0; b < 4; ++b) v |= static_cast<uint32_t>(d[at + b]) << (8 * b);
        at += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int b = 0; b < 8; ++b) v |= static_cast<uint64_t>(d[at + b]) << (8 * b);
        at += 8;
        return v;
    }
};

}  // namespace

uint32_t crc32_ieee(std::span<const uint8_t> data) {
    static const auto table = make_crc_table();
    uint32_t c = 0xFFFFFFFFu;
    for (uint8_t b : data) c = table[(c ^ b) & 0xFF] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

std::vector<uint32_t> bytes_to_symbols(std::span<const uint8_t> data, unsigned m) {
    std::vector<uint32_t> out;
    out.reserve((data.size() * 8 + m - 1) / m);
    uint64_t acc = 0;
    unsigned bits = 0;
    for (uint8_t b : data) {
        acc |= static_cast<uint64_t>(b) << bits;
        bits += 8;
        while (bits >= m) {
            out.push_back(static_cast<uint32_t>(acc & ((1u << m) - 1)));
            acc >>= m;
            bits -= m;
        }
    }
    if (bits) out.push_back(static_cast<uint32_t>(acc & ((1u << m) - 1)));
    return out;
}

std::vector<uint8_t> symbols_to_bytes(std::span<const uint32_t> symbols, unsigned m,
                                      std::size_t byte_len) {
    std::vector<uint8_t> out;
    out.reserve(byte_len);
    uint64_t acc = 0;
    unsigned bits = 0;
    for (uint32_t s : symbols) {
        acc |= static_cast<uint64_t>(s & ((1u << m) - 1)) << bits;
        bits += m;
        while (bits >= 8 && out.size() < byte_len) {
            out.push_back(static_cast<uint8_t>(acc & 0xFF));
            acc >>= 8;
            bits -= 8;
        }
        if (out.size() == byte_len) break;
    }
    while (out.size() < byte_len && bits) {
        out.push_back(static_cast<uint8_t>(acc & 0xFF));
        acc >>= 8;
        bits = bits >= 8 ? bits - 8 : 0;
    }
    if (out.size() != byte_len) fail(Errc::bad_shard, "not enough symbols for byte length");
    return out;
}

std::vector<uint8_t> serialize_shard(const Shard& shard) {
    const unsigned sym_bytes = (shard.header.m + 7) / 8;
    std::vector<uint8_t> out;
    out.reserve(29 + shard.symbols.size() * sym_bytes + 4);
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kVersion);
    put_u16(out, shard.header.n);
    put_u16(out, shard.header.k);
    put_u16(out, shard.header.d);
    put_u16(out, shard.header.rho);
    put_u16(out, shard.header.m);
    put_u16(out, shard.header.node_index);
    put_u32(out, shard.header.stripe_count);
    put_u64(out, shard.header.original_byte_length);
    const std::size_t payload_start = out.size();
    for (uint32_t s : shard.symbols)
        for (unsigned b = 0; b < sym_bytes; ++b) out.push_back((s >> (8 * b)) & 0xFF);
    const uint32_t crc = crc32_ieee(
        std::span<const uint8_t>(out.data() + payload_start, out.size() - payload_start));
    put_u32(out, crc);
    return out;
}

Shard parse_shard(std::span<const uint8_t> bytes) {
    Reader r{bytes};
    r.need(5);
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) fail(Errc::bad_shard, "bad magic");
    if (bytes[4] != kVersion) fail(Errc::bad_shard, "unsupported shard version");
    r.at = 5;
    Shard shard;
    shard.header.n = r.u16();
    shard.header.k = r.u16();
    shard.header.d = r.u16();
    shard.header.rho = r.u16();
    shard.header.m = r.u16();
    shard.header.node_index = r.u16();
    shard.header.stripe_count = r.u32();
    shard.header.original_byte_length = r.u64();
    if (shard.header.m == 0 || shard.header.m > 32) fail(Errc::bad_shard, "bad field degree");
    const unsigned sym_bytes = (shard.header.m + 7) / 8;
    if (bytes.size() < r.at + 4) fail(Errc::bad_shard, "shard truncated");
    const std::size_t payload_len = bytes.size() - r.at - 4;
    if (payload_len % sym_bytes) fail(Errc::bad_shard, "payload not a whole number of symbols");
    auto payload = bytes.subspan(r.at, payload_len);
    r.at += payload_len;
    const uint32_t stored_crc = r.u32();
    if (crc32_ieee(payload) != stored_crc) fail(Errc::bad_shard, "payload CRC mismatch");
    shard.symbols.reserve(payload_len / sym_bytes);
    for (std::size_t at = 0; at < payload_len; at += sym_bytes) {
        uint32_t v = 0;
        for (unsigned b = 0; b < sym_bytes; ++b) v |= static_cast<uint32_t>(payload[at + b]) << (8 * b);
        shard.symbols.push_back(v);
    }
    return shard;
}

void write_shard(const std::string& path, const Shard& shard) {
    auto bytes = serialize_shard(shard);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(Errc::io_error, "write failed for " + path);
}

Shard read_shard(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) fail(Errc::io_error, "cannot open " + path);
    const std::streamsize size = in.tellg();
    in.seekg(0);
    std::vector<uint8_t> bytes(static_cast<std::size_t>(size));
    in.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!in) fail(Errc::io_error, "read failed for " + path);
    return parse_shard(bytes);
}

void check_shard_matches(const Shard& shard, const CodeDescriptor& desc) {
    const CodeParams& p = desc.params();
    const auto& h = shard.header;
    if (h.n != p.n || h.k != p.k || h.d != p.d || h.rho != p.rho || h.m != p.m)
        fail(Errc::bad_shard, "shard header does not match the descriptor");
    if (h.node_index >= p.n) fail(Errc::bad_shard, "node index out of range");
    if (shard.symbols.size() != static_cast<std::size_t>(h.stripe_count) * p.l)
        fail(Errc::bad_shard, "payload size does not match stripe count");
    for (uint32_t s : shard.symbols)
        if (s >= desc.field().order()) fail(Errc::bad_shard, "symbol outside the field");
}

}  // namespace cmsr

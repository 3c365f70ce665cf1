// Command line front end: construct / verify / encode / decode / repair /
// bench over descriptor JSON files and binary shards. Reports go to stdout as
// JSON, diagnostics to stderr. Exit codes: 2 bad parameters, 1 verification
// failure, 3 encode I/O, 4 decode, 5 repair.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmsr/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cmsr;

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<uint8_t> read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) fail(Errc::io_error, "cannot open " + path);
    std::vector<uint8_t> data(static_cast<std::size_t>(in.tellg()));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!in) fail(Errc::io_error, "read failed for " + path);
    return data;
}

void write_binary(const std::string& path, std::span<const uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) fail(Errc::io_error, "write failed for " + path);
}

CodeDescriptor load_descriptor(const std::string& path) {
    return CodeDescriptor::from_json(read_text(path));
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::size_t at = 0;
    while (at < csv.size()) {
        std::size_t comma = csv.find(',', at);
        if (comma == std::string::npos) comma = csv.size();
        out.push_back(std::stoi(csv.substr(at, comma - at)));
        at = comma + 1;
    }
    return out;
}

json ledger_json(const BandwidthLedger& ledger) {
    json edges = json::array();
    for (const auto& [edge, symbols] : ledger.edges)
        edges.push_back({{"source", edge.first}, {"target", edge.second}, {"symbols", symbols}});
    return {{"edges", edges},
            {"step1_symbols", ledger.step1},
            {"step2_symbols", ledger.step2},
            {"total_symbols", ledger.total()}};
}

int cmd_construct(int n, int k, int d, const std::string& h_csv,
                  std::optional<unsigned> field_bits, const std::string& out_path) {
    std::set<int> hs;
    for (int h : parse_int_list(h_csv)) hs.insert(h);
    CodeParams p = derive_params(n, k, d, hs, field_bits);
    CodeDescriptor desc = CodeDescriptor::build(p);
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot open " + out_path + " for writing");
    out << desc.to_json();
    json rep = {{"n", p.n},         {"k", p.k},   {"d", p.d},          {"h_set", p.h_set},
                {"l_tilde", p.l_tilde}, {"l", p.l},   {"q", 1u << p.m},    {"rho", p.rho},
                {"m", p.m},         {"out", out_path}};
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& desc_path, const std::string& mds_mode, int mds_samples,
               const std::string& repair_mode, int repair_samples, uint64_t seed) {
    json checks = json::array();
    bool all_pass = true;
    auto add = [&](const std::string& name, bool pass, const json& details) {
        checks.push_back({{"name", name}, {"pass", pass}, {"details", details}});
        all_pass = all_pass && pass;
    };

    CodeDescriptor desc = [&] {
        try {
            return load_descriptor(desc_path);
        } catch (const Error& e) {
            json rep = {{"checks", json::array({{{"name", "descriptor_load"},
                                                 {"pass", false},
                                                 {"details", e.what()}}})},
                        {"all_pass", false}};
            std::cout << rep.dump(2) << "\n";
            std::exit(1);
        }
    }();
    const CodeParams& p = desc.params();
    add("descriptor_load", true, {{"n", p.n}, {"k", p.k}, {"d", p.d}});

    {
        MdsMode mode;
        mode.exhaustive = mds_mode == "exhaustive";
        mode.samples = mds_samples;
        mode.seed = seed;
        auto t0 = std::chrono::steady_clock::now();
        MdsReport rep = verify_mds(desc, mode);
        double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        json details = {{"subsets_checked", rep.subsets_checked},
                        {"failing_subsets", rep.failing_subsets},
                        {"elapsed_ms", ms}};
        add("mds", rep.pass(), details);
    }

    {
        std::vector<std::vector<int>> failure_sets;
        if (repair_mode == "exhaustive") {
            for (int h : p.h_set) {
                std::vector<int> pick(h);
                std::iota(pick.begin(), pick.end(), 0);
                while (true) {
                    failure_sets.push_back(pick);
                    int i = h - 1;
                    while (i >= 0 && pick[i] == p.n - h + i) --i;
                    if (i < 0) break;
                    ++pick[i];
                    for (int j = i + 1; j < h; ++j) pick[j] = pick[j - 1] + 1;
                }
            }
        } else {
            std::mt19937_64 rng(seed);
            for (int t = 0; t < repair_samples; ++t) {
                int h = p.h_set[rng() % p.h_set.size()];
                std::vector<int> all(p.n);
                std::iota(all.begin(), all.end(), 0);
                for (int i = 0; i < h; ++i) std::swap(all[i], all[i + rng() % (all.size() - i)]);
                std::vector<int> pick(all.begin(), all.begin() + h);
                std::sort(pick.begin(), pick.end());
                failure_sets.push_back(pick);
            }
        }

        std::mt19937_64 rng(seed + 1);
        auto t0 = std::chrono::steady_clock::now();
        bool repair_ok = true;
        json failures = json::array();
        for (const auto& failed : failure_sets) {
            IdentityReport idrep = verify_repair_identities(desc, failed, seed);
            bool ok = idrep.all_pass();
            // one random-codeword repair with the lowest-indexed survivors
            std::vector<int> helpers;
            for (int i = 0; i < p.n && static_cast<int>(helpers.size()) < p.d; ++i)
                if (std::find(failed.begin(), failed.end(), i) == failed.end()) helpers.push_back(i);
            std::vector<uint32_t> msg(static_cast<std::size_t>(p.k) * p.l);
            for (auto& v : msg) v = rng() % desc.field().order();
            Codeword cw = encode_systematic(desc, msg);
            std::map<int, std::vector<uint32_t>> survivors;
            for (int i = 0; i < p.n; ++i)
                if (std::find(failed.begin(), failed.end(), i) == failed.end())
                    survivors[i] = cw.nodes[i];
            auto res = cooperative_repair(desc, survivors, failed, helpers);
            for (int i : failed) ok = ok && res.repaired.at(i) == cw.nodes[i];
            ok = ok && res.ledger.total() ==
                           cut_set_bound(p, static_cast<int>(failed.size()));
            if (!ok) {
                repair_ok = false;
                failures.push_back(failed);
            }
        }
        double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        add("repair", repair_ok,
            {{"failure_sets_checked", failure_sets.size()},
             {"failing_sets", failures},
             {"elapsed_ms", ms}});
    }

    json rep = {{"checks", checks}, {"all_pass", all_pass}};
    std::cout << rep.dump(2) << "\n";
    return all_pass ? 0 : 1;
}

int cmd_encode(const std::string& desc_path, const std::string& input, const std::string& outdir) {
    CodeDescriptor desc = load_descriptor(desc_path);
    auto data = read_binary(input);
    auto shards = encode_file(desc, data);
    fs::create_directories(outdir);
    json files = json::array();
    for (const auto& s : shards) {
        std::string path =
            (fs::path(outdir) / ("node_" + std::to_string(s.header.node_index) + ".shard")).string();
        write_shard(path, s);
        files.push_back(path);
    }
    json rep = {{"input_bytes", data.size()},
                {"stripes", shards[0].header.stripe_count},
                {"shards", files}};
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_decode(const std::string& desc_path, const std::vector<std::string>& shard_paths,
               const std::string& out_path) {
    CodeDescriptor desc = load_descriptor(desc_path);
    std::vector<Shard> shards;
    for (const auto& path : shard_paths) shards.push_back(read_shard(path));
    auto data = decode_file(desc, shards);
    write_binary(out_path, data);
    json rep = {{"output", out_path}, {"bytes", data.size()}, {"shards_used", shard_paths.size()}};
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_repair(const std::string& desc_path, const std::vector<std::string>& shard_paths,
               const std::string& failed_csv, const std::string& helpers_csv,
               std::string outdir) {
    CodeDescriptor desc = load_descriptor(desc_path);
    std::vector<Shard> shards;
    for (const auto& path : shard_paths) shards.push_back(read_shard(path));
    std::vector<int> failed = parse_int_list(failed_csv);
    std::vector<int> helpers;
    if (!helpers_csv.empty()) helpers = parse_int_list(helpers_csv);
    auto res = repair_shards(desc, shards, failed, helpers);
    if (outdir.empty())
        outdir = shard_paths.empty() ? "." : fs::path(shard_paths[0]).parent_path().string();
    if (outdir.empty()) outdir = ".";
    fs::create_directories(outdir);
    json files = json::array();
    for (const auto& s : res.regenerated) {
        std::string path =
            (fs::path(outdir) / ("node_" + std::to_string(s.header.node_index) + ".shard")).string();
        write_shard(path, s);
        files.push_back(path);
    }
    const uint64_t bound = cut_set_bound(desc.params(), static_cast<int>(failed.size()));
    json rep = {{"regenerated", files},
                {"helpers", res.helpers},
                {"stripes", res.stripe_count},
                {"ledger_per_stripe", ledger_json(res.per_stripe)},
                {"cut_set_bound_per_stripe", bound},
                {"meets_cut_set_bound", res.per_stripe.total() == bound}};
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_bench(const std::string& desc_path, int stripes, uint64_t seed) {
    CodeDescriptor desc = load_descriptor(desc_path);
    const CodeParams& p = desc.params();
    std::mt19937_64 rng(seed);
    const std::size_t stripe_syms = static_cast<std::size_t>(p.k) * p.l;
    const std::size_t total_bytes = stripe_syms * stripes;  // one byte per symbol input
    std::vector<uint8_t> data(total_bytes);
    for (auto& b : data) b = static_cast<uint8_t>(rng());

    auto mbps = [](std::size_t bytes, double sec) {
        return sec > 0 ? (static_cast<double>(bytes) / 1e6) / sec : 0.0;
    };

    auto t0 = std::chrono::steady_clock::now();
    auto shards = encode_file(desc, data);
    double enc_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<Shard> k_shards(shards.begin(), shards.begin() + p.k);
    t0 = std::chrono::steady_clock::now();
    auto decoded = decode_file(desc, k_shards);
    double dec_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (decoded != data) fail(Errc::bad_shard, "bench round trip mismatch");

    std::vector<int> failed;
    const int h = p.h_set.front();
    for (int i = 0; i < h; ++i) failed.push_back(i);
    std::vector<Shard> surviving(shards.begin() + h, shards.end());
    t0 = std::chrono::steady_clock::now();
    auto rep = repair_shards(desc, surviving, failed);
    double rep_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (std::size_t fi = 0; fi < failed.size(); ++fi)
        if (rep.regenerated[fi].symbols != shards[failed[fi]].symbols)
            fail(Errc::bad_shard, "bench repair mismatch");

    json out = {{"stripes", stripes},
                {"input_bytes", total_bytes},
                {"encode_mbps", mbps(total_bytes, enc_s)},
                {"decode_mbps", mbps(total_bytes, dec_s)},
                {"repair_mbps", mbps(total_bytes, rep_s)},
                {"repair_symbols_per_stripe", rep.per_stripe.total()},
                {"cut_set_bound_per_stripe", cut_set_bound(p, h)},
                {"meets_cut_set_bound", rep.per_stripe.total() == cut_set_bound(p, h)},
                {"seed", seed}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cooperative MSR erasure coding toolkit"};
    app.require_subcommand(1);

    auto* construct = app.add_subcommand("construct", "derive parameters and write a descriptor");
    int n = 0, k = 0, d = 0;
    std::string h_csv, out_path = "descriptor.json";
    std::optional<unsigned> field_bits;
    unsigned field_bits_raw = 0;
    construct->add_option("--n", n, "code length")->required();
    construct->add_option("--k", k, "dimension")->required();
    construct->add_option("--d", d, "repair degree")->required();
    construct->add_option("--h", h_csv, "failure counts, comma separated")->required();
    auto* fb = construct->add_option("--field-bits", field_bits_raw, "field degree override");
    construct->add_option("--out", out_path, "descriptor output path");

    auto* verify = app.add_subcommand("verify", "run the verification suite");
    std::string desc_path, mds_mode = "exhaustive", repair_mode = "exhaustive";
    int mds_samples = 0, repair_samples = 0;
    uint64_t seed = 0;
    verify->add_option("descriptor", desc_path, "descriptor JSON")->required();
    verify->add_option("--mds", mds_mode, "exhaustive|sample")->check(CLI::IsMember({"exhaustive", "sample"}));
    verify->add_option("--mds-samples", mds_samples, "sample count for --mds sample");
    verify->add_option("--repair", repair_mode, "exhaustive|sample")->check(CLI::IsMember({"exhaustive", "sample"}));
    verify->add_option("--repair-samples", repair_samples, "sample count for --repair sample");
    verify->add_option("--seed", seed, "PRNG seed for sampling");

    auto* encode = app.add_subcommand("encode", "stripe a file into shards");
    std::string input, outdir = ".";
    encode->add_option("descriptor", desc_path, "descriptor JSON")->required();
    encode->add_option("input", input, "input file")->required();
    encode->add_option("outdir", outdir, "output directory")->required();

    auto* decode = app.add_subcommand("decode", "rebuild a file from shards");
    std::vector<std::string> shard_paths;
    std::string out_file;
    decode->add_option("descriptor", desc_path, "descriptor JSON")->required();
    decode->add_option("shards", shard_paths, "shard files")->required()->expected(-1);
    decode->add_option("--out", out_file, "output file")->required();

    auto* repair = app.add_subcommand("repair", "regenerate failed shards");
    std::string failed_csv, helpers_csv, repair_outdir;
    repair->add_option("descriptor", desc_path, "descriptor JSON")->required();
    repair->add_option("shards", shard_paths, "surviving shard files")->required()->expected(-1);
    repair->add_option("--failed", failed_csv, "failed node indices, comma separated")->required();
    repair->add_option("--helpers", helpers_csv, "helper node indices (default: lowest survivors)");
    repair->add_option("--outdir", repair_outdir, "directory for regenerated shards");

    auto* bench = app.add_subcommand("bench", "throughput over synthetic stripes");
    int stripes = 1000;
    bench->add_option("descriptor", desc_path, "descriptor JSON")->required();
    bench->add_option("--stripes", stripes, "stripe count");
    bench->add_option("--seed", seed, "PRNG seed");

    CLI11_PARSE(app, argc, argv);
    if (*fb) field_bits = field_bits_raw;

    try {
        if (*construct) return cmd_construct(n, k, d, h_csv, field_bits, out_path);
        if (*verify)
            return cmd_verify(desc_path, mds_mode, mds_samples, repair_mode, repair_samples, seed);
        if (*encode) return cmd_encode(desc_path, input, outdir);
        if (*decode) return cmd_decode(desc_path, shard_paths, out_file);
        if (*repair) return cmd_repair(desc_path, shard_paths, failed_csv, helpers_csv, repair_outdir);
        if (*bench) return cmd_bench(desc_path, stripes, seed);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        if (*construct) return 2;
        if (*verify) return 1;
        if (*encode) return 3;
        if (*decode) return 4;
        if (*repair) return 5;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

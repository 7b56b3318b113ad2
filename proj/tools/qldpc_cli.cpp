// SPDX-License-Identifier: Apache-2.0
//
// qldpc: decoding toolkit CLI. Subcommands: validate-code, partition, decode,
// simulate, compare-random. Results go to stdout or --out; a run manifest
// (resolved config, seed, timestamps, output digests) goes to stderr and,
// with --out, to <out>.manifest.json.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qldpc/code.hpp"
#include "qldpc/sim.hpp"

using nlohmann::json;
using namespace qldpc;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string iso_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string default_preset_file() {
    if (const char* dir = std::getenv("QLDPC_PRESET_DIR"))
        return std::string(dir) + "/codes.json";
    return "data/codes.json";
}

// Whitespace-separated 0/1 bits.
BinaryVector read_bits_file(const std::string& path, std::size_t expected_length,
                            const char* what) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument(std::string("cannot open ") + what + " file: " + path);
    std::vector<std::uint8_t> bits;
    std::string tok;
    while (in >> tok) {
        if (tok == "0")
            bits.push_back(0);
        else if (tok == "1")
            bits.push_back(1);
        else
            throw std::invalid_argument(std::string(what) + " file " + path +
                                        ": entries must be 0 or 1, got '" + tok + "'");
    }
    if (bits.size() != expected_length)
        throw std::invalid_argument(std::string(what) + " file " + path + ": expected " +
                                    std::to_string(expected_length) + " bits, got " +
                                    std::to_string(bits.size()));
    return BinaryVector::from_bits(bits);
}

struct OutputSink {
    std::optional<std::string> path; // stdout when absent
    std::string start_time = iso_utc_now();
    json config;

    void write(const std::string& content, const json& extra_manifest = {}) const {
        json manifest;
        manifest["tool"] = "qldpc";
        manifest["version"] = kVersion;
        manifest["config"] = config;
        manifest["started_at"] = start_time;
        manifest["finished_at"] = iso_utc_now();
        if (!extra_manifest.empty())
            manifest.update(extra_manifest);
        if (path) {
            std::ofstream out(*path);
            if (!out)
                throw std::runtime_error("cannot open output file: " + *path);
            out << content;
            out.close();
            manifest["outputs"] = json::array(
                {{{"path", *path}, {"fnv1a64", hex64(fnv1a64(content))}}});
            std::ofstream mf(*path + ".manifest.json");
            if (mf)
                mf << manifest.dump(2) << '\n';
        } else {
            std::cout << content;
            manifest["outputs"] =
                json::array({{{"path", "-"}, {"fnv1a64", hex64(fnv1a64(content))}}});
        }
        std::cerr << manifest.dump() << '\n';
    }
};

Schedule parse_schedule(const std::string& s) {
    if (s == "flooding")
        return Schedule::flooding;
    if (s == "serial")
        return Schedule::serial;
    throw std::invalid_argument("schedule must be 'flooding' or 'serial', got '" + s + "'");
}

DecoderKind parse_decoder(const std::string& s) {
    if (s == "bp")
        return DecoderKind::bp_flooding;
    if (s == "bp-serial")
        return DecoderKind::bp_serial;
    if (s == "mbbp")
        return DecoderKind::mbbp_ld;
    if (s == "mbbp-random")
        return DecoderKind::mbbp_random;
    throw std::invalid_argument("decoder must be one of bp, bp-serial, mbbp, mbbp-random");
}

const char* decoder_name(DecoderKind k) {
    switch (k) {
    case DecoderKind::bp_flooding:
        return "bp";
    case DecoderKind::bp_serial:
        return "bp-serial";
    case DecoderKind::mbbp_ld:
        return "mbbp";
    case DecoderKind::mbbp_random:
        return "mbbp-random";
    }
    return "?";
}

// Shared flags for subcommands that load a code.
struct CodeArgs {
    std::string preset_file = default_preset_file();
    std::string preset;
    bool swap_xz = false;

    void attach(CLI::App* cmd, bool required = true) {
        cmd->add_option("--presets", preset_file, "Preset file path")
            ->capture_default_str();
        auto* opt = cmd->add_option("--preset", preset, "Code preset name");
        if (required)
            opt->required();
        cmd->add_flag("--swap-xz", swap_xz,
                      "Decode with hx as the syndrome matrix instead of hz");
    }

    CssCode load() const { return load_preset(preset_file, preset); }

    json to_json() const {
        return {{"presets", preset_file}, {"preset", preset}, {"swap_xz", swap_xz}};
    }
};

int cmd_validate(const CodeArgs& code_args) {
    auto code = code_args.load();
    auto rep = validate_css(code);
    // load() refuses invalid codes already, but report anyway.
    if (!rep.valid()) {
        std::printf("invalid, %zu orthogonality violations\n", rep.violations.size());
        return 2;
    }
    std::printf("valid, n=%zu k=%zu\n", code.n, code.k);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decoding toolkit for quantum LDPC CSS codes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Read defaults from a TOML/INI config file");

    // validate-code
    auto* validate_cmd = app.add_subcommand("validate-code", "Check a preset's CSS conditions");
    CodeArgs validate_code_args;
    validate_code_args.attach(validate_cmd);

    // partition
    auto* part_cmd =
        app.add_subcommand("partition", "Build subtree partitions of the decoding matrix");
    CodeArgs part_code_args;
    part_code_args.attach(part_cmd, false);
    std::string part_matrix_path;
    part_cmd->add_option("--matrix", part_matrix_path,
                         "alist matrix path (alternative to --preset)");
    std::uint64_t part_seed = 1;
    std::size_t part_count = 1;
    std::string part_out, part_dot;
    part_cmd->add_option("--seed", part_seed, "Permutation seed")->capture_default_str();
    part_cmd->add_option("--count", part_count, "Number of partitions")->capture_default_str();
    part_cmd->add_option("--out", part_out, "Output JSON path (default stdout)");
    part_cmd->add_option("--dot", part_dot, "Write the Tanner graph in DOT format here");

    // decode
    auto* dec_cmd = app.add_subcommand("decode", "Decode one error or syndrome with MBBP-LD");
    CodeArgs dec_code_args;
    dec_code_args.attach(dec_cmd);
    std::string dec_error_path, dec_syndrome_path, dec_out, dec_schedule = "serial";
    std::uint64_t dec_seed = 1;
    std::size_t dec_partitions = 20, dec_pool = 1, dec_imax = 100;
    double dec_alpha = 0.875, dec_p = 0.05;
    bool dec_random_bases = false;
    dec_cmd->add_option("--error", dec_error_path, "Error bits file (computes the syndrome)");
    dec_cmd->add_option("--syndrome", dec_syndrome_path, "Syndrome bits file");
    dec_cmd->add_option("--seed", dec_seed, "Partition seed")->capture_default_str();
    dec_cmd->add_option("--partitions", dec_partitions, "Seeded partition ensemble size")
        ->capture_default_str();
    dec_cmd->add_option("--pool", dec_pool,
                        "Pool bases from this many ensemble partitions (1 = plain MBBP-LD)")
        ->capture_default_str();
    dec_cmd->add_option("--alpha", dec_alpha, "Min-sum scaling factor")->capture_default_str();
    dec_cmd->add_option("--imax", dec_imax, "Max BP iterations")->capture_default_str();
    dec_cmd->add_option("--p", dec_p, "Channel error probability for the priors")
        ->capture_default_str();
    dec_cmd->add_option("--schedule", dec_schedule, "BP schedule: flooding or serial")
        ->capture_default_str();
    dec_cmd->add_flag("--random-bases", dec_random_bases,
                      "Use matched random bases instead of subtrees");
    dec_cmd->add_option("--out", dec_out, "Output JSON path (default stdout)");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo logical-error-rate sweep");
    CodeArgs sim_code_args;
    sim_code_args.attach(sim_cmd);
    std::vector<double> sim_p;
    std::string sim_decoder = "mbbp", sim_schedule, sim_out;
    SimulationConfig sim_cfg;
    sim_cmd->add_option("--p", sim_p, "Physical error rates")->required()->expected(-1);
    sim_cmd->add_option("--decoder", sim_decoder, "bp | bp-serial | mbbp | mbbp-random")
        ->capture_default_str();
    sim_cmd->add_option("--seed", sim_cfg.seed, "Master seed")->capture_default_str();
    sim_cmd->add_option("--failures", sim_cfg.target_failures, "Stop after this many failures")
        ->capture_default_str();
    sim_cmd->add_option("--max-trials", sim_cfg.max_trials, "Trial budget per point")
        ->capture_default_str();
    sim_cmd->add_option("--partitions", sim_cfg.partitions, "Seeded partition ensemble size")
        ->capture_default_str();
    sim_cmd->add_option("--pool", sim_cfg.pooled_partitions,
                        "Pool bases from this many ensemble partitions (1 = plain MBBP-LD)")
        ->capture_default_str();
    double sim_alpha = 0.875;
    std::size_t sim_imax = 100;
    sim_cmd->add_option("--alpha", sim_alpha, "Min-sum scaling factor")->capture_default_str();
    sim_cmd->add_option("--imax", sim_imax, "Max BP iterations")->capture_default_str();
    sim_cmd->add_option("--schedule", sim_schedule,
                        "Override the decoder's default BP schedule");
    sim_cmd->add_option("--threads", sim_cfg.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    bool sim_count_nonconv = false;
    sim_cmd->add_flag("--count-nonconvergence", sim_count_nonconv,
                      "Stop on non-convergences instead of logical failures");
    sim_cmd->add_option("--out", sim_out, "Output CSV path (default stdout)");

    // compare-random
    auto* cmp_cmd = app.add_subcommand(
        "compare-random", "Subtree vs matched-random partitions, mean/best LER per mode");
    CodeArgs cmp_code_args;
    cmp_code_args.attach(cmp_cmd);
    std::vector<double> cmp_p;
    SimulationConfig cmp_cfg;
    std::size_t cmp_pooled = 600;
    std::string cmp_out;
    double cmp_alpha = 0.875;
    std::size_t cmp_imax = 100;
    cmp_cmd->add_option("--p", cmp_p, "Physical error rates")->required()->expected(-1);
    cmp_cmd->add_option("--seed", cmp_cfg.seed, "Master seed")->capture_default_str();
    cmp_cmd->add_option("--partitions", cmp_cfg.partitions, "Partitions per mode")
        ->capture_default_str();
    cmp_cmd->add_option("--pooled-failures", cmp_pooled,
                        "Pooled failure target per mode per point")
        ->capture_default_str();
    cmp_cmd->add_option("--alpha", cmp_alpha, "Min-sum scaling factor")->capture_default_str();
    cmp_cmd->add_option("--imax", cmp_imax, "Max BP iterations")->capture_default_str();
    cmp_cmd->add_option("--max-trials", cmp_cfg.max_trials, "Trial budget per decoder per point")
        ->capture_default_str();
    cmp_cmd->add_option("--threads", cmp_cfg.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    cmp_cmd->add_option("--out", cmp_out, "Output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help / --version
        app.exit(e);
        return 1;
    }

    try {
        if (validate_cmd->parsed())
            return cmd_validate(validate_code_args);

        if (part_cmd->parsed()) {
            SparseBinaryMatrix h;
            json cfg = {{"seed", part_seed}, {"count", part_count}};
            if (!part_matrix_path.empty()) {
                h = read_alist_file(part_matrix_path);
                cfg["matrix"] = part_matrix_path;
            } else if (!part_code_args.preset.empty()) {
                auto code = part_code_args.load();
                h = part_code_args.swap_xz ? code.hx : code.hz;
                cfg.update(part_code_args.to_json());
            } else {
                throw std::invalid_argument("partition: give either --preset or --matrix");
            }
            auto g = TannerGraph::from_matrix(h);
            if (!part_dot.empty()) {
                std::ofstream dot(part_dot);
                if (!dot)
                    throw std::runtime_error("cannot open dot output: " + part_dot);
                g.write_dot(dot);
            }
            json records = json::array();
            for (std::size_t i = 0; i < part_count; ++i) {
                auto pi = harness_permutation(g.num_checks(), part_seed, i);
                auto part = build_partition(g, pi);
                auto bound = verify_lemma_bound(g, part);
                json rec;
                rec["permutation"] = pi;
                rec["check_sets"] = part.check_sets;
                json sizes = json::array();
                for (const auto& mem : part.members)
                    sizes.push_back(mem.size());
                rec["subtree_sizes"] = sizes;
                rec["num_subtrees"] = part.num_subtrees;
                rec["lemma_bound"] =
                    bound.applicable ? json(bound.bound) : json(nullptr);
                rec["max_size"] = bound.max_subtree_size;
                if (bound.applicable)
                    rec["lemma_pass"] = bound.pass;
                records.push_back(std::move(rec));
            }
            OutputSink sink;
            sink.config = cfg;
            if (!part_out.empty())
                sink.path = part_out;
            sink.write(json(records).dump(2) + "\n");
            return 0;
        }

        if (dec_cmd->parsed()) {
            auto code = dec_code_args.load();
            const auto& h_dec = dec_code_args.swap_xz ? code.hx : code.hz;
            BinaryVector syndrome;
            if (!dec_error_path.empty()) {
                auto error = read_bits_file(dec_error_path, code.n, "error");
                syndrome = mat_vec_mod2(h_dec, error);
            } else if (!dec_syndrome_path.empty()) {
                syndrome = read_bits_file(dec_syndrome_path, h_dec.num_rows(), "syndrome");
            } else {
                throw std::invalid_argument("decode: give either --error or --syndrome");
            }

            BpConfig bp;
            bp.max_iterations = dec_imax;
            bp.alpha = dec_alpha;
            bp.channel_p = dec_p;
            bp.schedule = parse_schedule(dec_schedule);
            if (dec_pool < 1 || dec_pool > dec_partitions)
                throw std::invalid_argument("decode: --pool must be in [1, --partitions]");
            auto kind = dec_random_bases ? DecoderKind::mbbp_random : DecoderKind::mbbp_ld;
            auto bases = make_harness_bases(h_dec, kind, dec_pool, dec_seed);
            MbbpDecoder decoder(h_dec, std::move(bases), bp);
            auto out = decoder.decode(syndrome);

            json result;
            result["estimate_support"] = out.estimate.support();
            result["any_converged"] = out.any_converged;
            result["list_size"] = out.list_size;
            result["k_max"] = out.k_max;
            result["total_iterations"] = out.total_iterations;
            json instances = json::array();
            for (const auto& inst : out.per_instance)
                instances.push_back({{"converged", inst.converged},
                                     {"iterations", inst.iterations_used},
                                     {"estimate_support", inst.estimate.support()}});
            result["per_instance"] = instances;

            OutputSink sink;
            sink.config = dec_code_args.to_json();
            sink.config.update({{"seed", dec_seed},
                                {"partitions", dec_partitions},
                                {"pool", dec_pool},
                                {"alpha", dec_alpha},
                                {"imax", dec_imax},
                                {"p", dec_p},
                                {"schedule", dec_schedule},
                                {"random_bases", dec_random_bases}});
            if (!dec_out.empty())
                sink.path = dec_out;
            sink.write(result.dump(2) + "\n");
            return 0;
        }

        if (sim_cmd->parsed()) {
            auto code = sim_code_args.load();
            sim_cfg.p_values = sim_p;
            sim_cfg.decoder = parse_decoder(sim_decoder);
            sim_cfg.swap_xz = sim_code_args.swap_xz;
            sim_cfg.bp.alpha = sim_alpha;
            sim_cfg.bp.max_iterations = sim_imax;
            sim_cfg.bp.channel_p = sim_p.front();
            if (!sim_schedule.empty())
                sim_cfg.bp.schedule = parse_schedule(sim_schedule);
            sim_cfg.failure_rule = sim_count_nonconv ? FailureRule::nonconvergence
                                                     : FailureRule::logical;
            sim_cfg.validate();

            OutputSink sink;
            sink.config = sim_code_args.to_json();
            sink.config.update({{"p_values", sim_p},
                                {"decoder", decoder_name(sim_cfg.decoder)},
                                {"seed", sim_cfg.seed},
                                {"target_failures", sim_cfg.target_failures},
                                {"max_trials", sim_cfg.max_trials},
                                {"partitions", sim_cfg.partitions},
                                {"pool", sim_cfg.pooled_partitions},
                                {"alpha", sim_alpha},
                                {"imax", sim_imax},
                                {"schedule", sim_schedule.empty() ? "(decoder default)"
                                                                  : sim_schedule},
                                {"threads", sim_cfg.threads},
                                {"failure_rule", sim_count_nonconv ? "nonconvergence"
                                                                   : "logical"},
                                {"n", code.n},
                                {"k", code.k}});
            if (!sim_out.empty())
                sink.path = sim_out;
            auto result = run_sweep(code, sim_cfg);
            // JSON sidecar with the full config for provenance.
            json extra;
            extra["points"] = json::array();
            for (const auto& r : result.points)
                extra["points"].push_back({{"p", r.p},
                                           {"trials", r.trials},
                                           {"failures", r.failures},
                                           {"instances", r.instances}});
            sink.write(result_to_csv(result), extra);
            return 0;
        }

        if (cmp_cmd->parsed()) {
            auto code = cmp_code_args.load();
            cmp_cfg.p_values = cmp_p;
            cmp_cfg.decoder = DecoderKind::mbbp_ld;
            cmp_cfg.swap_xz = cmp_code_args.swap_xz;
            cmp_cfg.bp.alpha = cmp_alpha;
            cmp_cfg.bp.max_iterations = cmp_imax;
            cmp_cfg.bp.channel_p = cmp_p.front();
            cmp_cfg.validate();

            OutputSink sink;
            sink.config = cmp_code_args.to_json();
            sink.config.update({{"p_values", cmp_p},
                                {"seed", cmp_cfg.seed},
                                {"partitions", cmp_cfg.partitions},
                                {"pooled_failures", cmp_pooled},
                                {"alpha", cmp_alpha},
                                {"imax", cmp_imax},
                                {"max_trials", cmp_cfg.max_trials},
                                {"threads", cmp_cfg.threads}});
            if (!cmp_out.empty())
                sink.path = cmp_out;
            sink.write(compare_to_csv(compare_tree_vs_random(code, cmp_cfg, cmp_pooled)));
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

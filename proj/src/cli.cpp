// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/beacon.hpp>
#include <digestlab/cli.hpp>
#include <digestlab/collision.hpp>
#include <digestlab/mitigation.hpp>
#include <digestlab/scenarios.hpp>
#include <digestlab/version.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace digestlab::cli
{
namespace
{
using nlohmann::ordered_json;

constexpr const char* scope_warning =
    "note: digestlab attacks truncated digests at desk scale (t <= 48); "
    "full 160- and 256-bit digests are far out of reach of this tool.\n";

/// A failed check that maps to a specific exit code.
struct Failure
{
    int code;
    std::string message;
};

struct Global
{
    uint64_t seed = 42;
    bool json = false;
    std::string out_path;
    std::optional<std::string> timestamp;
};

struct Output
{
    std::string text;
    int code = exit_ok;
};

std::string dump(const ordered_json& j)
{
    return j.dump(2) + "\n";
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Failure{exit_usage, "cannot open " + path};
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& bytes)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !f.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
        throw Failure{exit_failure, "cannot write " + path};
}

uint64_t default_budget(int t, double multiplier)
{
    return static_cast<uint64_t>(std::ceil(multiplier * collision::expected_work(t)));
}

std::string kv_lines(const std::vector<std::pair<std::string, std::string>>& rows)
{
    size_t width = 0;
    for (const auto& [k, v] : rows)
        width = std::max(width, k.size());
    std::string out;
    for (const auto& [k, v] : rows)
        out += k + std::string(width - k.size() + 2, ' ') + v + "\n";
    return out;
}

std::string fixed(double v, int digits = 4)
{
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << v;
    return s.str();
}

// ---- hash ------------------------------------------------------------------

struct HashArgs
{
    std::optional<std::string> input;
    std::optional<std::string> infile;
    std::optional<int> truncate;
};

Output cmd_hash(const HashArgs& a, const Global& g)
{
    if (a.input.has_value() == a.infile.has_value())
        throw Failure{exit_usage, "give exactly one of --input and --infile"};
    const Bytes message = a.input ? from_hex(*a.input) : to_bytes(read_file(*a.infile));

    const Digest256 full = keccak256(message);
    std::string digest = full.to_hex();
    if (a.truncate)
        digest = truncate(full, DigestSpec(*a.truncate).truncation_bits()).to_hex();

    if (!g.json)
        return {digest + "\n"};
    ordered_json j;
    j["schema"] = "digestlab.hash.v1";
    j["algorithm"] = "keccak256";
    j["input_bytes"] = message.size();
    j["truncation_bits"] = a.truncate ? ordered_json(*a.truncate) : ordered_json(nullptr);
    j["digest"] = digest;
    return {dump(j)};
}

// ---- collide ---------------------------------------------------------------

struct CollideArgs
{
    int bits = 24;
    std::string searcher = "rho";
    std::optional<int> workers;
    std::optional<int> distinguished_bits;
    std::optional<uint64_t> budget;
    bool progress = false;
};

Output cmd_collide(const CollideArgs& a, const Global& g, std::ostream& err)
{
    const DigestSpec spec(a.bits);
    if (a.searcher != "parallel" && (a.workers || a.distinguished_bits))
        throw Failure{exit_usage, "--workers and --distinguished-bits need --searcher parallel"};
    const collision::AttackBudget budget(a.budget.value_or(default_budget(a.bits, 64)));
    const auto encoder = collision::MessageEncoder::counter("digestlab", g.seed);

    collision::SearchHooks hooks;
    if (a.progress)
        hooks.progress = [&err](const collision::SearchProgress& p) {
            err << "progress: " << p.evaluations << " evaluations, " << p.trails_stored
                << " trails\n";
        };

    collision::Outcome<collision::CollisionPair> outcome;
    if (a.searcher == "brute")
        outcome = collision::find_collision_brute(encoder, spec, budget, hooks);
    else if (a.searcher == "rho")
        outcome = collision::find_collision_rho(encoder, spec, g.seed, budget, hooks);
    else
    {
        collision::ParallelOptions options;
        options.workers = a.workers.value_or(1);
        options.distinguished_bits = a.distinguished_bits;
        outcome = collision::find_collision_parallel(encoder, spec, options, g.seed, budget, hooks);
    }

    ordered_json j;
    j["schema"] = "digestlab.collision.v1";
    j["searcher"] = a.searcher;
    j["truncation_bits"] = a.bits;
    j["seed"] = g.seed;
    j["budget"] = budget.max_evaluations();
    if (const auto* ex = std::get_if<collision::Exhausted>(&outcome))
    {
        j["status"] = "exhausted";
        j["evaluations_used"] = ex->evaluations_used;
        const std::string text = "exhausted after " + std::to_string(ex->evaluations_used) +
                                 " evaluations (budget " +
                                 std::to_string(budget.max_evaluations()) + ")\n";
        return {g.json ? dump(j) : text, exit_exhausted};
    }
    const auto& pair = std::get<collision::CollisionPair>(outcome);
    if (!collision::verify_pair(pair, spec))
        throw Failure{exit_failure, "search returned an invalid pair"};
    j["status"] = "found";
    j["m1"] = to_hex(pair.m1);
    j["m2"] = to_hex(pair.m2);
    j["digest"] = pair.digest_value.to_hex();
    j["evaluations_used"] = pair.evaluations_used;
    j["expected_work"] = collision::expected_work(a.bits);
    if (g.json)
        return {dump(j)};
    return {kv_lines({{"searcher", a.searcher}, {"bits", std::to_string(a.bits)},
        {"m1", to_hex(pair.m1)}, {"m2", to_hex(pair.m2)}, {"digest", pair.digest_value.to_hex()},
        {"evaluations", std::to_string(pair.evaluations_used)},
        {"expected", fixed(collision::expected_work(a.bits), 1)}})};
}

// ---- forge-address -----------------------------------------------------------

struct ForgeArgs
{
    int bits = 24;
    std::string creator = "0x00000000000000000000000000000000000000aa";
    uint64_t nonce = 0;
    std::optional<std::string> benign_prefix, benign_suffix, nefarious_prefix, nefarious_suffix;
    int field_width = 8;
    std::string vary = "field";
    std::optional<uint64_t> budget;
    int workers = 1;
};

Output cmd_forge(const ForgeArgs& a, const Global& g)
{
    const DigestSpec spec(a.bits);
    auto benign = scenarios::default_template(scenarios::TemplateLabel::benign);
    auto nefarious = scenarios::default_template(scenarios::TemplateLabel::nefarious);
    if (a.benign_prefix)
        benign.code_prefix = from_hex(*a.benign_prefix);
    if (a.benign_suffix)
        benign.code_suffix = from_hex(*a.benign_suffix);
    if (a.nefarious_prefix)
        nefarious.code_prefix = from_hex(*a.nefarious_prefix);
    if (a.nefarious_suffix)
        nefarious.code_suffix = from_hex(*a.nefarious_suffix);
    benign.mutable_field_width = nefarious.mutable_field_width = a.field_width;

    scenarios::ForgeOptions options;
    options.vary = scenarios::parse_vary_mode(a.vary);
    options.search.workers = a.workers;
    // Half of all collisions pair two records of the same family.
    const collision::AttackBudget budget(a.budget.value_or(default_budget(a.bits, 128)));

    const auto outcome = scenarios::forge_address_collision(parse_account(a.creator), benign,
        nefarious, a.nonce, spec, g.seed, budget, options);
    if (const auto* ex = std::get_if<collision::Exhausted>(&outcome))
    {
        ordered_json j;
        j["schema"] = scenarios::forgery_schema;
        j["status"] = "exhausted";
        j["truncation_bits"] = a.bits;
        j["budget"] = budget.max_evaluations();
        j["evaluations_used"] = ex->evaluations_used;
        const std::string text =
            "exhausted after " + std::to_string(ex->evaluations_used) + " evaluations\n";
        return {g.json ? dump(j) : text, exit_exhausted};
    }
    const auto& ev = std::get<scenarios::ForgeryEvidence>(outcome);
    if (g.json)
        return {dump(scenarios::to_json(ev))};
    return {kv_lines({{"address", ev.shared_address.to_hex()},
        {"bits", std::to_string(a.bits)}, {"vary", std::string(scenarios::to_string(ev.vary))},
        {"benign nonce", std::to_string(ev.benign.nonce)},
        {"benign initcode", to_hex(ev.benign.initcode)},
        {"nefarious nonce", std::to_string(ev.nefarious.nonce)},
        {"nefarious initcode", to_hex(ev.nefarious.initcode)},
        {"evaluations", std::to_string(ev.evaluations_used)}})};
}

// ---- beacon ----------------------------------------------------------------

struct BeaconArgs
{
    int participants = 10;
    int adversary = 0;
    int bits = 24;
    int reveal_bits = 64;
    uint64_t rounds = 20000;
    std::string scenario = "honest";
    std::optional<uint64_t> budget;
    std::optional<double> hash_rate;
    std::optional<double> window;
    std::optional<std::string> evidence;
    unsigned threads = 1;
};

Output cmd_beacon(const BeaconArgs& a, const Global& g)
{
    const auto kind = beacon::parse_scenario(a.scenario);
    beacon::BeaconConfig config;
    config.participants = a.participants;
    config.adversary_index = a.adversary;
    config.reveal_bits = a.reveal_bits;
    config.spec = DigestSpec(a.bits);
    config.temporal_binding = kind == beacon::ScenarioKind::attacked_with_binding;
    config.validate();

    if (a.hash_rate.has_value() != a.window.has_value())
        throw Failure{exit_usage, "--hash-rate and --window go together"};
    if (a.hash_rate && a.budget)
        throw Failure{exit_usage, "give either --budget or --hash-rate/--window"};
    std::optional<collision::AttackBudget> budget;
    if (a.budget)
        budget.emplace(*a.budget);
    else if (a.hash_rate)
        budget = collision::AttackBudget::from_rate(*a.hash_rate, *a.window);
    if (kind == beacon::ScenarioKind::honest && budget)
        throw Failure{exit_usage, "the honest scenario takes no budget"};
    if (kind == beacon::ScenarioKind::attacked_with_binding && !budget)
        throw Failure{exit_usage, "the temporal scenario needs --budget or --hash-rate/--window"};

    if (a.evidence)
    {
        if (kind != beacon::ScenarioKind::attacked)
            throw Failure{exit_usage, "--evidence records the attacked scenario only"};
        const auto bundle = scenarios::narrate_beacon_attack(config,
            budget.value_or(collision::AttackBudget(default_budget(a.bits, 64))), a.rounds, g.seed);
        write_file(*a.evidence, dump(scenarios::to_json(bundle)));

        ordered_json j;
        j["schema"] = "digestlab.bias.v1";
        j["seed"] = g.seed;
        j["config"] = beacon::to_json(config);
        j["scenario"] = "attacked";
        j["rounds"] = a.rounds;
        j["prepared"] = bundle.prepared;
        j["adversary_selected"] = bundle.adversary_selected;
        j["collisions_found"] = bundle.collisions_found;
        j["frequency"] = bundle.frequency;
        j["predicted"] = bundle.predicted;
        j["evidence"] = *a.evidence;
        if (g.json)
            return {dump(j)};
        return {kv_lines({{"scenario", "attacked"}, {"rounds", std::to_string(a.rounds)},
            {"prepared", bundle.prepared ? "yes" : "no"},
            {"frequency", fixed(bundle.frequency)}, {"predicted", fixed(bundle.predicted)},
            {"evidence", *a.evidence}})};
    }

    beacon::BiasOptions options;
    options.threads = a.threads;
    const auto report = beacon::measure_bias(config, a.rounds, {kind, budget}, g.seed, options);
    if (report.transcripts_rejected != 0)
        throw Failure{exit_rejected,
            std::to_string(report.transcripts_rejected) + " transcripts failed verification"};

    ordered_json j;
    j["schema"] = "digestlab.bias.v1";
    j["seed"] = g.seed;
    j["config"] = beacon::to_json(config);
    const ordered_json fields = beacon::to_json(report);
    for (const auto& [k, v] : fields.items())
        j[k] = v;
    if (g.json)
        return {dump(j)};
    std::vector<std::pair<std::string, std::string>> rows{{"scenario", a.scenario},
        {"participants", std::to_string(a.participants)}, {"bits", std::to_string(a.bits)},
        {"rounds", std::to_string(a.rounds)}, {"frequency", fixed(report.frequency)},
        {"predicted", fixed(report.scenario_predicted)}};
    if (kind != beacon::ScenarioKind::honest)
    {
        rows.emplace_back("per-round budget", std::to_string(*report.per_round_budget));
        rows.emplace_back("attack success", fixed(report.attack_success_rate));
    }
    return {kv_lines(rows)};
}

// ---- scaling / temporal ----------------------------------------------------

struct ScalingArgs
{
    std::vector<int> t_list{16, 20, 24, 28};
    int seeds = 20;
    std::string searcher = "parallel";
    int workers = 1;
    double multiplier = 64;
    unsigned threads = 1;
};

Output cmd_scaling(const ScalingArgs& a, const Global& g)
{
    mitigation::ScalingStudyConfig config;
    config.t_values = a.t_list;
    config.seeds_per_t = a.seeds;
    config.searcher = mitigation::parse_searcher(a.searcher);
    config.parallel.workers = a.workers;
    config.budget_multiplier = a.multiplier;
    const auto report = mitigation::run_scaling_study(config, g.seed, {a.threads, g.timestamp});
    return {g.json ? dump(mitigation::to_json(report)) : mitigation::to_table(report)};
}

struct TemporalArgs
{
    int bits = 32;
    double hash_rate = 1e5;
    std::vector<double> windows{0.25, 0.5, 1, 2};
    int trials = 200;
    unsigned threads = 1;
};

Output cmd_temporal(const TemporalArgs& a, const Global& g)
{
    mitigation::TemporalStudyConfig config;
    config.t = a.bits;
    config.hash_rate = a.hash_rate;
    config.windows = a.windows;
    config.trials_per_window = a.trials;
    const auto report = mitigation::run_temporal_study(config, g.seed, {a.threads, g.timestamp});
    return {g.json ? dump(mitigation::to_json(report)) : mitigation::to_table(report)};
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs
{
    int bits = 32;
    double seconds = 1;
};

Output cmd_bench(const BenchArgs& a, const Global& g)
{
    DigestSpec spec(a.bits);
    const double rate = mitigation::benchmark_hash_rate(spec.truncation_bits(), a.seconds);
    if (g.json)
    {
        ordered_json j;
        j["schema"] = "digestlab.bench.v1";
        j["truncation_bits"] = a.bits;
        j["simd"] = keccak_simd_enabled();
        j["suggested_hash_rate"] = std::floor(rate);
        return {dump(j)};
    }
    return {"suggested --hash-rate " + std::to_string(static_cast<uint64_t>(rate)) +
            " (one thread" + (keccak_simd_enabled() ? ", AVX-512" : "") + ")\n"};
}

// ---- verify ----------------------------------------------------------------

Output cmd_verify(const std::string& path, const Global& g)
{
    nlohmann::json document;
    try
    {
        document = nlohmann::json::parse(read_file(path));
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw Failure{exit_usage, path + " is not JSON: " + e.what()};
    }
    const auto verdict = scenarios::verify_bundle(document);

    const int code = verdict.accepted ? exit_ok : exit_rejected;
    if (g.json)
    {
        ordered_json j;
        j["schema"] = "digestlab.verdict.v1";
        j["bundle_schema"] = document.at("schema");
        j["accepted"] = verdict.accepted;
        j["check"] = verdict.accepted ? ordered_json(nullptr) : ordered_json(verdict.check);
        j["detail"] = verdict.accepted ? ordered_json(nullptr) : ordered_json(verdict.detail);
        return {dump(j), code};
    }
    if (verdict.accepted)
        return {"accepted\n"};
    return {"rejected: " + verdict.check + ": " + verdict.detail + "\n", code};
}
}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"digestlab: collision attacks against truncated Keccak-256 digests", "digestlab"};
    app.require_subcommand(1);
    app.fallthrough();
    app.footer(scope_warning);
    app.set_version_flag("--version", std::string(version()));

    Global g;
    app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
    app.add_flag("--json", g.json, "Machine-readable output");
    app.add_option("--out", g.out_path, "Also write the output to this file");
    app.add_option("--timestamp", g.timestamp, "Timestamp recorded in study metadata");

    HashArgs hash;
    auto* hash_cmd = app.add_subcommand("hash", "Keccak-256 of a byte string");
    hash_cmd->add_option("--input", hash.input, "Input as hex");
    hash_cmd->add_option("--infile", hash.infile, "Input file");
    hash_cmd->add_option("--truncate", hash.truncate, "Keep the low t bits");

    CollideArgs collide;
    auto* collide_cmd = app.add_subcommand("collide", "Find a collision of a truncated digest");
    collide_cmd->add_option("--bits", collide.bits, "Truncation width t")->capture_default_str();
    collide_cmd->add_option("--searcher", collide.searcher)
        ->check(CLI::IsMember({"brute", "rho", "parallel"}))
        ->capture_default_str();
    collide_cmd->add_option("--workers", collide.workers, "Parallel walkers");
    collide_cmd->add_option("--distinguished-bits", collide.distinguished_bits);
    collide_cmd->add_option("--budget", collide.budget, "Evaluation budget (default 64x expected)");
    collide_cmd->add_flag("--progress", collide.progress, "Report search progress on stderr");

    ForgeArgs forge;
    auto* forge_cmd =
        app.add_subcommand("forge-address", "Two deployments that share a truncated address");
    forge_cmd->add_option("--bits", forge.bits)->capture_default_str();
    forge_cmd->add_option("--creator", forge.creator, "20-byte creator account")
        ->capture_default_str();
    forge_cmd->add_option("--nonce", forge.nonce)->capture_default_str();
    forge_cmd->add_option("--benign-prefix", forge.benign_prefix);
    forge_cmd->add_option("--benign-suffix", forge.benign_suffix);
    forge_cmd->add_option("--nefarious-prefix", forge.nefarious_prefix);
    forge_cmd->add_option("--nefarious-suffix", forge.nefarious_suffix);
    forge_cmd->add_option("--field-width", forge.field_width, "Mutable field bytes")
        ->capture_default_str();
    forge_cmd->add_option("--vary", forge.vary)
        ->check(CLI::IsMember({"field", "initcode", "nonce"}))
        ->capture_default_str();
    forge_cmd->add_option("--budget", forge.budget, "Evaluation budget (default 128x expected)");
    forge_cmd->add_option("--workers", forge.workers)->capture_default_str();

    BeaconArgs beacon_args;
    auto* beacon_cmd = app.add_subcommand("beacon", "Proposer bias in a commit-reveal beacon");
    beacon_cmd->add_option("--n", beacon_args.participants, "Participants")->capture_default_str();
    beacon_cmd->add_option("--adversary", beacon_args.adversary)->capture_default_str();
    beacon_cmd->add_option("--bits", beacon_args.bits)->capture_default_str();
    beacon_cmd->add_option("--reveal-bits", beacon_args.reveal_bits)->capture_default_str();
    beacon_cmd->add_option("--rounds", beacon_args.rounds)->capture_default_str();
    beacon_cmd->add_option("--scenario", beacon_args.scenario)
        ->check(CLI::IsMember({"honest", "attacked", "temporal", "attacked_with_binding"}))
        ->capture_default_str();
    beacon_cmd->add_option("--budget", beacon_args.budget, "Per-round search budget");
    beacon_cmd->add_option("--hash-rate", beacon_args.hash_rate, "Evaluations per second");
    beacon_cmd->add_option("--window", beacon_args.window, "Seconds between binding and reveal");
    beacon_cmd->add_option("--evidence", beacon_args.evidence, "Write an attack bundle here");
    beacon_cmd->add_option("--threads", beacon_args.threads)->capture_default_str();

    ScalingArgs scaling;
    auto* scaling_cmd = app.add_subcommand("scaling", "Collision work against digest width");
    scaling_cmd->add_option("--t-list", scaling.t_list, "Comma-separated widths")
        ->delimiter(',')
        ->capture_default_str();
    scaling_cmd->add_option("--seeds", scaling.seeds)->capture_default_str();
    scaling_cmd->add_option("--searcher", scaling.searcher)
        ->check(CLI::IsMember({"rho", "parallel"}))
        ->capture_default_str();
    scaling_cmd->add_option("--workers", scaling.workers)->capture_default_str();
    scaling_cmd->add_option("--multiplier", scaling.multiplier, "Budget as a multiple of expected")
        ->capture_default_str();
    scaling_cmd->add_option("--threads", scaling.threads)->capture_default_str();

    TemporalArgs temporal;
    auto* temporal_cmd = app.add_subcommand("temporal", "Attack success inside a time window");
    temporal_cmd->add_option("--bits", temporal.bits)->capture_default_str();
    temporal_cmd->add_option("--hash-rate", temporal.hash_rate)->capture_default_str();
    temporal_cmd->add_option("--windows", temporal.windows, "Comma-separated seconds")
        ->delimiter(',')
        ->capture_default_str();
    temporal_cmd->add_option("--trials", temporal.trials)->capture_default_str();
    temporal_cmd->add_option("--threads", temporal.threads)->capture_default_str();

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Measure local digest throughput");
    bench_cmd->add_option("--bits", bench.bits)->capture_default_str();
    bench_cmd->add_option("--seconds", bench.seconds)->capture_default_str();

    std::string bundle_path;
    auto* verify_cmd = app.add_subcommand("verify", "Re-check an evidence bundle");
    verify_cmd->add_option("--bundle", bundle_path)->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        Output result;
        if (*hash_cmd)
            result = cmd_hash(hash, g);
        else if (*verify_cmd)
            result = cmd_verify(bundle_path, g);
        else if (*bench_cmd)
            result = cmd_bench(bench, g);
        else
        {
            err << scope_warning;
            if (*collide_cmd)
                result = cmd_collide(collide, g, err);
            else if (*forge_cmd)
                result = cmd_forge(forge, g);
            else if (*beacon_cmd)
                result = cmd_beacon(beacon_args, g);
            else if (*scaling_cmd)
                result = cmd_scaling(scaling, g);
            else
                result = cmd_temporal(temporal, g);
        }
        out << result.text;
        if (!g.out_path.empty())
            write_file(g.out_path, result.text);
        return result.code;
    }
    catch (const Failure& f)
    {
        err << "error: " << f.message << "\n";
        return f.code;
    }
    catch (const ParameterError& e)
    {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}
}  // namespace digestlab::cli

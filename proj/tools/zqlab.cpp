// Command-line front end: one subcommand per experiment.
//
//   zqlab dot-incidence --config sweep.cfg --out dot.csv
//   zqlab spectrum --set moduli=5,7 --dump-matrix m.txt
//
// Exit status: 0 success, 1 a hard check failed, 2 invalid input or I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zqlab/harness/experiments.hpp"

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> matrix_cap;
    std::optional<std::size_t> trials;
    std::vector<std::string> sets;
    std::string dump_matrix;
};

int execute(zqlab::harness::Experiment which, const Options& o) {
    using namespace zqlab::harness;
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig::parse_string("") : ExperimentConfig::load(o.config);
    if (cfg.has("experiment") && cfg.experiment != which)
        zqlab::fail(zqlab::ErrorCode::invalid_params,
                    "config is for '" + to_string(cfg.experiment) + "' but the subcommand is '" + to_string(which) + "'");
    cfg.set("experiment", to_string(which));
    for (const auto& kv : o.sets) {
        const auto eq = kv.find('=');
        zqlab::require(eq != std::string::npos, zqlab::ErrorCode::invalid_params, "--set expects key=value, got " + kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.seed) cfg.set("seed", std::to_string(*o.seed));
    if (o.out) cfg.set("out", *o.out);
    if (o.format) cfg.set("format", *o.format);
    if (o.threads) cfg.set("threads", std::to_string(*o.threads));
    if (o.matrix_cap) cfg.set("matrix_cap", std::to_string(*o.matrix_cap));
    if (o.trials) cfg.set("trials", std::to_string(*o.trials));

    std::ofstream dump;
    if (!o.dump_matrix.empty()) {
        dump.open(o.dump_matrix, std::ios::binary);
        zqlab::require(static_cast<bool>(dump), zqlab::ErrorCode::io, "cannot open " + o.dump_matrix + " for writing");
    }
    const auto table = run(cfg, dump.is_open() ? &dump : nullptr);
    emit(table, cfg, std::cout);
    for (const auto& note : table.notes()) std::cerr << "note: " << note << "\n";
    for (const auto& f : table.hard_failures()) std::cerr << "HARD CHECK FAILED: " << f << "\n";
    return table.hard_failures().empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale experiments on incidences, character sums and continued fractions over Z_q"};
    app.require_subcommand(1);
    Options o;
    std::optional<zqlab::harness::Experiment> chosen;

    for (const auto& [kind, name] : zqlab::harness::experiment_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "64-bit seed");
        sub->add_option("--out", o.out, "output path (stdout when omitted or '-')");
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--matrix-cap", o.matrix_cap, "largest matrix side or family size")->check(CLI::PositiveNumber);
        sub->add_option("--trials", o.trials, "trials per parameter point");
        sub->add_option("--set", o.sets, "override a config key (key=value), repeatable");
        if (kind == zqlab::harness::Experiment::spectrum)
            sub->add_option("--dump-matrix", o.dump_matrix, "write each incidence matrix to this file");
        sub->callback([&chosen, k = kind] { chosen = k; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return execute(*chosen, o);
    } catch (const zqlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

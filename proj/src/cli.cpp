#include "qsync/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>

#include <CLI11.hpp>

#include "qsync/config.hpp"
#include "qsync/errors.hpp"
#include "qsync/experiments.hpp"
#include "qsync/report_io.hpp"

namespace qsync {
namespace {

// 0 success, 1 configuration, 2 runtime, 3 reserved for failed validation
int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

std::string joined(const std::string& dir, const char* name) {
    return (std::filesystem::path(dir) / name).string();
}

} // namespace

int cmd_run(const CliInvocation& invocation) {
    return guarded([&] {
        ExperimentConfig config = parse_config(invocation.config_path);
        if (invocation.seed_override) config.seed = *invocation.seed_override;
        std::vector<AdjustmentReport> reports;
        const TrialSummary summary =
            monte_carlo(config, invocation.threads, &reports);
        write_text_file(joined(invocation.out_dir, "results.csv"),
                        results_csv(config, reports, summary,
                                    !invocation.no_timestamp));
        const std::string text = summary_text(config, summary);
        write_text_file(joined(invocation.out_dir, "summary.txt"), text);
        std::fputs(text.c_str(), stdout);
        return 0;
    });
}

int cmd_sweep(const CliInvocation& invocation) {
    return guarded([&] {
        SweepConfig sweep = parse_sweep_config(invocation.config_path);
        if (invocation.seed_override) sweep.seed = *invocation.seed_override;
        const auto rows = efficiency_sweep(sweep, invocation.threads);
        write_text_file(joined(invocation.out_dir, "efficiency.csv"),
                        efficiency_csv(rows, !invocation.no_timestamp));
        std::fputs(efficiency_csv(rows, false).c_str(), stdout);
        return 0;
    });
}

int cmd_validate(const CliInvocation& invocation) {
    return guarded([&] {
        const ValidationReport report =
            validate_samplers(invocation.perturb_visibility);
        const std::string text = validation_text(report);
        write_text_file(joined(invocation.out_dir, "validation.txt"), text);
        std::fputs(text.c_str(), stdout);
        return report.all_pass ? 0 : 3;
    });
}

int run_cli(int argc, char** argv) {
    CLI::App app{"entanglement-assisted clock synchronization simulator"};
    app.require_subcommand(1);
    CliInvocation invocation;
    std::uint64_t seed_value = 0;

    auto add_common = [&](CLI::App* cmd, bool with_config) {
        if (with_config) {
            cmd->add_option("-c,--config", invocation.config_path,
                            "experiment config file")
                ->required();
        }
        cmd->add_option("-o,--out", invocation.out_dir, "output directory")
            ->capture_default_str();
        cmd->add_option("-j,--threads", invocation.threads,
                        "worker threads (result is thread-count independent)")
            ->check(CLI::Range(1, 1024))
            ->capture_default_str();
        cmd->add_flag("--no-timestamp", invocation.no_timestamp,
                      "omit the generation timestamp from CSV output");
    };

    CLI::App* run = app.add_subcommand(
        "run", "Monte Carlo synchronization run from a config file");
    add_common(run, true);
    CLI::Option* seed_opt =
        run->add_option("--seed", seed_value, "override the config seed");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "qubit-efficiency sweep over protocols and party counts");
    add_common(sweep, true);
    CLI::Option* sweep_seed_opt =
        sweep->add_option("--seed", seed_value, "override the config seed");

    CLI::App* validate = app.add_subcommand(
        "validate", "exact sampler checks against the statevector oracle");
    add_common(validate, false);
    validate
        ->add_option("--perturb-visibility", invocation.perturb_visibility,
                     "fault injection: corrupt the analytic visibility by "
                     "this relative amount")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (run->parsed()) {
        if (seed_opt->count() > 0) invocation.seed_override = seed_value;
        return cmd_run(invocation);
    }
    if (sweep->parsed()) {
        if (sweep_seed_opt->count() > 0) invocation.seed_override = seed_value;
        return cmd_sweep(invocation);
    }
    return cmd_validate(invocation);
}

} // namespace qsync

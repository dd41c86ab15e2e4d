#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "citysynth/pipeline.hpp"

namespace {

// Flags shared by every subcommand; each one maps onto PipelineConfig.
struct CommonOpts {
    std::string config_path;
    std::string preset_name;
    uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "pipeline config JSON")
        ->check(CLI::ExistingFile);
    cmd->add_option("--preset", opts.preset_name, "built-in preset (set1..set4)");
    cmd->add_option("--seed", opts.seed, "master seed override")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--out", opts.out_dir, "output directory override");
    cmd->add_option("--threads", opts.threads, "worker threads (also CITYSYNTH_THREADS)");
}

citysynth::PipelineConfig resolve(const CommonOpts& opts) {
    if (!opts.config_path.empty() && !opts.preset_name.empty()) {
        throw CLI::ValidationError("--config and --preset are mutually exclusive");
    }
    if (opts.config_path.empty() && opts.preset_name.empty()) {
        throw CLI::ValidationError("one of --config or --preset is required");
    }
    citysynth::PipelineConfig config = opts.config_path.empty()
                                           ? citysynth::preset(opts.preset_name)
                                           : citysynth::PipelineConfig::load(opts.config_path);
    if (opts.seed_set) config.seed = opts.seed;
    if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
    if (opts.threads > 0) {
        config.threads = opts.threads;
    } else if (const char* env = std::getenv("CITYSYNTH_THREADS")) {
        config.threads = std::max(1, std::atoi(env));
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"citysynth: procedural semantic scenes, simulated UAV capture, and "
                 "labeled point clouds"};
    app.require_subcommand(1);

    CommonOpts opts;
    using Stage = void (*)(const citysynth::PipelineConfig&);
    struct Entry {
        const char* name;
        const char* help;
        Stage fn;
    };
    const Entry stages[] = {
        {"generate-scene", "terrain + buildings + placed objects -> scene.ply",
         citysynth::stage_generate_scene},
        {"plan-flight", "crosshatch survey poses -> poses.csv", citysynth::stage_plan_flight},
        {"render", "depth and label frames for every pose", citysynth::stage_render},
        {"reconstruct", "ground-truth and simulated photogrammetric clouds",
         citysynth::stage_reconstruct},
        {"annotate", "transfer labels onto the working cloud -> annotated.ply",
         citysynth::stage_annotate},
        {"evaluate", "segmentation metrics -> metrics.csv/json", citysynth::stage_evaluate},
    };

    Stage selected = nullptr;
    for (const Entry& e : stages) {
        CLI::App* cmd = app.add_subcommand(e.name, e.help);
        add_common(cmd, opts);
        cmd->callback([&selected, fn = e.fn]() { selected = fn; });
    }
    CLI::App* run = app.add_subcommand("run", "all stages in order, plus manifest.json");
    add_common(run, opts);
    std::string dump_config;
    run->add_option("--dump-config", dump_config,
                    "write the resolved config to this path and continue");
    run->callback([&selected]() { selected = citysynth::run_pipeline; });

    CLI11_PARSE(app, argc, argv);

    try {
        citysynth::PipelineConfig config = resolve(opts);
        if (!dump_config.empty()) config.save(dump_config);
        selected(config);
    } catch (const citysynth::StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

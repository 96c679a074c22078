#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "reclink/pipeline.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
    bool strict_paper = false;
    bool approx_distinct = false;
    bool token_dump = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* opt = cmd->add_option("--config", flags.config_path, "JSON config file");
    if (config_required) opt->required();
    cmd->add_option("--out-dir", flags.out_dir, "Output directory (overrides config)");
    cmd->add_option("--threads", flags.threads, "Worker thread cap (overrides config)");
    cmd->add_flag("--strict-paper", flags.strict_paper,
                  "Historical validity profile: year ceiling 2022, month/day checks off");
    cmd->add_flag("--approx-distinct", flags.approx_distinct,
                  "Approximate distinct counts (large runs)");
    cmd->add_flag("--token-dump", flags.token_dump, "Also write per-record token dumps");
}

reclink::RunConfig make_run_config(const CommonFlags& flags) {
    reclink::RunConfig cfg;
    if (!flags.config_path.empty()) cfg = reclink::load_run_config(flags.config_path);
    if (flags.out_dir) cfg.output_dir = *flags.out_dir;
    if (flags.threads) cfg.threads = *flags.threads < 1 ? 1u : *flags.threads;
    if (flags.strict_paper) reclink::apply_strict_paper(cfg.validity);
    if (flags.approx_distinct) cfg.approx_distinct = true;
    if (flags.token_dump) cfg.token_dump = true;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic patient/death-master record linkage"};
    app.require_subcommand(1);

    CommonFlags normalize_flags, profile_flags, link_flags, merge_flags;
    auto* normalize = app.add_subcommand("normalize", "Ingest and clean the configured sources");
    add_common(normalize, normalize_flags, true);
    auto* profile = app.add_subcommand("profile", "Field and token quality profiles");
    add_common(profile, profile_flags, true);
    auto* link = app.add_subcommand("link", "Validate tokens, rank them, and link the datasets");
    add_common(link, link_flags, true);

    std::string synth_config_path, synth_out_dir = "out";
    std::optional<std::uint64_t> synth_seed;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset pair with truth map");
    synth->add_option("--config", synth_config_path, "Synth JSON config")->required();
    synth->add_option("--out-dir", synth_out_dir, "Output directory");
    synth->add_option("--seed", synth_seed, "Seed override");

    std::string merge_existing, merge_update;
    auto* merge = app.add_subcommand("merge", "Fold a monthly update file into a death-master file");
    merge->add_option("existing", merge_existing, "Current death-master file")->required();
    merge->add_option("update", merge_update, "Monthly update file")->required();
    add_common(merge, merge_flags, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (normalize->parsed()) return reclink::cmd_normalize(make_run_config(normalize_flags));
        if (profile->parsed()) return reclink::cmd_profile(make_run_config(profile_flags));
        if (link->parsed()) return reclink::cmd_link(make_run_config(link_flags));
        if (synth->parsed()) {
            reclink::SynthConfig cfg = reclink::load_synth_config(synth_config_path);
            if (synth_seed) cfg.seed = *synth_seed;
            return reclink::cmd_synth(cfg, synth_out_dir);
        }
        if (merge->parsed())
            return reclink::cmd_merge(make_run_config(merge_flags), merge_existing, merge_update);
    } catch (const reclink::FatalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
    return 0;
}

#include "nqs_cli/app.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "commands.hpp"
#include "nqs/errors.hpp"
#include "nqs/version.hpp"

namespace nqs::cli {

namespace {

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

void add_model_options(CLI::App* sub, ModelSettings& m) {
    sub->add_option("--model", m.model, "Hamiltonian: tfi1d, tfi2d or xxz")
        ->required()
        ->check(CLI::IsMember({"tfi1d", "tfi2d", "xxz"}));
    sub->add_option("--n", m.n, "Chain length (tfi1d, xxz) or side length (tfi2d)")->required();
    sub->add_flag("--open", m.open, "Open instead of periodic boundaries");
    sub->add_option("--h", m.h, "Transverse field")->capture_default_str();
    sub->add_option("--delta", m.delta, "XXZ anisotropy")->capture_default_str();
}

// Canonical key=value dump of a subcommand's options, minus the ones that
// do not change the experiment.
std::string canonical_config(const CLI::App* sub) {
    std::istringstream all(sub->config_to_str(true, false));
    std::string line, kept;
    while (std::getline(all, line)) {
        if (line.rfind("config=", 0) == 0 || line.rfind("out=", 0) == 0 || line.empty()) continue;
        kept += line + '\n';
    }
    return kept;
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> result;
    std::string path;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) {
            path = args[++k];
        } else if (args[k].rfind("--config=", 0) == 0) {
            path = args[k].substr(9);
        } else {
            result.push_back(args[k]);
        }
    }
    if (path.empty()) return result;
    const auto items = CLI::ConfigTOML().from_file(path);
    for (const auto& item : items) {
        if (!item.parents.empty() || item.name.empty() || item.name == "++" || item.name == "--") continue;
        const std::string flag = "--" + item.name;
        if (has_flag(args, flag)) continue;
        if (item.inputs.empty()) {
            // An explicitly empty list; let the subcommand see the empty value.
            result.push_back(flag + "=");
            continue;
        }
        for (const auto& value : item.inputs) result.push_back(flag + "=" + value);
    }
    return result;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Variational Monte Carlo with complex RBMs: optimization and Fisher-matrix diagnostics", "nqs"};
    app.set_help_flag("--help", "Print help and exit");
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    std::string config_path;

    OptimizeSettings opt;
    auto* optimize = app.add_subcommand("optimize", "Ground-state optimization run");
    optimize->add_option("--config", config_path, "Flat key = value file; flags override it");
    add_model_options(optimize, opt.model);
    optimize->add_option("--alpha", opt.alpha, "Hidden-unit density M / N")->capture_default_str();
    optimize->add_option("--sigma", opt.sigma, "Initial parameter noise")->capture_default_str();
    optimize->add_option("--method", opt.method)
        ->check(CLI::IsMember({"sr", "rmsprop-gs", "rmsprop"}))
        ->capture_default_str();
    optimize->add_option("--eta", opt.eta, "Learning rate (default by model)");
    optimize->add_option("--eps", opt.eps, "SR diagonal shift (default 1e-3)");
    optimize->add_option("--rms-beta", opt.rms_beta)->capture_default_str();
    optimize->add_option("--rms-eps", opt.rms_eps)->capture_default_str();
    optimize->add_option("--epochs", opt.epochs)->required();
    optimize->add_option("--backend", opt.backend)
        ->check(CLI::IsMember({"exact", "mcmc"}))
        ->capture_default_str();
    optimize->add_option("--sector", opt.sector)
        ->check(CLI::IsMember({"auto", "full", "jz-zero"}))
        ->capture_default_str();
    optimize->add_option("--samples", opt.samples)->capture_default_str();
    optimize->add_option("--chains", opt.chains)->capture_default_str();
    optimize->add_option("--thinning", opt.thinning)->capture_default_str();
    optimize->add_option("--burn-in", opt.burn_in, "Sweeps before each batch (default 10 N)");
    optimize->add_option("--move", opt.move)
        ->check(CLI::IsMember({"auto", "flip", "swap"}))
        ->capture_default_str();
    optimize->add_option("--seed", opt.seed)->capture_default_str();
    optimize->add_option("--out", opt.out, "Run directory")->capture_default_str();
    optimize->add_option("--spectrum-every", opt.spectrum_every, "Checkpoint and spectrum interval, 0 disables")
        ->capture_default_str();
    optimize->add_option("--rank-mode", opt.rank_mode)
        ->check(CLI::IsMember({"auto", "absolute", "relative"}))
        ->capture_default_str();
    optimize->add_option("--reference", opt.reference, "Ground-state energy for the rescaled energy");
    optimize->add_flag("--skip-ed", opt.skip_ed, "Do not diagonalize for a reference energy");
    optimize->add_option("--stop-below", opt.stop_below, "Stop once the rescaled energy drops below this");
    optimize->add_option("--init", opt.init, "Start from this checkpoint instead of random parameters");

    SpectrumSettings spec;
    auto* spectrum = app.add_subcommand("spectrum", "Fisher spectrum of a checkpoint");
    spectrum->add_option("--config", config_path);
    spectrum->add_option("--checkpoint", spec.checkpoint)->required();
    spectrum->add_option("--backend", spec.backend)
        ->check(CLI::IsMember({"exact", "mcmc"}))
        ->capture_default_str();
    spectrum->add_option("--sector", spec.sector)->check(CLI::IsMember({"full", "jz-zero"}))->capture_default_str();
    spectrum->add_option("--samples", spec.samples)->capture_default_str();
    spectrum->add_option("--chains", spec.chains)->capture_default_str();
    spectrum->add_option("--burn-in", spec.burn_in);
    spectrum->add_option("--move", spec.move)->check(CLI::IsMember({"flip", "swap"}))->capture_default_str();
    spectrum->add_option("--seed", spec.seed)->capture_default_str();
    spectrum->add_option("--rank-mode", spec.rank_mode)
        ->check(CLI::IsMember({"auto", "absolute", "relative"}))
        ->capture_default_str();
    spectrum->add_option("--out", spec.out)->capture_default_str();

    GibbsSettings gibbs;
    auto* gibbs_cmd = app.add_subcommand("gibbs", "Coherent Gibbs states of the Ising ferromagnet");
    gibbs_cmd->add_option("--config", config_path);
    gibbs_cmd->add_option("--lattice", gibbs.lattice)
        ->check(CLI::IsMember({"square", "chain"}))
        ->capture_default_str();
    gibbs_cmd->add_option("--l", gibbs.l, "Side (square) or length (chain)")->required();
    gibbs_cmd->add_flag("--open", gibbs.open);
    auto* beta_opt = gibbs_cmd->add_option("--beta", gibbs.betas, "Inverse temperatures")
                         ->required()
                         ->expected(0, CLI::detail::expected_max_vector_size);
    gibbs_cmd->add_option("--fisher", gibbs.fisher)
        ->check(CLI::IsMember({"exact", "wolff"}))
        ->capture_default_str();
    gibbs_cmd->add_option("--samples", gibbs.samples)->capture_default_str();
    gibbs_cmd->add_option("--wolff-steps", gibbs.wolff_steps, "Cluster updates between samples")->capture_default_str();
    gibbs_cmd->add_option("--burn-in", gibbs.burn_in, "Cluster updates before sampling")->capture_default_str();
    gibbs_cmd->add_flag("--rank", gibbs.rank, "With --fisher wolff, also diagonalize the sampled matrix");
    gibbs_cmd->add_option("--seed", gibbs.seed)->capture_default_str();
    gibbs_cmd->add_option("--out", gibbs.out)->capture_default_str();

    ExactSettings exact;
    auto* exact_cmd = app.add_subcommand("exact", "Exact ground-state energy");
    exact_cmd->add_option("--config", config_path);
    add_model_options(exact_cmd, exact.model);
    exact_cmd->add_option("--sector", exact.sector)
        ->check(CLI::IsMember({"auto", "full", "jz-zero"}))
        ->capture_default_str();
    exact_cmd->add_option("--checkpoint", exact.checkpoint, "Also report the variational energy of this state");
    exact_cmd->add_option("--out", exact.out);

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "nqs: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (optimize->parsed()) return cmd_optimize(opt, canonical_config(optimize), out);
        if (spectrum->parsed()) return cmd_spectrum(spec, out);
        if (gibbs_cmd->parsed()) {
            // A bare --beta reaches here as a single default value; treat it as the empty list it is.
            const auto& given = beta_opt->results();
            if (std::all_of(given.begin(), given.end(), [](const std::string& v) { return v.empty(); }))
                gibbs.betas.clear();
            return cmd_gibbs(gibbs, out);
        }
        if (exact_cmd->parsed()) return cmd_exact(exact, out);
    } catch (const CheckpointError& e) {
        err << "nqs: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "nqs: invalid configuration: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "nqs: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace nqs::cli

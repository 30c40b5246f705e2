#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "nqs/checkpoint.hpp"
#include "nqs/estimator.hpp"
#include "nqs/exact.hpp"
#include "nqs/gibbsmap.hpp"
#include "nqs/optimizer.hpp"
#include "nqs/sampler.hpp"
#include "nqs/spectral.hpp"
#include "nqs/version.hpp"
#include "nqs_cli/app.hpp"
#include "nqs_cli/output.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace nqs::cli {

namespace {

// Largest system for which optimize computes its own reference energy.
constexpr std::size_t kAutoReferenceSites = 16;

json config_object(const std::string& canonical) {
    json obj = json::object();
    std::istringstream lines(canonical);
    std::string line;
    while (std::getline(lines, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        obj[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return obj;
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << doc.dump(2) << '\n';
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

MoveKind resolve_move(const std::string& name, const Hamiltonian* ham) {
    if (name == "flip") return MoveKind::SpinFlip;
    if (name == "swap") return MoveKind::Swap;
    return (ham != nullptr && ham->kind() == HamiltonianKind::Xxz) ? MoveKind::Swap : MoveKind::SpinFlip;
}

Method resolve_method(const std::string& name) {
    if (name == "sr") return Method::StochasticReconfiguration;
    if (name == "rmsprop-gs") return Method::RmspropGroundState;
    return Method::RmspropClassic;
}

SpectrumOptions spectrum_options(const std::string& rank_mode, bool sampled) {
    SpectrumOptions options;
    const bool relative = rank_mode == "relative" || (rank_mode == "auto" && sampled);
    options.rank_mode = relative ? RankMode::Relative : RankMode::Absolute;
    return options;
}

std::string beta_stem(double beta) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "beta-%.6g", beta);
    return buf;
}

}  // namespace

Hamiltonian make_hamiltonian(const ModelSettings& s) {
    if (s.model == "tfi1d") return Hamiltonian::transverse_field_ising(build_chain(s.n, !s.open), s.h);
    if (s.model == "tfi2d") return Hamiltonian::transverse_field_ising(build_square(s.n, !s.open), s.h);
    if (s.model == "xxz") return Hamiltonian::xxz(build_chain(s.n, !s.open), s.delta);
    throw std::invalid_argument("unknown model '" + s.model + "'");
}

Sector resolve_sector(const std::string& name, const Hamiltonian& ham) {
    if (name == "full") return Sector::Full;
    if (name == "jz-zero") return Sector::ZeroMagnetization;
    return (ham.kind() == HamiltonianKind::Xxz && ham.n_sites() % 2 == 0) ? Sector::ZeroMagnetization : Sector::Full;
}

int cmd_optimize(const OptimizeSettings& s, const std::string& canonical_config, std::ostream& out) {
    const Hamiltonian ham = make_hamiltonian(s.model);
    const std::size_t n = ham.n_sites();
    const Sector sector = resolve_sector(s.sector, ham);
    const Method method = resolve_method(s.method);
    const SrConfig table = default_sr_config(ham);

    RbmParams initial;
    if (!s.init.empty()) {
        initial = read_checkpoint(s.init).params;
        if (initial.n_visible() != n) throw std::invalid_argument("--init checkpoint does not match the lattice size");
    } else {
        initial = init_random(n, s.alpha * n, s.sigma, s.seed);
    }
    const std::size_t m = initial.n_hidden();

    OptimizationConfig config;
    config.method = method;
    config.eta = s.eta.value_or(table.eta);
    config.epsilon = s.eps.value_or(table.epsilon);
    config.rms_beta = s.rms_beta;
    config.rms_eps = s.rms_eps;
    config.epochs = s.epochs;
    config.seed = s.seed;
    config.stop_below = s.stop_below;
    config.always_fisher = s.spectrum_every > 0;
    const bool sampled = s.backend == "mcmc";
    if (sampled) {
        McmcBackend mc;
        mc.sampler.n_samples = s.samples;
        mc.sampler.n_chains = s.chains;
        mc.sampler.thinning = s.thinning;
        mc.sampler.burn_in = s.burn_in;
        mc.sampler.move = resolve_move(s.move, &ham);
        config.backend = mc;
    } else {
        config.backend = ExactBackend{sector};
    }

    std::optional<double> reference = s.reference;
    std::string reference_source = reference ? "given" : "none";
    if (!reference && !s.skip_ed && n <= kAutoReferenceSites) {
        EdOptions ed;
        ed.sector = ham.conserves_magnetization() ? sector : Sector::Full;
        reference = exact_ground(ham, ed).ground_energy;
        reference_source = "exact-diagonalization";
    }
    config.reference_energy = reference;

    const fs::path dir(s.out);
    fs::create_directories(dir / "checkpoints");
    fs::create_directories(dir / "spectra");

    json manifest;
    manifest["tool"] = "nqs";
    manifest["command"] = "optimize";
    manifest["version"] = std::string(kVersion);
    manifest["config"] = config_object(canonical_config);
    manifest["config_hash"] = "fnv1a64:" + hex64(fnv1a64(canonical_config));
    manifest["seed"] = s.seed;
    manifest["n_visible"] = n;
    manifest["n_hidden"] = m;
    manifest["eta"] = config.eta;
    manifest["epsilon"] = config.epsilon;
    manifest["sector"] = std::string(to_string(sector));
    manifest["reference_energy"] = reference ? json(*reference) : json(nullptr);
    manifest["reference_source"] = reference_source;
    write_json(dir / "manifest.json", manifest);

    std::ofstream trajectory(dir / "trajectory.jsonl");
    if (!trajectory) throw std::runtime_error("cannot write " + (dir / "trajectory.jsonl").string());
    const SpectrumOptions spec_options = spectrum_options(s.rank_mode, sampled);

    auto observer = [&](const EpochView& view) {
        const EpochRecord& r = view.record;
        json line;
        line["epoch"] = r.epoch;
        line["energy"] = complex_json(r.energy);
        line["energy_variance"] = r.energy_variance;
        line["energy_error"] = r.energy_error;
        line["rescaled_energy"] = r.rescaled_energy ? json(*r.rescaled_energy) : json(nullptr);
        line["acceptance"] = r.acceptance;
        line["exchange_rate"] = r.exchange_rate;
        line["solve_residual"] = r.solve_residual;
        line["wall_seconds"] = r.wall_seconds;
        trajectory << line.dump() << '\n';

        const bool checkpoint_epoch = s.spectrum_every > 0 && (r.epoch % s.spectrum_every == 0 || view.final);
        if (!checkpoint_epoch) return;
        const std::string stem = epoch_stem(r.epoch);
        write_checkpoint(dir / "checkpoints" / (stem + ".json"),
                         Checkpoint{view.params, static_cast<std::int64_t>(r.epoch), s.seed});
        if (view.fisher.entries.size() > 0) {
            write_spectrum(dir / "spectra", stem, spectrum(view.fisher, n, m, spec_options));
        }
    };

    const OptimizationResult result = run_optimization(ham, initial, config, observer);
    trajectory.flush();
    const EpochRecord& last = result.trajectory.back();
    if (s.spectrum_every == 0) {
        write_checkpoint(dir / "checkpoints" / (epoch_stem(last.epoch) + ".json"),
                         Checkpoint{result.final_params, static_cast<std::int64_t>(last.epoch), s.seed});
    }

    json summary;
    summary["epochs_run"] = last.epoch;
    summary["final_energy"] = complex_json(last.energy);
    summary["final_energy_variance"] = last.energy_variance;
    summary["reference_energy"] = reference ? json(*reference) : json(nullptr);
    summary["final_rescaled_energy"] = last.rescaled_energy ? json(*last.rescaled_energy) : json(nullptr);
    summary["method"] = std::string(to_string(method));
    summary["backend"] = s.backend;
    summary["wall_seconds"] = last.wall_seconds;
    write_json(dir / "summary.json", summary);

    out << "epochs " << last.epoch << "  energy " << format_number(last.energy.real());
    if (last.rescaled_energy) out << "  rescaled " << format_number(*last.rescaled_energy);
    out << "  -> " << dir.string() << '\n';
    return kExitOk;
}

int cmd_spectrum(const SpectrumSettings& s, std::ostream& out) {
    const Checkpoint ckpt = read_checkpoint(s.checkpoint);
    const RbmParams& params = ckpt.params;
    const bool sampled = s.backend == "mcmc";
    FisherMatrix fisher;
    if (sampled) {
        SamplerConfig cfg;
        cfg.n_samples = s.samples;
        cfg.n_chains = s.chains;
        cfg.burn_in = s.burn_in;
        cfg.move = resolve_move(s.move, nullptr);
        ChainEnsemble ensemble = make_ensemble(params, cfg.n_chains, cfg.move, s.seed);
        fisher = fisher_from_batch(draw_batch(ensemble, params, nullptr, cfg));
    } else {
        EnumerationOptions options;
        options.sector = s.sector == "jz-zero" ? Sector::ZeroMagnetization : Sector::Full;
        fisher = fisher_exact(params, options);
    }
    const SpectrumReport report =
        spectrum(fisher, params.n_visible(), params.n_hidden(), spectrum_options(s.rank_mode, sampled));
    write_spectrum(s.out, "spectrum", report);
    out << spectrum_summary_line(report) << '\n';
    return kExitOk;
}

int cmd_gibbs(const GibbsSettings& s, std::ostream& out) {
    if (s.betas.empty()) throw std::invalid_argument("--beta: the list of inverse temperatures is empty");
    const Lattice lattice = s.lattice == "chain" ? build_chain(s.l, !s.open) : build_square(s.l, !s.open);
    const fs::path dir(s.out);
    fs::create_directories(dir / "checkpoints");
    fs::create_directories(dir / "spectra");

    std::ofstream table(dir / "gibbs.tsv");
    if (!table) throw std::runtime_error("cannot write " + (dir / "gibbs.tsv").string());
    table << "beta\trank\ttrace\n";
    out << "beta\trank\ttrace\n";
    std::mt19937_64 rng(s.seed);
    for (double beta : s.betas) {
        const IsingModel model = IsingModel::ferromagnet(lattice, beta);
        const RbmParams params = gibbs_to_rbm(model);
        write_checkpoint(dir / "checkpoints" / (beta_stem(beta) + ".json"), Checkpoint{params, 0, s.seed});

        std::string rank = "NA";
        double trace = 0.0;
        if (s.fisher == "wolff") {
            SpinConfig x(lattice.n_sites());
            for (std::size_t k = 0; k < s.burn_in; ++k) wolff_update(x, beta, lattice, rng);
            std::vector<SpinConfig> configs;
            configs.reserve(s.samples);
            for (std::size_t k = 0; k < s.samples; ++k) {
                for (std::size_t t = 0; t < s.wolff_steps; ++t) wolff_update(x, beta, lattice, rng);
                configs.push_back(x);
            }
            if (s.rank) {
                const FisherMatrix fisher = fisher_from_batch(batch_from_configs(configs, params, nullptr));
                const SpectrumReport report = spectrum(fisher, params.n_visible(), params.n_hidden(),
                                                       spectrum_options("relative", true));
                write_spectrum(dir / "spectra", beta_stem(beta), report);
                rank = std::to_string(report.rank);
                trace = report.trace;
            } else {
                trace = fisher_trace_from_configs(configs, params);
            }
        } else {
            const SpectrumReport report =
                spectrum(fisher_exact(params), params.n_visible(), params.n_hidden(), spectrum_options("absolute", false));
            write_spectrum(dir / "spectra", beta_stem(beta), report);
            rank = std::to_string(report.rank);
            trace = report.trace;
        }
        const std::string row = format_number(beta) + '\t' + rank + '\t' + format_number(trace) + '\n';
        table << row;
        out << row;
    }
    return kExitOk;
}

int cmd_exact(const ExactSettings& s, std::ostream& out) {
    const Hamiltonian ham = make_hamiltonian(s.model);
    EdOptions options;
    options.sector = ham.conserves_magnetization() ? resolve_sector(s.sector, ham) : Sector::Full;
    const EdResult ed = exact_ground(ham, options);
    json doc;
    doc["ground_energy"] = ed.ground_energy;
    doc["sector"] = std::string(to_string(ed.sector));
    doc["method"] = ed.method;
    doc["dimension"] = ed.basis.size();
    out << "ground_energy\t" << format_number(ed.ground_energy) << '\n'
        << "sector\t" << to_string(ed.sector) << '\n'
        << "method\t" << ed.method << '\n';
    if (!s.checkpoint.empty()) {
        const Checkpoint ckpt = read_checkpoint(s.checkpoint);
        const ExactExpectations ex = exact_expectations(ckpt.params, ham, options.sector);
        doc["variational_energy"] = ex.energy;
        doc["energy_variance"] = ex.gradient.energy_variance;
        out << "variational_energy\t" << format_number(ex.energy) << '\n';
    }
    if (!s.out.empty()) {
        fs::create_directories(s.out);
        write_json(fs::path(s.out) / "exact.json", doc);
    }
    return kExitOk;
}

}  // namespace nqs::cli

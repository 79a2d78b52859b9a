#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gbnet/analysis.hpp"
#include "gbnet/curvature_model.hpp"
#include "gbnet/fokker_planck.hpp"
#include "gbnet/langevin.hpp"
#include "gbnet/snapshot.hpp"
#include "gbnet/vertex_model.hpp"
#include "gbnet/voronoi.hpp"

namespace fs = std::filesystem;
using namespace gbnet;

namespace {

double parse_rate(const std::string& text, const char* what) {
    if (text == "inf") return kInf;
    try {
        return std::stod(text);
    } catch (...) {
        throw CLI::ValidationError(std::string(what) + ": expected a number or 'inf'");
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << text;
}

struct CommonOpts {
    std::string out_dir = "run";
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string energy_kind = "builtin_sine";
    double energy_param = 1.0;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--out", c.out_dir, "output directory");
    cmd->add_option("--seed", c.seed, "master RNG seed");
    cmd->add_option("--jobs", c.jobs, "worker threads for independent trials/particles");
    cmd->add_option("--energy-kind", c.energy_kind, "energy density: builtin_sine or constant");
    cmd->add_option("--energy-param", c.energy_param, "constant energy density value");
}

EnergyModel make_model(const CommonOpts& c) {
    return EnergyModel::from_name(c.energy_kind, c.energy_param);
}

fs::path prepare_out(const CommonOpts& c, const CLI::App& app) {
    fs::path dir(c.out_dir);
    fs::create_directories(dir);
    write_text(dir / "config_used.ini", app.config_to_str(true, true));
    return dir;
}

struct SimOpts {
    CommonOpts common;
    std::string mu = "1.0";
    std::string eta = "inf";
    double gamma = 0.0;
    double dt = 0.0;
    double target_h = 0.01;
    double t_end = kInf;
    double stop_fraction = 0.8;
    int n_grains = 500;
    double mis_std = 0.3;
    int snapshot_every = 0;
};

void add_sim_options(CLI::App* cmd, SimOpts& o, bool vertex) {
    add_common(cmd, o.common);
    if (!vertex) cmd->add_option("--mu", o.mu, "boundary mobility (number or inf)");
    cmd->add_option("--gamma", o.gamma, "orientation relaxation rate");
    cmd->add_option("--eta", o.eta, "junction mobility (number or inf)");
    cmd->add_option("--dt", o.dt, "time step; 0 derives it from the stability bounds");
    cmd->add_option("--target-h", o.target_h, "target node spacing");
    cmd->add_option("--t-end", o.t_end, "hard time limit");
    cmd->add_option("--stop-fraction", o.stop_fraction, "stop when this fraction of grains is gone");
    cmd->add_option("--n-grains", o.n_grains, "initial grain count");
    cmd->add_option("--mis-std", o.mis_std, "initial misorientation standard deviation");
    cmd->add_option("--snapshot-every", o.snapshot_every, "steps between snapshots (0 = final only)");
}

int run_simulation(const SimOpts& o, const CLI::App& app, bool vertex) {
    const EnergyModel model = make_model(o.common);
    const fs::path dir = prepare_out(o.common, app);

    CurvatureConfig cfg;
    cfg.mu = vertex ? kInf : parse_rate(o.mu, "--mu");
    cfg.eta = parse_rate(o.eta, "--eta");
    cfg.gamma = o.gamma;
    cfg.dt = o.dt;
    cfg.target_h = o.target_h;
    cfg.t_end = o.t_end;
    cfg.stop_fraction = o.stop_fraction;
    cfg.n_grains = o.n_grains;
    cfg.mis_std = o.mis_std;
    cfg.seed = o.common.seed;
    cfg.snapshot_every = o.snapshot_every;

    GrainNetwork net = init_voronoi(cfg.n_grains, cfg.mis_std / std::sqrt(2.0), cfg.seed);

    RunObserver obs;
    int snap_index = 0;
    obs.on_snapshot = [&](const GrainNetwork& n, int) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%04d.json", snap_index++);
        save_snapshot(n, (dir / name).string());
    };
    const RunResult result = run(model, net, cfg, obs);
    save_snapshot(net, (dir / "snapshot.json").string());

    std::vector<double> counts(result.grain_count.begin(), result.grain_count.end());
    write_series_csv((dir / "energy.csv").string(), "t,energy,n_grains",
                     {result.time, result.energy, counts});

    std::ofstream ev(dir / "events.csv");
    ev.precision(17);
    ev << "t,event_kind,grain_ids,boundary_ids,delta_e\n";
    for (const EventRecord& r : result.events) {
        ev << r.time << "," << r.kind << ",";
        for (size_t i = 0; i < r.grain_ids.size(); ++i) ev << (i ? " " : "") << r.grain_ids[i];
        ev << ",";
        for (size_t i = 0; i < r.boundary_ids.size(); ++i) ev << (i ? " " : "") << r.boundary_ids[i];
        ev << "," << r.delta_e << "\n";
    }
    std::cout << "steps=" << result.steps << " t=" << net.time
              << " grains=" << net.n_alive_grains() << " events=" << result.events.size() << "\n";
    return 0;
}

struct StateOpts {
    CommonOpts common;
    double gamma = 1.0;
    std::string eta = "1.0";
    double d_param = 0.1;
    double dt = 0.0;
    double t_end = 10.0;
    std::vector<double> anchors{-0.2, -0.1, 1.15, -0.05, 0.5, 1.2};
    std::vector<double> box{0.0, 1.0, 0.0, 1.0};
};

void add_state_options(CLI::App* cmd, StateOpts& o) {
    add_common(cmd, o.common);
    cmd->add_option("--gamma", o.gamma, "misorientation relaxation rate");
    cmd->add_option("--eta", o.eta, "junction mobility");
    cmd->add_option("--d-param", o.d_param, "temperature-like parameter D");
    cmd->add_option("--dt", o.dt, "time step (0 = derive)");
    cmd->add_option("--t-end", o.t_end, "final time");
    cmd->add_option("--anchors", o.anchors, "anchor points x1 y1 x2 y2 x3 y3")->expected(6);
    cmd->add_option("--box", o.box, "Omega_TJ rectangle x0 x1 y0 y1")->expected(4);
}

StateSpace make_space(const StateOpts& o) {
    StateSpace space;
    space.anchors = {Vec2{o.anchors[0], o.anchors[1]}, Vec2{o.anchors[2], o.anchors[3]},
                     Vec2{o.anchors[4], o.anchors[5]}};
    space.omega_tj = Rect{o.box[0], o.box[1], o.box[2], o.box[3]};
    return space;
}

int run_langevin(const StateOpts& o, int n_particles, int n_checkpoints, const CLI::App& app) {
    const EnergyModel model = make_model(o.common);
    const fs::path dir = prepare_out(o.common, app);

    LangevinConfig cfg;
    cfg.gamma = o.gamma;
    cfg.eta = parse_rate(o.eta, "--eta");
    cfg.D = o.d_param;
    cfg.dt = o.dt > 0.0 ? o.dt : 1e-3;
    cfg.n_particles = n_particles;
    cfg.t_end = o.t_end;
    cfg.n_checkpoints = n_checkpoints;
    cfg.space = make_space(o);
    cfg.seed = o.common.seed;

    const EnsembleResult res = run_ensemble(model, cfg, o.common.jobs);

    const StateGrid grid(16, 16, cfg.space.omega_tj);
    std::vector<double> fe(res.samples.size());
    for (size_t k = 0; k < res.samples.size(); ++k) {
        fe[k] = free_energy_estimate(res.samples[k], model, cfg.D, cfg.space, grid);
        char name[64];
        std::snprintf(name, sizeof(name), "samples_t%zu.csv", k);
        std::ofstream out(dir / name);
        out.precision(17);
        out << "d1,d2,d3,ax,ay\n";
        for (const ParticleState& s : res.samples[k]) {
            out << s.mis.d1 << "," << s.mis.d2 << "," << s.mis.d3 << "," << s.a.x << "," << s.a.y
                << "\n";
        }
    }
    write_series_csv((dir / "free_energy.csv").string(), "t,estimate",
                     {res.checkpoint_times, fe});
    std::cout << "particles=" << cfg.n_particles << " checkpoints=" << res.samples.size()
              << " rejected_steps=" << res.rejected_steps << "\n";
    return 0;
}

int run_fp(const StateOpts& o, int n_mis, int n_a, int n_checkpoints, const CLI::App& app) {
    const EnergyModel model = make_model(o.common);
    const fs::path dir = prepare_out(o.common, app);

    const StateSpace space = make_space(o);
    const StateGrid grid(n_mis, n_a, space.omega_tj);
    FpConfig cfg;
    cfg.gamma = o.gamma;
    cfg.eta = parse_rate(o.eta, "--eta");
    cfg.D = o.d_param;
    FpSolver solver(grid, space, model, {cfg.gamma, cfg.eta, cfg.D, 1.0});
    cfg.dt = o.dt > 0.0 ? o.dt : 0.9 * solver.stable_dt();
    FpSolver stepper(grid, space, model, cfg);

    const FpField ref = stepper.boltzmann_reference();
    FpField f = stepper.uniform_field();

    const int n_steps = static_cast<int>(std::ceil(o.t_end / cfg.dt));
    const int record_every = std::max(1, n_steps / 200);
    std::vector<double> ts, l2s, fes, masses;
    const int checkpoint_every = std::max(1, n_steps / std::max(1, n_checkpoints));
    int marginal_index = 0;
    for (int s = 0; s <= n_steps; ++s) {
        if (s % record_every == 0) {
            ts.push_back(s * cfg.dt);
            l2s.push_back(stepper.weighted_l2_distance(f, ref));
            fes.push_back(stepper.free_energy(f));
            masses.push_back(stepper.mass(f));
        }
        if (s % checkpoint_every == 0) {
            const auto rho1 = stepper.marginal_rho1(f);
            const auto rho2 = stepper.marginal_rho2(f);
            char name[64];
            std::snprintf(name, sizeof(name), "rho1_t%03d.csv", marginal_index);
            std::ofstream r1(dir / name);
            r1.precision(17);
            r1 << "u,v,density\n";
            for (int iu = 0; iu < grid.n_mis; ++iu)
                for (int iv = 0; iv < grid.n_mis; ++iv)
                    r1 << grid.uc(iu) << "," << grid.vc(iv) << ","
                       << rho1[grid.mis_index(iu, iv)] << "\n";
            std::snprintf(name, sizeof(name), "rho2_t%03d.csv", marginal_index);
            std::ofstream r2(dir / name);
            r2.precision(17);
            r2 << "ax,ay,density\n";
            for (int ia = 0; ia < grid.n_a; ++ia)
                for (int ja = 0; ja < grid.n_a; ++ja)
                    r2 << grid.axc(ia) << "," << grid.ayc(ja) << "," << rho2[ia * grid.n_a + ja]
                       << "\n";
            ++marginal_index;
        }
        if (s < n_steps) f = stepper.step(f);
    }
    write_series_csv((dir / "fp_decay.csv").string(), "t,weighted_l2,free_energy,mass",
                     {ts, l2s, fes, masses});
    std::cout << "steps=" << n_steps << " dt=" << cfg.dt << " final_l2=" << l2s.back() << "\n";
    return 0;
}

int run_analyze(const std::string& snapshot_path, const std::string& node_choice,
                const CommonOpts& common, int gbcd_bins, int ratio_bins, const CLI::App& app) {
    const EnergyModel model = make_model(common);
    const fs::path dir = prepare_out(common, app);

    const GrainNetwork net = load_snapshot(snapshot_path);
    const NodeChoice choice =
        node_choice == "far_junction" ? NodeChoice::FarJunction : NodeChoice::NearestNode;
    const NetworkAnalysis a = analyze_network(model, net, choice, gbcd_bins, ratio_bins);

    write_histogram_csv(a.gbcd_hist, (dir / "gbcd.csv").string());
    write_histogram_csv(a.r1, (dir / "r1.csv").string());
    write_histogram_csv(a.r2, (dir / "r2.csv").string());
    write_histogram_csv(a.r3, (dir / "r3.csv").string());
    write_series_csv((dir / "fit.csv").string(), "d_star,kl_star",
                     {{a.fit.d_star}, {a.fit.kl_star}});

    std::ofstream meta(dir / "analysis_meta.json");
    meta << "{\n"
         << "  \"node_choice\": \"" << node_choice << "\",\n"
         << "  \"ratio_range\": [0.0, 5.0],\n"
         << "  \"skipped_junctions\": " << a.skipped_junctions << ",\n"
         << "  \"overflow\": {\n"
         << "    \"r1\": [" << a.r1.overflow_below << ", " << a.r1.overflow_above << "],\n"
         << "    \"r2\": [" << a.r2.overflow_below << ", " << a.r2.overflow_above << "],\n"
         << "    \"r3\": [" << a.r3.overflow_below << ", " << a.r3.overflow_above << "]\n"
         << "  },\n"
         << "  \"fit_boundary_pinned\": " << (a.fit.boundary_pinned ? "true" : "false") << "\n"
         << "}\n";
    std::cout << "d_star=" << a.fit.d_star << " kl_star=" << a.fit.kl_star << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D grain-boundary network simulation laboratory"};
    app.set_config("--config", "", "configuration file (INI, sections per subcommand)");
    app.require_subcommand(1);

    SimOpts curv, vert;
    auto* sim_c = app.add_subcommand("simulate-curvature", "curvature-driven network evolution");
    add_sim_options(sim_c, curv, false);
    auto* sim_v = app.add_subcommand("simulate-vertex", "vertex model (straight boundaries)");
    add_sim_options(sim_v, vert, true);

    StateOpts lang;
    int n_particles = 10000, lang_checkpoints = 8;
    auto* lv = app.add_subcommand("langevin", "Euler-Maruyama single-junction ensemble");
    add_state_options(lv, lang);
    lv->add_option("--n-particles", n_particles, "ensemble size");
    lv->add_option("--checkpoints", lang_checkpoints, "number of sample checkpoints");

    StateOpts fp;
    int n_mis = 16, n_a = 16, fp_checkpoints = 4;
    auto* fv = app.add_subcommand("fp-solve", "finite-volume Fokker-Planck solver");
    add_state_options(fv, fp);
    fv->add_option("--n-mis", n_mis, "misorientation cells per axis");
    fv->add_option("--n-a", n_a, "junction cells per axis");
    fv->add_option("--checkpoints", fp_checkpoints, "number of marginal checkpoints");

    CommonOpts an_common;
    std::string snapshot_path, node_choice = "nearest_node";
    int gbcd_bins = 64, ratio_bins = 100;
    auto* av = app.add_subcommand("analyze", "GBCD, temperature fit and R-ratio statistics");
    add_common(av, an_common);
    av->add_option("--snapshot", snapshot_path, "snapshot JSON to analyze")->required();
    av->add_option("--node-choice", node_choice, "nearest_node or far_junction")
        ->check(CLI::IsMember({"nearest_node", "far_junction"}));
    av->add_option("--gbcd-bins", gbcd_bins, "GBCD bin count");
    av->add_option("--ratio-bins", ratio_bins, "R-ratio bin count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim_c->parsed()) return run_simulation(curv, app, false);
        if (sim_v->parsed()) return run_simulation(vert, app, true);
        if (lv->parsed()) return run_langevin(lang, n_particles, lang_checkpoints, app);
        if (fv->parsed()) return run_fp(fp, n_mis, n_a, fp_checkpoints, app);
        if (av->parsed())
            return run_analyze(snapshot_path, node_choice, an_common, gbcd_bins, ratio_bins, app);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

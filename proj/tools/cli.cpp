#include "cli.hpp"

#include <CLI11.hpp>

#include "macforge/config.hpp"
#include "macforge/dqn_agent.hpp"
#include "macforge/harness.hpp"

namespace macforge::cli {

namespace {

using config::Config;
using harness::ExperimentWriter;

// Flags shared by every experiment-flavored subcommand.
struct Common {
    std::string config_path;
    long long seed = 1;
    std::string rules = "";
    std::string output_dir;
    int jobs = 1;
    std::string catalog = "full";

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "key = value config file");
        app->add_option("--seed", seed, "master seed; all randomness derives from it");
        app->add_option("--rules", rules, "rule table: 'default' or a list like R1,R3");
        app->add_option("--output-dir", output_dir, "directory for result files");
        app->add_option("--jobs", jobs, "worker threads for independent runs");
        app->add_option("--catalog", catalog, "block catalog restriction, e.g. ack,cs");
    }

    Config load(const CLI::App* app) const {
        Config cfg =
            config_path.empty() ? Config{} : Config::from_file(config_path);
        // Flags passed explicitly override file values.
        if (app->count("--seed")) cfg.set("seed", std::to_string(seed));
        if (app->count("--rules")) cfg.set("rules", rules);
        if (app->count("--catalog")) cfg.set("catalog", catalog);
        return cfg;
    }
};

std::vector<std::uint64_t> eval_seed_list(std::uint64_t master, int count) {
    return harness::make_seeds(master, count, 0xE7A1);
}

std::string genome_with_value_line(const blocks::Genome& g, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return blocks::to_string(g) + " -> " + buf;
}

struct ScenarioFlags {
    int scenario = 0;
    long long nodes = -1;
    double load_bps = -1.0;
    double ber = -1.0;
    double duration = -1.0;
    long long packet_bytes = -1;

    void attach(CLI::App* app) {
        app->add_option("--scenario", scenario, "scenario preset 1..8");
        app->add_option("--nodes", nodes, "override node count");
        app->add_option("--load-bps", load_bps, "override per-node offered load (bits/s)");
        app->add_option("--ber", ber, "override bit error rate");
        app->add_option("--duration", duration, "override simulated seconds");
        app->add_option("--packet-bytes", packet_bytes, "override application packet size");
    }

    void overlay(const CLI::App* app, Config& cfg) const {
        if (app->count("--scenario")) cfg.set("scenario", std::to_string(scenario));
        if (app->count("--nodes")) cfg.set("nodes", std::to_string(nodes));
        if (app->count("--load-bps")) cfg.set("load_bps", std::to_string(load_bps));
        if (app->count("--ber")) cfg.set("ber", std::to_string(ber));
        if (app->count("--duration")) cfg.set("duration_s", std::to_string(duration));
        if (app->count("--packet-bytes")) cfg.set("packet_bytes", std::to_string(packet_bytes));
    }
};

agents::AgentConfig agent_from_config(const Config& cfg) {
    agents::AgentConfig a;
    a.alpha = cfg.get_double_or("alpha", a.alpha);
    a.gamma = cfg.get_double_or("gamma", a.gamma);
    a.epsilon = cfg.get_double_or("epsilon", a.epsilon);
    a.steps_per_episode = static_cast<int>(cfg.get_int_or("steps_per_episode", a.steps_per_episode));
    a.history_len = static_cast<int>(cfg.get_int_or("history_len", a.history_len));
    a.sim_seconds_per_step = cfg.get_double_or("sim_seconds_per_step", a.sim_seconds_per_step);
    return a;
}

std::vector<std::pair<std::string, std::string>> manifest_entries(const Config& cfg,
                                                                  const std::string& kind) {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("experiment", kind);
    out.emplace_back("version", "0.1.0");
    for (const auto& [k, v] : cfg.entries()) out.emplace_back(k, v);
    return out;
}

int run_inner(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"MAC protocol synthesis workbench: compose building blocks, validate them, "
                 "simulate the result, and search the space with reinforcement learning"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "print help for every subcommand");

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand("simulate", "run one deterministic simulation");
    Common sim_common;
    ScenarioFlags sim_sc;
    std::string sim_genome;
    bool sim_header = false;
    bool sim_aloha = false;
    bool sim_dcf = false;
    sim_common.attach(sim_cmd);
    sim_sc.attach(sim_cmd);
    sim_cmd->add_option("--genome", sim_genome,
                        "genome string, e.g. BEB,ACK,off,off,off,15,CS,54");
    sim_cmd->add_flag("--header", sim_header, "print the CSV header line first");
    sim_cmd->add_flag("--aloha", sim_aloha, "simulate the pure ALOHA baseline instead");
    sim_cmd->add_flag("--dcf", sim_dcf, "simulate the DCF reference genome");

    // ---- validate ----
    auto* val_cmd = app.add_subcommand("validate", "check a genome against the dependency rules");
    Common val_common;
    std::string val_genome;
    val_common.attach(val_cmd);
    val_cmd->add_option("--genome", val_genome, "genome string")->required();

    // ---- sweep ----
    auto* sweep_cmd =
        app.add_subcommand("sweep", "exhaustively rank every valid genome (ground-truth oracle)");
    Common sweep_common;
    ScenarioFlags sweep_sc;
    int sweep_eval_seeds = 3;
    double sweep_sim_seconds = 2.0;
    double sweep_goal_tol = harness::kDefaultGoalTol;
    int sweep_top = 0;
    sweep_common.attach(sweep_cmd);
    sweep_sc.attach(sweep_cmd);
    sweep_cmd->add_option("--eval-seeds", sweep_eval_seeds, "seeds averaged per genome");
    sweep_cmd->add_option("--sim-seconds", sweep_sim_seconds, "simulated seconds per evaluation");
    sweep_cmd->add_option("--goal-tol", sweep_goal_tol,
                          "relative tolerance of the goal equivalence class");
    sweep_cmd->add_option("--top", sweep_top, "print only the first N rows");

    // ---- train ----
    auto* train_cmd = app.add_subcommand("train", "train an agent on one scenario");
    Common train_common;
    ScenarioFlags train_sc;
    std::string train_agent = "tabular";
    int train_episodes = 60;
    int train_eval_seeds = 3;
    double train_goal_tol = harness::kDefaultGoalTol;
    double train_gamma = -1.0;
    double train_epsilon = -1.0;
    train_common.attach(train_cmd);
    train_sc.attach(train_cmd);
    train_cmd->add_option("--agent", train_agent, "tabular or dqn");
    train_cmd->add_option("--episodes", train_episodes, "training episodes");
    train_cmd->add_option("--eval-seeds", train_eval_seeds, "seeds averaged per evaluation");
    train_cmd->add_option("--goal-tol", train_goal_tol, "goal equivalence tolerance");
    train_cmd->add_option("--gamma", train_gamma, "discount factor (0.8 default, 0.9 selectable)");
    train_cmd->add_option("--epsilon", train_epsilon, "exploration probability");
    double train_sim_seconds = -1.0;
    train_cmd->add_option("--sim-seconds", train_sim_seconds,
                          "simulated seconds per reward evaluation");
    int train_steps = -1;
    train_cmd->add_option("--steps", train_steps, "steps per episode");

    // ---- compare-aloha ----
    auto* aloha_cmd = app.add_subcommand(
        "compare-aloha", "train on the restricted catalog and compare against pure ALOHA");
    Common aloha_common;
    int aloha_episodes = 40;
    int aloha_eval_seeds = 3;
    double aloha_goal_tol = harness::kDefaultGoalTol;
    aloha_common.attach(aloha_cmd);
    aloha_cmd->add_option("--episodes", aloha_episodes, "training episodes per scenario");
    aloha_cmd->add_option("--eval-seeds", aloha_eval_seeds, "seeds averaged per evaluation");
    aloha_cmd->add_option("--goal-tol", aloha_goal_tol, "goal equivalence tolerance");

    // ---- compare-dcf ----
    auto* dcf_cmd =
        app.add_subcommand("compare-dcf", "node-ramp comparison against the DCF reference");
    Common dcf_common;
    std::string dcf_ramp = "low";
    int dcf_episodes = 12;
    int dcf_eval_seeds = 2;
    dcf_common.attach(dcf_cmd);
    dcf_cmd->add_option("--ramp", dcf_ramp, "low (1..15 nodes) or high (25..50 nodes)");
    dcf_cmd->add_option("--episodes", dcf_episodes, "training episodes per node count");
    dcf_cmd->add_option("--eval-seeds", dcf_eval_seeds, "seeds averaged per evaluation");

    // ---- blocks-report ----
    auto* blocks_cmd = app.add_subcommand(
        "blocks-report", "block-selection frequencies over repeated trainings");
    Common blocks_common;
    int blocks_reps = 20;
    int blocks_episodes = 40;
    int blocks_eval_seeds = 2;
    double blocks_goal_tol = harness::kDefaultGoalTol;
    blocks_common.attach(blocks_cmd);
    blocks_cmd->add_option("--repetitions", blocks_reps, "independent trainings per scenario");
    blocks_cmd->add_option("--episodes", blocks_episodes, "training episodes per repetition");
    blocks_cmd->add_option("--eval-seeds", blocks_eval_seeds, "seeds averaged per evaluation");
    blocks_cmd->add_option("--goal-tol", blocks_goal_tol, "goal equivalence tolerance");

    // ---- gradcheck ----
    auto* grad_cmd = app.add_subcommand(
        "gradcheck", "verify network gradients against central finite differences");
    Common grad_common;
    int grad_seeds = 10;
    grad_common.attach(grad_cmd);
    grad_cmd->add_option("--seeds", grad_seeds, "number of random networks to check");

    // CLI11 wants mutable argv; feed it a reversed copy.
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (sim_cmd->parsed()) {
        Config cfg = sim_common.load(sim_cmd);
        sim_sc.overlay(sim_cmd, cfg);
        if (sim_cmd->count("--genome")) cfg.set("genome", sim_genome);
        const sim::Scenario sc = cfg.scenario();
        sim::SimResult res;
        if (sim_aloha) {
            res = sim::run_pure_aloha(sc);
        } else if (sim_dcf) {
            res = sim::run_dcf(sc);
        } else {
            const auto genome = blocks::parse_genome(cfg.get("genome"));
            res = sim::run(genome, sc, cfg.rules());
        }
        if (sim_header) out << sim::SimResult::csv_header() << "\n";
        out << res.csv_row() << "\n";
        return 0;
    }

    if (val_cmd->parsed()) {
        Config cfg = val_common.load(val_cmd);
        const auto genome = blocks::parse_genome(val_genome);
        const auto rep = logic::validate(genome, cfg.rules());
        if (rep.valid) {
            out << "valid\n";
        } else {
            out << "invalid:";
            for (const auto& v : rep.violations) out << " " << v.rule_id;
            out << "\n";
            for (const auto& v : rep.violations) out << "  " << v.rule_id << ": " << v.message << "\n";
        }
        for (const auto& n : rep.notices) out << "note " << n.rule_id << ": " << n.message << "\n";
        if (rep.valid) {
            out << "execution order:";
            for (const auto stage : logic::execution_order(genome, cfg.rules()))
                out << " " << logic::stage_name(stage);
            out << "\n";
        }
        return 0;
    }

    if (sweep_cmd->parsed()) {
        Config cfg = sweep_common.load(sweep_cmd);
        sweep_sc.overlay(sweep_cmd, cfg);
        agents::GenomeEnv::Options opts;
        opts.scenario = cfg.scenario();
        opts.catalog = blocks::Catalog::parse(cfg.get_or("catalog", "full"));
        opts.rules = cfg.rules();
        opts.eval_seeds = eval_seed_list(opts.scenario.seed, sweep_eval_seeds);
        opts.sim_seconds_per_step = sweep_sim_seconds;
        agents::GenomeEnv env(opts);
        const auto sweep = harness::exhaustive_sweep(env, sweep_goal_tol, sweep_common.jobs);
        std::string csv = sweep.csv();
        if (sweep_top > 0) {
            std::size_t pos = 0;
            int lines = 0;
            while (pos < csv.size() && lines <= sweep_top) {
                pos = csv.find('\n', pos) + 1;
                ++lines;
            }
            csv.resize(pos);
        }
        out << csv;
        if (!sweep_common.output_dir.empty()) {
            ExperimentWriter w("sweep", sweep_common.output_dir);
            w.write_manifest(manifest_entries(cfg, "sweep"));
            w.write_file("ranking.csv", sweep.csv());
            err << "wrote " << w.dir().string() << "\n";
        }
        return 0;
    }

    if (train_cmd->parsed()) {
        Config cfg = train_common.load(train_cmd);
        train_sc.overlay(train_cmd, cfg);
        if (train_cmd->count("--gamma")) cfg.set("gamma", std::to_string(train_gamma));
        if (train_cmd->count("--epsilon")) cfg.set("epsilon", std::to_string(train_epsilon));
        if (train_cmd->count("--sim-seconds"))
            cfg.set("sim_seconds_per_step", std::to_string(train_sim_seconds));
        if (train_cmd->count("--steps")) cfg.set("steps_per_episode", std::to_string(train_steps));
        const agents::AgentConfig acfg = agent_from_config(cfg);
        agents::GenomeEnv::Options opts;
        opts.scenario = cfg.scenario();
        opts.catalog = blocks::Catalog::parse(cfg.get_or("catalog", "full"));
        opts.rules = cfg.rules();
        opts.eval_seeds = eval_seed_list(opts.scenario.seed, train_eval_seeds);
        opts.sim_seconds_per_step = acfg.sim_seconds_per_step;
        agents::GenomeEnv env(opts);
        const auto sweep = harness::exhaustive_sweep(env, train_goal_tol, train_common.jobs);
        env.set_goal_anchor(sweep.best_mean, train_goal_tol);

        ExperimentWriter w("train", train_common.output_dir);
        blocks::Genome learned;
        if (train_agent == "tabular") {
            agents::QTable q(env.space_signature());
            rng::Stream explore(opts.scenario.seed, rng::StreamKind::Agent);
            agents::VisitedSet visited;
            const int goal_state = env.state_id(sweep.goal());
            for (int e = 0; e < train_episodes; ++e) {
                const auto stats = agents::run_episode(env, q, acfg, goal_state,
                                                       env.default_start(), explore, visited);
                err << "episode " << (e + 1) << " goal_visits " << stats.goal_visits
                    << " mean_reward " << stats.mean_reward << "\n";
            }
            learned = agents::greedy_readout(env, q, acfg, env.default_start());
            q.save_csv((w.dir() / "qtable.csv").string());
        } else if (train_agent == "dqn") {
            nn::DqnConfig dcfg;
            dcfg.gamma = acfg.gamma;
            const auto net = agents::dqn_train(env, acfg, dcfg, {64, 64, 64}, train_episodes,
                                               opts.scenario.seed);
            learned = agents::dqn_readout(env, net, acfg, env.default_start());
            net.save((w.dir() / "weights.bin").string());
        } else {
            err << "error: unknown agent '" << train_agent << "'\n";
            return 1;
        }
        w.write_manifest(manifest_entries(cfg, "train-" + train_agent));
        w.write_file("learned.txt", genome_with_value_line(learned, env.raw_value(learned)) + "\n");
        out << "goal " << blocks::to_string(sweep.goal()) << "\n";
        out << "learned " << genome_with_value_line(learned, env.raw_value(learned)) << "\n";
        err << "wrote " << w.dir().string() << "\n";
        return 0;
    }

    if (aloha_cmd->parsed()) {
        Config cfg = aloha_common.load(aloha_cmd);
        const agents::AgentConfig acfg = agent_from_config(cfg);
        const auto rows = harness::aloha_comparison(
            aloha_episodes, static_cast<std::uint64_t>(cfg.get_int_or("seed", 1)),
            aloha_eval_seeds, acfg, aloha_goal_tol, aloha_common.jobs);
        out << harness::aloha_csv(rows);
        if (!aloha_common.output_dir.empty()) {
            ExperimentWriter w("compare-aloha", aloha_common.output_dir);
            w.write_manifest(manifest_entries(cfg, "compare-aloha"));
            w.write_file("comparison.csv", harness::aloha_csv(rows));
            err << "wrote " << w.dir().string() << "\n";
        }
        return 0;
    }

    if (dcf_cmd->parsed()) {
        Config cfg = dcf_common.load(dcf_cmd);
        const agents::AgentConfig acfg = agent_from_config(cfg);
        harness::Ramp ramp;
        if (dcf_ramp == "low") ramp = harness::Ramp::Low;
        else if (dcf_ramp == "high") ramp = harness::Ramp::High;
        else {
            err << "error: --ramp must be low or high\n";
            return 1;
        }
        const auto rows = harness::dcf_comparison(
            ramp, dcf_episodes, static_cast<std::uint64_t>(cfg.get_int_or("seed", 1)),
            dcf_eval_seeds, acfg, dcf_common.jobs);
        out << harness::dcf_csv(rows);
        if (!dcf_common.output_dir.empty()) {
            ExperimentWriter w("compare-dcf", dcf_common.output_dir);
            w.write_manifest(manifest_entries(cfg, "compare-dcf-" + dcf_ramp));
            w.write_file("comparison.csv", harness::dcf_csv(rows));
            err << "wrote " << w.dir().string() << "\n";
        }
        return 0;
    }

    if (blocks_cmd->parsed()) {
        Config cfg = blocks_common.load(blocks_cmd);
        const agents::AgentConfig acfg = agent_from_config(cfg);
        const auto report = harness::block_selection_report(
            blocks_reps, blocks_episodes, static_cast<std::uint64_t>(cfg.get_int_or("seed", 1)),
            blocks_eval_seeds, acfg, blocks::Catalog::parse(cfg.get_or("catalog", "full")),
            blocks_goal_tol, blocks_common.jobs);
        out << report.wide_csv();
        if (!blocks_common.output_dir.empty()) {
            ExperimentWriter w("blocks-report", blocks_common.output_dir);
            w.write_manifest(manifest_entries(cfg, "blocks-report"));
            w.write_file("selection.csv", report.wide_csv());
            w.write_file("selection_long.csv", report.long_csv());
            err << "wrote " << w.dir().string() << "\n";
        }
        return 0;
    }

    if (grad_cmd->parsed()) {
        Config cfg = grad_common.load(grad_cmd);
        const std::uint64_t master = static_cast<std::uint64_t>(cfg.get_int_or("seed", 1));
        double worst = 0.0;
        for (int i = 0; i < grad_seeds; ++i) {
            const std::uint64_t seed = rng::mix64(master + static_cast<std::uint64_t>(i));
            const auto net = nn::Mlp::make({23, 8, 8, 8, 22}, seed);
            std::vector<double> x(23);
            rng::Stream s(seed, rng::StreamKind::Sample);
            for (auto& v : x) v = s.next_unit();
            const double errv = net.gradient_check(x, static_cast<int>(s.next_below(21)),
                                                   s.next_unit());
            worst = std::max(worst, errv);
            char buf[96];
            std::snprintf(buf, sizeof(buf), "seed %d max_rel_err %.3e\n", i, errv);
            out << buf;
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "worst %.3e threshold 1e-4 -> %s\n", worst,
                      worst < 1e-4 ? "PASS" : "FAIL");
        out << buf;
        return worst < 1e-4 ? 0 : 2;
    }

    err << "error: no subcommand\n";
    return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return run_inner(args, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace macforge::cli

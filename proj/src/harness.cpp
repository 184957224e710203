#include "macforge/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>

namespace macforge::harness {

std::vector<std::uint64_t> make_seeds(std::uint64_t master, int count, std::uint64_t tag) {
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(rng::draw_u64(master, rng::stream_id(rng::StreamKind::Sample, tag),
                                    static_cast<std::uint64_t>(i)));
    return out;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    const int workers = std::min<int>(jobs, static_cast<int>(n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

namespace {

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

int SweepResult::first_rank(const std::function<bool(const Genome&)>& pred) const {
    for (std::size_t i = 0; i < ranked.size(); ++i)
        if (pred(ranked[i].genome)) return static_cast<int>(i) + 1;
    return 0;
}

std::string SweepResult::csv() const {
    std::string out = "rank,genome,genome_id,mean_normalized_throughput\n";
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += blocks::to_string(ranked[i].genome);
        out += ',';
        out += std::to_string(blocks::genome_id(ranked[i].genome));
        out += ',';
        out += format_double(ranked[i].mean);
        out += '\n';
    }
    return out;
}

SweepResult exhaustive_sweep(GenomeEnv& env, double goal_tol, int jobs) {
    const auto all = blocks::enumerate_genomes(env.options().catalog);
    std::vector<Genome> valid;
    valid.reserve(all.size());
    for (const auto& g : all)
        if (logic::validate(g, env.options().rules).valid) valid.push_back(g);

    std::vector<double> means(valid.size(), 0.0);
    const GenomeEnv::Options& opts = env.options();
    parallel_for(valid.size(), jobs,
                 [&](std::size_t i) { means[i] = GenomeEnv::evaluate(opts, valid[i]); });

    std::vector<std::pair<std::uint32_t, double>> primed;
    primed.reserve(valid.size());
    for (std::size_t i = 0; i < valid.size(); ++i)
        primed.emplace_back(blocks::genome_id(valid[i]), means[i]);
    env.prime(primed);

    SweepResult res;
    res.goal_tol = goal_tol;
    res.ranked.reserve(valid.size());
    for (std::size_t i = 0; i < valid.size(); ++i) res.ranked.push_back({valid[i], means[i]});
    res.best_mean = 0.0;
    for (const auto& e : res.ranked) res.best_mean = std::max(res.best_mean, e.mean);
    const double floor = (1.0 - goal_tol) * res.best_mean;
    std::sort(res.ranked.begin(), res.ranked.end(), [&](const SweepEntry& a, const SweepEntry& b) {
        const bool at = a.mean >= floor, bt = b.mean >= floor;
        if (at != bt) return at;
        if (at) return a.genome < b.genome;  // top class: simplest first
        if (a.mean != b.mean) return a.mean > b.mean;
        return a.genome < b.genome;
    });
    return res;
}

double reward_throughput(const sim::SimResult& r) { return r.normalized_throughput; }

double reward_energy_weighted(const sim::SimResult& r, double w0, double w1) {
    const double delivery =
        r.offered_payload_bits == 0
            ? 0.0
            : static_cast<double>(r.delivered_payload_bits) /
                  static_cast<double>(r.offered_payload_bits);
    const double energy_per_bit =
        static_cast<double>(r.energy_units) /
        static_cast<double>(std::max<std::uint64_t>(r.delivered_payload_bits, 1));
    return w0 * delivery - w1 * energy_per_bit;
}

int ConvergenceResult::episodes_to(double threshold) const {
    for (std::size_t e = 0; e < mean_visits.size(); ++e)
        if (mean_visits[e] >= threshold) return static_cast<int>(e) + 1;
    return 0;
}

std::string ConvergenceResult::csv() const {
    std::string out = "episode,mean_goal_visits";
    for (std::size_t s = 0; s < visits.size(); ++s) out += ",seed" + std::to_string(s);
    out += '\n';
    for (std::size_t e = 0; e < mean_visits.size(); ++e) {
        out += std::to_string(e + 1);
        out += ',';
        out += format_double(mean_visits[e]);
        for (const auto& per_seed : visits) {
            out += ',';
            out += std::to_string(per_seed[e]);
        }
        out += '\n';
    }
    return out;
}

ConvergenceResult convergence_experiment(const GenomeEnv::Options& target,
                                         const std::optional<GenomeEnv::Options>& warm_from,
                                         int episodes,
                                         const std::vector<std::uint64_t>& train_seeds,
                                         const AgentConfig& cfg, double goal_tol, int jobs) {
    ConvergenceResult res;
    GenomeEnv env(target);
    res.sweep = exhaustive_sweep(env, goal_tol, jobs);
    env.set_goal_anchor(res.sweep.best_mean, goal_tol);
    res.goal = res.sweep.goal();
    const int goal_state = env.state_id(res.goal);

    std::optional<GenomeEnv> warm_env;
    int warm_goal_state = 0;
    if (warm_from) {
        warm_env.emplace(*warm_from);
        const SweepResult warm_sweep = exhaustive_sweep(*warm_env, goal_tol, jobs);
        warm_env->set_goal_anchor(warm_sweep.best_mean, goal_tol);
        warm_goal_state = warm_env->state_id(warm_sweep.goal());
    }

    for (std::size_t si = 0; si < train_seeds.size(); ++si) {
        QTable q(env.space_signature());
        rng::Stream explore(train_seeds[si], rng::StreamKind::Agent);
        if (warm_env) {
            QTable warm_q(warm_env->space_signature());
            agents::VisitedSet warm_visited;
            for (int e = 0; e < episodes; ++e)
                agents::run_episode(*warm_env, warm_q, cfg, warm_goal_state,
                                    warm_env->default_start(), explore, warm_visited);
            q = agents::warm_start(warm_q, env.space_signature());
        }
        agents::VisitedSet visited;
        std::vector<int> per_episode;
        per_episode.reserve(static_cast<std::size_t>(episodes));
        for (int e = 0; e < episodes; ++e) {
            const auto stats =
                agents::run_episode(env, q, cfg, goal_state, env.default_start(), explore, visited);
            per_episode.push_back(stats.goal_visits);
        }
        res.visits.push_back(std::move(per_episode));
    }

    res.mean_visits.assign(static_cast<std::size_t>(episodes), 0.0);
    for (const auto& per_seed : res.visits)
        for (std::size_t e = 0; e < per_seed.size(); ++e)
            res.mean_visits[e] += per_seed[e];
    for (auto& v : res.mean_visits) v /= static_cast<double>(res.visits.size());
    return res;
}

Catalog aloha_restricted_catalog() {
    return Catalog::of({blocks::BlockId::Ack, blocks::BlockId::Backoff,
                        blocks::BlockId::ContentionWindow, blocks::BlockId::CarrierSense,
                        blocks::BlockId::DataRate});
}

namespace {

// Shared: sweep + train + read out the learned genome for one scenario.
Genome train_and_read(GenomeEnv& env, int episodes, std::uint64_t train_seed,
                      const AgentConfig& cfg, double goal_tol, int jobs, bool anchored) {
    if (anchored && !env.anchored()) {
        const SweepResult sweep = exhaustive_sweep(env, goal_tol, jobs);
        env.set_goal_anchor(sweep.best_mean, goal_tol);
    }
    QTable q(env.space_signature());
    rng::Stream explore(train_seed, rng::StreamKind::Agent);
    agents::VisitedSet visited;
    const int goal_state = -1;  // visits not tracked here
    for (int e = 0; e < episodes; ++e)
        agents::run_episode(env, q, cfg, goal_state, env.default_start(), explore, visited);
    return agents::greedy_readout(env, q, cfg, env.default_start());
}

}  // namespace

std::vector<AlohaRow> aloha_comparison(int episodes, std::uint64_t master_seed,
                                       int eval_seed_count, const AgentConfig& cfg,
                                       double goal_tol, int jobs) {
    std::vector<AlohaRow> rows;
    const auto eval_seeds = make_seeds(master_seed, eval_seed_count, 0xA10A);
    for (int id = 1; id <= 8; ++id) {
        GenomeEnv::Options opts;
        opts.scenario = sim::Scenario::preset(id);
        opts.scenario.seed = master_seed;
        opts.catalog = aloha_restricted_catalog();
        opts.eval_seeds = eval_seeds;
        opts.sim_seconds_per_step = cfg.sim_seconds_per_step;
        GenomeEnv env(opts);
        const Genome learned =
            train_and_read(env, episodes, rng::mix64(master_seed + id), cfg, goal_tol, jobs, true);

        double aloha_sum = 0.0;
        sim::Scenario sc = opts.scenario;
        sc.duration_s = cfg.sim_seconds_per_step;
        for (const auto s : eval_seeds) {
            sc.seed = s;
            aloha_sum += sim::run_pure_aloha(sc).normalized_throughput;
        }
        rows.push_back({id, learned, env.raw_value(learned),
                         aloha_sum / static_cast<double>(eval_seeds.size())});
    }
    return rows;
}

std::string aloha_csv(const std::vector<AlohaRow>& rows) {
    std::string out = "scenario,learned_genome,learned_normalized_throughput,"
                      "aloha_normalized_throughput\n";
    for (const auto& r : rows) {
        out += std::to_string(r.scenario_id);
        out += ',';
        out += blocks::to_string(r.learned);
        out += ',';
        out += format_double(r.learned_value);
        out += ',';
        out += format_double(r.aloha_value);
        out += '\n';
    }
    return out;
}

std::vector<DcfRow> dcf_comparison(Ramp ramp, int episodes_per_count, std::uint64_t master_seed,
                                   int eval_seed_count, const AgentConfig& cfg, int jobs) {
    (void)jobs;
    const int first = ramp == Ramp::Low ? 1 : 25;
    const int last = ramp == Ramp::Low ? 15 : 50;
    const double load = ramp == Ramp::Low ? sim::kLowLoadBps : sim::kHighLoadBps;
    const double dwell_s = ramp == Ramp::Low ? 3.0 : 2.0;
    const auto eval_seeds = make_seeds(master_seed, eval_seed_count, 0xDCF);

    std::vector<DcfRow> rows;
    QTable carried;  // warm-started down the ramp
    std::string carried_sig;
    rng::Stream explore(master_seed, rng::StreamKind::Agent, 0xDCF);
    for (int n = first; n <= last; ++n) {
        GenomeEnv::Options opts;
        opts.scenario.num_nodes = n;
        opts.scenario.per_node_load_bps = load;
        opts.scenario.ber = 0.0;  // no noise on the ramps
        opts.scenario.label = (ramp == Ramp::Low ? "ramp-low-n" : "ramp-high-n") + std::to_string(n);
        opts.eval_seeds = eval_seeds;
        opts.sim_seconds_per_step = dwell_s;
        GenomeEnv env(opts);

        QTable q = carried_sig == env.space_signature()
                       ? agents::warm_start(carried, env.space_signature())
                       : QTable(env.space_signature());
        agents::VisitedSet visited;
        for (int e = 0; e < episodes_per_count; ++e)
            agents::run_episode(env, q, cfg, -1, env.default_start(), explore, visited);
        // Deploy the best configuration measured while training at this
        // node count (the incumbent start state is always in the pool).
        Genome learned = env.default_start();
        double learned_value = env.raw_value(learned);
        for (std::size_t i = 0; i < visited.size(); ++i) {
            const Genome g = env.genome_of(visited.at(i));
            const double v = env.raw_value(g);
            if (v > learned_value) {
                learned_value = v;
                learned = g;
            }
        }

        double dcf_sum = 0.0;
        sim::Scenario sc = opts.scenario;
        sc.duration_s = dwell_s;
        for (const auto s : eval_seeds) {
            sc.seed = s;
            dcf_sum += sim::run_dcf(sc).normalized_throughput;
        }
        rows.push_back({n, learned, env.raw_value(learned),
                         dcf_sum / static_cast<double>(eval_seeds.size())});
        carried = q;
        carried_sig = env.space_signature();
    }
    return rows;
}

std::string dcf_csv(const std::vector<DcfRow>& rows) {
    std::string out =
        "node_count,learned_genome,learned_normalized_throughput,dcf_normalized_throughput\n";
    for (const auto& r : rows) {
        out += std::to_string(r.node_count);
        out += ',';
        out += blocks::to_string(r.learned);
        out += ',';
        out += format_double(r.learned_value);
        out += ',';
        out += format_double(r.dcf_value);
        out += '\n';
    }
    return out;
}

std::string BlockReport::wide_csv() const {
    std::string out = "scenario";
    for (int b = 0; b < blocks::kNumBlocks; ++b) {
        out += ',';
        out += blocks::block_name(static_cast<blocks::BlockId>(b));
    }
    out += '\n';
    for (std::size_t s = 0; s < counts.size(); ++s) {
        out += std::to_string(s + 1);
        for (int b = 0; b < blocks::kNumBlocks; ++b) {
            int best_opt = 0;
            for (int o = 1; o < blocks::kDomainSizes[b]; ++o)
                if (counts[s][static_cast<std::size_t>(b)][static_cast<std::size_t>(o)] >
                    counts[s][static_cast<std::size_t>(b)][static_cast<std::size_t>(best_opt)])
                    best_opt = o;
            out += ',';
            out += blocks::option_name(static_cast<blocks::BlockId>(b), best_opt);
            out += '(';
            out += std::to_string(
                counts[s][static_cast<std::size_t>(b)][static_cast<std::size_t>(best_opt)]);
            out += ')';
        }
        out += '\n';
    }
    return out;
}

std::string BlockReport::long_csv() const {
    std::string out = "scenario,block,option,count\n";
    for (std::size_t s = 0; s < counts.size(); ++s) {
        for (int b = 0; b < blocks::kNumBlocks; ++b) {
            for (int o = 0; o < blocks::kDomainSizes[b]; ++o) {
                out += std::to_string(s + 1);
                out += ',';
                out += blocks::block_name(static_cast<blocks::BlockId>(b));
                out += ',';
                out += blocks::option_name(static_cast<blocks::BlockId>(b), o);
                out += ',';
                out += std::to_string(
                    counts[s][static_cast<std::size_t>(b)][static_cast<std::size_t>(o)]);
                out += '\n';
            }
        }
    }
    return out;
}

BlockReport block_selection_report(int repetitions, int episodes, std::uint64_t master_seed,
                                   int eval_seed_count, const AgentConfig& cfg,
                                   const Catalog& catalog, double goal_tol, int jobs) {
    BlockReport rep;
    rep.repetitions = repetitions;
    rep.counts.assign(8, {});
    const auto eval_seeds = make_seeds(master_seed, eval_seed_count, 0xB10C);
    for (int id = 1; id <= 8; ++id) {
        GenomeEnv::Options opts;
        opts.scenario = sim::Scenario::preset(id);
        opts.catalog = catalog;
        opts.eval_seeds = eval_seeds;
        opts.sim_seconds_per_step = cfg.sim_seconds_per_step;
        GenomeEnv env(opts);
        const SweepResult sweep = exhaustive_sweep(env, goal_tol, jobs);
        env.set_goal_anchor(sweep.best_mean, goal_tol);
        for (int r = 0; r < repetitions; ++r) {
            const Genome learned = train_and_read(
                env, episodes, rng::mix64(master_seed ^ (static_cast<std::uint64_t>(id) << 16) ^
                                          static_cast<std::uint64_t>(r)),
                cfg, goal_tol, jobs, true);
            for (int b = 0; b < blocks::kNumBlocks; ++b)
                rep.counts[static_cast<std::size_t>(id - 1)][static_cast<std::size_t>(b)]
                          [learned.opt[b]]++;
        }
    }
    return rep;
}

ExperimentWriter::ExperimentWriter(const std::string& kind, const std::string& explicit_dir) {
    if (!explicit_dir.empty()) {
        dir_ = explicit_dir;
    } else {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        const auto stamp = std::chrono::duration_cast<std::chrono::seconds>(now).count();
        dir_ = std::filesystem::path("runs") / (kind + "-" + std::to_string(stamp));
    }
    std::filesystem::create_directories(dir_);
}

void ExperimentWriter::write_manifest(
    const std::vector<std::pair<std::string, std::string>>& entries) const {
    std::string out = "# experiment manifest\n";
    for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    write_file("manifest.txt", out);
}

void ExperimentWriter::write_file(const std::string& name, const std::string& content) const {
    std::ofstream out(dir_ / name);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    out << content;
}

}  // namespace macforge::harness

#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include "macforge/harness.hpp"

using namespace macforge;
using namespace macforge::harness;
using blocks::Catalog;
using blocks::Genome;

TEST_CASE("derived seeds are distinct and reproducible") {
    const auto a = make_seeds(1, 16, 7);
    const auto b = make_seeds(1, 16, 7);
    CHECK(a == b);
    CHECK(std::set<std::uint64_t>(a.begin(), a.end()).size() == 16);
    CHECK(make_seeds(2, 16, 7) != a);
}

TEST_CASE("parallel_for covers every index exactly once") {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), 3, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
}

TEST_CASE("sweep on a tiny catalog equals per-genome manual runs") {
    agents::GenomeEnv::Options o;
    o.scenario = sim::Scenario::preset(1);
    o.catalog = Catalog::parse("ack,cs");
    o.eval_seeds = {21, 22, 23};
    o.sim_seconds_per_step = 0.5;
    agents::GenomeEnv env(o);
    const auto sweep = exhaustive_sweep(env, 0.04, 2);
    REQUIRE(sweep.ranked.size() == 4);

    // Oracle identity: each ranked mean equals the mean of direct runs.
    for (const auto& e : sweep.ranked) {
        double manual = 0.0;
        for (const auto seed : o.eval_seeds) {
            sim::Scenario sc = o.scenario;
            sc.duration_s = o.sim_seconds_per_step;
            sc.seed = seed;
            manual += sim::run(e.genome, sc).normalized_throughput;
        }
        manual /= static_cast<double>(o.eval_seeds.size());
        CHECK(e.mean == doctest::Approx(manual).epsilon(1e-12));
    }
    // Rank 1 is the goal and lies in the tolerance class.
    CHECK(sweep.goal() == sweep.ranked[0].genome);
    CHECK(sweep.ranked[0].mean >= (1.0 - sweep.goal_tol) * sweep.best_mean);
    // Deterministic output.
    agents::GenomeEnv env2(o);
    CHECK(exhaustive_sweep(env2, 0.04, 1).csv() == sweep.csv());
    // first_rank finds predicates.
    CHECK(sweep.first_rank([](const Genome&) { return true; }) == 1);
    CHECK(sweep.first_rank([](const Genome&) { return false; }) == 0);
}

TEST_CASE("reward functions") {
    sim::SimResult r;
    r.offered_payload_bits = 1000;
    r.delivered_payload_bits = 600;
    r.energy_units = 50;
    r.normalized_throughput = 0.5;
    CHECK(reward_throughput(r) == 0.5);
    CHECK(reward_energy_weighted(r, 1.0, 0.0) == doctest::Approx(0.6));
    CHECK(reward_energy_weighted(r, 0.0, 0.0) == 0.0);
    sim::SimResult dead;
    dead.offered_payload_bits = 1000;
    dead.energy_units = 40;
    CHECK(reward_energy_weighted(dead, 1.0, 0.5) < 0.0);  // energy with no deliveries
}

TEST_CASE("convergence experiment on a tiny space") {
    agents::GenomeEnv::Options o;
    o.scenario = sim::Scenario::preset(1);
    o.catalog = Catalog::parse("ack,cs");
    o.eval_seeds = {31, 32};
    o.sim_seconds_per_step = 0.5;
    agents::AgentConfig cfg;
    cfg.steps_per_episode = 40;
    const auto res =
        convergence_experiment(o, std::nullopt, 8, make_seeds(3, 2, 0xC0), cfg, 0.04, 2);
    REQUIRE(res.mean_visits.size() == 8);
    REQUIRE(res.visits.size() == 2);
    // Four states: the agent converges almost immediately.
    CHECK(res.mean_visits.back() >= 30.0);
    CHECK(res.episodes_to(30.0) >= 1);
    CHECK(res.episodes_to(1e9) == 0);
    // CSV shape: header + one row per episode.
    const std::string csv = res.csv();
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);

    // Warm start from the same environment is at least as fast.
    const auto warm = convergence_experiment(o, o, 8, make_seeds(3, 2, 0xC0), cfg, 0.04, 2);
    CHECK(warm.episodes_to(30.0) <= res.episodes_to(30.0));
}

TEST_CASE("block report has the documented shape") {
    agents::AgentConfig cfg;
    cfg.steps_per_episode = 30;
    cfg.sim_seconds_per_step = 0.2;
    const auto rep =
        block_selection_report(2, 2, 5, 1, cfg, Catalog::parse("ack,cs"), 0.04, 2);
    const std::string wide = rep.wide_csv();
    // Header plus eight scenario rows, nine columns each.
    const auto lines = std::count(wide.begin(), wide.end(), '\n');
    CHECK(lines == 9);
    std::size_t pos = 0;
    int row = 0;
    while ((pos = wide.find('\n', pos)) != std::string::npos) {
        ++pos;
        ++row;
    }
    CHECK(row == 9);
    const std::string first_line = wide.substr(0, wide.find('\n'));
    CHECK(std::count(first_line.begin(), first_line.end(), ',') == 8);
    // Long form: 8 scenarios x 29 options.
    const std::string lng = rep.long_csv();
    CHECK(std::count(lng.begin(), lng.end(), '\n') == 1 + 8 * 29);
    // Counts per block per scenario sum to the repetition count.
    for (const auto& sc : rep.counts) {
        for (int b = 0; b < blocks::kNumBlocks; ++b) {
            int sum = 0;
            for (int opt = 0; opt < blocks::kDomainSizes[b]; ++opt)
                sum += sc[static_cast<std::size_t>(b)][static_cast<std::size_t>(opt)];
            CHECK(sum == 2);
        }
    }
}

TEST_CASE("experiment writer creates manifest and files") {
    const auto dir = std::filesystem::temp_directory_path() / "macforge_writer_test";
    std::filesystem::remove_all(dir);
    ExperimentWriter w("unit", dir.string());
    w.write_manifest({{"alpha", "1.0"}, {"scenario", "3"}});
    w.write_file("data.csv", "a,b\n1,2\n");
    CHECK(std::filesystem::exists(dir / "manifest.txt"));
    CHECK(std::filesystem::exists(dir / "data.csv"));
    std::ifstream in(dir / "manifest.txt");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("alpha = 1.0") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("aloha and dcf csv forms") {
    std::vector<AlohaRow> rows{{1, sim::dcf_genome(), 0.5, 0.25}};
    const auto csv = aloha_csv(rows);
    CHECK(csv.find("scenario,learned_genome") == 0);
    CHECK(csv.find("BEB,ACK,off,off,off,15,CS,54") != std::string::npos);
    std::vector<DcfRow> drows{{3, sim::dcf_genome(), 0.5, 0.4}};
    CHECK(dcf_csv(drows).find("node_count,") == 0);
}

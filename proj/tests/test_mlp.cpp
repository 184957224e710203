#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "macforge/dqn.hpp"
#include "macforge/mlp.hpp"
#include "macforge/rng.hpp"

using namespace macforge;
using nn::Mlp;

TEST_CASE("zero weights map everything to zero") {
    const Mlp m = Mlp::zeros({23, 8, 8, 8, 22});
    const auto out = m.forward(std::vector<double>(23, 0.7));
    for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("first-layer scaling scales pre-activations linearly") {
    Mlp m = Mlp::make({4, 3}, 5);  // single affine layer, linear output
    for (auto& b : m.biases()[0]) b = 0.0;
    const std::vector<double> x{0.3, -0.2, 0.9, 0.1};
    const auto base = m.forward(x);
    Mlp scaled = m;
    for (auto& w : scaled.weights()[0]) w *= 3.0;
    const auto out = scaled.forward(x);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == doctest::Approx(3.0 * base[i]));
}

TEST_CASE("initialization and forward are deterministic in the seed") {
    const Mlp a = Mlp::make({23, 64, 64, 64, 22}, 42);
    const Mlp b = Mlp::make({23, 64, 64, 64, 22}, 42);
    CHECK(a == b);
    std::vector<double> x(23);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.01 * static_cast<double>(i + 1);
    CHECK(a.forward(x) == b.forward(x));
    const Mlp c = Mlp::make({23, 64, 64, 64, 22}, 43);
    CHECK(a.forward(x) != c.forward(x));
    CHECK_THROWS_AS(a.forward(std::vector<double>(22, 0.0)), std::invalid_argument);
}

TEST_CASE("hand-computed single-weight gradient") {
    // One weight w=1, input 2, target 1: loss (wx - y)^2 = 1,
    // dloss/dw = 2x(wx - y) = 4.
    Mlp m = Mlp::zeros({1, 1});
    m.weights()[0][0] = 1.0;
    auto grad = m.zero_grad();
    const double loss = m.forward_backward({2.0}, 0, 1.0, grad);
    CHECK(loss == doctest::Approx(1.0));
    CHECK(grad.W[0][0] == doctest::Approx(4.0));
    CHECK(grad.b[0][0] == doctest::Approx(2.0));
}

TEST_CASE("analytic gradients match finite differences") {
    std::vector<double> x(23);
    rng::Stream s(7, rng::StreamKind::Sample);
    for (auto& v : x) v = s.next_unit();
    for (std::uint64_t seed : {1ull, 2ull}) {
        const Mlp m = Mlp::make({23, 8, 8, 8, 22}, seed);
        const double err = m.gradient_check(x, 3, 0.5);
        CHECK(err < 1e-4);
    }
}

TEST_CASE("weights survive a save/load round trip") {
    const Mlp m = Mlp::make({23, 8, 8, 8, 22}, 11);
    const auto path = std::filesystem::temp_directory_path() / "macforge_mlp_test.bin";
    m.save(path.string());
    const Mlp back = Mlp::load(path.string());
    CHECK(m == back);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(Mlp::load("/nonexistent/net.bin"), std::runtime_error);
}

TEST_CASE("dqn step: zero error means zero loss and no movement") {
    Mlp net = Mlp::zeros({4, 3});
    const Mlp target = net;
    nn::Transition t;
    t.state = {1.0, 0.0, 0.0, 0.0};
    t.action = 1;
    t.reward = 0.0;  // prediction 0 == target 0
    t.next_state = {0.0, 1.0, 0.0, 0.0};
    t.next_valid = {0, 1, 2};
    const Mlp before = net;
    const double loss = nn::dqn_step(net, {&t}, target, nn::DqnConfig{});
    CHECK(loss == 0.0);
    CHECK(net == before);
}

TEST_CASE("dqn loss is non-negative and decreases on a fixed regression") {
    Mlp net = Mlp::make({4, 8, 8, 8, 3}, 3);
    nn::DqnConfig cfg;
    cfg.learning_rate = 5e-3;
    cfg.gamma = 0.0;  // pure regression toward rewards
    std::vector<nn::Transition> data;
    rng::Stream s(6, rng::StreamKind::Sample);
    for (int i = 0; i < 16; ++i) {
        nn::Transition t;
        t.state = {s.next_unit(), s.next_unit(), s.next_unit(), s.next_unit()};
        t.action = static_cast<int>(s.next_below(2));
        t.reward = t.state[0] - 0.5;
        t.next_state = t.state;
        t.next_valid = {0, 1, 2};
        data.push_back(std::move(t));
    }
    std::vector<const nn::Transition*> batch;
    for (const auto& t : data) batch.push_back(&t);
    const Mlp target = net;
    double first = -1.0, last = -1.0;
    for (int it = 0; it < 400; ++it) {
        const double loss = nn::dqn_step(net, batch, target, cfg);
        CHECK(loss >= 0.0);
        if (it == 0) first = loss;
        last = loss;
    }
    CHECK(last < 0.2 * first);
}

TEST_CASE("replay buffer is a bounded ring with uniform sampling") {
    nn::ReplayBuffer buf(1000);
    for (int i = 0; i < 2500; ++i) {
        nn::Transition t;
        t.state = {static_cast<double>(i)};
        buf.push(std::move(t));
        CHECK(buf.size() <= 1000);
    }
    CHECK(buf.size() == 1000);

    // Chi-square uniformity over 10 bins at the 0.01 level (critical
    // value 21.67 for 9 degrees of freedom).
    rng::Stream s(42, rng::StreamKind::Sample);
    const int draws = 100000;
    int bins[10] = {};
    for (int i = 0; i < draws; ++i) {
        const auto sample = buf.sample(1, s);
        const int idx = static_cast<int>(sample[0]->state[0]);
        bins[(idx - 1500) / 100]++;
    }
    const double expect = draws / 10.0;
    double chi2 = 0.0;
    for (int b = 0; b < 10; ++b) chi2 += (bins[b] - expect) * (bins[b] - expect) / expect;
    CHECK(chi2 < 21.67);
}

TEST_CASE("target network refreshes on the copy interval") {
    nn::DqnConfig cfg;
    cfg.target_copy_interval = 3;
    cfg.learning_rate = 1e-2;
    nn::DqnTrainer trainer(Mlp::make({2, 4, 2}, 1), cfg);
    nn::ReplayBuffer buf(10);
    nn::Transition t;
    t.state = {1.0, -1.0};
    t.action = 0;
    t.reward = 1.0;
    t.next_state = {1.0, -1.0};
    t.next_valid = {0, 1};
    buf.push(t);
    rng::Stream s(5, rng::StreamKind::Sample);
    trainer.train_step(buf, s);
    trainer.train_step(buf, s);
    CHECK(trainer.net() != trainer.target());
    trainer.train_step(buf, s);  // third step copies
    CHECK(trainer.net() == trainer.target());
}

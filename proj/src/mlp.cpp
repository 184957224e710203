#include "macforge/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "macforge/kernels.hpp"
#include "macforge/rng.hpp"

namespace macforge::nn {

namespace {

constexpr char kMagic[4] = {'M', 'F', 'W', '1'};
constexpr std::uint32_t kVersion = 1;

double normal_draw(rng::Stream& s) {
    // Box-Muller; consumes two uniforms.
    const double u1 = std::max(s.next_unit(), 1e-300);
    const double u2 = s.next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

Mlp Mlp::make(const std::vector<int>& widths, std::uint64_t seed) {
    if (widths.size() < 2) throw std::invalid_argument("mlp needs at least input and output widths");
    Mlp m;
    m.widths_ = widths;
    rng::Stream stream(seed, rng::StreamKind::Init);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const int rows = widths[l + 1];
        const int cols = widths[l];
        const double scale = std::sqrt(2.0 / cols);
        std::vector<double> W(static_cast<std::size_t>(rows) * cols);
        for (auto& w : W) w = scale * normal_draw(stream);
        m.W_.push_back(std::move(W));
        m.b_.emplace_back(static_cast<std::size_t>(rows), 0.0);
    }
    return m;
}

Mlp Mlp::zeros(const std::vector<int>& widths) {
    Mlp m = make(widths, 0);
    for (auto& layer : m.W_) std::fill(layer.begin(), layer.end(), 0.0);
    return m;
}

std::vector<double> Mlp::forward(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != input_size()) {
        throw std::invalid_argument("mlp forward: expected input length " +
                                    std::to_string(input_size()) + ", got " +
                                    std::to_string(x.size()));
    }
    const auto& k = kernels::ops();
    std::vector<double> act = x;
    std::vector<double> next;
    for (std::size_t l = 0; l < W_.size(); ++l) {
        const auto rows = static_cast<std::size_t>(widths_[l + 1]);
        const auto cols = static_cast<std::size_t>(widths_[l]);
        next.assign(rows, 0.0);
        k.matvec(W_[l].data(), act.data(), b_[l].data(), next.data(), rows, cols);
        if (l + 1 < W_.size()) k.relu(next.data(), rows);
        act.swap(next);
    }
    return act;
}

Mlp::Grad Mlp::zero_grad() const {
    Grad g;
    for (std::size_t l = 0; l < W_.size(); ++l) {
        g.W.emplace_back(W_[l].size(), 0.0);
        g.b.emplace_back(b_[l].size(), 0.0);
    }
    return g;
}

double Mlp::forward_backward(const std::vector<double>& x, int action, double target,
                             Grad& acc) const {
    if (static_cast<int>(x.size()) != input_size())
        throw std::invalid_argument("mlp forward_backward: bad input length");
    if (action < 0 || action >= output_size())
        throw std::invalid_argument("mlp forward_backward: action out of range");
    const auto& k = kernels::ops();
    const std::size_t L = W_.size();

    // Forward keeping pre-activations per layer.
    std::vector<std::vector<double>> acts(L + 1);
    std::vector<std::vector<double>> pre(L);
    acts[0] = x;
    for (std::size_t l = 0; l < L; ++l) {
        const auto rows = static_cast<std::size_t>(widths_[l + 1]);
        const auto cols = static_cast<std::size_t>(widths_[l]);
        pre[l].assign(rows, 0.0);
        k.matvec(W_[l].data(), acts[l].data(), b_[l].data(), pre[l].data(), rows, cols);
        acts[l + 1] = pre[l];
        if (l + 1 < L) k.relu(acts[l + 1].data(), rows);
    }

    const double err = acts[L][static_cast<std::size_t>(action)] - target;
    const double loss = err * err;

    std::vector<double> dz(acts[L].size(), 0.0);
    dz[static_cast<std::size_t>(action)] = 2.0 * err;
    for (std::size_t l = L; l-- > 0;) {
        const auto rows = static_cast<std::size_t>(widths_[l + 1]);
        const auto cols = static_cast<std::size_t>(widths_[l]);
        if (l + 1 < L) k.relu_grad(pre[l].data(), dz.data(), rows);
        k.outer_acc(acc.W[l].data(), dz.data(), acts[l].data(), rows, cols);
        k.axpy(1.0, dz.data(), acc.b[l].data(), rows);
        if (l > 0) {
            std::vector<double> dx(cols, 0.0);
            k.matvec_t(W_[l].data(), dz.data(), dx.data(), rows, cols);
            dz.swap(dx);
        }
    }
    return loss;
}

void Mlp::apply_grad(const Grad& g, double lr, double scale) {
    const auto& k = kernels::ops();
    const double a = -lr / scale;
    for (std::size_t l = 0; l < W_.size(); ++l) {
        k.axpy(a, g.W[l].data(), W_[l].data(), W_[l].size());
        k.axpy(a, g.b[l].data(), b_[l].data(), b_[l].size());
    }
}

double Mlp::gradient_check(const std::vector<double>& x, int action, double target) const {
    Grad analytic = zero_grad();
    forward_backward(x, action, target, analytic);

    Mlp probe = *this;
    const double h = 1e-5;
    double worst = 0.0;
    auto loss_at = [&]() {
        const auto out = probe.forward(x);
        const double e = out[static_cast<std::size_t>(action)] - target;
        return e * e;
    };
    for (std::size_t l = 0; l < W_.size(); ++l) {
        for (int which = 0; which < 2; ++which) {
            auto& params = which == 0 ? probe.W_[l] : probe.b_[l];
            const auto& grads = which == 0 ? analytic.W[l] : analytic.b[l];
            for (std::size_t i = 0; i < params.size(); ++i) {
                const double keep = params[i];
                params[i] = keep + h;
                const double up = loss_at();
                params[i] = keep - h;
                const double dn = loss_at();
                params[i] = keep;
                const double numeric = (up - dn) / (2.0 * h);
                const double denom = std::max({std::fabs(grads[i]), std::fabs(numeric), 1e-8});
                worst = std::max(worst, std::fabs(grads[i] - numeric) / denom);
            }
        }
    }
    return worst;
}

void Mlp::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(kMagic, 4);
    const std::uint32_t ver = kVersion;
    const std::uint32_t n = static_cast<std::uint32_t>(widths_.size());
    const std::uint32_t reserved = 0;
    out.write(reinterpret_cast<const char*>(&ver), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&reserved), 4);
    for (int w : widths_) {
        const std::uint32_t v = static_cast<std::uint32_t>(w);
        out.write(reinterpret_cast<const char*>(&v), 4);
    }
    for (std::size_t l = 0; l < W_.size(); ++l) {
        out.write(reinterpret_cast<const char*>(W_[l].data()),
                  static_cast<std::streamsize>(W_[l].size() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(b_[l].data()),
                  static_cast<std::streamsize>(b_[l].size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

Mlp Mlp::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    char magic[4];
    std::uint32_t ver = 0, n = 0, reserved = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&ver), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&reserved), 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("'" + path + "' is not a weight file");
    if (ver != kVersion) throw std::runtime_error("unsupported weight file version");
    Mlp m;
    m.widths_.resize(n);
    for (auto& w : m.widths_) {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        w = static_cast<int>(v);
    }
    for (std::size_t l = 0; l + 1 < m.widths_.size(); ++l) {
        const std::size_t rows = static_cast<std::size_t>(m.widths_[l + 1]);
        const std::size_t cols = static_cast<std::size_t>(m.widths_[l]);
        std::vector<double> W(rows * cols);
        std::vector<double> b(rows);
        in.read(reinterpret_cast<char*>(W.data()),
                static_cast<std::streamsize>(W.size() * sizeof(double)));
        in.read(reinterpret_cast<char*>(b.data()),
                static_cast<std::streamsize>(b.size() * sizeof(double)));
        m.W_.push_back(std::move(W));
        m.b_.push_back(std::move(b));
    }
    if (!in) throw std::runtime_error("truncated weight file '" + path + "'");
    return m;
}

}  // namespace macforge::nn

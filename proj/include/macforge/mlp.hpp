#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace macforge::nn {

// Small fully-connected network: affine layers with ReLU between them and
// a linear output. Double precision throughout; forward passes are
// deterministic given weights and input.
class Mlp {
public:
    Mlp() = default;
    // He-scaled random init from a seeded stream.
    static Mlp make(const std::vector<int>& widths, std::uint64_t seed);
    static Mlp zeros(const std::vector<int>& widths);

    // Direct parameter access (row-major per layer).
    std::vector<std::vector<double>>& weights() { return W_; }
    std::vector<std::vector<double>>& biases() { return b_; }
    const std::vector<std::vector<double>>& weights() const { return W_; }
    const std::vector<std::vector<double>>& biases() const { return b_; }

    int input_size() const { return widths_.front(); }
    int output_size() const { return widths_.back(); }
    const std::vector<int>& widths() const { return widths_; }

    // Throws std::invalid_argument if x.size() != input_size().
    std::vector<double> forward(const std::vector<double>& x) const;

    struct Grad {
        std::vector<std::vector<double>> W;
        std::vector<std::vector<double>> b;
    };
    Grad zero_grad() const;

    // Squared error on one output unit: loss = (out[action] - target)^2.
    // Accumulates parameter gradients into `acc` and returns the loss.
    double forward_backward(const std::vector<double>& x, int action, double target,
                            Grad& acc) const;

    // theta -= lr/scale * grad
    void apply_grad(const Grad& g, double lr, double scale = 1.0);

    // Max relative error between the analytic gradient and central finite
    // differences (step 1e-5) over every parameter.
    double gradient_check(const std::vector<double>& x, int action, double target) const;

    // Flat binary format with a 16-byte header (magic, version, layer
    // count) followed by the layer widths and row-major weights; see
    // README for the exact layout.
    void save(const std::string& path) const;
    static Mlp load(const std::string& path);

    bool operator==(const Mlp&) const = default;

private:
    std::vector<int> widths_;
    std::vector<std::vector<double>> W_;  // [layer] rows x cols, row-major
    std::vector<std::vector<double>> b_;
};

}  // namespace macforge::nn

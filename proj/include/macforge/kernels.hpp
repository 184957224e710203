#pragma once

#include <cstddef>

// Dense double-precision kernels behind the neural-network code paths.
// A scalar reference implementation always exists; on x86-64 an AVX2/FMA
// variant is selected at runtime when the CPU supports it. The two are
// equivalence-tested against each other.
namespace macforge::kernels {

struct Ops {
    // y = W x + b, W row-major (rows x cols)
    void (*matvec)(const double* W, const double* x, const double* b, double* y,
                   std::size_t rows, std::size_t cols);
    // gx = W^T g
    void (*matvec_t)(const double* W, const double* g, double* gx, std::size_t rows,
                     std::size_t cols);
    // GW += g x^T (rank-1 accumulate)
    void (*outer_acc)(double* GW, const double* g, const double* x, std::size_t rows,
                      std::size_t cols);
    void (*relu)(double* v, std::size_t n);
    // g[i] = pre[i] > 0 ? g[i] : 0
    void (*relu_grad)(const double* pre, double* g, std::size_t n);
    // y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    const char* name;
};

const Ops& scalar_ops();

// AVX2 variant; null on platforms where it was not compiled in.
const Ops* avx2_ops();
bool avx2_supported();

// Active backend: AVX2 when supported, else scalar. The environment
// variable MACFORGE_KERNELS=scalar|avx2 overrides, as does force_backend.
const Ops& ops();
void force_backend(const char* name);  // "scalar", "avx2" or "auto"

}  // namespace macforge::kernels

#include "macforge/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace macforge::kernels {

namespace {

void matvec_scalar(const double* W, const double* x, const double* b, double* y,
                   std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = W + r * cols;
        double acc = b ? b[r] : 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void matvec_t_scalar(const double* W, const double* g, double* gx, std::size_t rows,
                     std::size_t cols) {
    for (std::size_t c = 0; c < cols; ++c) gx[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = W + r * cols;
        const double gr = g[r];
        for (std::size_t c = 0; c < cols; ++c) gx[c] += row[c] * gr;
    }
}

void outer_acc_scalar(double* GW, const double* g, const double* x, std::size_t rows,
                      std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        double* row = GW + r * cols;
        const double gr = g[r];
        for (std::size_t c = 0; c < cols; ++c) row[c] += gr * x[c];
    }
}

void relu_scalar(double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (v[i] < 0.0) v[i] = 0.0;
}

void relu_grad_scalar(const double* pre, double* g, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (pre[i] <= 0.0) g[i] = 0.0;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

const Ops kScalar = {matvec_scalar, matvec_t_scalar, outer_acc_scalar, relu_scalar,
                     relu_grad_scalar, axpy_scalar, dot_scalar, "scalar"};

std::atomic<const Ops*> g_active{nullptr};

const Ops* pick_default() {
    if (const char* env = std::getenv("MACFORGE_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return &kScalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_ops()) return avx2_ops();
    }
    if (avx2_supported() && avx2_ops()) return avx2_ops();
    return &kScalar;
}

}  // namespace

const Ops& scalar_ops() { return kScalar; }

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops& ops() {
    const Ops* p = g_active.load(std::memory_order_acquire);
    if (!p) {
        p = pick_default();
        g_active.store(p, std::memory_order_release);
    }
    return *p;
}

void force_backend(const char* name) {
    if (std::strcmp(name, "scalar") == 0) {
        g_active.store(&kScalar, std::memory_order_release);
    } else if (std::strcmp(name, "avx2") == 0) {
        if (!avx2_ops() || !avx2_supported())
            throw std::runtime_error("avx2 kernels unavailable on this machine");
        g_active.store(avx2_ops(), std::memory_order_release);
    } else if (std::strcmp(name, "auto") == 0) {
        g_active.store(nullptr, std::memory_order_release);
    } else {
        throw std::invalid_argument(std::string("unknown kernel backend '") + name + "'");
    }
}

}  // namespace macforge::kernels

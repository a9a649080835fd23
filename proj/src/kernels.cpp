// Copyright 2026 The molunfold authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mu/kernels.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace mu::kernels {

namespace scalar {

double sum_sq_pair_dist(const double* xyz, const uint32_t* a, const uint32_t* b,
                        size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double* p = xyz + 3 * a[i];
        const double* q = xyz + 3 * b[i];
        double dx = p[0] - q[0];
        double dy = p[1] - q[1];
        double dz = p[2] - q[2];
        acc += dx * dx + dy * dy + dz * dz;
    }
    return acc;
}

void bsb_step(double* x, double* y, const double* grad, size_t n, double dt, double a0,
              double harm, double c0) {
    for (size_t i = 0; i < n; ++i) {
        y[i] += dt * (-harm * x[i] - c0 * grad[i]);
        x[i] += dt * a0 * y[i];
        if (x[i] > 1.0) {
            x[i] = 1.0;
            y[i] = 0.0;
        } else if (x[i] < -1.0) {
            x[i] = -1.0;
            y[i] = 0.0;
        }
    }
}

void add_parity_term(double* energies, size_t size, uint64_t mask, double coeff) {
    for (size_t z = 0; z < size; ++z) {
        bool odd = std::popcount(z & mask) & 1u;
        energies[z] += odd ? -coeff : coeff;
    }
}

void rx_layer(std::complex<double>* sv, size_t size, size_t stride, double c,
              double s) {
    for (size_t base = 0; base < size; base += 2 * stride) {
        for (size_t j = 0; j < stride; ++j) {
            std::complex<double> a = sv[base + j];
            std::complex<double> b = sv[base + stride + j];
            // -i * s * w for w = u + iv is (s*v, -s*u).
            sv[base + j] = {c * a.real() + s * b.imag(), c * a.imag() - s * b.real()};
            sv[base + stride + j] = {c * b.real() + s * a.imag(),
                                     c * b.imag() - s * a.real()};
        }
    }
}

double expectation_diag(const std::complex<double>* sv, const double* energies,
                        size_t size) {
    double acc = 0.0;
    for (size_t z = 0; z < size; ++z)
        acc += (sv[z].real() * sv[z].real() + sv[z].imag() * sv[z].imag()) * energies[z];
    return acc;
}

}  // namespace scalar

namespace {

struct KernelTable {
    double (*sum_sq_pair_dist)(const double*, const uint32_t*, const uint32_t*, size_t);
    void (*bsb_step)(double*, double*, const double*, size_t, double, double, double,
                     double);
    void (*add_parity_term)(double*, size_t, uint64_t, double);
    void (*rx_layer)(std::complex<double>*, size_t, size_t, double, double);
    double (*expectation_diag)(const std::complex<double>*, const double*, size_t);
};

constexpr KernelTable kScalarTable{scalar::sum_sq_pair_dist, scalar::bsb_step,
                                   scalar::add_parity_term, scalar::rx_layer,
                                   scalar::expectation_diag};

#if defined(MU_HAVE_AVX2_TU)
constexpr KernelTable kAvx2Table{avx2::sum_sq_pair_dist, avx2::bsb_step,
                                 avx2::add_parity_term, avx2::rx_layer,
                                 avx2::expectation_diag};
#endif

bool cpu_has_avx2() {
#if defined(MU_HAVE_AVX2_TU) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend g_backend = Backend::Auto;
const KernelTable* g_table = nullptr;

const KernelTable* resolve(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return &kScalarTable;
        case Backend::Avx2:
#if defined(MU_HAVE_AVX2_TU)
            if (cpu_has_avx2()) return &kAvx2Table;
#endif
            throw std::runtime_error("AVX2 kernels are not available on this CPU");
        case Backend::Auto:
        default:
#if defined(MU_HAVE_AVX2_TU)
            if (cpu_has_avx2()) return &kAvx2Table;
#endif
            return &kScalarTable;
    }
}

const KernelTable& table() {
    if (!g_table) {
        Backend b = Backend::Auto;
        if (const char* env = std::getenv("MU_KERNELS")) {
            if (std::strcmp(env, "scalar") == 0) b = Backend::Scalar;
            else if (std::strcmp(env, "avx2") == 0) b = Backend::Avx2;
        }
        g_table = resolve(b);
        g_backend = (g_table == &kScalarTable) ? Backend::Scalar : Backend::Avx2;
    }
    return *g_table;
}

}  // namespace

void set_backend(Backend backend) {
    g_table = resolve(backend);
    g_backend = (g_table == &kScalarTable) ? Backend::Scalar : Backend::Avx2;
}

Backend active_backend() {
    table();
    return g_backend;
}

const char* backend_name() {
    return active_backend() == Backend::Scalar ? "scalar" : "avx2";
}

bool avx2_available() { return cpu_has_avx2(); }

double sum_sq_pair_dist(const double* xyz, const uint32_t* a, const uint32_t* b,
                        size_t n) {
    return table().sum_sq_pair_dist(xyz, a, b, n);
}

void bsb_step(double* x, double* y, const double* grad, size_t n, double dt, double a0,
              double harm, double c0) {
    table().bsb_step(x, y, grad, n, dt, a0, harm, c0);
}

void add_parity_term(double* energies, size_t size, uint64_t mask, double coeff) {
    table().add_parity_term(energies, size, mask, coeff);
}

void rx_layer(std::complex<double>* sv, size_t size, size_t stride, double c, double s) {
    table().rx_layer(sv, size, stride, c, s);
}

double expectation_diag(const std::complex<double>* sv, const double* energies,
                        size_t size) {
    return table().expectation_diag(sv, energies, size);
}

}  // namespace mu::kernels

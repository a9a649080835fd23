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

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation and an AVX2 variant; the active set is chosen at runtime
// (cpuid, overridable via set_backend or MU_KERNELS=scalar|avx2). The two
// variants are equivalence-tested against each other.
namespace mu::kernels {

enum class Backend { Auto, Scalar, Avx2 };

/// Selects the kernel set. Auto picks AVX2 when the CPU supports it.
/// Throws std::runtime_error if AVX2 is requested but unavailable.
void set_backend(Backend backend);
Backend active_backend();
const char* backend_name();
bool avx2_available();

/// Sum over pairs of |xyz[a[i]] - xyz[b[i]]|^2; xyz is interleaved x,y,z.
double sum_sq_pair_dist(const double* xyz, const uint32_t* a, const uint32_t* b,
                        size_t n);

/// One semi-implicit bSB integration step over n oscillators:
///   y += dt * (-harm * x - c0 * grad);  x += dt * a0 * y;
/// then inelastic walls: |x|>1 -> x = sign(x), y = 0.
void bsb_step(double* x, double* y, const double* grad, size_t n, double dt, double a0,
              double harm, double c0);

/// energies[z] += coeff * (+1 if popcount(z & mask) even else -1), z < size.
void add_parity_term(double* energies, size_t size, uint64_t mask, double coeff);

/// RX mixer butterfly on one qubit with amplitude stride 2^q:
///   a' = c*a - i s*b;  b' = -i s*a + c*b   (c = cos, s = sin of the half angle).
void rx_layer(std::complex<double>* sv, size_t size, size_t stride, double c, double s);

/// Sum over basis states of |sv[z]|^2 * energies[z].
double expectation_diag(const std::complex<double>* sv, const double* energies,
                        size_t size);

namespace scalar {
double sum_sq_pair_dist(const double* xyz, const uint32_t* a, const uint32_t* b,
                        size_t n);
void bsb_step(double* x, double* y, const double* grad, size_t n, double dt, double a0,
              double harm, double c0);
void add_parity_term(double* energies, size_t size, uint64_t mask, double coeff);
void rx_layer(std::complex<double>* sv, size_t size, size_t stride, double c, double s);
double expectation_diag(const std::complex<double>* sv, const double* energies,
                        size_t size);
}  // namespace scalar

#if defined(MU_HAVE_AVX2_TU)
namespace avx2 {
double sum_sq_pair_dist(const double* xyz, const uint32_t* a, const uint32_t* b,
                        size_t n);
void bsb_step(double* x, double* y, const double* grad, size_t n, double dt, double a0,
              double harm, double c0);
void add_parity_term(double* energies, size_t size, uint64_t mask, double coeff);
void rx_layer(std::complex<double>* sv, size_t size, size_t stride, double c, double s);
double expectation_diag(const std::complex<double>* sv, const double* energies,
                        size_t size);
}  // namespace avx2
#endif

}  // namespace mu::kernels

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

// AVX2/FMA variants of the kernels in kernels.cpp. This translation unit is
// compiled with -mavx2 -mfma and must only be entered after a cpuid check.

#include <immintrin.h>

#include "mu/kernels.hpp"

namespace mu::kernels::avx2 {

namespace {

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Per-64-bit-lane popcount (Mula's nibble-LUT scheme).
__m256i popcount_epi64(__m256i v) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo),
                                  _mm256_shuffle_epi8(lut, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

}  // namespace

double sum_sq_pair_dist(const double* xyz, const uint32_t* a, const uint32_t* b,
                        size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    const __m128i three = _mm_set1_epi32(3);
    for (; i + 4 <= n; i += 4) {
        __m128i ia = _mm_mullo_epi32(
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i)), three);
        __m128i ib = _mm_mullo_epi32(
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i)), three);
        __m256d ax = _mm256_i32gather_pd(xyz, ia, 8);
        __m256d bx = _mm256_i32gather_pd(xyz, ib, 8);
        __m256d ay = _mm256_i32gather_pd(xyz + 1, ia, 8);
        __m256d by = _mm256_i32gather_pd(xyz + 1, ib, 8);
        __m256d az = _mm256_i32gather_pd(xyz + 2, ia, 8);
        __m256d bz = _mm256_i32gather_pd(xyz + 2, ib, 8);
        __m256d dx = _mm256_sub_pd(ax, bx);
        __m256d dy = _mm256_sub_pd(ay, by);
        __m256d dz = _mm256_sub_pd(az, bz);
        acc = _mm256_fmadd_pd(dx, dx, acc);
        acc = _mm256_fmadd_pd(dy, dy, acc);
        acc = _mm256_fmadd_pd(dz, dz, acc);
    }
    double total = hsum(acc);
    return total + scalar::sum_sq_pair_dist(xyz, a + i, b + i, n - i);
}

void bsb_step(double* x, double* y, const double* grad, size_t n, double dt, double a0,
              double harm, double c0) {
    const __m256d dt_v = _mm256_set1_pd(dt);
    const __m256d dta0 = _mm256_set1_pd(dt * a0);
    const __m256d harm_v = _mm256_set1_pd(harm);
    const __m256d c0_v = _mm256_set1_pd(c0);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d neg_one = _mm256_set1_pd(-1.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d yv = _mm256_loadu_pd(y + i);
        __m256d gv = _mm256_loadu_pd(grad + i);
        __m256d force = _mm256_fmadd_pd(harm_v, xv, _mm256_mul_pd(c0_v, gv));
        yv = _mm256_fnmadd_pd(dt_v, force, yv);
        xv = _mm256_fmadd_pd(dta0, yv, xv);
        __m256d hit = _mm256_or_pd(_mm256_cmp_pd(xv, one, _CMP_GT_OQ),
                                   _mm256_cmp_pd(xv, neg_one, _CMP_LT_OQ));
        xv = _mm256_min_pd(_mm256_max_pd(xv, neg_one), one);
        yv = _mm256_andnot_pd(hit, yv);
        _mm256_storeu_pd(x + i, xv);
        _mm256_storeu_pd(y + i, yv);
    }
    if (i < n) scalar::bsb_step(x + i, y + i, grad + i, n - i, dt, a0, harm, c0);
}

void add_parity_term(double* energies, size_t size, uint64_t mask, double coeff) {
    const __m256i mask_v = _mm256_set1_epi64x(static_cast<long long>(mask));
    const __m256d coeff_v = _mm256_set1_pd(coeff);
    const __m256i step = _mm256_set1_epi64x(4);
    __m256i z = _mm256_setr_epi64x(0, 1, 2, 3);
    size_t i = 0;
    for (; i + 4 <= size; i += 4) {
        __m256i cnt = popcount_epi64(_mm256_and_si256(z, mask_v));
        // Parity bit -> sign bit of a double: shift to bit 63 and xor.
        __m256i parity = _mm256_slli_epi64(_mm256_and_si256(cnt, _mm256_set1_epi64x(1)),
                                           63);
        __m256d signed_c = _mm256_xor_pd(coeff_v, _mm256_castsi256_pd(parity));
        _mm256_storeu_pd(energies + i,
                         _mm256_add_pd(_mm256_loadu_pd(energies + i), signed_c));
        z = _mm256_add_epi64(z, step);
    }
    for (; i < size; ++i) {
        bool odd = __builtin_popcountll(i & mask) & 1;
        energies[i] += odd ? -coeff : coeff;
    }
}

void rx_layer(std::complex<double>* sv, size_t size, size_t stride, double c,
              double s) {
    double* d = reinterpret_cast<double*>(sv);
    const __m256d c_v = _mm256_set1_pd(c);
    const __m256d s_v = _mm256_setr_pd(s, -s, s, -s);
    if (stride == 1) {
        if (size < 2) return;
        // Pairs are adjacent: one register holds (a.re, a.im, b.re, b.im).
        for (size_t base = 0; base < size; base += 2) {
            __m256d v = _mm256_loadu_pd(d + 2 * base);
            __m256d cross = _mm256_permute4x64_pd(v, 0x1B);  // (b.im,b.re,a.im,a.re)
            __m256d out = _mm256_fmadd_pd(c_v, v, _mm256_mul_pd(s_v, cross));
            _mm256_storeu_pd(d + 2 * base, out);
        }
        return;
    }
    for (size_t base = 0; base < size; base += 2 * stride) {
        for (size_t j = 0; j < stride; j += 2) {
            double* pa = d + 2 * (base + j);
            double* pb = d + 2 * (base + stride + j);
            __m256d va = _mm256_loadu_pd(pa);
            __m256d vb = _mm256_loadu_pd(pb);
            __m256d sa = _mm256_permute_pd(va, 0x5);  // swap re/im per complex
            __m256d sb = _mm256_permute_pd(vb, 0x5);
            _mm256_storeu_pd(pa, _mm256_fmadd_pd(c_v, va, _mm256_mul_pd(s_v, sb)));
            _mm256_storeu_pd(pb, _mm256_fmadd_pd(c_v, vb, _mm256_mul_pd(s_v, sa)));
        }
    }
}

double expectation_diag(const std::complex<double>* sv, const double* energies,
                        size_t size) {
    const double* d = reinterpret_cast<const double*>(sv);
    __m256d acc = _mm256_setzero_pd();
    size_t z = 0;
    for (; z + 2 <= size; z += 2) {
        __m256d v = _mm256_loadu_pd(d + 2 * z);
        __m256d ee = _mm256_setr_pd(energies[z], energies[z], energies[z + 1],
                                    energies[z + 1]);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), ee, acc);
    }
    double total = hsum(acc);
    for (; z < size; ++z)
        total += (sv[z].real() * sv[z].real() + sv[z].imag() * sv[z].imag()) *
                 energies[z];
    return total;
}

}  // namespace mu::kernels::avx2

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

// Equivalence tests between the scalar reference kernels and the AVX2
// variants (when the host supports them).

#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "mu/kernels.hpp"

using namespace mu::kernels;

namespace {

std::mt19937_64 rng(31337);
double urand(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

bool have_avx2() { return avx2_available(); }

}  // namespace

TEST_CASE("backend selection") {
    set_backend(Backend::Scalar);
    CHECK(active_backend() == Backend::Scalar);
    CHECK(std::string(backend_name()) == "scalar");
    if (have_avx2()) {
        set_backend(Backend::Avx2);
        CHECK(active_backend() == Backend::Avx2);
    }
    set_backend(Backend::Auto);
}

TEST_CASE("sum_sq_pair_dist agrees between variants") {
    for (size_t n : {0ul, 1ul, 3ul, 4ul, 5ul, 17ul, 256ul}) {
        size_t atoms = 40;
        std::vector<double> xyz(3 * atoms);
        for (double& v : xyz) v = urand(-8, 8);
        std::vector<uint32_t> a(n), b(n);
        for (size_t i = 0; i < n; ++i) {
            a[i] = static_cast<uint32_t>(rng() % atoms);
            b[i] = static_cast<uint32_t>(rng() % atoms);
        }
        double ref = scalar::sum_sq_pair_dist(xyz.data(), a.data(), b.data(), n);
        if (have_avx2()) {
            double got = avx2::sum_sq_pair_dist(xyz.data(), a.data(), b.data(), n);
            CHECK(got == doctest::Approx(ref).epsilon(1e-13));
        }
        // Straight double-loop oracle.
        double oracle = 0;
        for (size_t i = 0; i < n; ++i)
            for (int c = 0; c < 3; ++c) {
                double d = xyz[3 * a[i] + static_cast<size_t>(c)] -
                           xyz[3 * b[i] + static_cast<size_t>(c)];
                oracle += d * d;
            }
        CHECK(ref == doctest::Approx(oracle).epsilon(1e-13));
    }
}

TEST_CASE("bsb_step agrees between variants and respects the walls") {
    for (size_t n : {1ul, 4ul, 7ul, 20ul, 64ul}) {
        std::vector<double> x(n), y(n), g(n);
        for (size_t i = 0; i < n; ++i) {
            x[i] = urand(-1.2, 1.2);
            y[i] = urand(-1, 1);
            g[i] = urand(-5, 5);
        }
        auto xs = x, ys = y;
        scalar::bsb_step(xs.data(), ys.data(), g.data(), n, 0.5, 1.0, 0.3, 0.7);
        for (size_t i = 0; i < n; ++i) {
            CHECK(std::abs(xs[i]) <= 1.0);
            if (std::abs(xs[i]) == 1.0) CHECK(ys[i] == 0.0);
        }
        if (have_avx2()) {
            auto xa = x, ya = y;
            avx2::bsb_step(xa.data(), ya.data(), g.data(), n, 0.5, 1.0, 0.3, 0.7);
            for (size_t i = 0; i < n; ++i) {
                CHECK(xa[i] == doctest::Approx(xs[i]).epsilon(1e-13));
                CHECK(ya[i] == doctest::Approx(ys[i]).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("add_parity_term agrees between variants") {
    for (int nq : {1, 2, 5, 10}) {
        size_t size = size_t(1) << nq;
        uint64_t mask = rng() & (size - 1);
        if (!mask) mask = 1;
        double coeff = urand(-2, 2);
        std::vector<double> es(size, 0.5), ea(size, 0.5);
        scalar::add_parity_term(es.data(), size, mask, coeff);
        for (size_t z = 0; z < size; ++z) {
            bool odd = __builtin_popcountll(z & mask) & 1;
            CHECK(es[z] == doctest::Approx(0.5 + (odd ? -coeff : coeff)));
        }
        if (have_avx2()) {
            avx2::add_parity_term(ea.data(), size, mask, coeff);
            for (size_t z = 0; z < size; ++z) CHECK(ea[z] == es[z]);
        }
    }
}

TEST_CASE("rx_layer agrees between variants and preserves the norm") {
    for (int nq : {1, 2, 3, 6}) {
        size_t size = size_t(1) << nq;
        std::vector<std::complex<double>> base(size);
        for (auto& a : base) a = {urand(-1, 1), urand(-1, 1)};
        double norm = 0;
        for (auto& a : base) norm += std::norm(a);
        for (auto& a : base) a /= std::sqrt(norm);

        for (int q = 0; q < nq; ++q) {
            double ang = urand(0, 3.14);
            auto s = base;
            scalar::rx_layer(s.data(), size, size_t(1) << q, std::cos(ang),
                             std::sin(ang));
            double after = 0;
            for (auto& a : s) after += std::norm(a);
            CHECK(after == doctest::Approx(1.0).epsilon(1e-12));
            if (have_avx2()) {
                auto v = base;
                avx2::rx_layer(v.data(), size, size_t(1) << q, std::cos(ang),
                               std::sin(ang));
                for (size_t z = 0; z < size; ++z) {
                    CHECK(v[z].real() == doctest::Approx(s[z].real()).epsilon(1e-13));
                    CHECK(v[z].imag() == doctest::Approx(s[z].imag()).epsilon(1e-13));
                }
            }
        }
    }
}

TEST_CASE("expectation_diag agrees between variants") {
    for (int nq : {1, 3, 8}) {
        size_t size = size_t(1) << nq;
        std::vector<std::complex<double>> sv(size);
        std::vector<double> e(size);
        for (size_t z = 0; z < size; ++z) {
            sv[z] = {urand(-1, 1), urand(-1, 1)};
            e[z] = urand(-10, 10);
        }
        double ref = scalar::expectation_diag(sv.data(), e.data(), size);
        double oracle = 0;
        for (size_t z = 0; z < size; ++z) oracle += std::norm(sv[z]) * e[z];
        CHECK(ref == doctest::Approx(oracle).epsilon(1e-12));
        if (have_avx2()) {
            double got = avx2::expectation_diag(sv.data(), e.data(), size);
            CHECK(got == doctest::Approx(ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("dispatched entry points route to the active backend") {
    std::vector<double> xyz{0, 0, 0, 3, 4, 0};
    std::vector<uint32_t> a{0}, b{1};
    set_backend(Backend::Scalar);
    CHECK(sum_sq_pair_dist(xyz.data(), a.data(), b.data(), 1) == doctest::Approx(25.0));
    if (have_avx2()) {
        set_backend(Backend::Avx2);
        CHECK(sum_sq_pair_dist(xyz.data(), a.data(), b.data(), 1) ==
              doctest::Approx(25.0));
    }
    set_backend(Backend::Auto);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <cstdlib>
#include <vector>

#include "qsd/kernels.hpp"
#include "qsd/random.hpp"

using qsd::Rng;
using qsd::kernels::active;
using qsd::kernels::available_lanes;
using qsd::kernels::Kernels;
using qsd::kernels::lane;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> random_block(std::size_t n, Rng& rng) {
    std::vector<cplx> v(n);
    for (cplx& z : v) z = cplx(rng.normal(), rng.normal());
    return v;
}

double max_delta(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Every lane must agree with scalar up to FMA/reassociation rounding.
constexpr double kLaneTol = 1e-12;

}  // namespace

TEST_CASE("the active lane is one of the usable lanes") {
    const auto names = available_lanes();
    REQUIRE(!names.empty());
    bool scalar_present = false, active_present = false;
    for (const auto& n : names) {
        if (n == "scalar") scalar_present = true;
        if (n == active().name) active_present = true;
        CHECK(lane(n) != nullptr);
    }
    CHECK(scalar_present);
    CHECK(active_present);
    CHECK(lane("no-such-lane") == nullptr);
}

TEST_CASE("lanes agree on matmul across shapes") {
    const Kernels* ref = lane("scalar");
    REQUIRE(ref != nullptr);
    Rng rng(101);
    const std::size_t shapes[][3] = {{1, 1, 1}, {2, 3, 4}, {3, 1, 5}, {5, 5, 5},
                                     {8, 8, 8}, {7, 17, 3}, {16, 16, 16}, {17, 9, 13}};
    for (const auto& name : available_lanes()) {
        const Kernels* k = lane(name);
        for (const auto& sh : shapes) {
            const std::size_t m = sh[0], kk = sh[1], n = sh[2];
            const auto a = random_block(m * kk, rng);
            const auto b = random_block(kk * n, rng);
            std::vector<cplx> want(m * n), got(m * n);
            ref->matmul(want.data(), a.data(), b.data(), m, kk, n);
            k->matmul(got.data(), a.data(), b.data(), m, kk, n);
            CAPTURE(name);
            CHECK(max_delta(want, got) < kLaneTol);
        }
    }
}

TEST_CASE("lanes agree on kron") {
    const Kernels* ref = lane("scalar");
    Rng rng(102);
    const std::size_t shapes[][4] = {{1, 1, 2, 2}, {2, 2, 2, 2}, {2, 3, 4, 2}, {3, 5, 5, 3},
                                     {4, 4, 8, 8}, {1, 7, 7, 1}};
    for (const auto& name : available_lanes()) {
        const Kernels* k = lane(name);
        for (const auto& sh : shapes) {
            const std::size_t ar = sh[0], ac = sh[1], br = sh[2], bc = sh[3];
            const auto a = random_block(ar * ac, rng);
            const auto b = random_block(br * bc, rng);
            std::vector<cplx> want(ar * br * ac * bc), got(want.size());
            ref->kron(want.data(), a.data(), ar, ac, b.data(), br, bc);
            k->kron(got.data(), a.data(), ar, ac, b.data(), br, bc);
            CAPTURE(name);
            CHECK(max_delta(want, got) < kLaneTol);
        }
    }
}

TEST_CASE("lanes agree on rotate_rows") {
    Rng rng(103);
    for (const auto& name : available_lanes()) {
        const Kernels* k = lane(name);
        for (std::size_t n : {1u, 2u, 3u, 8u, 17u, 64u, 101u}) {
            const auto x0 = random_block(n, rng);
            const auto y0 = random_block(n, rng);
            const double c = rng.normal();
            const cplx sx(rng.normal(), rng.normal()), sy(rng.normal(), rng.normal());
            auto xs = x0, ys = y0, xl = x0, yl = y0;
            lane("scalar")->rotate_rows(xs.data(), ys.data(), n, c, sx, sy);
            k->rotate_rows(xl.data(), yl.data(), n, c, sx, sy);
            CAPTURE(name);
            CHECK(max_delta(xs, xl) < kLaneTol);
            CHECK(max_delta(ys, yl) < kLaneTol);
        }
    }
}

TEST_CASE("lanes agree on apply_1q over every stride") {
    Rng rng(104);
    for (const auto& name : available_lanes()) {
        const Kernels* k = lane(name);
        for (std::size_t dim : {2u, 4u, 16u, 64u}) {
            const auto u = random_block(4, rng);
            const auto amps = random_block(dim, rng);
            for (std::size_t stride = 1; stride < dim; stride *= 2) {
                auto want = amps, got = amps;
                lane("scalar")->apply_1q(want.data(), dim, stride, u.data());
                k->apply_1q(got.data(), dim, stride, u.data());
                CAPTURE(name);
                CAPTURE(dim);
                CAPTURE(stride);
                CHECK(max_delta(want, got) < kLaneTol);
            }
        }
    }
}

TEST_CASE("lanes agree on axpy") {
    Rng rng(105);
    for (const auto& name : available_lanes()) {
        const Kernels* k = lane(name);
        for (std::size_t n : {1u, 3u, 4u, 7u, 32u, 1000u}) {
            const auto x = random_block(n, rng);
            const auto y0 = random_block(n, rng);
            const cplx a(rng.normal(), rng.normal());
            auto want = y0, got = y0;
            lane("scalar")->axpy(want.data(), a, x.data(), n);
            k->axpy(got.data(), a, x.data(), n);
            CAPTURE(name);
            CHECK(max_delta(want, got) < kLaneTol);
        }
    }
}

TEST_CASE("apply_1q touches exactly the selected pairs") {
    // A gate on the stride-bit must leave amplitudes outside its pairs alone:
    // identity matrix keeps everything bit-for-bit.
    Rng rng(106);
    const cplx id[4] = {1.0, 0.0, 0.0, 1.0};
    for (const auto& name : available_lanes()) {
        const Kernels* k = lane(name);
        const auto amps = random_block(32, rng);
        auto got = amps;
        k->apply_1q(got.data(), 32, 4, id);
        CAPTURE(name);
        CHECK(max_delta(amps, got) == 0.0);
    }
}

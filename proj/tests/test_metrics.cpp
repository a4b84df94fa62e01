// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "util.hpp"

#include "sijscc/metrics.hpp"
#include "sijscc/training.hpp"

using namespace sijscc;

TEST_CASE("mse: hand values") {
    Tensor4<double> a(1, 1, 1, 2), b(1, 1, 1, 2);
    CHECK(mse(a, b) == 0.0);
    a.fill(0.0);
    b.fill(1.0);
    CHECK(mse(a, b) == doctest::Approx(1.0));
    Tensor4<double> c(1, 1, 1, 2), d(1, 1, 1, 2);
    c.flat(0) = 0.0;
    c.flat(1) = 0.5;
    CHECK(mse(c, d) == doctest::Approx(0.125));
    Tensor4<double> e(1, 1, 2, 2);
    CHECK_THROWS_AS(mse(a, e), ShapeError);
}

TEST_CASE("psnr: zero dB at full-scale error, 48.13 dB at mse 1 on 8-bit scale") {
    Tensor4<double> zeros(1, 3, 4, 4), maxed(1, 3, 4, 4);
    maxed.fill(1.0);
    CHECK(psnr(zeros, maxed, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    Tensor4<double> x(1, 1, 1, 1), y(1, 1, 1, 1);
    x.flat(0) = 10.0;
    y.flat(0) = 11.0; // mse = 1 on the 0..255 convention
    CHECK(psnr(x, y, 255.0) == doctest::Approx(20.0 * std::log10(255.0)).epsilon(1e-9));
    CHECK(psnr(x, y, 255.0) == doctest::Approx(48.13).epsilon(1e-3));
    CHECK(std::isinf(psnr(x, x, 255.0)));
}

TEST_CASE("psnr: invariant under joint rescaling within 1e-9 dB") {
    Rng rng(61, 0);
    Tensor4<double> x(1, 3, 8, 8), y(1, 3, 8, 8);
    sijscc::test::fill_random(x, rng, 0.0, 1.0);
    sijscc::test::fill_random(y, rng, 0.0, 1.0);
    Tensor4<double> xs = x, ys = y;
    xs.scale_(255.0);
    ys.scale_(255.0);
    CHECK(std::abs(psnr(x, y, 1.0) - psnr(xs, ys, 255.0)) < 1e-9);
}

TEST_CASE("ssim: perfect similarity, symmetry, bounded above by 1") {
    Rng rng(62, 0);
    Tensor4<double> x(1, 3, 16, 16), y(1, 3, 16, 16);
    sijscc::test::fill_random(x, rng, 0.0, 1.0);
    sijscc::test::fill_random(y, rng, 0.0, 1.0);
    CHECK(ssim(x, x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ssim(x, y) == doctest::Approx(ssim(y, x)).epsilon(1e-12));
    CHECK(ssim(x, y) <= 1.0);
}

TEST_CASE("ssim: constant-pair hand value") {
    Tensor4<double> a(1, 1, 16, 16), b(1, 1, 16, 16);
    a.fill(0.25);
    b.fill(0.75);
    // hand evaluation of the stated formula; zero variances make the window
    // size irrelevant: (2*0.25*0.75 + 1e-4)/(0.25^2 + 0.75^2 + 1e-4) = 0.600064
    const double expected = (2 * 0.25 * 0.75 + 1e-4) / (0.25 * 0.25 + 0.75 * 0.75 + 1e-4);
    CHECK(ssim(a, b) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(std::abs(ssim(a, b) - 0.600064) < 1e-4);
}

TEST_CASE("ssim: rejects images smaller than the window") {
    Tensor4<double> small(1, 1, 10, 16), other(1, 1, 10, 16);
    CHECK_THROWS_AS(ssim(small, other), DegenerateInputError);
}

TEST_CASE("charbonnier: exact floor at zero residual, hand value, symmetry") {
    Tensor4<float> x(1, 4, 4, 4), same(1, 4, 4, 4);
    x.fill(0.25f);
    same.fill(0.25f);
    const double eps = 1e-6;
    const double at_zero = charbonnier_loss(x, same, eps);
    CHECK(at_zero == std::sqrt(eps)); // bitwise: power-of-two element count
    CHECK(at_zero == doctest::Approx(1e-3).epsilon(1e-9));

    Tensor4<float> a(1, 1, 1, 1), b(1, 1, 1, 1);
    a.flat(0) = 4.0f;
    b.flat(0) = 1.0f;
    CHECK(charbonnier_loss(a, b, eps) == doctest::Approx(std::sqrt(9.0 + 1e-6)).epsilon(1e-12));
    CHECK(charbonnier_loss(a, b, eps) == doctest::Approx(3.000000167).epsilon(1e-9));
    CHECK(charbonnier_loss(a, b, eps) == charbonnier_loss(b, a, eps));

    // lower bound property
    Rng rng(63, 0);
    Tensor4<float> u(1, 3, 4, 4), v(1, 3, 4, 4);
    sijscc::test::fill_random(u, rng, 0.0, 1.0);
    sijscc::test::fill_random(v, rng, 0.0, 1.0);
    CHECK(charbonnier_loss(u, v, eps) >= std::sqrt(eps));
    Tensor4<float> w(1, 3, 4, 5);
    CHECK_THROWS_AS(charbonnier_loss(u, w, eps), ShapeError);
}

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "uq/errors.hpp"
#include "uq/kernels.hpp"
#include "uq/rng.hpp"

using uq::kernels::Impl;

namespace {

std::vector<double> random_vec(uq::Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-2.0, 2.0);
    return v;
}

// Plain reference loops, written independently of src/.
double ref_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace

TEST_CASE("scalar kernels match reference loops") {
    const Impl& impl = uq::kernels::scalar_impl();
    uq::Rng rng(101);
    for (std::size_t n : {1u, 2u, 3u, 7u, 8u, 13u, 64u, 100u}) {
        auto a = random_vec(rng, n), b = random_vec(rng, n);
        CHECK(impl.dot(a.data(), b.data(), n) == doctest::Approx(ref_dot(a, b)).epsilon(1e-13));
    }
}

TEST_CASE("every available implementation agrees with scalar") {
    std::vector<const Impl*> impls = {&uq::kernels::scalar_impl()};
    if (uq::kernels::avx2_impl() != nullptr) impls.push_back(uq::kernels::avx2_impl());
    uq::Rng rng(202);

    for (const Impl* impl : impls) {
        INFO("impl: " << impl->name);
        for (std::size_t rows : {1u, 3u, 10u, 17u, 50u}) {
            for (std::size_t cols : {1u, 4u, 8u, 13u, 50u}) {
                const auto A = random_vec(rng, rows * cols);
                const auto x = random_vec(rng, cols);
                const auto yvec = random_vec(rng, rows);
                const auto bias = random_vec(rng, rows);

                // dot
                CHECK(impl->dot(A.data(), A.data(), rows * cols) ==
                      doctest::Approx(ref_dot(A, A)).epsilon(1e-12));

                // matvec: y = A x + bias
                std::vector<double> y(rows, 0.0);
                impl->matvec(A.data(), x.data(), bias.data(), y.data(), rows, cols);
                for (std::size_t r = 0; r < rows; ++r) {
                    double want = bias[r];
                    for (std::size_t c = 0; c < cols; ++c) want += A[r * cols + c] * x[c];
                    CHECK(y[r] == doctest::Approx(want).epsilon(1e-12));
                }

                // matvec_t: out = A^T v
                std::vector<double> xt(cols, 0.0);
                impl->matvec_t(A.data(), yvec.data(), xt.data(), rows, cols);
                for (std::size_t c = 0; c < cols; ++c) {
                    double want = 0.0;
                    for (std::size_t r = 0; r < rows; ++r) want += A[r * cols + c] * yvec[r];
                    CHECK(xt[c] == doctest::Approx(want).epsilon(1e-12));
                }

                // ger_acc: M += u v^T
                std::vector<double> M(rows * cols, 0.5);
                impl->ger_acc(M.data(), yvec.data(), x.data(), rows, cols);
                for (std::size_t r = 0; r < rows; ++r) {
                    for (std::size_t c = 0; c < cols; ++c) {
                        CHECK(M[r * cols + c] ==
                              doctest::Approx(0.5 + yvec[r] * x[c]).epsilon(1e-12));
                    }
                }

                // axpy: y += a x
                std::vector<double> acc(cols, 1.0);
                impl->axpy(-2.0, x.data(), acc.data(), cols);
                for (std::size_t c = 0; c < cols; ++c) {
                    CHECK(acc[c] == doctest::Approx(1.0 - 2.0 * x[c]).epsilon(1e-12));
                }
                // scale_axpy: v = a v + b g
                std::vector<double> sa(cols, 2.0);
                impl->scale_axpy(sa.data(), 0.5, 3.0, x.data(), cols);
                for (std::size_t c = 0; c < cols; ++c) {
                    CHECK(sa[c] == doctest::Approx(1.0 + 3.0 * x[c]).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("runtime selection switches the active implementation") {
    const std::string before = uq::kernels::active().name;

    uq::kernels::select("scalar");
    CHECK(std::string(uq::kernels::active().name) == "scalar");

    if (uq::kernels::avx2_impl() != nullptr) {
        uq::kernels::select("avx2");
        CHECK(std::string(uq::kernels::active().name) == "avx2");
    } else {
        CHECK_THROWS_AS(uq::kernels::select("avx2"), uq::ConfigError);
    }
    CHECK_THROWS_AS(uq::kernels::select("no-such-impl"), uq::ConfigError);

    uq::kernels::select(before);
    CHECK(std::string(uq::kernels::active().name) == before);
}

TEST_CASE("wrapper helpers route through the active implementation") {
    std::vector<double> a = {1.0, 2.0, 3.0};
    std::vector<double> b = {4.0, 5.0, 6.0};
    CHECK(uq::kernels::dot(a.data(), b.data(), 3) == doctest::Approx(32.0));
}

#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "epispec/kernels.hpp"
#include "epispec/rng.hpp"

using epispec::Xoshiro256;
namespace kernels = epispec::kernels;

namespace {

std::vector<double> random_vector(Xoshiro256& rng, size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = lo + (hi - lo) * rng.next_double();
    return v;
}

struct Csr {
    std::vector<uint32_t> offsets, columns;
    std::vector<double> weights;
    size_t n;
};

Csr random_csr(Xoshiro256& rng, size_t n, uint32_t max_row) {
    Csr m;
    m.n = n;
    m.offsets.push_back(0);
    for (size_t r = 0; r < n; ++r) {
        const uint32_t cnt = static_cast<uint32_t>(rng.next_below(max_row + 1));
        for (uint32_t k = 0; k < cnt; ++k) {
            m.columns.push_back(static_cast<uint32_t>(rng.next_below(n)));
            m.weights.push_back(2.0 * rng.next_double() - 1.0);
        }
        m.offsets.push_back(static_cast<uint32_t>(m.columns.size()));
    }
    return m;
}

const std::vector<size_t> kLengths = {0, 1, 2, 3, 4, 7, 8, 15, 16, 17, 31, 64, 100, 1000, 4097};

// Backends that differ from scalar only in summation tree / FMA contraction
// are held to a tolerance proportional to the sum of term magnitudes.
void check_backend_against_scalar(const std::string& name) {
    REQUIRE(kernels::force_backend("scalar"));
    const kernels::Ops scalar = kernels::ops();
    REQUIRE(kernels::force_backend(name.c_str()));
    const kernels::Ops& backend = kernels::ops();
    CHECK(std::string(backend.name) == name);

    Xoshiro256 rng(0x5eedf00dULL);
    for (size_t n : kLengths) {
        CAPTURE(n);
        const auto x = random_vector(rng, n);
        const auto y = random_vector(rng, n);

        // dot / nrm2: reduction-order differences only.
        double term_scale = 1.0;
        for (size_t i = 0; i < n; ++i) term_scale += std::fabs(x[i] * y[i]);
        CHECK(std::fabs(backend.dot(x.data(), y.data(), n) - scalar.dot(x.data(), y.data(), n)) <=
              1e-13 * term_scale);
        CHECK(std::fabs(backend.nrm2(x.data(), n) - scalar.nrm2(x.data(), n)) <=
              1e-13 * (1.0 + scalar.nrm2(x.data(), n)));

        // axpy: FMA contraction allowed, so per-element tolerance.
        const double a = -0.7310529;
        auto ys = y, yb = y;
        scalar.axpy(a, x.data(), ys.data(), n);
        backend.axpy(a, x.data(), yb.data(), n);
        for (size_t i = 0; i < n; ++i) {
            CAPTURE(i);
            CHECK(std::fabs(yb[i] - ys[i]) <=
                  1e-14 * (1.0 + std::fabs(a * x[i]) + std::fabs(y[i])));
        }

        // scal / hadamard: one rounding per element in every backend, so the
        // results must match bit for bit.
        auto xs = x, xb = x;
        scalar.scal(a, xs.data(), n);
        backend.scal(a, xb.data(), n);
        CHECK(xs == xb);

        std::vector<double> zs(n), zb(n);
        scalar.hadamard(x.data(), y.data(), zs.data(), n);
        backend.hadamard(x.data(), y.data(), zb.data(), n);
        CHECK(zs == zb);
    }
    kernels::force_backend("scalar");
}

void check_spmv_against_scalar(const std::string& name) {
    REQUIRE(kernels::force_backend("scalar"));
    const kernels::Ops scalar = kernels::ops();
    REQUIRE(kernels::force_backend(name.c_str()));
    const kernels::Ops& backend = kernels::ops();

    Xoshiro256 rng(0xabcdefULL);
    for (size_t n : {size_t(1), size_t(5), size_t(64), size_t(501), size_t(5000)}) {
        CAPTURE(n);
        const Csr m = random_csr(rng, n, 12);
        const auto x = random_vector(rng, n);
        std::vector<double> ys(n), yb(n);
        scalar.spmv(m.offsets.data(), m.columns.data(), m.weights.data(), n, x.data(), ys.data());
        backend.spmv(m.offsets.data(), m.columns.data(), m.weights.data(), n, x.data(), yb.data());
        for (size_t r = 0; r < n; ++r) {
            CAPTURE(r);
            double row_scale = 1.0;
            for (uint32_t k = m.offsets[r]; k < m.offsets[r + 1]; ++k)
                row_scale += std::fabs(m.weights[k] * x[m.columns[k]]);
            CHECK(std::fabs(yb[r] - ys[r]) <= 1e-13 * row_scale);
        }
    }
    kernels::force_backend("scalar");
}

} // namespace

TEST_CASE("dispatch: ops() is callable and force_backend validates names") {
    CHECK(kernels::ops().dot != nullptr);
    CHECK_FALSE(kernels::force_backend("bogus"));
    CHECK(kernels::force_backend("scalar"));
    CHECK(std::string(kernels::ops().name) == "scalar");
}

TEST_CASE("scalar kernels: hand-checked values") {
    REQUIRE(kernels::force_backend("scalar"));
    const auto& k = kernels::ops();

    const double x[] = {1.0, 2.0, 3.0};
    const double y[] = {4.0, -5.0, 6.0};
    CHECK(k.dot(x, y, 3) == doctest::Approx(12.0));
    CHECK(k.nrm2(x, 3) == doctest::Approx(std::sqrt(14.0)));

    double z[3];
    k.hadamard(x, y, z, 3);
    CHECK(z[0] == 4.0);
    CHECK(z[1] == -10.0);
    CHECK(z[2] == 18.0);

    double w[] = {1.0, 1.0, 1.0};
    k.axpy(2.0, x, w, 3);
    CHECK(w[0] == 3.0);
    CHECK(w[1] == 5.0);
    CHECK(w[2] == 7.0);
    k.scal(-1.0, w, 3);
    CHECK(w[2] == -7.0);

    // 2x2 CSR: [[0, 2], [3, 0]] * [1, 10] = [20, 3]
    const uint32_t offsets[] = {0, 1, 2};
    const uint32_t columns[] = {1, 0};
    const double weights[] = {2.0, 3.0};
    const double xin[] = {1.0, 10.0};
    double out[2];
    k.spmv(offsets, columns, weights, 2, xin, out);
    CHECK(out[0] == 20.0);
    CHECK(out[1] == 3.0);
}

TEST_CASE("simd backends match scalar reference") {
    bool tested_any = false;
    for (const char* name : {"avx2", "neon"}) {
        if (!kernels::force_backend(name)) {
            MESSAGE("backend unavailable on this host, skipping: " << std::string(name));
            continue;
        }
        tested_any = true;
        check_backend_against_scalar(name);
        check_spmv_against_scalar(name);
    }
    if (!tested_any) MESSAGE("no SIMD backend available; scalar-only host");
    kernels::force_backend("scalar");
}

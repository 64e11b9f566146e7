#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spgrid/error.hpp"
#include "spgrid/linsolve.hpp"

using namespace spgrid;

namespace {

MeshSpec spec(MeshFamily f, double eps, int n) {
    MeshSpec s;
    s.family = f;
    s.eps = eps;
    s.n = n;
    s.a = f == MeshFamily::Bakhvalov ? 4.0 : 1.0;
    return s;
}

std::vector<double> nodal(const Mesh& m, const ScalarFn& fn) {
    std::vector<double> v(m.nodes.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(m.nodes[i]);
    return v;
}

TridiagonalSystem random_dominant(std::mt19937_64& rng, int m) {
    std::uniform_real_distribution<double> off(-1.0, 1.0), extra(0.1, 2.0);
    TridiagonalSystem s;
    s.sub.resize(m);
    s.diag.resize(m);
    s.sup.resize(m);
    s.rhs.resize(m);
    for (int k = 0; k < m; ++k) {
        s.sub[k] = off(rng);
        s.sup[k] = off(rng);
        s.diag[k] = std::abs(s.sub[k]) + std::abs(s.sup[k]) + extra(rng);
        if (rng() % 2) s.diag[k] = -s.diag[k];
        s.rhs[k] = off(rng);
    }
    return s;
}

oracle::Matrix to_dense(const TridiagonalSystem& s) {
    const std::size_t m = s.size();
    oracle::Matrix A(m, std::vector<double>(m, 0.0));
    for (std::size_t k = 0; k < m; ++k) {
        A[k][k] = s.diag[k];
        if (k > 0) A[k][k - 1] = s.sub[k];
        if (k + 1 < m) A[k][k + 1] = s.sup[k];
    }
    return A;
}

}  // namespace

TEST_SUITE("linsolve") {

TEST_CASE("single interior unknown") {
    const Mesh m = build_mesh(spec(MeshFamily::Uniform, 1.0, 2));
    const auto sys = assemble(m, 1.0, [](double) { return 1.0; }, [](double) { return 1.0; }, 0.0, 0.0);
    REQUIRE(sys.size() == 1);
    CHECK(sys.diag[0] == doctest::Approx(9.0));
    const auto y = solve_linear(m, 1.0, [](double) { return 1.0; }, [](double) { return 1.0; }, 0.0, 0.0);
    CHECK(y[1] == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("eps = 0 reduces to pointwise inversion") {
    const Mesh m = build_mesh(spec(MeshFamily::Uniform, 1.0, 8));
    const ScalarFn g = [](double x) { return std::sin(3 * x) + 2; };
    const auto sys = assemble(m, 0.0, [](double) { return 1.0; }, g, 5.0, 7.0);
    for (std::size_t k = 0; k < sys.size(); ++k) {
        CHECK(sys.diag[k] == 1.0);
        CHECK(sys.sub[k] == 0.0);
        CHECK(sys.sup[k] == 0.0);
    }
    const auto y = thomas_solve(sys);
    for (std::size_t k = 0; k < y.size(); ++k) CHECK(y[k] == doctest::Approx(g(m.nodes[k + 1])));
}

TEST_CASE("assembly matches a dense oracle entrywise") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double c1 = 1 + u(rng), c2 = u(rng), c3 = u(rng);
    const ScalarFn b = [&](double x) { return 1.0 + 0.5 * (1 + std::sin(c1 * x + c2)); };
    const ScalarFn g = [&](double x) { return std::cos(c3 + x); };
    for (MeshFamily f : {MeshFamily::Uniform, MeshFamily::Shishkin, MeshFamily::Vulanovic}) {
        const Mesh m = build_mesh(spec(f, 0.05, 6));
        const double eps = 0.3;
        const auto sys = assemble(m, eps, b, g, 0.0, 0.0);
        const auto A = oracle::dense_scheme(m.nodes, eps, nodal(m, b));
        REQUIRE(sys.size() == 5);
        for (int k = 0; k < 5; ++k) {
            CHECK(sys.diag[k] == doctest::Approx(A[k][k]).epsilon(1e-14));
            if (k > 0) CHECK(sys.sub[k] == doctest::Approx(A[k][k - 1]).epsilon(1e-14));
            if (k < 4) CHECK(sys.sup[k] == doctest::Approx(A[k][k + 1]).epsilon(1e-14));
            CHECK(sys.rhs[k] == doctest::Approx(g(m.nodes[k + 1])).epsilon(1e-14));
        }
    }
}

TEST_CASE("boundary data are folded into the end rows") {
    const Mesh m = build_mesh(spec(MeshFamily::Uniform, 1.0, 4));
    const auto sys = assemble(m, 1.0, [](double) { return 1.0; }, [](double) { return 0.0; }, 2.0, 3.0);
    CHECK(sys.rhs[0] == doctest::Approx(16.0 * 2.0));
    CHECK(sys.rhs[1] == 0.0);
    CHECK(sys.rhs[2] == doctest::Approx(16.0 * 3.0));
}

TEST_CASE("M-matrix sign pattern and row sums") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (MeshFamily f : {MeshFamily::Uniform, MeshFamily::Shishkin, MeshFamily::Bakhvalov, MeshFamily::Vulanovic}) {
        for (double eps : {1.0, 1e-2, 1e-6}) {
            for (int n : {2, 17, 256}) {
                const double beta = 0.5 + u(rng);
                const Mesh m = build_mesh(spec(f, eps, n));
                const auto sys = assemble(m, eps, [&](double x) { return beta + x * x; },
                                          [](double x) { return x; }, 0.0, 0.0);
                bool ok = true;
                for (std::size_t k = 0; k < sys.size(); ++k) {
                    ok = ok && sys.diag[k] > 0 && sys.sub[k] <= 0 && sys.sup[k] <= 0;
                    ok = ok && sys.diag[k] + sys.sub[k] + sys.sup[k] >= beta * (1 - 1e-9) - 1e-9 * sys.diag[k];
                    ok = ok && sys.row_sum[k] >= beta;
                }
                CHECK(ok);
            }
        }
    }
}

TEST_CASE("nonpositive reaction is rejected") {
    const Mesh m = build_mesh(spec(MeshFamily::Uniform, 1.0, 4));
    try {
        assemble(m, 1.0, [](double x) { return x - 0.5; }, [](double) { return 0.0; }, 0.0, 0.0);
        FAIL("expected NonpositiveCoefficient");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonpositiveCoefficient);
    }
}

TEST_CASE("thomas_solve") {
    SUBCASE("identity") {
        TridiagonalSystem s{{0, 0, 0}, {1, 1, 1}, {0, 0, 0}, {3, -1, 2}, {}};
        CHECK(thomas_solve(s) == std::vector<double>{3, -1, 2});
    }
    SUBCASE("dense oracle on random dominant systems") {
        std::mt19937_64 rng(3);
        for (int m : {1, 2, 5, 31, 200, 1023}) {
            const auto s = random_dominant(rng, m);
            const auto y = thomas_solve(s);
            const auto ref = oracle::dense_solve(to_dense(s), s.rhs);
            CHECK(oracle::max_abs_diff(y, ref) <= 1e-12 * std::max(1.0, oracle::max_abs(ref)));
            CHECK(residual_norm(s, y) <= 1e-10 * oracle::max_abs(s.rhs));
        }
    }
    SUBCASE("zero pivot") {
        TridiagonalSystem s{{0, 1}, {1, 1}, {1, 0}, {1, 1}, {}};
        try {
            thomas_solve(s);
            FAIL("expected ZeroPivot");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ZeroPivot);
        }
    }
}

TEST_CASE("constant-coefficient problem converges at second order") {
    const ScalarFn exact = [](double x) { return 1 - (std::exp(x) + std::exp(1 - x)) / (1 + std::exp(1.0)); };
    double prev = 0.0;
    for (int n : {64, 128, 256}) {
        const Mesh m = build_mesh(spec(MeshFamily::Uniform, 1.0, n));
        const auto y = solve_linear(m, 1.0, [](double) { return 1.0; }, [](double) { return 1.0; }, 0.0, 0.0);
        double err = 0.0;
        for (int i = 0; i <= n; ++i) err = std::max(err, std::abs(y[i] - exact(m.nodes[i])));
        if (n == 64) CHECK(err < 1e-4);
        if (prev > 0) CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.02));
        prev = err;
    }
}

TEST_CASE("trivial data give the zero solution") {
    const Mesh m = build_mesh(spec(MeshFamily::Shishkin, 1e-3, 32));
    const auto y = solve_linear(m, 1e-3, [](double) { return 1.0; }, [](double) { return 0.0; }, 0.0, 0.0);
    CHECK(oracle::max_abs(y) == 0.0);
}

TEST_CASE("discrete maximum principle") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double b0 = 0.1 + u(rng), b1 = u(rng), g0 = 2 * u(rng) - 1, g1 = 5 * u(rng), w = 20 * u(rng);
        const double eps = std::pow(10.0, -4 * u(rng));
        const MeshFamily f = static_cast<MeshFamily>(trial % 4);
        const Mesh m = build_mesh(spec(f, eps, 16 + trial * 13));
        const auto b = nodal(m, [&](double x) { return b0 + b1 * std::cos(w * x) * std::cos(w * x); });
        const auto g = nodal(m, [&](double x) { return g0 + g1 * std::sin(w * x); });
        const auto y = solve_linear(m, eps, b, g, 0.0, 0.0);
        double bound = 0.0;
        for (int i = 1; i < m.n(); ++i) bound = std::max(bound, std::abs(g[i]) / b[i]);
        CHECK(oracle::max_abs(y) <= bound * (1 + 1e-12));
        const auto sys = assemble(m, eps, b, g, 0.0, 0.0);
        std::vector<double> interior(y.begin() + 1, y.end() - 1);
        CHECK(residual_norm(sys, interior) <= 1e-10 * oracle::max_abs(sys.rhs));
    }
}

TEST_CASE("layer problem on Shishkin meshes: slope of the error") {
    // -eps^2 u'' + u = 1 with u(0) = u(1) = 0
    const double eps = 1e-4;
    const ScalarFn exact = [&](double x) {
        return 1 - (std::exp(-x / eps) + std::exp(-(1 - x) / eps)) / (1 + std::exp(-1 / eps));
    };
    std::vector<double> logs, errs;
    for (int n : {64, 128, 256, 512, 1024}) {
        const Mesh m = build_mesh(spec(MeshFamily::Shishkin, eps, n));
        const auto y = solve_linear(m, eps, [](double) { return 1.0; }, [](double) { return 1.0; }, 0.0, 0.0);
        double err = 0.0;
        for (int i = 0; i <= n; ++i) err = std::max(err, std::abs(y[i] - exact(m.nodes[i])));
        logs.push_back(std::log(n / std::log(n)));
        errs.push_back(std::log(err));
    }
    // slope of ln E against ln(n / ln n): the error behaves like (ln n / n)^2
    const double k = static_cast<double>(logs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        sx += logs[i];
        sy += errs[i];
        sxx += logs[i] * logs[i];
        sxy += logs[i] * errs[i];
    }
    const double slope = -(k * sxy - sx * sy) / (k * sxx - sx * sx);
    CHECK(slope >= 1.9);
    CHECK(slope <= 2.2);
}

TEST_CASE("consistent weighting keeps the row sums of the reaction term") {
    const Mesh m = build_mesh(spec(MeshFamily::Vulanovic, 1e-3, 40));
    std::vector<double> b(41, 2.0), g(41, 0.0);
    const auto sys = assemble(m, 1e-3, b, g, 0.0, 0.0, ReactionWeighting::Consistent);
    for (std::size_t k = 0; k < sys.size(); ++k) {
        CHECK(sys.row_sum[k] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(sys.sub[k] + sys.diag[k] + sys.sup[k] == doctest::Approx(2.0).epsilon(1e-6));
    }
    CHECK(parse_weighting("consistent") == ReactionWeighting::Consistent);
    CHECK_THROWS_AS(parse_weighting("lumped"), Error);
}

}  // TEST_SUITE

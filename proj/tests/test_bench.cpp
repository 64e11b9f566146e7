#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "spgrid/bench.hpp"
#include "spgrid/error.hpp"
#include "spgrid/twogrid.hpp"

using namespace spgrid;

TEST_SUITE("bench") {

TEST_CASE("nodal_error") {
    MeshSpec s;
    s.family = MeshFamily::Shishkin;
    s.eps = 1e-2;
    s.n = 16;
    const Mesh m = build_mesh(s);
    const ScalarFn exact = [](double x) { return std::sin(x); };
    std::vector<double> y(m.nodes.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = exact(m.nodes[i]);
    CHECK(nodal_error(m, y, exact) == 0.0);
    y[5] += 1e-3;
    CHECK(nodal_error(m, y, exact) == doctest::Approx(1e-3).epsilon(1e-12));
    try {
        nodal_error(m, y, nullptr);
        FAIL("expected MissingExact");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingExact);
    }
}

TEST_CASE("interpolant_error") {
    MeshSpec s;
    s.family = MeshFamily::Vulanovic;
    s.eps = 1e-2;
    s.n = 20;
    const Mesh m = build_mesh(s);
    const ScalarFn line = [](double x) { return 3 * x - 1; };
    std::vector<double> y(m.nodes.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = line(m.nodes[i]);
    CHECK(interpolant_error(m, y, line) <= 1e-14);
    CHECK_THROWS_AS(interpolant_error(m, y, line, 5), Error);

    const double eps = 1e-2;
    s.family = MeshFamily::Shishkin;
    s.n = 64;
    const Mesh sm = build_mesh(s);
    const SemilinearProblem p = example1(eps);
    NewtonConfig cfg;
    cfg.weighting = ReactionWeighting::Consistent;
    const auto sol = solve_semilinear(sm, p, cfg).y;
    const double en = nodal_error(sm, sol, p.exact);
    const double ei = interpolant_error(sm, sol, p.exact);
    CHECK(std::isfinite(ei));
    CHECK(ei >= en);
    std::vector<double> nodal(sm.nodes.size());
    for (std::size_t i = 0; i < nodal.size(); ++i) nodal[i] = p.exact(sm.nodes[i]);
    const double ei_exact = interpolant_error(sm, nodal, p.exact);
    CHECK(ei <= en + ei_exact + 1e-15);
}

TEST_CASE("convergence_order and fitted_slope") {
    CHECK(std::abs(convergence_order(3.230e-2, 7.5e-3) - 2.1066) <= 1e-3);
    CHECK(convergence_order(0.8, 0.2) == 2.0);
    CHECK(std::abs(convergence_order(4.470e-4, 8.554e-5) - 2.3855) <= 1e-3);
    try {
        convergence_order(1e-3, 0.0);
        FAIL("expected DegenerateError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateError);
    }
    const std::vector<int> N{8, 16, 32, 64};
    std::vector<double> E;
    for (int v : N) E.push_back(5.0 * std::pow(v, -3.5));
    CHECK(fitted_slope(N, E) == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("format_number") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1e-2) == "0.01");
    CHECK(format_number(0.4) == "0.4");
    CHECK(format_number(4096.0) == "4096");
    CHECK(format_number(1.2345678e-4) == "1.23457e-04");
    CHECK(format_number(2.10661234) == "2.10661");
}

TEST_CASE("boundary-layer point percentages") {
    const double eps = std::ldexp(1.0, -8);
    const auto rows = layer_report(eps, {MeshFamily::Shishkin, MeshFamily::Vulanovic, MeshFamily::Bakhvalov},
                                   {8, 16, 32, 64}, {64, 256, 1024, 4096});
    const std::vector<std::vector<double>> expected{
        {25, 12.5, 12.5, 6.25}, {6.25, 4.69, 3.71, 3.03},   {50, 50, 43.75, 40.63},
        {40.63, 40.63, 40.04, 40.04}, {25, 25, 18.75, 18.75}, {18.75, 17.97, 17.77, 17.72}};
    REQUIRE(rows.size() == 6);
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t k = 0; k < 4; ++k) {
            INFO(to_string(rows[r].family) << " step " << rows[r].step << " n=" << rows[r].sizes[k]);
            CHECK(std::round(rows[r].percent[k] * 100) / 100 == doctest::Approx(expected[r][k]).epsilon(1e-12));
        }
    const auto b1 = layer_report(eps, {MeshFamily::Bakhvalov, MeshFamily::Uniform}, {8}, {64}, 1.0);
    int inside = 0;
    MeshSpec b1_spec;
    b1_spec.family = MeshFamily::Bakhvalov;
    b1_spec.eps = eps;
    b1_spec.n = 8;
    const Mesh b1_mesh = build_mesh(b1_spec);
    for (double x : b1_mesh.nodes) inside += x <= eps || x >= 1 - eps;
    CHECK(b1[0].percent[0] == 100.0 * inside / 8);
    CHECK(b1[2].percent[0] == 25.0);
    CHECK(render_layers(rows).find("shishkin step 2:") != std::string::npos);
}

TEST_CASE("run_report validation") {
    ReportConfig cfg;
    cfg.N.clear();
    CHECK_THROWS_AS(run_report(cfg), Error);
    cfg = ReportConfig{};
    cfg.N = {16, 8};
    CHECK_THROWS_AS(run_report(cfg), Error);
    cfg = ReportConfig{};
    cfg.problem = "ex3";
    CHECK_THROWS_AS(run_report(cfg), Error);
    cfg = ReportConfig{};
    cfg.eps = {0.0};
    CHECK_THROWS_AS(run_report(cfg), Error);
    CHECK_THROWS_AS(parse_algorithm("tg3"), Error);
    CHECK(parse_algorithm("tg1_ropt") == Algorithm::TG1ROpt);
}

TEST_CASE("run_report is deterministic across thread counts") {
    ReportConfig cfg;
    cfg.families = {MeshFamily::Shishkin, MeshFamily::Vulanovic, MeshFamily::Bakhvalov};
    cfg.eps = {1e-1, 1e-2, 1e-4};
    cfg.N = {8, 16, 32};
    cfg.threads = 1;
    const Report serial = run_report(cfg);
    cfg.threads = 7;
    const Report parallel = run_report(cfg);
    const Report again = run_report(cfg);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    REQUIRE(serial.rows.size() == 3u * 3u * 2u * 3u);
    for (std::size_t k = 0; k < serial.rows.size(); ++k) {
        CHECK(serial.rows[k].error == parallel.rows[k].error);
        CHECK(again.rows[k].error == parallel.rows[k].error);
        CHECK(serial.rows[k].n == parallel.rows[k].n);
        CHECK(serial.rows[k].order.has_value() == parallel.rows[k].order.has_value());
    }
    CHECK_FALSE(serial.any_failed());
}

TEST_CASE("run_report rendering") {
    ReportConfig cfg;
    cfg.families = {MeshFamily::Vulanovic};
    cfg.eps = {1e-2};
    cfg.N = {8, 16};
    const Report rep = run_report(cfg);

    std::istringstream csv(rep.render(OutputFormat::Csv));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "problem,mesh,a,q,gamma0,eps,N,n,step,error,order,iterations,seconds");
    std::vector<std::string> lines;
    while (std::getline(csv, line)) lines.push_back(line);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0].rfind("ex1,vulanovic,1,0.4,1,0.01,8,8,1,", 0) == 0);
    CHECK(lines[2].rfind("ex1,vulanovic,1,0.4,1,0.01,8,64,2,", 0) == 0);
    // the finest row of each step has an empty order column
    auto field = [](const std::string& l, int idx) {
        std::istringstream in(l);
        std::string f;
        for (int k = 0; k <= idx; ++k) std::getline(in, f, ',');
        return f;
    };
    CHECK_FALSE(field(lines[0], 10).empty());
    CHECK(field(lines[1], 10).empty());
    CHECK(field(lines[3], 10).empty());

    const auto j = nlohmann::json::parse(rep.render(OutputFormat::Json));
    CHECK(j.contains("config"));
    REQUIRE(j["rows"].size() == 4);
    CHECK(j["rows"][0]["mesh"] == "vulanovic");
    CHECK(j["rows"][1]["order"].is_null());
    CHECK(j["rows"][2]["n"] == 64);

    const std::string md = rep.render(OutputFormat::Markdown);
    CHECK(md.find("| Step 2 |") != std::string::npos);
}

TEST_CASE("failed cells are recorded, not thrown") {
    ReportConfig cfg;
    cfg.families = {MeshFamily::Shishkin};
    cfg.N = {8, 16};
    cfg.newton.max_iter = 1;
    cfg.newton.initial = InitialGuess::Zero;
    const Report rep = run_report(cfg);
    CHECK(rep.any_failed());
    CHECK(rep.rows.front().message.find("NoConvergence") != std::string::npos);
    CHECK_FALSE(rep.rows.front().order.has_value());
}

TEST_CASE("timing comparison") {
    MeshSpec mesh;
    mesh.family = MeshFamily::Bakhvalov;
    mesh.a = 4.0;
    const SemilinearProblem p = example1(1e-2);
    NewtonConfig cfg;
    cfg.weighting = ReactionWeighting::Consistent;
    const auto rows = timing_comparison(p, mesh, {8, 64}, cfg, 3);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].n == 64);
    CHECK(rows[1].n == 4096);
    CHECK(rows[1].ratio > 1.0);
    CHECK(render_timing(rows).find("| 64 | 4096 |") != std::string::npos);

    // repeated measurements of the same cell stay within 20 % of their median
    std::vector<double> t;
    for (int k = 0; k < 5; ++k) t.push_back(timing_comparison(p, mesh, {64}, cfg, 3)[0].direct_seconds);
    std::vector<double> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[2];
    int within = 0;
    for (double v : t) within += std::abs(v - median) <= 0.2 * median;
    CHECK(within >= 4);
}

}  // TEST_SUITE

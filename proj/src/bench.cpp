#include "spgrid/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <type_traits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "spgrid/error.hpp"
#include "spgrid/twogrid.hpp"

namespace spgrid {

double nodal_error(const Mesh& mesh, std::span<const double> y, const ScalarFn& exact) {
    if (!exact) throw Error(ErrorCode::MissingExact, "problem has no exact solution");
    if (y.size() != mesh.nodes.size()) throw Error(ErrorCode::Validation, "nodal vector length mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) e = std::max(e, std::abs(exact(mesh.nodes[i]) - y[i]));
    return e;
}

double interpolant_error(const Mesh& mesh, std::span<const double> y, const ScalarFn& exact, int samples) {
    if (!exact) throw Error(ErrorCode::MissingExact, "problem has no exact solution");
    const int n = mesh.n();
    if (samples <= 0) samples = 10 * n;
    if (samples < 10 * n) throw Error(ErrorCode::Validation, "interpolant_error needs at least 10 n samples");
    std::vector<double> pts(mesh.nodes);
    pts.reserve(pts.size() + samples + 1);
    for (int k = 0; k <= samples; ++k) pts.push_back(static_cast<double>(k) / samples);
    std::sort(pts.begin(), pts.end());
    const std::vector<double> vals = interpolate(mesh, y, pts);
    double e = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) e = std::max(e, std::abs(exact(pts[k]) - vals[k]));
    return e;
}

double convergence_order(double e_coarse, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0))
        throw Error(ErrorCode::DegenerateError, "orders need strictly positive errors");
    return (std::log(e_coarse) - std::log(e_fine)) / std::log(2.0);
}

double fitted_slope(std::span<const int> sizes, std::span<const double> errors) {
    if (sizes.size() != errors.size() || sizes.size() < 2)
        throw Error(ErrorCode::Validation, "slope fit needs at least two (N, E) pairs");
    const double m = static_cast<double>(sizes.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (!(errors[k] > 0.0)) throw Error(ErrorCode::DegenerateError, "slope fit needs positive errors");
        const double x = std::log(static_cast<double>(sizes[k]));
        const double y = -std::log(errors[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Direct: return "direct";
        case Algorithm::TG1: return "tg1";
        case Algorithm::TG2: return "tg2";
        case Algorithm::TG1ROpt: return "tg1_ropt";
    }
    return "tg1";
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "direct") return Algorithm::Direct;
    if (name == "tg1") return Algorithm::TG1;
    if (name == "tg2") return Algorithm::TG2;
    if (name == "tg1_ropt") return Algorithm::TG1ROpt;
    throw Error(ErrorCode::Validation, "unknown algorithm '" + name + "'");
}

OutputFormat parse_format(const std::string& name) {
    if (name == "markdown") return OutputFormat::Markdown;
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw Error(ErrorCode::Validation, "unknown format '" + name + "'");
}

ErrorMetric parse_metric(const std::string& name) {
    if (name == "nodal") return ErrorMetric::Nodal;
    if (name == "interpolant") return ErrorMetric::Interpolant;
    throw Error(ErrorCode::Validation, "unknown metric '" + name + "'");
}

void ReportConfig::validate() const {
    if (problem != "ex1" && problem != "ex2") throw Error(ErrorCode::Validation, "problem must be ex1 or ex2");
    if (families.empty()) throw Error(ErrorCode::Validation, "mesh family list is empty");
    if (eps.empty()) throw Error(ErrorCode::Validation, "eps list is empty");
    if (N.empty()) throw Error(ErrorCode::Validation, "N list is empty");
    for (double e : eps)
        if (!(e > 0.0 && e <= 1.0)) throw Error(ErrorCode::Validation, "eps values must lie in (0, 1]");
    for (std::size_t k = 0; k < N.size(); ++k) {
        if (N[k] < 2) throw Error(ErrorCode::Validation, "N values must be at least 2");
        if (k > 0 && N[k] <= N[k - 1]) throw Error(ErrorCode::Validation, "N list must be strictly increasing");
    }
    if (algorithm == Algorithm::TG1 && !(r > 1.0)) throw Error(ErrorCode::Validation, "r must exceed 1");
    if (algorithm == Algorithm::TG1ROpt)
        for (int v : N)
            if (v < 4) throw Error(ErrorCode::Validation, "tg1_ropt needs N >= 4");
    if (algorithm == Algorithm::TG2 && levels < 1) throw Error(ErrorCode::Validation, "levels must be at least 1");
    if (a && !(*a > 0.0)) throw Error(ErrorCode::Validation, "a must be positive");
    if (!(q > 0.0 && q < 0.5)) throw Error(ErrorCode::Validation, "q must lie in (0, 0.5)");
    if (!(gamma0 > 0.0)) throw Error(ErrorCode::Validation, "gamma0 must be positive");
    if (threads < 0) throw Error(ErrorCode::Validation, "threads must be nonnegative");
    newton.validate();
}

double default_a(const std::string& problem, MeshFamily family, Algorithm algorithm) {
    if (problem == "ex2") return 2.0;
    if (family == MeshFamily::Bakhvalov) return 4.0;
    if (family == MeshFamily::Vulanovic) return algorithm == Algorithm::TG2 ? 3.0 : 1.0;
    return 1.0;
}

LayerSides default_sides(const std::string& problem, MeshFamily family) {
    if (problem == "ex2" && (family == MeshFamily::Bakhvalov || family == MeshFamily::Vulanovic))
        return LayerSides::LeftOnly;
    return LayerSides::Both;
}

ReactionWeighting default_weighting(const std::string& problem, Algorithm algorithm) {
    if (problem == "ex1" && algorithm != Algorithm::TG2) return ReactionWeighting::Consistent;
    return ReactionWeighting::Pointwise;
}

namespace {

struct CellKey {
    std::size_t family;
    std::size_t eps;
    std::size_t N;
};

struct CellResult {
    std::vector<int> sizes;
    std::vector<double> errors;
    std::vector<double> seconds;
    std::vector<int> iterations;
    bool failed = false;
    std::string message;
};

int steps_for(const ReportConfig& cfg) {
    switch (cfg.algorithm) {
        case Algorithm::Direct: return 1;
        case Algorithm::TG2: return cfg.levels + 1;
        default: return 2;
    }
}

MeshSpec cell_mesh(const ReportConfig& cfg, MeshFamily family, double eps, int N) {
    MeshSpec s;
    s.family = family;
    s.eps = eps;
    s.n = N;
    s.a = cfg.a.value_or(default_a(cfg.problem, family, cfg.algorithm));
    s.q = cfg.q;
    s.gamma0 = cfg.gamma0;
    s.layer_sides = cfg.sides.value_or(default_sides(cfg.problem, family));
    return s;
}

template <class Problem>
CellResult run_cell_with(const Problem& p, const ReportConfig& cfg, const MeshSpec& spec) {
    NewtonConfig newton = cfg.newton;
    newton.weighting = cfg.weighting.value_or(default_weighting(cfg.problem, cfg.algorithm));
    CellResult cell;
    auto measure = [&](const Mesh& mesh, const std::vector<double>& y) {
        return cfg.metric == ErrorMetric::Nodal ? nodal_error(mesh, y, p.exact)
                                                : interpolant_error(mesh, y, p.exact);
    };
    if (cfg.algorithm == Algorithm::Direct) {
        const auto t0 = std::chrono::steady_clock::now();
        const Mesh mesh = build_mesh(spec);
        SolveOutcome out;
        if constexpr (std::is_same_v<Problem, SemilinearProblem>)
            out = solve_semilinear(mesh, p, newton);
        else
            out = solve_quasilinear_diffusion(mesh, p, newton);
        cell.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        cell.sizes.push_back(spec.n);
        cell.errors.push_back(measure(mesh, out.y));
        cell.iterations.push_back(out.iterations);
        return cell;
    }
    TwoGridPlan plan;
    plan.N = spec.n;
    plan.mesh = spec;
    plan.r = cfg.r;
    if (cfg.algorithm == Algorithm::TG1ROpt) plan.n = choose_r(spec.n).n;
    plan.cascade_levels = cfg.algorithm == Algorithm::TG2 ? cfg.levels : 1;
    const TwoGridResult res = algorithm2(p, plan, newton);
    for (std::size_t k = 0; k < res.meshes.size(); ++k) {
        cell.sizes.push_back(res.meshes[k].n());
        cell.errors.push_back(measure(res.meshes[k], res.outcomes[k].y));
        cell.seconds.push_back(res.seconds[k]);
        cell.iterations.push_back(res.outcomes[k].iterations);
    }
    return cell;
}

CellResult run_cell(const ReportConfig& cfg, MeshFamily family, double eps, int N) {
    try {
        const MeshSpec spec = cell_mesh(cfg, family, eps, N);
        if (cfg.problem == "ex1") return run_cell_with(example1(eps), cfg, spec);
        return run_cell_with(example2(eps), cfg, spec);
    } catch (const std::exception& ex) {
        CellResult cell;
        cell.failed = true;
        cell.message = ex.what();
        return cell;
    }
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

}  // namespace

std::string format_number(double v) {
    if (v == 0.0) return "0";
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    if (std::abs(v) < 1e-3) return fmt("%.5e", v);
    return fmt("%.6g", v);
}

Report run_report(const ReportConfig& cfg) {
    cfg.validate();
    std::vector<CellKey> keys;
    for (std::size_t f = 0; f < cfg.families.size(); ++f)
        for (std::size_t e = 0; e < cfg.eps.size(); ++e)
            for (std::size_t k = 0; k < cfg.N.size(); ++k) keys.push_back({f, e, k});

    std::vector<CellResult> results(keys.size());
    unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(keys.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t idx; (idx = next.fetch_add(1)) < keys.size();) {
            const CellKey& key = keys[idx];
            results[idx] = run_cell(cfg, cfg.families[key.family], cfg.eps[key.eps], cfg.N[key.N]);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    Report report;
    report.config = cfg;
    const int steps = steps_for(cfg);
    std::size_t idx = 0;
    for (std::size_t f = 0; f < cfg.families.size(); ++f) {
        for (std::size_t e = 0; e < cfg.eps.size(); ++e) {
            const std::size_t base = idx;
            for (int step = 1; step <= steps; ++step) {
                for (std::size_t k = 0; k < cfg.N.size(); ++k) {
                    const CellResult& cell = results[base + k];
                    const MeshSpec spec = cell_mesh(cfg, cfg.families[f], cfg.eps[e], cfg.N[k]);
                    ConvergenceRow row;
                    row.problem = cfg.problem;
                    row.family = spec.family;
                    row.a = spec.a;
                    row.q = spec.q;
                    row.gamma0 = spec.gamma0;
                    row.eps = spec.eps;
                    row.N = cfg.N[k];
                    row.step = step;
                    if (cell.failed) {
                        row.failed = true;
                        row.message = cell.message;
                    } else {
                        row.n = cell.sizes[step - 1];
                        row.error = cell.errors[step - 1];
                        row.iterations = cell.iterations[step - 1];
                        row.seconds = cell.seconds[step - 1];
                    }
                    if (k + 1 < cfg.N.size()) {
                        const CellResult& finer = results[base + k + 1];
                        if (!cell.failed && !finer.failed && cell.errors[step - 1] > 0.0 &&
                            finer.errors[step - 1] > 0.0) {
                            row.order = std::log(cell.errors[step - 1] / finer.errors[step - 1]) /
                                        std::log(static_cast<double>(cfg.N[k + 1]) / cfg.N[k]);
                        }
                    }
                    report.rows.push_back(std::move(row));
                }
            }
            idx += cfg.N.size();
        }
    }
    return report;
}

bool Report::any_failed() const {
    return std::any_of(rows.begin(), rows.end(), [](const ConvergenceRow& r) { return r.failed; });
}

std::vector<ConvergenceRow> Report::series(MeshFamily family, double eps, int step) const {
    std::vector<ConvergenceRow> out;
    for (const auto& r : rows)
        if (r.family == family && r.eps == eps && r.step == step) out.push_back(r);
    return out;
}

namespace {

std::string render_csv(const Report& rep) {
    std::ostringstream out;
    out << "problem,mesh,a,q,gamma0,eps,N,n,step,error,order,iterations,seconds\n";
    for (const auto& r : rep.rows) {
        out << r.problem << ',' << to_string(r.family) << ',' << format_number(r.a) << ',' << format_number(r.q)
            << ',' << format_number(r.gamma0) << ',' << format_number(r.eps) << ',' << r.N << ',' << r.n << ','
            << r.step << ',' << (r.failed ? "" : format_number(r.error)) << ','
            << (r.order ? format_number(*r.order) : "") << ',' << r.iterations << ',' << format_number(r.seconds)
            << '\n';
    }
    return out.str();
}

nlohmann::json config_json(const ReportConfig& c) {
    nlohmann::json j;
    j["problem"] = c.problem;
    std::vector<std::string> fams;
    for (auto f : c.families) fams.push_back(to_string(f));
    j["mesh"] = fams;
    j["eps"] = c.eps;
    j["N"] = c.N;
    j["algorithm"] = to_string(c.algorithm);
    if (c.algorithm == Algorithm::TG1) j["r"] = c.r;
    if (c.algorithm == Algorithm::TG2) j["levels"] = c.levels;
    j["a"] = c.a ? nlohmann::json(*c.a) : nlohmann::json("default");
    j["q"] = c.q;
    j["gamma0"] = c.gamma0;
    j["layer_sides"] = c.sides ? to_string(*c.sides) : "default";
    j["reaction"] = c.weighting ? to_string(*c.weighting) : "default";
    j["metric"] = c.metric == ErrorMetric::Nodal ? "nodal" : "interpolant";
    j["tol"] = c.newton.tol;
    j["max_iter"] = c.newton.max_iter;
    j["initial"] = to_string(c.newton.initial);
    return j;
}

std::string render_json(const Report& rep) {
    nlohmann::json j;
    j["config"] = config_json(rep.config);
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rep.rows) {
        nlohmann::json o;
        o["problem"] = r.problem;
        o["mesh"] = to_string(r.family);
        o["a"] = r.a;
        o["q"] = r.q;
        o["gamma0"] = r.gamma0;
        o["eps"] = r.eps;
        o["N"] = r.N;
        o["n"] = r.n;
        o["step"] = r.step;
        o["error"] = r.failed ? nlohmann::json(nullptr) : nlohmann::json(r.error);
        o["order"] = r.order ? nlohmann::json(*r.order) : nlohmann::json(nullptr);
        o["iterations"] = r.iterations;
        o["seconds"] = r.seconds;
        if (r.failed) {
            o["failed"] = true;
            o["message"] = r.message;
        }
        j["rows"].push_back(o);
    }
    return j.dump(2) + "\n";
}

std::string render_markdown(const Report& rep) {
    const ReportConfig& c = rep.config;
    const int steps = steps_for(c);
    std::ostringstream out;
    for (MeshFamily fam : c.families) {
        for (double eps : c.eps) {
            const auto first = rep.series(fam, eps, 1);
            out << "### " << c.problem << ", " << to_string(fam) << " mesh";
            if (fam == MeshFamily::Bakhvalov || fam == MeshFamily::Vulanovic)
                out << " (a=" << format_number(first.front().a) << ", q=" << format_number(first.front().q) << ")";
            if (fam == MeshFamily::Shishkin) out << " (gamma0=" << format_number(first.front().gamma0) << ")";
            out << ", eps = " << fmt("%.0e", eps) << ", " << to_string(c.algorithm) << "\n\n| |";
            for (int N : c.N) out << " N=" << N << " |";
            out << "\n|---|";
            for (std::size_t k = 0; k < c.N.size(); ++k) out << "---|";
            out << '\n';
            for (int step = 1; step <= steps; ++step) {
                const auto s = rep.series(fam, eps, step);
                if (step > 1) {
                    out << "| n (step " << step << ") |";
                    for (const auto& r : s) out << ' ' << (r.failed ? "-" : std::to_string(r.n)) << " |";
                    out << '\n';
                }
                out << "| Step " << step << " |";
                for (const auto& r : s) out << ' ' << (r.failed ? "failed" : fmt("%.3e", r.error)) << " |";
                out << "\n| order |";
                for (const auto& r : s) out << ' ' << (r.order ? fmt("%.4f", *r.order) : "") << " |";
                out << "\n| seconds |";
                for (const auto& r : s) out << ' ' << (r.failed ? "" : fmt("%.4f", r.seconds)) << " |";
                out << '\n';
            }
            out << '\n';
            for (const auto& r : first)
                if (r.failed) out << "N=" << r.N << " failed: " << r.message << '\n';
        }
    }
    return out.str();
}

}  // namespace

std::string Report::render() const { return render(config.format); }

std::string Report::render(OutputFormat format) const {
    switch (format) {
        case OutputFormat::Csv: return render_csv(*this);
        case OutputFormat::Json: return render_json(*this);
        case OutputFormat::Markdown: return render_markdown(*this);
    }
    return render_markdown(*this);
}

std::vector<LayerRow> layer_report(double eps, const std::vector<MeshFamily>& families, const std::vector<int>& coarse,
                                   const std::vector<int>& fine, std::optional<double> a, double q, double gamma0) {
    std::vector<LayerRow> rows;
    for (MeshFamily fam : families) {
        for (int step = 1; step <= 2; ++step) {
            LayerRow row{fam, step, step == 1 ? coarse : fine, {}};
            for (int n : row.sizes) {
                MeshSpec s;
                s.family = fam;
                s.eps = eps;
                s.n = n;
                s.a = a.value_or(default_a("ex1", fam, Algorithm::TG1));
                s.q = q;
                s.gamma0 = gamma0;
                row.percent.push_back(layer_fraction(build_mesh(s), eps));
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string render_layers(const std::vector<LayerRow>& rows) {
    std::ostringstream out;
    for (const auto& row : rows) {
        out << to_string(row.family) << " step " << row.step << ":";
        for (std::size_t k = 0; k < row.sizes.size(); ++k)
            out << "  n=" << row.sizes[k] << " " << fmt("%.2f%%", row.percent[k]);
        out << '\n';
    }
    return out.str();
}

std::vector<TimingRow> timing_comparison(const SemilinearProblem& p, const MeshSpec& mesh,
                                         const std::vector<int>& coarse, const NewtonConfig& cfg, int repeats) {
    using Clock = std::chrono::steady_clock;
    if (repeats < 1) throw Error(ErrorCode::Validation, "repeats must be at least 1");
    std::vector<TimingRow> rows;
    for (int N : coarse) {
        TimingRow row;
        row.N = N;
        row.n = N * N;
        TwoGridPlan plan;
        plan.N = N;
        plan.mesh = mesh;
        double best_tg = 1e300, best_direct = 1e300;
        for (int k = 0; k < repeats; ++k) {
            auto t0 = Clock::now();
            const TwoGridResult tg = algorithm1(p, plan, cfg);
            const double tg_secs = std::chrono::duration<double>(Clock::now() - t0).count();
            if (tg_secs < best_tg) {
                best_tg = tg_secs;
                row.coarse_seconds = tg.seconds[0];
                row.fine_seconds = tg.seconds[1];
            }
            t0 = Clock::now();
            MeshSpec fine = mesh;
            fine.eps = p.eps;
            fine.n = row.n;
            const SolveOutcome direct = solve_semilinear(build_mesh(fine), p, cfg);
            best_direct = std::min(best_direct, std::chrono::duration<double>(Clock::now() - t0).count());
            (void)direct;
        }
        row.two_grid_seconds = best_tg;
        row.direct_seconds = best_direct;
        row.ratio = best_direct / best_tg;
        rows.push_back(row);
    }
    return rows;
}

std::string render_timing(const std::vector<TimingRow>& rows) {
    std::ostringstream out;
    out << "| N | n | coarse s | fine linear s | two-grid s | direct s | direct/two-grid |\n";
    out << "|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows)
        out << "| " << r.N << " | " << r.n << " | " << fmt("%.4g", r.coarse_seconds) << " | "
            << fmt("%.4g", r.fine_seconds) << " | " << fmt("%.4g", r.two_grid_seconds) << " | "
            << fmt("%.4g", r.direct_seconds) << " | " << fmt("%.3g", r.ratio) << " |\n";
    return out.str();
}

}  // namespace spgrid

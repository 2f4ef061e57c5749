#include "schw_cli/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "schw/errors.hpp"
#include "schw/fd_oracle.hpp"
#include "schw/geometry.hpp"
#include "schw/mode_odes.hpp"
#include "schw/spectral.hpp"
#include "schw/surfaces.hpp"

#ifndef SCHW_VERSION
#define SCHW_VERSION "unknown"
#endif

namespace schw::cli {

namespace {

using json = nlohmann::ordered_json;

struct RunConfig {
    double mass = 1.0;
    double ode_tol = 1e-10;
    double root_tol = 1e-12;
    double quad_tol = 1e-8;
    std::string output = "table";
    std::string out_path;
    std::uint64_t seed = 0;

    std::string R;
    int k = 0;
    int kmax = 5;
    int count = 3;
    std::string method = "shooting";
    int grid = 1024;
    std::optional<double> rho_max;
    std::optional<double> rho_min;
    std::string surface = "plane";
    std::optional<double> c;
    double r_min = 0.0;
    std::optional<double> r_max;
    int points = 0;
};

/// Thrown for bad option values that CLI11 cannot see (grid ranges, surface grammar, ...).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A table with named columns; serialized as CSV rows or a JSON array of objects.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

std::string csv_cell(const json& v) {
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_null()) return "";
    return v.get<std::string>();
}

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
}

json table_json(const Table& t) {
    json arr = json::array();
    for (const auto& row : t.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = row[i];
        arr.push_back(std::move(obj));
    }
    return arr;
}

// JSON cannot carry inf/nan; they become null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json header(const RunConfig& cfg, const std::string& command) {
    json h;
    h["tool"] = "schw";
    h["version"] = SCHW_VERSION;
    h["command"] = command;
    h["mass"] = cfg.mass;
    h["tolerances"] = {{"ode_tol", cfg.ode_tol}, {"root_tol", cfg.root_tol}, {"quad_tol", cfg.quad_tol}};
    h["seed"] = cfg.seed;
    return h;
}

// Result of one subcommand: summary scalars plus an optional row table.
struct Report {
    json summary = json::object();
    std::optional<Table> table;
};

void emit(std::ostream& os, const RunConfig& cfg, const std::string& command, const Report& rep) {
    if (cfg.output == "json") {
        json doc;
        doc["header"] = header(cfg, command);
        doc["result"] = rep.summary;
        if (rep.table) doc["rows"] = table_json(*rep.table);
        os << doc.dump(2) << '\n';
        return;
    }
    if (rep.table) {
        // Summary scalars become constant trailing columns so the output stays one CSV block.
        Table t = *rep.table;
        for (const auto& [key, value] : rep.summary.items()) {
            t.columns.push_back(key);
            for (auto& row : t.rows) row.push_back(value);
        }
        write_csv(os, t);
        return;
    }
    Table t;
    std::vector<json> row;
    for (const auto& [key, value] : rep.summary.items()) {
        t.columns.push_back(key);
        row.push_back(value);
    }
    t.rows.push_back(std::move(row));
    write_csv(os, t);
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
    const unsigned workers = std::min<std::size_t>(thread_budget(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
    }
    if (failure) std::rethrow_exception(failure);
}

double resolve_R(const RunConfig& cfg, const SchwarzschildModel& model) {
    if (cfg.R.empty()) throw UsageError("--R is required");
    if (cfg.R == "R*" || cfg.R == "Rstar") return stability_radius(model, cfg.root_tol);
    try {
        std::size_t used = 0;
        const double R = std::stod(cfg.R, &used);
        if (used == cfg.R.size()) return R;
    } catch (const std::exception&) {
    }
    throw UsageError("--R: expected a number, R* or Rstar, got '" + cfg.R + "'");
}

std::vector<double> log_points(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

Report cmd_geometry(const RunConfig& cfg) {
    const SchwarzschildModel model(cfg.mass);
    const double r_max = cfg.r_max.value_or(1e4);
    const int points = cfg.points > 0 ? cfg.points : 13;
    if (!(r_max > cfg.r_min) || cfg.r_min < 0.0 || points < 2)
        throw UsageError("geom: need 0 <= --r-min < --r-max and --points >= 2");
    std::vector<double> rs;
    double lo = cfg.r_min;
    if (lo == 0.0) {
        rs.push_back(0.0);
        lo = std::min(1e-3 * (model.flat() ? 1.0 : model.mass()), 1e-3 * r_max);
    }
    for (double r : log_points(lo, r_max, points)) rs.push_back(r);

    Table t{{"rho_iso", "s", "r", "h", "f"}, {}};
    for (double r : rs) {
        const HorizonDistance dist(r);
        const auto h = areal_from_distance(model, dist, cfg.root_tol);
        const auto rho = isotropic_from_areal(model, h);
        const double s = areal_from_isotropic(model, rho).value();
        t.rows.push_back({rho.value(), s, r, h.value(), static_potential(model, dist, cfg.root_tol)});
    }
    return {json::object(), t};
}

Report cmd_stability_radius(const RunConfig& cfg) {
    const SchwarzschildModel model(cfg.mass);
    const double R = stability_radius(model, cfg.root_tol);
    Report rep;
    rep.summary["mass"] = cfg.mass;
    rep.summary["R_star"] = R;
    rep.summary["ratio"] = R / cfg.mass;
    rep.summary["residual"] = stability_residual(model, R);
    return rep;
}

Report cmd_spectrum(const RunConfig& cfg) {
    const SchwarzschildModel model(cfg.mass);
    const double R = resolve_R(cfg, model);
    if (cfg.count < 1) throw UsageError("--count must be >= 1");
    const bool shoot = cfg.method == "shooting" || cfg.method == "both";
    const bool fd = cfg.method == "fd" || cfg.method == "both";
    const double m2 = cfg.mass * cfg.mass;

    std::vector<double> by_shooting, by_fd;
    parallel_for(2, [&](std::size_t which) {
        if (which == 0 && shoot) {
            const auto sp = eigenvalues_shooting(model, cfg.k, R, cfg.count, cfg.root_tol, cfg.ode_tol);
            for (const auto& e : sp.entries) by_shooting.push_back(e.lambda);
        }
        if (which == 1 && fd) {
            for (int n = 1; n <= cfg.count; ++n)
                by_fd.push_back(richardson_eigenvalue(model, cfg.k, R, cfg.grid, n));
        }
    });

    Report rep;
    rep.summary["R"] = R;
    rep.summary["k"] = cfg.k;
    rep.summary["method"] = cfg.method;
    Table t;
    if (cfg.method == "both") {
        t.columns = {"n", "lambda_shooting", "lambda_fd", "lambda_shooting_m2", "agreement"};
        for (std::size_t i = 0; i < by_shooting.size(); ++i) {
            const double a = by_shooting[i], b = by_fd[i];
            t.rows.push_back({static_cast<int>(i + 1), a, b, a * m2, std::abs(a - b) / std::abs(a)});
        }
    } else {
        const auto& vals = shoot ? by_shooting : by_fd;
        t.columns = {"n", "lambda", "lambda_m2"};
        for (std::size_t i = 0; i < vals.size(); ++i)
            t.rows.push_back({static_cast<int>(i + 1), vals[i], vals[i] * m2});
    }
    rep.table = std::move(t);
    return rep;
}

Report cmd_morse_index(const RunConfig& cfg) {
    const SchwarzschildModel model(cfg.mass);
    const double R = resolve_R(cfg, model);
    if (cfg.kmax < 1) throw UsageError("--kmax must be >= 1");
    std::vector<int> counts(static_cast<std::size_t>(cfg.kmax) + 1);
    parallel_for(counts.size(), [&](std::size_t k) {
        counts[k] = negative_count(model, static_cast<int>(k), R, cfg.ode_tol);
    });
    Table t{{"k", "negative_count"}, {}};
    int index = 0;
    for (int k = -cfg.kmax; k <= cfg.kmax; ++k) {
        const int n = counts[static_cast<std::size_t>(std::abs(k))];
        t.rows.push_back({k, n});
        index += n;
    }
    Report rep;
    rep.summary["R"] = R;
    rep.summary["kmax"] = cfg.kmax;
    rep.summary["morse_index"] = index;
    rep.table = std::move(t);
    return rep;
}

ParamSurface build_surface(const RunConfig& cfg, const SchwarzschildModel& model, double t_max,
                           std::ostream& err) {
    const auto spec = parse_surface(cfg.surface);
    if (!spec) throw UsageError("--surface: expected plane, plane:rotated:<seed> or cone:<theta0>");
    switch (spec->kind) {
        case SurfaceSpec::Kind::plane:
            return make_plane(model, t_max);
        case SurfaceSpec::Kind::rotated_plane:
            return make_plane(model, t_max, Rotation::random(spec->seed));
        case SurfaceSpec::Kind::cone: {
            const auto curve = SphereCurve::latitude_circle(spec->theta0, Rotation::random(cfg.seed));
            if (!curve.great_circle)
                err << "warning: cone over a latitude circle at colatitude " << spec->theta0
                    << " is not minimal; monotonicity and the boundary bound are not guaranteed\n";
            return make_cone(model, curve, t_max);
        }
    }
    throw UsageError("--surface: unsupported");
}

double default_rho_max(const RunConfig& cfg) {
    return cfg.rho_max.value_or(1000.0 * (cfg.mass > 0 ? cfg.mass : 1.0));
}

Report cmd_monotonicity(const RunConfig& cfg, std::ostream& err) {
    const SchwarzschildModel model(cfg.mass);
    const double rho_max = default_rho_max(cfg);
    const double rho_min = cfg.rho_min.value_or(1e-3 * rho_max);
    const int points = cfg.points > 0 ? cfg.points : 40;
    if (!(rho_max > rho_min) || !(rho_min > 0.0) || points < 2)
        throw UsageError("monotonicity: need 0 < --rho-min < --rho-max and --points >= 2");
    const double t_max = 2.0 * level_radius(model, HorizonDistance(rho_max));
    const auto surface = build_surface(cfg, model, t_max, err);
    const auto rep = monotonicity_report(model, surface, log_points(rho_min, rho_max, points),
                                         {cfg.quad_tol, 32, 4096});
    Table t{{"rho", "h", "mu", "ratio", "pair_residual", "origin_residual"}, {}};
    for (std::size_t i = 0; i < rep.rhos.size(); ++i)
        t.rows.push_back({rep.rhos[i], rep.h_values[i], rep.mu_values[i], rep.ratios[i],
                          rep.pair_residuals[i],
                          rep.origin_residuals.empty() ? json(nullptr) : json(rep.origin_residuals[i])});
    Report out;
    out.summary["surface"] = cfg.surface;
    out.summary["boundary_length"] = rep.boundary_length;
    out.summary["monotone"] = rep.monotone;
    out.summary["max_backstep"] = rep.max_backstep;
    out.table = std::move(t);
    return out;
}

Report cmd_boundary_bound(const RunConfig& cfg, std::ostream& err) {
    const SchwarzschildModel model(cfg.mass);
    model.require_horizon("boundary-bound");
    const double rho_max = default_rho_max(cfg);
    const double t_max = 2.0 * level_radius(model, HorizonDistance(rho_max));
    const auto surface = build_surface(cfg, model, t_max, err);
    const auto rep = boundary_bound_check(model, surface, rho_max, {cfg.quad_tol, 32, 4096});
    Report out;
    out.summary["surface"] = cfg.surface;
    out.summary["rho_max"] = rho_max;
    out.summary["theta"] = rep.theta;
    out.summary["lhs"] = rep.lhs;
    out.summary["rhs"] = rep.rhs;
    out.summary["equality_defect"] = rep.equality_defect;
    out.summary["defect_integral"] = rep.defect_integral;
    out.summary["tail_estimate"] = rep.tail_estimate;
    out.summary["boundary_length"] = rep.boundary_length;
    out.summary["holds"] = rep.holds;
    return out;
}

Report cmd_riccati(const RunConfig& cfg) {
    const SchwarzschildModel model(cfg.mass);
    const double c = cfg.c.value_or(cbar(model));
    const double Rc = singularity_R_c(model, c, cfg.root_tol);
    const double lo = std::max(cfg.r_min, model.horizon_isotropic());
    const double hi = cfg.r_max.value_or(2.0 * Rc);
    const int points = cfg.points > 0 ? cfg.points : 41;
    if (!(hi > lo) || points < 2) throw UsageError("riccati: need --r-min < --r-max and --points >= 2");
    Table t{{"r", "psi"}, {}};
    for (int i = 0; i < points; ++i) {
        const double r = i + 1 == points ? hi : lo + (hi - lo) * i / (points - 1);
        json psi = nullptr;
        try {
            psi = num(psi_c(model, c, r));
        } catch (const SingularityError&) {
        }
        t.rows.push_back({r, psi});
    }
    Report rep;
    rep.summary["c"] = c;
    rep.summary["R_c"] = Rc;
    rep.summary["R_c_over_m"] = Rc / cfg.mass;
    rep.table = std::move(t);
    return rep;
}

void add_options(CLI::App& app, RunConfig& cfg) {
    auto positive = CLI::PositiveNumber;
    app.add_option("--mass", cfg.mass, "ADM mass m (0 gives flat space)")->check(CLI::NonNegativeNumber);
    app.add_option("--R", cfg.R, "outer radius (isotropic); R* or Rstar for the stability radius");
    app.add_option("--k", cfg.k, "Fourier mode");
    app.add_option("--kmax", cfg.kmax, "largest |k| in the index sweep");
    app.add_option("--count", cfg.count, "number of eigenvalues per mode");
    app.add_option("--method", cfg.method)->check(CLI::IsMember({"shooting", "fd", "both"}));
    app.add_option("--grid", cfg.grid, "finite-difference cells (Richardson uses n and 2n)")
        ->check(CLI::Range(16, 1 << 24));
    app.add_option("--rho-max", cfg.rho_max, "largest horizon distance")->check(positive);
    app.add_option("--rho-min", cfg.rho_min, "smallest horizon distance")->check(positive);
    app.add_option("--surface", cfg.surface, "plane | plane:rotated:<seed> | cone:<theta0>");
    app.add_option("--c", cfg.c, "Riccati family parameter (default cbar)");
    app.add_option("--ode-tol", cfg.ode_tol)->check(positive);
    app.add_option("--root-tol", cfg.root_tol)->check(positive);
    app.add_option("--quad-tol", cfg.quad_tol)->check(positive);
    app.add_option("--output", cfg.output)->check(CLI::IsMember({"table", "json"}));
    app.add_option("--out", cfg.out_path, "write to this file instead of stdout");
    app.add_option("--seed", cfg.seed, "seed for random rotations");
    app.add_option("--r-min", cfg.r_min, "grid start");
    app.add_option("--r-max", cfg.r_max, "grid end");
    app.add_option("--points", cfg.points, "grid size")->check(CLI::NonNegativeNumber);
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::optional<SurfaceSpec> parse_surface(const std::string& text) {
    SurfaceSpec spec;
    if (text == "plane") return spec;
    auto parse_tail = [](const std::string& s, auto& value) {
        if (s.empty()) return false;
        std::istringstream in(s);
        in.imbue(std::locale::classic());
        in >> value;
        return !in.fail() && in.eof();
    };
    const std::string rotated = "plane:rotated:";
    if (text.rfind(rotated, 0) == 0) {
        const std::string tail = text.substr(rotated.size());
        if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
        spec.kind = SurfaceSpec::Kind::rotated_plane;
        if (!parse_tail(tail, spec.seed)) return std::nullopt;
        return spec;
    }
    const std::string cone = "cone:";
    if (text.rfind(cone, 0) == 0) {
        spec.kind = SurfaceSpec::Kind::cone;
        if (!parse_tail(text.substr(cone.size()), spec.theta0)) return std::nullopt;
        if (!(spec.theta0 > 0.0 && spec.theta0 < std::numbers::pi)) return std::nullopt;
        return spec;
    }
    return std::nullopt;
}

unsigned thread_budget() {
    const char* env = std::getenv("SCHW_THREADS");
    unsigned n = 0;
    if (env) {
        try {
            n = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            n = 0;
        }
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Numerical checks for minimal surfaces in the Riemannian Schwarzschild manifold",
                 "schw"};
    app.require_subcommand(1);
    add_options(app, cfg);

    struct Sub {
        const char* name;
        const char* help;
    };
    const std::vector<Sub> subs = {
        {"geom", "coordinate table: isotropic radius, areal radius, distance, h, f"},
        {"stability-radius", "largest R with a stable annulus of the plane through the origin"},
        {"spectrum", "eigenvalues of one Fourier mode of the Jacobi operator"},
        {"morse-index", "number of negative eigenvalues summed over modes"},
        {"monotonicity", "f-weighted area ratios and the monotonicity identity"},
        {"boundary-bound", "density at infinity against boundary length"},
        {"riccati", "psi_c profile and its singularity R_c"},
    };
    for (const auto& s : subs) app.add_subcommand(s.name, s.help)->fallthrough();

    std::vector<const char*> args;
    for (const auto& a : argv) args.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(args.size()), args.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        Report rep;
        if (command == "geom") rep = cmd_geometry(cfg);
        else if (command == "stability-radius") rep = cmd_stability_radius(cfg);
        else if (command == "spectrum") rep = cmd_spectrum(cfg);
        else if (command == "morse-index") rep = cmd_morse_index(cfg);
        else if (command == "monotonicity") rep = cmd_monotonicity(cfg, err);
        else if (command == "boundary-bound") rep = cmd_boundary_bound(cfg, err);
        else rep = cmd_riccati(cfg);

        if (cfg.out_path.empty()) {
            emit(out, cfg, command, rep);
        } else {
            std::ofstream file(cfg.out_path, std::ios::binary | std::ios::trunc);
            if (!file) {
                err << "error: cannot open " << cfg.out_path << '\n';
                return kUsage;
            }
            emit(file, cfg, command, rep);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IntegrationError& e) {
        err << "numerical failure: " << e.what() << " (last good r = " << format_number(e.last_good_r())
            << ")\n";
        return kNumerical;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kOk;
}

}  // namespace schw::cli

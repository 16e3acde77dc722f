#include "slipflow/harness.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <thread>

namespace slipflow {

namespace fs = std::filesystem;
using nlohmann::json;

int worker_count() {
    if (const char* env = std::getenv("SLIPFLOW_WORKERS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void write_ledger_csv(const std::string& path, const TrajectoryRecord& rec) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot write ledger: " + path);
    out << ledger_header() << "\n";
    for (const LedgerRow& r : rec.rows) {
        out << r.step << ',' << format_double(r.t) << ',' << format_double(r.mass) << ','
            << format_double(r.kinetic_energy) << ',' << format_double(r.potential_energy) << ','
            << format_double(r.visc_dissipation) << ',' << format_double(r.eps_grad_u_dissipation)
            << ',' << format_double(r.eps_pressure_dissipation) << ','
            << format_double(r.boundary_dissipation) << ',' << format_double(r.ito_correction)
            << ',' << format_double(r.martingale_increment) << ','
            << format_double(r.energy_residual) << ',' << format_double(r.min_rho) << ','
            << format_double(r.max_rho) << ',' << format_double(r.u_norm_Vm) << ','
            << format_double(r.chi_value) << ',' << r.cfl_substeps << "\n";
    }
}

std::vector<LedgerRow> read_ledger_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot read ledger: " + path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "empty ledger: " + path);
    require(line == ledger_header(), "unexpected ledger header in " + path);
    std::vector<LedgerRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> f;
        size_t pos = 0;
        while (pos <= line.size()) {
            size_t c = line.find(',', pos);
            std::string tok = line.substr(pos, c == std::string::npos ? c : c - pos);
            f.push_back(std::strtod(tok.c_str(), nullptr));
            if (c == std::string::npos) break;
            pos = c + 1;
        }
        require(f.size() == 17, "bad ledger row in " + path);
        LedgerRow r;
        r.step = static_cast<int>(f[0]);
        r.t = f[1];
        r.mass = f[2];
        r.kinetic_energy = f[3];
        r.potential_energy = f[4];
        r.visc_dissipation = f[5];
        r.eps_grad_u_dissipation = f[6];
        r.eps_pressure_dissipation = f[7];
        r.boundary_dissipation = f[8];
        r.ito_correction = f[9];
        r.martingale_increment = f[10];
        r.energy_residual = f[11];
        r.min_rho = f[12];
        r.max_rho = f[13];
        r.u_norm_Vm = f[14];
        r.chi_value = f[15];
        r.cfl_substeps = static_cast<int>(f[16]);
        rows.push_back(r);
    }
    return rows;
}

namespace {

void write_doubles(const std::string& path, const std::vector<double>& v) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot write: " + path);
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> read_doubles(const std::string& path, size_t expect) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot read: " + path);
    std::vector<double> v(expect);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(expect * sizeof(double)));
    require(static_cast<size_t>(in.gcount()) == expect * sizeof(double), "short read: " + path);
    return v;
}

std::string snap_name(size_t idx) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%05zu", idx);
    return buf;
}

}  // namespace

void write_trajectory_artifacts(const std::string& dir, const TrajectoryRecord& rec,
                                const RunConfig& cfg) {
    fs::create_directories(dir);
    write_ledger_csv(dir + "/ledger.csv", rec);

    if (!rec.increments.empty()) {
        write_doubles(dir + "/increments.bin", rec.increments);
        json hdr;
        hdr["schema"] = "slipflow-increments-1";
        hdr["steps"] = rec.increments.size() / rec.K;
        hdr["K"] = rec.K;
        std::ofstream out(dir + "/increments.json", std::ios::binary);
        out << hdr.dump(2) << "\n";
    }

    // per-step body-force work, needed to close the balance audit offline
    bool any_work = false;
    for (double w : rec.force_work) any_work = any_work || w != 0.0;
    if (any_work) write_doubles(dir + "/force_work.bin", rec.force_work);

    bool final_only = cfg.snapshots == "final";
    if (cfg.snapshots != "none" && !rec.snapshots.empty()) {
        size_t first = final_only ? rec.snapshots.size() - 1 : 0;
        for (size_t s = first; s < rec.snapshots.size(); ++s) {
            const Snapshot& snap = rec.snapshots[s];
            std::vector<double> blob;
            blob.reserve(snap.rho.size() + snap.u.size());
            blob.insert(blob.end(), snap.rho.a.begin(), snap.rho.a.end());
            for (int i = 0; i < snap.u.size(); ++i) blob.push_back(snap.u[i]);
            write_doubles(dir + "/" + snap_name(s) + ".bin", blob);
            json hdr;
            hdr["schema"] = "slipflow-field-1";
            hdr["shape"] = {snap.rho.nx, snap.rho.ny};
            hdr["dx"] = cfg.Lx / cfg.Nx;
            hdr["dy"] = 1.0 / cfg.Ny;
            hdr["time"] = snap.time;
            hdr["m"] = static_cast<int>(snap.u.size());
            std::ofstream out(dir + "/" + snap_name(s) + ".json", std::ios::binary);
            out << hdr.dump(2) << "\n";
        }
    }
}

TrajectoryRecord read_trajectory_artifacts(const std::string& dir, const SimSetup& setup) {
    TrajectoryRecord rec;
    rec.rows = read_ledger_csv(dir + "/ledger.csv");
    rec.h = rec.rows.size() > 1 ? rec.rows[1].t - rec.rows[0].t : 0.0;
    rec.K = setup.noise.K;
    rec.deterministic = !setup.noise.active();
    if (fs::exists(dir + "/increments.json")) {
        std::ifstream in(dir + "/increments.json");
        json hdr = json::parse(in);
        size_t steps = hdr.at("steps").get<size_t>();
        rec.K = hdr.at("K").get<int>();
        rec.increments = read_doubles(dir + "/increments.bin", steps * rec.K);
    }
    if (fs::exists(dir + "/force_work.bin"))
        rec.force_work = read_doubles(dir + "/force_work.bin", rec.rows.size());
    std::vector<std::string> snap_bases;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.rfind("snap_", 0) == 0 && name.size() > 5 && name.substr(name.size() - 5) == ".json")
            snap_bases.push_back(dir + "/" + name.substr(0, name.size() - 5));
    }
    std::sort(snap_bases.begin(), snap_bases.end());
    for (const std::string& base : snap_bases) {
        std::ifstream in(base + ".json");
        json hdr = json::parse(in);
        int nx = hdr.at("shape")[0].get<int>();
        int ny = hdr.at("shape")[1].get<int>();
        int m = hdr.at("m").get<int>();
        std::vector<double> blob = read_doubles(base + ".bin", static_cast<size_t>(nx) * ny + m);
        Snapshot snap;
        snap.rho = GridField(nx, ny);
        std::copy(blob.begin(), blob.begin() + static_cast<long>(snap.rho.size()), snap.rho.a.begin());
        snap.u = Eigen::VectorXd(m);
        for (int i = 0; i < m; ++i) snap.u[i] = blob[snap.rho.size() + i];
        snap.time = hdr.at("time").get<double>();
        rec.snapshots.push_back(std::move(snap));
    }
    return rec;
}

namespace {

struct PathSummary {
    int index = 0;
    uint64_t traj_seed = 0;
    bool failed = false;
    std::string failure;
    int failure_step = -1;
    double mass_drift_rel = 0.0;
    double min_rho = 0.0;
    double max_abs_energy_residual = 0.0;
    double final_margin = 0.0;
    double ito_slack_low = 0.0;
    double ito_slack_high = 0.0;
    double martingale_total = 0.0;
    double max_u_norm = 0.0;
    bool cutoff_active = false;
};

PathSummary summarize(const TrajectoryRecord& rec, int index, uint64_t traj_seed) {
    PathSummary s;
    s.index = index;
    s.traj_seed = traj_seed;
    if (rec.failure) {
        s.failed = true;
        s.failure = *rec.failure;
        s.failure_step = rec.failure_step;
    }
    double m0 = rec.rows.empty() ? 0.0 : rec.rows[0].mass;
    s.min_rho = std::numeric_limits<double>::infinity();
    for (const LedgerRow& r : rec.rows) {
        if (m0 != 0.0) s.mass_drift_rel = std::max(s.mass_drift_rel, std::abs(r.mass - m0) / m0);
        s.min_rho = std::min(s.min_rho, r.min_rho);
        s.max_abs_energy_residual = std::max(s.max_abs_energy_residual, std::abs(r.energy_residual));
        s.martingale_total += r.martingale_increment;
        s.max_u_norm = std::max(s.max_u_norm, r.u_norm_Vm);
        if (r.chi_value < 1.0) s.cutoff_active = true;
    }
    std::vector<double> margin = energy_inequality_margin(rec);
    s.final_margin = margin.empty() ? 0.0 : margin.back();
    s.ito_slack_low = rec.min_ito_slack_low;
    s.ito_slack_high = rec.min_ito_slack_high;
    return s;
}

json to_json(const PathSummary& s) {
    json j;
    j["index"] = s.index;
    j["seed"] = s.traj_seed;
    j["failed"] = s.failed;
    if (s.failed) {
        j["failure"] = s.failure;
        j["failure_step"] = s.failure_step;
    }
    j["mass_drift_rel"] = s.mass_drift_rel;
    j["min_rho"] = s.min_rho;
    j["max_abs_energy_residual"] = s.max_abs_energy_residual;
    j["final_margin"] = s.final_margin;
    j["ito_slack_low"] = s.ito_slack_low;
    j["ito_slack_high"] = s.ito_slack_high;
    j["martingale_total"] = s.martingale_total;
    j["max_u_norm"] = s.max_u_norm;
    j["cutoff_active"] = s.cutoff_active;
    return j;
}

std::string path_dir_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "path_%03d", index);
    return buf;
}

}  // namespace

int run_command(const RunConfig& cfg, uint64_t seed, int n_paths, const std::string& outdir) {
    require(n_paths >= 1, "run: n_paths must be >= 1");
    SimSetup setup = build_setup(cfg);
    InitialData init = build_initial_data(cfg, setup);

    fs::create_directories(outdir);
    {
        std::ofstream out(outdir + "/config.txt", std::ios::binary);
        out << echo_config(cfg);
    }

    std::vector<TrajectoryRecord> recs(n_paths);
    std::atomic<int> next{0};
    int workers = std::min(worker_count(), n_paths);
    auto work = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n_paths) return;
            recs[i] = run_trajectory(setup, init, derive_seed(seed, i));
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    json summary;
    summary["schema_version"] = 1;
    summary["catalogue_version"] = kCatalogueVersion;
    summary["seed"] = seed;
    summary["n_paths"] = n_paths;
    summary["deterministic"] = !setup.noise.active();

    bool hard_failure = false;
    double margin_sum = 0.0, margin_sq = 0.0;
    json paths = json::array();
    for (int i = 0; i < n_paths; ++i) {
        write_trajectory_artifacts(outdir + "/" + path_dir_name(i), recs[i], cfg);
        PathSummary s = summarize(recs[i], i, derive_seed(seed, i));
        if (s.failed || s.mass_drift_rel > 1e-12 || !(s.min_rho > 0.0)) hard_failure = true;
        margin_sum += s.final_margin;
        margin_sq += s.final_margin * s.final_margin;
        paths.push_back(to_json(s));
    }
    summary["paths"] = paths;

    // checks=hard restricts the summary to the hard-assertion outcome
    if (cfg.checks == "all") {
        double mean = margin_sum / n_paths;
        double var = n_paths > 1 ? (margin_sq - n_paths * mean * mean) / (n_paths - 1) : 0.0;
        summary["aggregate"] = {
            {"mean_final_margin", mean},
            {"stderr_final_margin", n_paths > 1 ? std::sqrt(std::max(var, 0.0) / n_paths) : 0.0},
            {"hard_failure", hard_failure},
        };
    } else {
        summary["aggregate"] = {{"hard_failure", hard_failure}};
    }

    std::ofstream out(outdir + "/summary.json", std::ios::binary);
    out << summary.dump(2) << "\n";
    return hard_failure ? kExitHardFailure : kExitOk;
}

namespace {

RunConfig with_param(const RunConfig& base, const std::string& param, double value) {
    RunConfig c = base;
    if (param == "h")
        c.h = value;
    else if (param == "alpha")
        c.alpha = value;
    else if (param == "m")
        c.m = static_cast<int>(std::llround(value));
    else if (param == "epsilon")
        c.epsilon = value;
    else if (param == "delta")
        c.delta = value;
    else if (param == "R")
        c.R = value;
    else if (param == "dt_inner")
        c.dt_inner = value;
    else
        throw ConfigError("sweep: invalid parameter '" + param +
                          "' (expected h, alpha, m, epsilon, delta, R or dt_inner)");
    validate_config(c);
    return c;
}

uint64_t ledger_bytes_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot hash: " + path);
    uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

int sweep_command(const RunConfig& cfg, const std::string& param,
                  const std::vector<double>& values, uint64_t seed, const std::string& outdir) {
    require(values.size() >= 2, "sweep: need at least two values");
    fs::create_directories(outdir);

    // dyadic shared-path setup for time-step sweeps under noise
    bool shared_path = (param == "h") && cfg.noise_family != "off" && cfg.g0 != 0.0;
    double h_coarse = *std::max_element(values.begin(), values.end());
    WienerPath base_path;
    if (shared_path) {
        for (double v : values) {
            double ratio = h_coarse / v;
            require(std::abs(ratio - std::llround(ratio)) < 1e-9 &&
                        (std::llround(ratio) & (std::llround(ratio) - 1)) == 0,
                    "sweep: h values must be dyadic fractions of the largest");
        }
        base_path = make_wiener_path(derive_seed(seed, 0), cfg.K, h_coarse,
                                     static_cast<int>(std::llround(cfg.T / h_coarse)));
    }

    json report;
    report["param"] = param;
    report["seed"] = seed;
    json entries = json::array();

    std::vector<double> resid_max;
    std::vector<double> r2_series, r1_series;
    std::vector<Eigen::VectorXd> final_coeffs;
    std::vector<uint64_t> hashes;

    for (size_t vi = 0; vi < values.size(); ++vi) {
        RunConfig c = with_param(cfg, param, values[vi]);
        SimSetup setup = build_setup(c);
        InitialData init = build_initial_data(c, setup);
        setup.record_fields = true;

        TrajectoryRecord rec;
        if (shared_path) {
            int level = static_cast<int>(std::llround(std::log2(h_coarse / c.h)));
            WienerPath path = level == 0 ? base_path : refine_brownian_path(base_path, level);
            rec = run_trajectory(setup, init, derive_seed(seed, 0), &path);
        } else {
            rec = run_trajectory(setup, init, derive_seed(seed, 0));
        }

        std::string dir = outdir + "/value_" + std::to_string(vi);
        write_trajectory_artifacts(dir, rec, c);

        // regularization sweeps store the terminal effective viscous flux
        // field for offline limit-study comparison
        if ((param == "epsilon" || param == "delta") && !rec.snapshots.empty()) {
            const Snapshot& last = rec.snapshots.back();
            GridField evf = effective_viscous_flux(last.rho, VelocityCoeffs(last.u),
                                                   setup.params, setup.space);
            write_doubles(dir + "/evf.bin", evf.a);
            json hdr;
            hdr["schema"] = "slipflow-field-1";
            hdr["shape"] = {evf.nx, evf.ny};
            hdr["dx"] = c.Lx / c.Nx;
            hdr["dy"] = 1.0 / c.Ny;
            hdr["time"] = last.time;
            std::ofstream out(dir + "/evf.json", std::ios::binary);
            out << hdr.dump(2) << "\n";
        }

        json e;
        e["value"] = values[vi];
        e["failed"] = rec.failure.has_value();
        double rmax = 0.0;
        for (const LedgerRow& r : rec.rows) rmax = std::max(rmax, std::abs(r.energy_residual));
        e["max_abs_energy_residual"] = rmax;
        resid_max.push_back(rmax);

        if (!rec.snapshots.empty()) {
            const Snapshot& last = rec.snapshots.back();
            FrictionLawResidual fr = friction_law_residual(VelocityCoeffs(last.u), setup.params,
                                                           setup.g, setup.space);
            e["friction_r1"] = fr.r1;
            e["friction_r2"] = fr.r2;
            r1_series.push_back(fr.r1);
            r2_series.push_back(fr.r2);
            final_coeffs.push_back(last.u);
        }
        hashes.push_back(ledger_bytes_hash(dir + "/ledger.csv"));
        e["ledger_hash"] = hashes.back();
        entries.push_back(e);
    }
    report["values"] = entries;

    int status = kExitOk;
    if (param == "h" || param == "dt_inner") {
        bool ok = true;
        for (double r : resid_max) ok = ok && r > 0.0;
        if (ok) {
            double order = fit_log_slope(values, resid_max);
            report["residual_order_fit"] = order;
            double want = shared_path ? 0.35 : 0.8;
            if (order < want) status = kExitSoftFailure;
        }
    } else if (param == "alpha") {
        json table = json::array();
        bool monotone = true;
        for (size_t i = 0; i < values.size(); ++i)
            table.push_back({{"alpha", values[i]}, {"r1", r1_series[i]}, {"r2", r2_series[i]}});
        for (size_t i = 1; i < values.size(); ++i) {
            bool decreasing_alpha = values[i] < values[i - 1];
            if (decreasing_alpha && r2_series[i] > r2_series[i - 1] + 1e-14) monotone = false;
        }
        report["friction_table"] = table;
        report["r2_monotone"] = monotone;
        if (!monotone) status = kExitSoftFailure;
    } else if (param == "m") {
        json table = json::array();
        for (size_t i = 1; i < final_coeffs.size(); ++i) {
            int shared = static_cast<int>(std::min(final_coeffs[i - 1].size(), final_coeffs[i].size()));
            double d = (final_coeffs[i].head(shared) - final_coeffs[i - 1].head(shared))
                           .cwiseAbs()
                           .maxCoeff();
            table.push_back({{"m_low", values[i - 1]}, {"m_high", values[i]}, {"prefix_gap", d}});
        }
        report["prefix_comparison"] = table;
    } else if (param == "R") {
        bool all_equal = true;
        for (size_t i = 1; i < hashes.size(); ++i) all_equal = all_equal && hashes[i] == hashes[0];
        report["ledgers_identical"] = all_equal;
    }

    std::ofstream out(outdir + "/sweep_report.json", std::ios::binary);
    out << report.dump(2) << "\n";
    return status;
}

int check_command(const std::string& record_dir, const std::string& suite) {
    std::ifstream cf(record_dir + "/config.txt");
    require(cf.good(), "check: missing config.txt in " + record_dir);
    std::string text((std::istreambuf_iterator<char>(cf)), std::istreambuf_iterator<char>());
    RunConfig cfg = parse_config(text);
    SimSetup setup = build_setup(cfg);

    // records written by `run` keep per-path subdirectories
    std::string dir = record_dir;
    if (fs::exists(record_dir + "/path_000")) dir = record_dir + "/path_000";
    TrajectoryRecord rec = read_trajectory_artifacts(dir, setup);

    json report;
    report["suite"] = suite;
    int status = kExitOk;

    if (suite == "mass") {
        double m0 = rec.rows[0].mass, drift = 0.0;
        for (const LedgerRow& r : rec.rows) drift = std::max(drift, std::abs(r.mass - m0));
        report["mass_drift_rel"] = drift / m0;
        if (drift / m0 > 1e-12) status = kExitHardFailure;
    } else if (suite == "energy") {
        std::vector<double> resid = energy_balance_residual(rec);
        double gap = 0.0, rmax = 0.0, min_diss = 0.0;
        for (size_t i = 0; i < rec.rows.size(); ++i) {
            gap = std::max(gap, std::abs(resid[i] - rec.rows[i].energy_residual));
            rmax = std::max(rmax, std::abs(resid[i]));
            min_diss = std::min({min_diss, rec.rows[i].visc_dissipation,
                                 rec.rows[i].eps_grad_u_dissipation,
                                 rec.rows[i].eps_pressure_dissipation,
                                 rec.rows[i].boundary_dissipation});
        }
        report["ledger_consistency_gap"] = gap;
        report["max_abs_energy_residual"] = rmax;
        report["min_dissipation_entry"] = min_diss;
        if (gap > 1e-10 || min_diss < -1e-12) status = kExitHardFailure;
    } else if (suite == "friction") {
        uint64_t s = 12345;
        double worst_pos = 0.0, worst_norm = 0.0, worst_gap = 0.0, worst_cvx = 0.0;
        for (int i = 0; i < 10000; ++i) {
            double ax = counter_gaussian(s, 0, 9, i), ay = counter_gaussian(s, 1, 9, i);
            double wx = counter_gaussian(s, 2, 9, i), wy = counter_gaussian(s, 3, 9, i);
            double alpha = std::exp(counter_gaussian(s, 4, 9, i));
            Vec2 v(ax, ay), ww(wx, wy);
            Vec2 gj = grad_j_alpha(v, alpha);
            worst_pos = std::min(worst_pos, gj.dot(v));
            worst_norm = std::max(worst_norm, gj.norm() - 1.0);
            worst_gap = std::max(worst_gap, std::abs(j_alpha(v, alpha) - v.norm()) - alpha);
            worst_cvx = std::max(worst_cvx, gj.dot(ww - v) - (j_alpha(ww, alpha) - j_alpha(v, alpha)));
        }
        report["grad_dot_v_min"] = worst_pos;
        report["grad_norm_excess"] = worst_norm;
        report["value_gap_excess"] = worst_gap;
        report["convexity_excess"] = worst_cvx;
        if (worst_pos < 0.0 || worst_norm > 1e-14 || worst_gap > 0.0 || worst_cvx > 1e-12)
            status = kExitHardFailure;
        if (!rec.snapshots.empty()) {
            FrictionLawResidual fr = friction_law_residual(
                VelocityCoeffs(rec.snapshots.back().u), setup.params, setup.g, setup.space);
            report["r1"] = fr.r1;
            report["r2"] = fr.r2;
        }
        double min_bdry = 0.0;
        for (const LedgerRow& r : rec.rows) min_bdry = std::min(min_bdry, r.boundary_dissipation);
        report["min_boundary_dissipation"] = min_bdry;
        if (min_bdry < -1e-12) status = kExitHardFailure;
    } else if (suite == "weakforms") {
        require(rec.snapshots.size() == rec.rows.size(),
                "weakforms check needs snapshots=all in the record");
        report["catalogue_version"] = kCatalogueVersion;
        report["refinement_level"] = {{"Nx", cfg.Nx}, {"Ny", cfg.Ny}, {"h", cfg.h}};
        auto times = catalogue_time_tests(cfg.T);
        auto scalars = catalogue_scalar_tests(setup.domain);
        auto moms = catalogue_momentum_tests(setup.space);
        auto bs = catalogue_renorm_tests(1.5 * cfg.rho0_base);
        json res = json::array();
        for (const auto& tt : times) {
            for (const auto& st : scalars)
                res.push_back({{"check", "continuity"},
                               {"time", tt.name},
                               {"space", st.name},
                               {"residual", weak_residual_continuity(rec, setup, tt, st)}});
            for (const auto& mt : moms)
                res.push_back({{"check", "momentum"},
                               {"time", tt.name},
                               {"space", mt.name},
                               {"residual", weak_residual_momentum(rec, setup, tt, mt)}});
            for (const auto& bt : bs)
                res.push_back({{"check", "renormalized"},
                               {"time", tt.name},
                               {"space", bt.name + "/" + scalars[1].name},
                               {"residual", renormalized_residual(rec, setup, bt, tt, scalars[1])}});
        }
        report["residuals"] = res;
    } else if (suite == "ops") {
        uint64_t s = 777;
        const ChannelDomain& dom = setup.domain;
        double riesz_id = 0.0, riesz_adj = 0.0, grad_id = 0.0;
        GridField f = dom.make_scalar(), g2 = dom.make_scalar();
        for (size_t t = 0; t < f.size(); ++t) {
            f.a[t] = counter_gaussian(s, 5, 9, t);
            g2.a[t] = counter_gaussian(s, 6, 9, t);
        }
        GridField fe = extend_even_y(f), ge = extend_even_y(g2);
        SpectralField fh = analyze(fe, dom.Lx(), 2.0), gh = analyze(ge, dom.Lx(), 2.0);
        // sum_j R_jj = id - mean
        GridField r00 = synthesize(riesz_transform(fh, 0, 0));
        GridField r11 = synthesize(riesz_transform(fh, 1, 1));
        double mean = 0.0;
        for (double v : fe.a) mean += v;
        mean /= fe.size();
        for (size_t t = 0; t < fe.size(); ++t)
            riesz_id = std::max(riesz_id, std::abs(r00.a[t] + r11.a[t] - (fe.a[t] - mean)));
        // adjoint symmetry
        GridField rf = synthesize(riesz_transform(fh, 0, 1));
        GridField rg = synthesize(riesz_transform(gh, 0, 1));
        double s1 = 0.0, s2 = 0.0;
        for (size_t t = 0; t < fe.size(); ++t) {
            s1 += rf.a[t] * ge.a[t];
            s2 += fe.a[t] * rg.a[t];
        }
        riesz_adj = std::abs(s1 - s2) * dom.cell_weight();
        // d_i A_j = R_ij
        auto A = inverse_divergence(fh);
        GridField dA = synthesize(spectral_derivative(A[1], 0));
        GridField r01 = synthesize(riesz_transform(fh, 0, 1));
        for (size_t t = 0; t < fe.size(); ++t)
            grad_id = std::max(grad_id, std::abs(dA.a[t] - r01.a[t]));
        report["riesz_sum_identity"] = riesz_id;
        report["riesz_adjoint"] = riesz_adj;
        report["grad_invdiv_identity"] = grad_id;
        BogovskiiResult br = bogovskii_solve(f, dom);
        report["bogovskii_div_residual"] = br.div_residual;
        report["bogovskii_wall_trace"] = br.wall_trace;
        if (riesz_id > 1e-10 || riesz_adj > 1e-10 || grad_id > 1e-10 ||
            br.div_residual > 1e-8 || br.wall_trace > 1e-10)
            status = kExitHardFailure;
    } else {
        throw ConfigError("check: unknown suite '" + suite +
                          "' (expected energy, mass, friction, weakforms or ops)");
    }

    std::ofstream out(record_dir + "/check_" + suite + ".json", std::ios::binary);
    out << report.dump(2) << "\n";
    std::printf("%s\n", report.dump(2).c_str());
    return status;
}

}  // namespace slipflow

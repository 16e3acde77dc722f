#include "slipflow/config.hpp"

#include <map>
#include <sstream>

#include "slipflow/friction.hpp"

namespace slipflow {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Parser {
    std::map<std::string, std::string> kv;
    std::vector<std::string>* errors;

    bool has(const std::string& k) const { return kv.count(k) > 0; }

    void number(const std::string& k, double& out) {
        if (!has(k)) return;
        const std::string& v = kv.at(k);
        char* end = nullptr;
        double x = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0')
            errors->push_back(k + ": not a number: '" + v + "'");
        else
            out = x;
    }
    void integer(const std::string& k, int& out) {
        if (!has(k)) return;
        const std::string& v = kv.at(k);
        try {
            size_t pos = 0;
            int x = std::stoi(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            out = x;
        } catch (...) {
            errors->push_back(k + ": not an integer: '" + v + "'");
        }
    }
    void text(const std::string& k, std::string& out) {
        if (has(k)) out = kv.at(k);
    }
};

const char* kKeys[] = {
    "Lx", "Nx", "Ny", "gamma", "a", "mu", "lambda", "delta", "Gamma", "epsilon", "alpha",
    "R", "m", "h", "boundary_mode", "T", "cfl_safety", "dt_inner", "integrator_mode",
    "snapshots", "checks", "K", "g0", "noise_family", "noise_c1", "noise_c2", "g_const",
    "g_table_bottom", "g_table_top", "body_force_x", "rho0_base", "rho0_amp", "rho0_kx",
    "rho0_ky", "u0_mode", "u0_amp", "u0_mode2", "u0_amp2"};

}  // namespace

RunConfig parse_config(const std::string& text) {
    std::vector<std::string> errors;
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key=value");
            continue;
        }
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        bool known = false;
        for (const char* k : kKeys)
            if (key == k) known = true;
        if (!known) {
            errors.push_back("unknown key: '" + key + "'");
            continue;
        }
        if (kv.count(key)) {
            errors.push_back("duplicate key: '" + key + "'");
            continue;
        }
        kv[key] = val;
    }

    RunConfig c;
    Parser p{kv, &errors};
    p.number("Lx", c.Lx);
    p.integer("Nx", c.Nx);
    p.integer("Ny", c.Ny);
    p.number("gamma", c.gamma);
    p.number("a", c.a);
    p.number("mu", c.mu);
    p.number("lambda", c.lambda);
    p.number("delta", c.delta);
    p.number("Gamma", c.Gamma);
    p.number("epsilon", c.epsilon);
    p.number("alpha", c.alpha);
    p.number("R", c.R);
    p.integer("m", c.m);
    p.number("h", c.h);
    p.text("boundary_mode", c.boundary_mode);
    p.number("T", c.T);
    p.number("cfl_safety", c.cfl_safety);
    p.number("dt_inner", c.dt_inner);
    p.text("integrator_mode", c.integrator_mode);
    p.text("snapshots", c.snapshots);
    p.text("checks", c.checks);
    p.integer("K", c.K);
    p.number("g0", c.g0);
    p.text("noise_family", c.noise_family);
    p.number("noise_c1", c.noise_c1);
    p.number("noise_c2", c.noise_c2);
    p.number("g_const", c.g_const);
    p.text("g_table_bottom", c.g_table_bottom);
    p.text("g_table_top", c.g_table_top);
    p.number("body_force_x", c.body_force_x);
    p.number("rho0_base", c.rho0_base);
    p.number("rho0_amp", c.rho0_amp);
    p.integer("rho0_kx", c.rho0_kx);
    p.integer("rho0_ky", c.rho0_ky);
    p.integer("u0_mode", c.u0_mode);
    p.number("u0_amp", c.u0_amp);
    p.integer("u0_mode2", c.u0_mode2);
    p.number("u0_amp2", c.u0_amp2);

    if (!errors.empty()) {
        std::string msg = "configuration errors:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    validate_config(c);
    return c;
}

void validate_config(const RunConfig& c) {
    std::vector<std::string> v;
    auto check = [&](bool ok, const std::string& m) {
        if (!ok) v.push_back(m);
    };
    check(c.Lx > 0.0, "Lx > 0");
    check(c.Nx >= 4, "Nx >= 4");
    check(c.Ny >= 4, "Ny >= 4");
    check(c.gamma > 1.0, "gamma > 1");
    check(c.a > 0.0, "a > 0");
    check(c.mu > 0.0, "mu > 0");
    check(c.lambda >= 0.0, "lambda >= 0");
    check(c.delta > 0.0 && c.delta <= 1.0, "delta in (0,1]");
    check(c.Gamma >= std::max(6.0, c.gamma), "Gamma >= max(6,gamma)");
    check(c.epsilon > 0.0 && c.epsilon <= 1.0, "epsilon in (0,1]");
    check(c.alpha > 0.0 && c.alpha <= 1.0, "alpha in (0,1]");
    check(c.R > 0.0, "R > 0");
    check(c.m >= 1, "m >= 1");
    check(c.h > 0.0, "h > 0");
    check(c.boundary_mode == "friction" || c.boundary_mode == "navier",
          "boundary_mode in {friction, navier}");
    check(c.T > 0.0, "T > 0");
    if (c.h > 0.0 && c.T > 0.0) {
        double steps = c.T / c.h;
        check(std::abs(steps - std::llround(steps)) < 1e-9 * std::max(1.0, steps),
              "h divides T within rounding");
    }
    check(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0, "cfl_safety in (0,1]");
    check(c.dt_inner >= 0.0, "dt_inner >= 0");
    check(c.integrator_mode == "iterated" || c.integrator_mode == "coupled",
          "integrator_mode in {iterated, coupled}");
    check(c.snapshots == "none" || c.snapshots == "final" || c.snapshots == "all",
          "snapshots in {none, final, all}");
    check(c.checks == "all" || c.checks == "hard", "checks in {all, hard}");
    check(c.K >= 0, "K >= 0");
    check(c.noise_family == "linear-momentum" || c.noise_family == "density-only" ||
              c.noise_family == "off",
          "noise_family in {linear-momentum, density-only, off}");
    check(c.noise_c1 >= 0.0 && c.noise_c2 >= 0.0 && c.noise_c1 + c.noise_c2 <= 1.0,
          "noise_c1, noise_c2 >= 0 with noise_c1 + noise_c2 <= 1");
    check(c.g_const >= 0.0, "g_const >= 0");
    check(c.rho0_base > 0.0, "rho0_base > 0");
    check(std::abs(c.rho0_amp) < c.rho0_base, "rho0_amp smaller than rho0_base in magnitude");
    check(c.u0_mode >= 0 && c.u0_mode < c.m, "u0_mode within [0, m)");
    check(c.u0_mode2 >= 0 && c.u0_mode2 < c.m, "u0_mode2 within [0, m)");
    if (c.Nx >= 4 && c.Ny >= 4 && c.Lx > 0.0 && c.m >= 1) {
        ChannelDomain dom(c.Lx, c.Nx, c.Ny);
        int mm = GalerkinSpace::max_dim(dom, false);
        check(c.m <= mm, "m within the " + std::to_string(mm) + " modes representable on this grid");
    }
    if (!v.empty()) {
        std::string msg = "configuration constraint violations:";
        for (const auto& e : v) msg += "\n  " + e;
        throw ConfigError(msg);
    }
}

std::string echo_config(const RunConfig& c) {
    std::ostringstream out;
    out << "Lx=" << format_double(c.Lx) << "\n";
    out << "Nx=" << c.Nx << "\n";
    out << "Ny=" << c.Ny << "\n";
    out << "gamma=" << format_double(c.gamma) << "\n";
    out << "a=" << format_double(c.a) << "\n";
    out << "mu=" << format_double(c.mu) << "\n";
    out << "lambda=" << format_double(c.lambda) << "\n";
    out << "delta=" << format_double(c.delta) << "\n";
    out << "Gamma=" << format_double(c.Gamma) << "\n";
    out << "epsilon=" << format_double(c.epsilon) << "\n";
    out << "alpha=" << format_double(c.alpha) << "\n";
    out << "R=" << format_double(c.R) << "\n";
    out << "m=" << c.m << "\n";
    out << "h=" << format_double(c.h) << "\n";
    out << "boundary_mode=" << c.boundary_mode << "\n";
    out << "T=" << format_double(c.T) << "\n";
    out << "cfl_safety=" << format_double(c.cfl_safety) << "\n";
    out << "dt_inner=" << format_double(c.dt_inner) << "\n";
    out << "integrator_mode=" << c.integrator_mode << "\n";
    out << "snapshots=" << c.snapshots << "\n";
    out << "checks=" << c.checks << "\n";
    out << "K=" << c.K << "\n";
    out << "g0=" << format_double(c.g0) << "\n";
    out << "noise_family=" << c.noise_family << "\n";
    out << "noise_c1=" << format_double(c.noise_c1) << "\n";
    out << "noise_c2=" << format_double(c.noise_c2) << "\n";
    out << "g_const=" << format_double(c.g_const) << "\n";
    out << "g_table_bottom=" << c.g_table_bottom << "\n";
    out << "g_table_top=" << c.g_table_top << "\n";
    out << "body_force_x=" << format_double(c.body_force_x) << "\n";
    out << "rho0_base=" << format_double(c.rho0_base) << "\n";
    out << "rho0_amp=" << format_double(c.rho0_amp) << "\n";
    out << "rho0_kx=" << c.rho0_kx << "\n";
    out << "rho0_ky=" << c.rho0_ky << "\n";
    out << "u0_mode=" << c.u0_mode << "\n";
    out << "u0_amp=" << format_double(c.u0_amp) << "\n";
    out << "u0_mode2=" << c.u0_mode2 << "\n";
    out << "u0_amp2=" << format_double(c.u0_amp2) << "\n";
    return out.str();
}

SimParams params_from_config(const RunConfig& c) {
    SimParams p;
    p.gamma = c.gamma;
    p.a = c.a;
    p.mu = c.mu;
    p.lambda = c.lambda;
    p.delta = c.delta;
    p.Gamma = c.Gamma;
    p.epsilon = c.epsilon;
    p.alpha = c.alpha;
    p.R = c.R;
    p.m = c.m;
    p.h = c.h;
    p.boundary_mode = c.boundary_mode == "navier" ? BoundaryMode::Navier : BoundaryMode::Friction;
    return p;
}

SimSetup build_setup(const RunConfig& c) {
    ChannelDomain dom(c.Lx, c.Nx, c.Ny);
    GalerkinSpace space(dom, c.m, false);
    SimParams params = params_from_config(c);

    NoiseFamily fam = NoiseFamily::Off;
    if (c.noise_family == "linear-momentum") fam = NoiseFamily::LinearMomentum;
    if (c.noise_family == "density-only") fam = NoiseFamily::DensityOnly;
    NoiseModel noise = build_noise_model(dom, c.K, fam, c.g0, c.noise_c1, c.noise_c2);

    WallField g(dom.Nx(), c.g_const);
    if (!c.g_table_bottom.empty()) g.bottom = load_g_table(c.g_table_bottom, dom);
    if (!c.g_table_top.empty()) g.top = load_g_table(c.g_table_top, dom);

    SimSetup setup{std::move(dom), std::move(space), params, std::move(noise), std::move(g),
                   c.T,           c.cfl_safety,      c.dt_inner,
                   c.body_force_x, c.integrator_mode == "coupled",
                   c.snapshots != "none", 1e-12};
    return setup;
}

InitialData build_initial_data(const RunConfig& c, const SimSetup& setup) {
    const ChannelDomain& dom = setup.domain;
    InitialData init;
    init.rho0 = dom.make_scalar();
    for (int j = 0; j < dom.Ny(); ++j)
        for (int i = 0; i < dom.Nx(); ++i)
            init.rho0.at(i, j) = c.rho0_base + c.rho0_amp *
                                                   cos_pi(2.0 * c.rho0_kx * dom.xc(i) / dom.Lx()) *
                                                   cos_pi(c.rho0_ky * dom.yc(j));
    init.u0 = VelocityCoeffs::zero(setup.space.dim());
    if (c.u0_amp != 0.0) init.u0.c[c.u0_mode] += c.u0_amp;
    if (c.u0_amp2 != 0.0) init.u0.c[c.u0_mode2] += c.u0_amp2;
    return init;
}

}  // namespace slipflow

#include "lpres/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lpres/errors.hpp"
#include "lpres/evolution.hpp"
#include "lpres/resonance.hpp"

namespace lpres {

Mode parse_mode(std::string_view id) {
    if (id == "half-line") return Mode::HalfLine;
    if (id == "full-line-limit") return Mode::FullLineLimit;
    throw ConfigError("unknown mode '" + std::string(id) + "' (expected half-line or full-line-limit)");
}

std::string to_string(Mode m) { return m == Mode::HalfLine ? "half-line" : "full-line-limit"; }

const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> s{
        "hardy-oracle", "operators",  "lyapunov",       "semigroup",   "norms",      "background",
        "theorem5",     "eigen-deviation", "proof-chain", "transition", "lp-limit"};
    return s;
}

SMatrixModel Scenario::smatrix() const {
    if (model == "pure") return pure_model(resonance);
    if (model == "perturbed") return perturbed_model(resonance);
    SMatrixModel s;
    s.pole = resonance;
    s.extra_poles = extra_poles;
    s.phase_a = phase_a;
    s.name = model;
    return s;
}

std::vector<double> Scenario::sample_times() const {
    const double horizon = times.t_max > 0.0 ? times.t_max : 40.0 / resonance.gamma;
    if (times.kind == "linear") {
        std::vector<double> t(static_cast<std::size_t>(times.count));
        for (int k = 0; k < times.count; ++k) t[k] = horizon * k / (times.count - 1);
        return t;
    }
    // default_times covers [0, 40 / gamma]; rescale to the requested horizon.
    std::vector<double> t = default_times(resonance.gamma, times.count);
    const double scale = horizon * resonance.gamma / 40.0;
    for (auto& v : t) v *= scale;
    return t;
}

namespace {

using boost::property_tree::ptree;

template <class T>
T convert(const std::string& section, const std::string& key, const std::string& raw) {
    std::istringstream is(raw);
    T v{};
    is >> v;
    if (is.fail() || !(is >> std::ws).eof()) {
        throw ConfigError("[" + section + "] " + key + ": cannot parse '" + raw + "'");
    }
    return v;
}

std::vector<std::string> split_list(const std::string& raw) {
    std::vector<std::string> parts;
    boost::split(parts, raw, boost::is_any_of(","));
    std::vector<std::string> out;
    for (auto& p : parts) {
        boost::trim(p);
        if (!p.empty()) out.push_back(p);
    }
    return out;
}

ResonanceParams parse_pole(const std::string& item) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("[smatrix] extra_poles: expected e0:gamma, got '" + item + "'");
    }
    const double e0 = convert<double>("smatrix", "extra_poles", item.substr(0, colon));
    const double g = convert<double>("smatrix", "extra_poles", item.substr(colon + 1));
    try {
        return ResonanceParams(e0, g);
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("[smatrix] extra_poles: ") + e.what());
    }
}

double* tolerance_field(Tolerances& t, const std::string& key) {
    static const std::map<std::string, double Tolerances::*> fields{
        {"build_tol", &Tolerances::build_tol},
        {"hermiticity_tol", &Tolerances::hermiticity_tol},
        {"proj_tol", &Tolerances::proj_tol},
        {"spec_tol", &Tolerances::spec_tol},
        {"sqrt_tol", &Tolerances::sqrt_tol},
        {"report_tol", &Tolerances::report_tol},
        {"oracle_tol", &Tolerances::oracle_tol},
        {"boundary_band", &Tolerances::boundary_band},
        {"pole_resolution", &Tolerances::pole_resolution},
        {"truncation_widths", &Tolerances::truncation_widths},
    };
    const auto it = fields.find(key);
    return it == fields.end() ? nullptr : &(t.*(it->second));
}

} // namespace

Scenario parse_scenario(std::istream& in) {
    ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("scenario syntax: ") + e.what());
    }
    Scenario sc;
    double e0 = sc.resonance.e0;
    double gamma = sc.resonance.gamma;
    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) {
            throw ConfigError("key '" + section + "' outside of any section");
        }
        for (const auto& [key, node] : body) {
            const std::string raw = boost::trim_copy(node.data());
            auto unknown = [&] { throw ConfigError("unknown key '" + key + "' in [" + section + "]"); };
            if (section == "grid") {
                try {
                    if (key == "n") sc.n = convert<int>(section, key, raw);
                    else if (key == "e_max") sc.e_max = convert<double>(section, key, raw);
                    else if (key == "scheme") sc.scheme = parse_scheme(raw);
                    else if (key == "projector") sc.projector = parse_pv_scheme(raw);
                    else unknown();
                } catch (const ParameterError& e) {
                    throw ConfigError(std::string("[grid] ") + e.what());
                }
            } else if (section == "resonance") {
                if (key == "e0") e0 = convert<double>(section, key, raw);
                else if (key == "gamma") gamma = convert<double>(section, key, raw);
                else unknown();
            } else if (section == "smatrix") {
                if (key == "model") sc.model = raw;
                else if (key == "extra_poles") {
                    sc.extra_poles.clear();
                    for (const auto& item : split_list(raw)) sc.extra_poles.push_back(parse_pole(item));
                } else if (key == "phase_a") sc.phase_a = convert<double>(section, key, raw);
                else unknown();
            } else if (section == "times") {
                if (key == "kind") sc.times.kind = raw;
                else if (key == "count") sc.times.count = convert<int>(section, key, raw);
                else if (key == "t_max") sc.times.t_max = convert<double>(section, key, raw);
                else unknown();
            } else if (section == "run") {
                if (key == "mode") sc.mode = parse_mode(raw);
                else if (key == "suites") sc.suites = split_list(raw);
                else if (key == "output_dir") sc.output_dir = raw;
                else if (key == "seed") sc.seed = convert<unsigned long long>(section, key, raw);
                else unknown();
            } else if (section == "tolerances") {
                double* field = tolerance_field(sc.tol, key);
                if (!field) unknown();
                *field = convert<double>(section, key, raw);
            } else {
                throw ConfigError("unknown section [" + section + "]");
            }
        }
    }
    try {
        sc.resonance = ResonanceParams(e0, gamma);
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("[resonance] ") + e.what());
    }
    validate_scenario(sc);
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path.string());
    return parse_scenario(in);
}

void validate_scenario(const Scenario& sc) {
    if (sc.suites.empty()) throw ConfigError("[run] suites is empty");
    std::set<std::string> seen;
    for (const auto& s : sc.suites) {
        const auto& ks = known_suites();
        if (std::find(ks.begin(), ks.end(), s) == ks.end()) {
            throw ConfigError("unknown suite '" + s + "'");
        }
        if (!seen.insert(s).second) throw ConfigError("suite '" + s + "' listed twice");
        if (sc.mode == Mode::FullLineLimit && s != "hardy-oracle" && s != "lp-limit") {
            throw ConfigError("suite '" + s + "' needs mode = half-line");
        }
        if (sc.mode == Mode::HalfLine && s == "lp-limit") {
            throw ConfigError("suite 'lp-limit' needs mode = full-line-limit");
        }
    }
    if (sc.model != "pure" && sc.model != "perturbed" && sc.model != "custom") {
        throw ConfigError("[smatrix] model must be pure, perturbed or custom");
    }
    if ((!sc.extra_poles.empty() || sc.phase_a != 0.0) && sc.model != "custom") {
        throw ConfigError("[smatrix] extra_poles and phase_a need model = custom");
    }
    if (sc.phase_a < 0.0) throw ConfigError("[smatrix] phase_a must be >= 0");
    if (sc.times.kind != "default" && sc.times.kind != "linear") {
        throw ConfigError("[times] kind must be default or linear");
    }
    if (sc.times.count < 4) throw ConfigError("[times] count must be >= 4");
    if (sc.times.t_max < 0.0) throw ConfigError("[times] t_max must be >= 0");
    if (sc.projector == PvScheme::Fourier && sc.scheme == Scheme::GaussLegendre) {
        throw ConfigError("projector = fourier needs scheme = uniform or cayley");
    }
    try {
        make_grid(sc.mode == Mode::HalfLine ? DomainKind::HalfLine : DomainKind::FullLine, sc.n,
                  sc.e_max, sc.scheme);
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("[grid] ") + e.what());
    }
}

void check_scenario_preconditions(const Scenario& sc) {
    if (sc.mode != Mode::HalfLine) {
        if (std::find(sc.suites.begin(), sc.suites.end(), "lp-limit") != sc.suites.end()) {
            check_lp_limit_preconditions(sc.n, sc.e_max);
        }
        return;
    }
    const GridPtr g = make_grid(DomainKind::HalfLine, sc.n, sc.e_max, sc.scheme);
    check_resonance_preconditions(*g, sc.resonance, sc.tol);
    static const std::vector<std::string> timed{"lyapunov", "semigroup", "background",
                                                "eigen-deviation", "transition"};
    const bool uses_time = std::any_of(sc.suites.begin(), sc.suites.end(), [](const std::string& s) {
        return std::find(timed.begin(), timed.end(), s) != timed.end();
    });
    const double horizon = sc.times.t_max > 0.0 ? sc.times.t_max : 40.0 / sc.resonance.gamma;
    const double limit = recurrence_horizon(*g, sc.resonance.e0);
    if (uses_time && horizon > limit) {
        std::ostringstream os;
        os << "time horizon " << horizon << " exceeds the grid recurrence limit " << limit
           << " near e0 = " << sc.resonance.e0 << "; increase n, lower e_max or shorten times.t_max";
        throw PreconditionError(os.str());
    }
}

double recurrence_horizon(const EnergyGrid& g, double e0) {
    return std::numbers::pi / (2.0 * g.local_spacing(e0));
}

} // namespace lpres

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lpres/grid.hpp"
#include "lpres/hardy.hpp"
#include "lpres/smatrix.hpp"

namespace lpres {

enum class Mode { HalfLine, FullLineLimit };

Mode parse_mode(std::string_view id);
std::string to_string(Mode m);

/// Time sampling. "default": geometric plus linear; "linear": equispaced including 0.
struct TimeSpec {
    std::string kind = "default";
    int count = 64;
    double t_max = 0.0; ///< 0 means 40 / gamma
};

/**
 * Scenario file, INI syntax:
 *
 *   [grid]       n, e_max, scheme, projector
 *   [resonance]  e0, gamma
 *   [smatrix]    model (pure | perturbed | custom), extra_poles ("e0:gamma, ..."), phase_a
 *   [times]      kind, count, t_max
 *   [run]        mode (half-line | full-line-limit), suites (comma list), output_dir, seed
 *   [tolerances] any Tolerances field
 *
 * In half-line mode n is the half-line node count and the parent grid has 2n
 * nodes. In full-line-limit mode n is the full-line node count.
 */
struct Scenario {
    int n = 1024;
    double e_max = 100.0;
    Scheme scheme = Scheme::Cayley;
    PvScheme projector = PvScheme::Fourier;
    ResonanceParams resonance{1.0, 0.1};
    std::string model = "pure";
    std::vector<ResonanceParams> extra_poles;
    double phase_a = 0.0;
    TimeSpec times;
    Mode mode = Mode::HalfLine;
    std::vector<std::string> suites;
    std::string output_dir = "out";
    unsigned long long seed = 1;
    Tolerances tol;

    SMatrixModel smatrix() const;
    std::vector<double> sample_times() const;
};

const std::vector<std::string>& known_suites();

/// Throws ConfigError on syntax errors, unknown sections or keys, and bad values.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::filesystem::path& path);

/// Structural checks (suite names, mode compatibility). Throws ConfigError.
void validate_scenario(const Scenario& sc);

/**
 * Numerical preconditions of the half-line suites. Throws PreconditionError.
 * Time-dependent suites also need the horizon below recurrence_horizon.
 */
void check_scenario_preconditions(const Scenario& sc);

/// pi / (2 dE(e0)): beyond this the sampled phases exp(-iEt) alias near e0.
double recurrence_horizon(const EnergyGrid& g, double e0);

} // namespace lpres

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpres/report.hpp"
#include "lpres/scenario.hpp"

namespace lpres {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPrecondition = 3;

inline constexpr const char* kToolVersion = "0.1.0";

/// Fixed thresholds of the verification suites.
inline constexpr double kMonotoneTol = 1e-5;
inline constexpr double kDecayRatio = 0.05;
inline constexpr double kSemigroupTol = 1e-10;
inline constexpr double kEigenRelationTol = 0.05;
inline constexpr double kNonSemigroupFloor = 1e-4;
inline constexpr double kInitialBackgroundTol = 1e-10;
inline constexpr int kRandomStates = 50;

struct SuiteResult {
    std::string suite;
    std::vector<BoundReport> rows;
    std::vector<std::pair<std::string, ColumnTable>> columns;
    std::vector<std::string> notes;
    bool pass = true;
};

struct RunOptions {
    std::optional<std::string> out;
    std::optional<unsigned long long> seed;
    int threads = 1;
};

/// All suites of a scenario, computed in memory. Throws PreconditionError or ConfigError.
std::vector<SuiteResult> evaluate_scenario(const Scenario& sc);

/// Runs, writes one report per suite, column files, manifest.txt and summary.txt. Returns an exit code.
int run_scenario(Scenario sc, const RunOptions& opt, std::ostream& log);

const std::vector<std::string>& sweep_axes();

/// Scenario with one axis value applied. Throws ConfigError for bad values.
Scenario apply_axis(const Scenario& base, const std::string& axis, const std::string& value);

struct SweepRow {
    std::string value;
    std::vector<SuiteResult> results;
    double norm_app2_err = 0.0; ///< relative error against the closed form
    double norm_res2_err = 0.0; ///< relative error against pi / gamma
    double r_err = 0.0;
};

/// Rows in the order of `values`, independent of the worker count.
std::vector<SweepRow> evaluate_sweep(const Scenario& base, const std::string& axis,
                                     const std::vector<std::string>& values, int threads);

/// Writes sweep.csv, manifest.txt and summary.txt. Returns an exit code.
int run_sweep(Scenario base, const std::string& axis, const std::vector<std::string>& values,
              const RunOptions& opt, std::ostream& log);

/// Maps the exception in flight to an exit code and prints its message.
int report_exception(std::ostream& err);

} // namespace lpres

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spinsync {

struct Check {
    int criterion = 0;
    std::string name;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    /// "abs", "rel", "le" (actual <= expected + tol) or "ge" (actual >= expected - tol)
    std::string relation = "abs";
    bool passed = false;
};

struct TableRow {
    std::string limit_cycle;
    std::string signal;
    double reference = 0.0;  ///< tabulated S / eta
    double pipeline = 0.0;
    double closed_form = 0.0;
};

/// Reference values used by the checks. Exposed so a perturbed value can be
/// shown to fail its check.
struct ValidationConstants {
    double equatorial_prefactor = 3.0 / 16.0;
    double blockade_limit = 3.0 / 16.0;
    double smax_spin = 0.28805;
    double smax_oscillator = 0.19492;
    double balanced_epsilon = 0.0707107;
    double table_vdp_semiclassical = 0.140;
    double table_vdp_squeezing = 0.163;
    double table_vdp_optimal = 0.215;
    double table_equatorial_semiclassical = 0.188;
    double table_equatorial_optimal = 0.265;
};

struct ValidationReport {
    std::vector<Check> checks;
    std::vector<TableRow> table;

    bool passed() const;
    bool criterion_passed(int criterion) const;
    const Check* find(const std::string& name) const;
};

ValidationReport run_validation(const ValidationConstants& constants = {});

void print_report(std::ostream& out, const ValidationReport& report);
/// One pass/fail line per acceptance criterion.
void print_summary(std::ostream& out, const ValidationReport& report);

}  // namespace spinsync

// Runs every acceptance criterion at its stated tolerance.
#include <iostream>

#include "spinsync/validation.hpp"

int main() {
    const spinsync::ValidationReport report = spinsync::run_validation();
    for (const auto& c : report.checks) {
        if (!c.passed) {
            std::cout << "failed check " << c.name << ": expected " << c.expected << ", actual " << c.actual
                      << ", tolerance " << c.tolerance << " (" << c.relation << ")\n";
        }
    }
    spinsync::print_summary(std::cout, report);
    return report.passed() ? 0 : 1;
}

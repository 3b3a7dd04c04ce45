#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "spinsync/config.hpp"

namespace spinsync {

/// Empty cells print as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, double, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

void write_csv(std::ostream& out, const Table& table);
Json table_to_json(const Table& table, const RunConfig& config, const std::string& command);
void write_table(const Table& table, const RunConfig& config, const std::string& command);
std::string format_number(double v);

Table cmd_steady(const RunConfig& config);
Table cmd_sync(const RunConfig& config);
Table cmd_perturb(const RunConfig& config);
Table cmd_tongue(const RunConfig& config);
Table cmd_optimize(const RunConfig& config);
Table cmd_bound(const RunConfig& config);

struct FigureOutput {
    std::string suffix;  ///< appended to the output stem, empty for the main file
    RunConfig config;
    Table table;
};

/// Default configuration of a figure; throws InvalidArgument for an unknown id.
RunConfig figure_config(const std::string& id);
std::vector<std::string> figure_ids();
std::vector<FigureOutput> cmd_figure(const RunConfig& config);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace spinsync

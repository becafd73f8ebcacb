#pragma once

#include "fbra/analytic.hpp"
#include "fbra/qbd.hpp"
#include "fbra/simulator.hpp"
#include "fbra/sweep.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fbra {

enum class OutputFormat : std::uint8_t { CSV, JSON };
OutputFormat parse_format(std::string_view text);

/// Empty (monostate) cells render as an empty CSV field and JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

/// Flat record set shared by every command. CSV and JSON carry the same
/// field names; a `single_record` table renders as one JSON object instead
/// of an array.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    bool single_record = false;
};

/// Shortest form that round-trips (17 significant digits at most).
std::string format_number(double x);
std::string render(const Table& table, OutputFormat format);

/// Minimal RFC-4180 reader, all cells as text. Used to re-read emitted CSV.
struct CsvDocument {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
CsvDocument parse_csv(std::string_view text);

// Column schemas:
//   boundary   lambda1, lambda2
//   region     lambda1, lambda2, stable, binding, secondary
//   sweep      lambda1, numeric, lemma2_numeric, theorem1, ra, td, p1_star, p2_star
//   points     lambda1, lambda2, p1, p2, stable
//   simulate   see simulation_table
//   qbd        see qbd_table
Table boundary_table(Scheme scheme, double step);
Table region_table(const AccessProbabilities& p, double lambda_step);
Table sweep_table(const RegionDataset& data);
Table sweep_points_table(const RegionDataset& data);
Table simulation_table(const SimulationMetrics& metrics);
Table qbd_table(const QbdReport& report);

}  // namespace fbra

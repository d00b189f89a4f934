#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dcsim/scenario.hpp"

namespace dcsim {

inline constexpr const char* kReportHeader =
    "scenario_id,variant,semantics,c,u,winner,truth,correct,gas_deploy,gas_total,gas_per_consumer";

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// "e0;e2;nil" style list, one entry per choice.
std::string format_winners(const std::vector<MaybeEvent>& winners);
std::vector<MaybeEvent> parse_winners(std::string_view text);

void write_report_csv(std::ostream& out, const std::vector<ExperimentReport>& reports);
/// Inverse of write_report_csv; throws ValidationError on malformed input.
std::vector<ExperimentReport> read_report_csv(std::istream& in);

struct HeatmapCell {
  OracleVariant variant;
  std::uint64_t c = 0;
  std::uint64_t u = 0;
  double gas_per_consumer = 0;
  double normalized = 0;  // global min-max over all cells
};

/// One cell per report, normalized over the whole set.
std::vector<HeatmapCell> heatmap(const std::vector<ExperimentReport>& reports);
void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapCell>& cells);

struct CorrectnessRow {
  Semantics semantics = Semantics::TransactionDriven;
  Architecture architecture = Architecture::Storage;
  // percentage of correct scenarios; negative when the variant was not run
  double regular = -1;
  double conditional = -1;
};

/// Rows in architecture order, one per architecture that appears.
std::vector<CorrectnessRow> correctness_table(const std::vector<ExperimentReport>& reports);
void write_correctness_csv(std::ostream& out, const std::vector<CorrectnessRow>& rows);

/// One JSON object per receipt.
void write_receipts_log(std::ostream& out, const std::string& scenario_id, const std::vector<Receipt>& receipts);

}  // namespace dcsim

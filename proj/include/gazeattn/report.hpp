#pragma once

#include <filesystem>

#include "gazeattn/evaluate.hpp"

namespace gazeattn {

/// Writes, under out_dir:
///   report.txt  - aligned table (Model | Recall x3 | Accuracy | F1-score),
///                 2-decimal cells, 3-decimal average row
///   report.csv  - same columns, full-precision values + an average row
///   report.json - machine-readable report (the `report` subcommand input)
///   <fold>_confusion.png - one heatmap per fold
/// Returns the paths written.
std::vector<std::filesystem::path> render_report(
    const LosoReport& report, const std::filesystem::path& out_dir);

void save_report_json(const LosoReport& report,
                      const std::filesystem::path& path);
LosoReport load_report_json(const std::filesystem::path& path);

std::string report_table_text(const LosoReport& report);
std::string report_csv_text(const LosoReport& report);

void write_confusion_heatmap(const ConfusionMatrix& cm,
                             const std::filesystem::path& path);

}  // namespace gazeattn

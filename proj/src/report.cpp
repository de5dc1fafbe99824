#include "gazeattn/report.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gazeattn {

using nlohmann::json;

std::string report_table_text(const LosoReport& report) {
  static constexpr const char* kHeaders[] = {
      "Model", "Recall Cobot", "Recall Table", "Recall Distracted",
      "Accuracy", "F1-score"};
  std::vector<std::array<std::string, 6>> rows;
  for (const auto& f : report.folds)
    rows.push_back({f.fold_id, format_decimal(f.metrics.recall[0], 2),
                    format_decimal(f.metrics.recall[1], 2),
                    format_decimal(f.metrics.recall[2], 2),
                    format_decimal(f.metrics.accuracy, 2),
                    format_decimal(f.metrics.macro_f1, 2)});
  rows.push_back({"Average", "", "", "",
                  format_decimal(report.average_accuracy, 3),
                  format_decimal(report.average_macro_f1, 3)});

  std::array<std::size_t, 6> width;
  for (int c = 0; c < 6; ++c) {
    width[c] = std::string(kHeaders[c]).size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::array<std::string, 6>& cells) {
    for (int c = 0; c < 6; ++c) {
      out << cells[c] << std::string(width[c] - cells[c].size(), ' ');
      out << (c + 1 < 6 ? "  " : "");
    }
    out << "\n";
  };
  emit({kHeaders[0], kHeaders[1], kHeaders[2], kHeaders[3], kHeaders[4],
        kHeaders[5]});
  for (const auto& r : rows) emit(r);
  return out.str();
}

std::string report_csv_text(const LosoReport& report) {
  std::ostringstream out;
  out << "model,recall_cobot,recall_table,recall_distracted,accuracy,f1\n";
  for (const auto& f : report.folds)
    out << f.fold_id << "," << format_full(f.metrics.recall[0]) << ","
        << format_full(f.metrics.recall[1]) << ","
        << format_full(f.metrics.recall[2]) << ","
        << format_full(f.metrics.accuracy) << ","
        << format_full(f.metrics.macro_f1) << "\n";
  out << "average,,,," << format_full(report.average_accuracy) << ","
      << format_full(report.average_macro_f1) << "\n";
  return out.str();
}

namespace {

json fold_to_json(const FoldReport& f) {
  json cm = json::array();
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int j = 0; j < 3; ++j) row.push_back(f.cm.cell(i, j));
    cm.push_back(row);
  }
  return json{{"fold", f.fold_id},
              {"confusion", cm},
              {"recall", f.metrics.recall},
              {"recall_defined", f.metrics.recall_defined},
              {"accuracy", f.metrics.accuracy},
              {"macro_f1", f.metrics.macro_f1}};
}

FoldReport fold_from_json(const json& j) {
  FoldReport f;
  f.fold_id = j.at("fold").get<std::string>();
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 3; ++c)
      f.cm.cell(i, c) = j.at("confusion").at(i).at(c).get<std::int64_t>();
  f.metrics.recall = j.at("recall").get<std::array<double, 3>>();
  f.metrics.recall_defined =
      j.at("recall_defined").get<std::array<bool, 3>>();
  f.metrics.accuracy = j.at("accuracy").get<double>();
  f.metrics.macro_f1 = j.at("macro_f1").get<double>();
  return f;
}

}  // namespace

void save_report_json(const LosoReport& report,
                      const std::filesystem::path& path) {
  json j;
  j["folds"] = json::array();
  for (const auto& f : report.folds) j["folds"].push_back(fold_to_json(f));
  j["average_accuracy"] = report.average_accuracy;
  j["average_macro_f1"] = report.average_macro_f1;
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write report: " + path.string());
  out << j.dump(2) << "\n";
}

LosoReport load_report_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("malformed report json: " + std::string(e.what()));
  }
  LosoReport report;
  for (const auto& f : j.at("folds")) report.folds.push_back(fold_from_json(f));
  report.average_accuracy = j.at("average_accuracy").get<double>();
  report.average_macro_f1 = j.at("average_macro_f1").get<double>();
  return report;
}

std::vector<std::filesystem::path> render_report(
    const LosoReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;

  const auto txt = out_dir / "report.txt";
  {
    std::ofstream out(txt, std::ios::trunc);
    if (!out) throw IoError("cannot write " + txt.string());
    out << report_table_text(report);
  }
  written.push_back(txt);

  const auto csv = out_dir / "report.csv";
  {
    std::ofstream out(csv, std::ios::trunc);
    if (!out) throw IoError("cannot write " + csv.string());
    out << report_csv_text(report);
  }
  written.push_back(csv);

  const auto js = out_dir / "report.json";
  save_report_json(report, js);
  written.push_back(js);

  for (const auto& f : report.folds) {
    const auto png = out_dir / (f.fold_id + "_confusion.png");
    write_confusion_heatmap(f.cm, png);
    written.push_back(png);
  }
  return written;
}

}  // namespace gazeattn

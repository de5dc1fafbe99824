#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "gazeattn/report.hpp"

namespace gazeattn {

// Row-normalized 3x3 heatmap with the raw counts drawn in each cell,
// matching the usual confusion-matrix figure layout.
void write_confusion_heatmap(const ConfusionMatrix& cm,
                             const std::filesystem::path& path) {
  constexpr int kCell = 96;
  constexpr int kLabelBand = 56;
  const int size = kLabelBand + 3 * kCell;
  cv::Mat img(size, size, CV_8UC3, cv::Scalar(255, 255, 255));

  for (int i = 0; i < 3; ++i) {
    const double row = static_cast<double>(std::max<std::int64_t>(
        cm.row_sum(i), 1));
    for (int j = 0; j < 3; ++j) {
      const double frac = static_cast<double>(cm.cell(i, j)) / row;
      // White (0) to steel blue (1).
      const cv::Scalar color(255.0 - 185.0 * frac, 255.0 - 130.0 * frac,
                             255.0 - 60.0 * frac);
      const cv::Rect rect(kLabelBand + j * kCell, kLabelBand + i * kCell,
                          kCell, kCell);
      cv::rectangle(img, rect, color, cv::FILLED);
      cv::rectangle(img, rect, cv::Scalar(90, 90, 90), 1);
      const std::string text = std::to_string(cm.cell(i, j));
      const int baseline = 0;
      const auto ts = cv::getTextSize(text, cv::FONT_HERSHEY_SIMPLEX, 0.55,
                                      1, const_cast<int*>(&baseline));
      const cv::Scalar fg = frac > 0.55 ? cv::Scalar(255, 255, 255)
                                        : cv::Scalar(30, 30, 30);
      cv::putText(img, text,
                  {rect.x + (kCell - ts.width) / 2,
                   rect.y + (kCell + ts.height) / 2},
                  cv::FONT_HERSHEY_SIMPLEX, 0.55, fg, 1, cv::LINE_AA);
    }
  }

  const char* names[3] = {"cobot", "table", "distr."};
  for (int k = 0; k < 3; ++k) {
    cv::putText(img, names[k], {kLabelBand + k * kCell + 14, kLabelBand - 16},
                cv::FONT_HERSHEY_SIMPLEX, 0.5, cv::Scalar(30, 30, 30), 1,
                cv::LINE_AA);
    cv::putText(img, names[k], {6, kLabelBand + k * kCell + kCell / 2 + 4},
                cv::FONT_HERSHEY_SIMPLEX, 0.5, cv::Scalar(30, 30, 30), 1,
                cv::LINE_AA);
  }
  cv::putText(img, "predicted", {kLabelBand + kCell, 18},
              cv::FONT_HERSHEY_SIMPLEX, 0.5, cv::Scalar(30, 30, 30), 1,
              cv::LINE_AA);

  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), img))
    throw IoError("cannot write heatmap: " + path.string());
}

}  // namespace gazeattn

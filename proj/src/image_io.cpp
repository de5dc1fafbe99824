#include "gazeattn/image_io.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "gazeattn/errors.hpp"

namespace gazeattn {

ImageTensor load_image(const std::filesystem::path& path) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty())
    throw IoError("cannot read image: " + path.string());
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);

  ImageTensor img;
  img.height = rgb.rows;
  img.width = rgb.cols;
  img.raw.resize(img.pixel_count());
  if (rgb.isContinuous()) {
    std::memcpy(img.raw.data(), rgb.data, img.pixel_count());
  } else {
    for (int y = 0; y < rgb.rows; ++y)
      std::memcpy(&img.raw[static_cast<std::size_t>(y) * img.width * 3],
                  rgb.ptr(y), static_cast<std::size_t>(img.width) * 3);
  }
  return img;
}

void save_image(const std::filesystem::path& path, const ImageTensor& image) {
  if (image.empty() || image.stage != PixelStage::Raw)
    throw IoError("save_image: expected a non-empty raw image");
  cv::Mat rgb(image.height, image.width, CV_8UC3,
              const_cast<std::uint8_t*>(image.raw.data()));
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), bgr))
    throw IoError("cannot write image: " + path.string());
}

}  // namespace gazeattn

#pragma once

#include <filesystem>

#include "gazeattn/image.hpp"

namespace gazeattn {

/// Reads a PNG or JPEG file into a raw RGB ImageTensor.
/// Throws IoError when the file is missing or not decodable.
ImageTensor load_image(const std::filesystem::path& path);

/// Writes a raw image as PNG or JPEG depending on the extension.
void save_image(const std::filesystem::path& path, const ImageTensor& image);

}  // namespace gazeattn

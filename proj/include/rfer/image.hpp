#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rfer {

// Row-major 8-bit grayscale image. The 3x3 LBP neighborhood needs at least
// a 3x3 image, so loaders reject anything smaller.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    bool contains(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

Image make_image(int width, int height, std::uint8_t fill = 0);

// Reads PGM (P5), PPM (P6) or PNG. Color pixels are reduced with
// luma = round(0.299 R + 0.587 G + 0.114 B).
Image load_grayscale_image(const std::string& path);

void write_pgm(const std::string& path, const Image& img);
void write_png_gray(const std::string& path, const Image& img);
// rgb: interleaved 8-bit, width*height*3 bytes
void write_png_rgb(const std::string& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb);

} // namespace rfer

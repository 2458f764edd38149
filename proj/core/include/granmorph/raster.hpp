#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace granmorph {

// 8-bit grey-level raster, row major. Immutable after construction as far as
// the pipeline is concerned; concurrent reads are safe.
class GreyImage {
public:
    GreyImage() = default;
    GreyImage(int width, int height, std::uint8_t fill = 0);

    int width() const { return width_; }
    int height() const { return height_; }

    std::uint8_t at(int x, int y) const { return pixels_[std::size_t(y) * width_ + x]; }
    void set(int x, int y, std::uint8_t v) { pixels_[std::size_t(y) * width_ + x] = v; }

    const std::vector<std::uint8_t>& pixels() const { return pixels_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

// Decodes PGM (P2/P5) and PPM (P3/P6). Multi-channel samples are reduced by
// unweighted channel average; sample depths above 8 bits are rescaled
// linearly to [0,255]. Throws std::runtime_error on unreadable or malformed
// input.
GreyImage load_greyscale(const std::string& path);
GreyImage read_greyscale(std::istream& in);

// Binary (P5) PGM, maxval 255.
void save_pgm(const GreyImage& img, const std::string& path);
void write_pgm(const GreyImage& img, std::ostream& out);

struct Histogram {
    std::array<std::uint64_t, 256> bins{};
};

Histogram grey_histogram(const GreyImage& img);

// CSV with header `grey,count`, one row per grey level.
void write_histogram_csv(const Histogram& h, std::ostream& out);

}  // namespace granmorph

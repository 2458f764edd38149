#include "granmorph/raster.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace granmorph {

GreyImage::GreyImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    if (width < 1 || height < 1)
        throw std::runtime_error("GreyImage: dimensions must be at least 1x1");
    pixels_.assign(std::size_t(width) * height, fill);
}

namespace {

// Skips whitespace and '#' comment lines between PNM header tokens.
int next_header_int(std::istream& in) {
    while (true) {
        int c = in.peek();
        if (c == EOF) throw std::runtime_error("PNM: truncated header");
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        break;
    }
    int v = 0;
    if (!(in >> v)) throw std::runtime_error("PNM: malformed header value");
    return v;
}

std::uint8_t rescale(long raw, int maxval) {
    if (raw < 0 || raw > maxval) throw std::runtime_error("PNM: sample out of range");
    if (maxval == 255) return std::uint8_t(raw);
    // Linear rescale to the 256-level working scale.
    return std::uint8_t((raw * 255 + maxval / 2) / maxval);
}

}  // namespace

GreyImage read_greyscale(std::istream& in) {
    char p = 0, kind = 0;
    in >> p >> kind;
    if (p != 'P' || (kind != '2' && kind != '5' && kind != '3' && kind != '6'))
        throw std::runtime_error("PNM: unsupported format (need P2/P5/P3/P6)");
    const bool ascii = (kind == '2' || kind == '3');
    const int channels = (kind == '3' || kind == '6') ? 3 : 1;

    int w = next_header_int(in);
    int h = next_header_int(in);
    int maxval = next_header_int(in);
    if (w < 1 || h < 1) throw std::runtime_error("PNM: zero-dimension image");
    if (maxval < 1 || maxval > 65535) throw std::runtime_error("PNM: bad maxval");

    GreyImage img(w, h);
    const std::size_t count = std::size_t(w) * h;

    if (ascii) {
        for (std::size_t i = 0; i < count; ++i) {
            long sum = 0;
            for (int c = 0; c < channels; ++c) {
                long v;
                if (!(in >> v)) throw std::runtime_error("PNM: truncated pixel data");
                sum += rescale(v, maxval);
            }
            img.set(int(i % w), int(i / w), std::uint8_t(sum / channels));
        }
    } else {
        in.get();  // single whitespace byte after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        for (std::size_t i = 0; i < count; ++i) {
            long sum = 0;
            for (int c = 0; c < channels; ++c) {
                unsigned char buf[2];
                in.read(reinterpret_cast<char*>(buf), bytes);
                if (!in) throw std::runtime_error("PNM: truncated pixel data");
                long v = bytes == 2 ? (long(buf[0]) << 8) | buf[1] : buf[0];
                sum += rescale(v, maxval);
            }
            img.set(int(i % w), int(i / w), std::uint8_t(sum / channels));
        }
    }
    return img;
}

GreyImage load_greyscale(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open image: " + path);
    return read_greyscale(in);
}

void write_pgm(const GreyImage& img, std::ostream& out) {
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels().data()),
              std::streamsize(img.pixels().size()));
}

void save_pgm(const GreyImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image: " + path);
    write_pgm(img, out);
}

Histogram grey_histogram(const GreyImage& img) {
    Histogram h;
    for (std::uint8_t v : img.pixels()) ++h.bins[v];
    return h;
}

void write_histogram_csv(const Histogram& h, std::ostream& out) {
    out << "grey,count\n";
    for (int g = 0; g < 256; ++g) out << g << "," << h.bins[g] << "\n";
}

}  // namespace granmorph

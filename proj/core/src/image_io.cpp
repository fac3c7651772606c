#include "plausigen/image_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include <zlib.h>

namespace plausigen {

namespace {

void push_be32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

void push_chunk(std::vector<uint8_t>& out, const char type[4],
                const std::vector<uint8_t>& payload) {
    push_be32(out, static_cast<uint32_t>(payload.size()));
    size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    uLong crc = crc32(0L, out.data() + crc_start, static_cast<uInt>(4 + payload.size()));
    push_be32(out, static_cast<uint32_t>(crc));
}

std::vector<uint8_t> deflate_all(const std::vector<uint8_t>& raw) {
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<uint8_t> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()),
                  6) != Z_OK)
        throw std::runtime_error("zlib compression failed");
    compressed.resize(bound);
    return compressed;
}

std::vector<uint8_t> encode_png(int width, int height, int color_type, int bit_depth,
                                const std::vector<uint8_t>& raw_scanlines) {
    std::vector<uint8_t> out{0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};

    std::vector<uint8_t> ihdr;
    push_be32(ihdr, static_cast<uint32_t>(width));
    push_be32(ihdr, static_cast<uint32_t>(height));
    ihdr.push_back(static_cast<uint8_t>(bit_depth));
    ihdr.push_back(static_cast<uint8_t>(color_type));
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter
    ihdr.push_back(0);  // interlace
    push_chunk(out, "IHDR", ihdr);

    push_chunk(out, "IDAT", deflate_all(raw_scanlines));
    push_chunk(out, "IEND", {});
    return out;
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write image file: " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

std::vector<uint8_t> encode_png_rgb8(int width, int height, const uint8_t* rgb) {
    std::vector<uint8_t> raw;
    raw.reserve(static_cast<size_t>(height) * (1 + static_cast<size_t>(width) * 3));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);  // filter: none
        const uint8_t* row = rgb + static_cast<size_t>(y) * width * 3;
        raw.insert(raw.end(), row, row + static_cast<size_t>(width) * 3);
    }
    return encode_png(width, height, 2, 8, raw);
}

std::vector<uint8_t> encode_png_gray16(int width, int height, const uint16_t* gray) {
    std::vector<uint8_t> raw;
    raw.reserve(static_cast<size_t>(height) * (1 + static_cast<size_t>(width) * 2));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);
        for (int x = 0; x < width; ++x) {
            uint16_t v = gray[static_cast<size_t>(y) * width + x];
            raw.push_back(static_cast<uint8_t>(v >> 8));  // PNG is big-endian
            raw.push_back(static_cast<uint8_t>(v & 0xff));
        }
    }
    return encode_png(width, height, 0, 16, raw);
}

void write_png_rgb8(const std::string& path, int width, int height, const uint8_t* rgb) {
    write_file(path, encode_png_rgb8(width, height, rgb));
}

void write_png_gray16(const std::string& path, int width, int height,
                      const uint16_t* gray) {
    write_file(path, encode_png_gray16(width, height, gray));
}

}  // namespace plausigen

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace plausigen {

// Minimal deterministic PNG writing over zlib (fixed compression settings,
// no ancillary chunks, so identical pixels give identical bytes).
std::vector<uint8_t> encode_png_rgb8(int width, int height, const uint8_t* rgb);
std::vector<uint8_t> encode_png_gray16(int width, int height, const uint16_t* gray);

void write_png_rgb8(const std::string& path, int width, int height, const uint8_t* rgb);
void write_png_gray16(const std::string& path, int width, int height,
                      const uint16_t* gray);

}  // namespace plausigen

#pragma once

// PNG encode/decode behind the project's raster contracts, built on libpng's
// simplified API.
//
//   LabelRaster <-> 8-bit single-channel PNG (pixel value = label id) plus a
//                   sidecar legend JSON mapping id -> name (and a category
//                   tag for clothing segments).
//   BinaryMask  <-> 8-bit single-channel PNG, 0 = keep, 255 = masked.
//   Image       <-> 8-bit RGB PNG.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <png.h>

#include "ivton/errors.hpp"
#include "ivton/image.hpp"
#include "ivton/io_util.hpp"
#include "ivton/raster.hpp"

namespace ivton {

namespace detail {

struct GrayPng {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
};

inline GrayPng read_png_gray8(const std::filesystem::path& path) {
    png_image im{};
    im.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&im, path.string().c_str()))
        throw ContractError("png decode failed for " + path.string() + ": " + im.message);
    if (im.format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_ALPHA | PNG_FORMAT_FLAG_LINEAR)) {
        png_image_free(&im);
        throw ContractError("expected 8-bit single-channel PNG: " + path.string());
    }
    im.format = PNG_FORMAT_GRAY;
    GrayPng out;
    out.width = static_cast<int>(im.width);
    out.height = static_cast<int>(im.height);
    out.pixels.resize(PNG_IMAGE_SIZE(im));
    if (!png_image_finish_read(&im, nullptr, out.pixels.data(), 0, nullptr)) {
        std::string msg = im.message;
        png_image_free(&im);
        throw ContractError("png decode failed for " + path.string() + ": " + msg);
    }
    return out;
}

inline void write_png_gray8(const std::filesystem::path& path, int width, int height,
                            const std::vector<std::uint8_t>& pixels) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    png_image im{};
    im.version = PNG_IMAGE_VERSION;
    im.width = static_cast<png_uint_32>(width);
    im.height = static_cast<png_uint_32>(height);
    im.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&im, path.string().c_str(), 0, pixels.data(), 0, nullptr))
        throw ContractError("png encode failed for " + path.string() + ": " + im.message);
}

} // namespace detail

// ---------------------------------------------------------------------------
// RGB images
// ---------------------------------------------------------------------------

/// In-memory decode for wire payloads.
inline Image decode_image_rgb(const std::vector<std::uint8_t>& png_bytes) {
    png_image im{};
    im.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&im, png_bytes.data(), png_bytes.size()))
        throw ContractError(std::string("png decode failed: ") + im.message);
    im.format = PNG_FORMAT_RGB;
    Image out;
    out.width = static_cast<int>(im.width);
    out.height = static_cast<int>(im.height);
    out.rgb.resize(PNG_IMAGE_SIZE(im));
    png_color white{255, 255, 255};
    if (!png_image_finish_read(&im, &white, out.rgb.data(), 0, nullptr)) {
        std::string msg = im.message;
        png_image_free(&im);
        throw ContractError("png decode failed: " + msg);
    }
    return out;
}

inline std::vector<std::uint8_t> encode_image_rgb(const Image& img) {
    png_image im{};
    im.version = PNG_IMAGE_VERSION;
    im.width = static_cast<png_uint_32>(img.width);
    im.height = static_cast<png_uint_32>(img.height);
    im.format = PNG_FORMAT_RGB;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&im, nullptr, &size, 0, img.rgb.data(), 0, nullptr))
        throw ContractError(std::string("png encode failed: ") + im.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&im, out.data(), &size, 0, img.rgb.data(), 0, nullptr))
        throw ContractError(std::string("png encode failed: ") + im.message);
    out.resize(size);
    return out;
}

inline std::vector<std::uint8_t> encode_gray8(int width, int height,
                                              const std::vector<std::uint8_t>& pixels) {
    png_image im{};
    im.version = PNG_IMAGE_VERSION;
    im.width = static_cast<png_uint_32>(width);
    im.height = static_cast<png_uint_32>(height);
    im.format = PNG_FORMAT_GRAY;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&im, nullptr, &size, 0, pixels.data(), 0, nullptr))
        throw ContractError(std::string("png encode failed: ") + im.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&im, out.data(), &size, 0, pixels.data(), 0, nullptr))
        throw ContractError(std::string("png encode failed: ") + im.message);
    out.resize(size);
    return out;
}

inline detail::GrayPng decode_gray8(const std::vector<std::uint8_t>& png_bytes) {
    png_image im{};
    im.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&im, png_bytes.data(), png_bytes.size()))
        throw ContractError(std::string("png decode failed: ") + im.message);
    if (im.format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_ALPHA | PNG_FORMAT_FLAG_LINEAR)) {
        png_image_free(&im);
        throw ContractError("expected 8-bit single-channel PNG payload");
    }
    im.format = PNG_FORMAT_GRAY;
    detail::GrayPng out;
    out.width = static_cast<int>(im.width);
    out.height = static_cast<int>(im.height);
    out.pixels.resize(PNG_IMAGE_SIZE(im));
    if (!png_image_finish_read(&im, nullptr, out.pixels.data(), 0, nullptr)) {
        std::string msg = im.message;
        png_image_free(&im);
        throw ContractError("png decode failed: " + msg);
    }
    return out;
}

inline Image read_image_rgb(const std::filesystem::path& path) {
    png_image im{};
    im.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&im, path.string().c_str()))
        throw ContractError("png decode failed for " + path.string() + ": " + im.message);
    im.format = PNG_FORMAT_RGB;
    Image out;
    out.width = static_cast<int>(im.width);
    out.height = static_cast<int>(im.height);
    out.rgb.resize(PNG_IMAGE_SIZE(im));
    png_color white{255, 255, 255}; // background used if the source has alpha
    if (!png_image_finish_read(&im, &white, out.rgb.data(), 0, nullptr)) {
        std::string msg = im.message;
        png_image_free(&im);
        throw ContractError("png decode failed for " + path.string() + ": " + msg);
    }
    return out;
}

inline void write_image_rgb(const std::filesystem::path& path, const Image& img) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    png_image im{};
    im.version = PNG_IMAGE_VERSION;
    im.width = static_cast<png_uint_32>(img.width);
    im.height = static_cast<png_uint_32>(img.height);
    im.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&im, path.string().c_str(), 0, img.rgb.data(), 0, nullptr))
        throw ContractError("png encode failed for " + path.string() + ": " + im.message);
}

// ---------------------------------------------------------------------------
// Binary masks (0 = keep, 255 = masked)
// ---------------------------------------------------------------------------

inline BinaryMask read_mask_png(const std::filesystem::path& path) {
    detail::GrayPng g = detail::read_png_gray8(path);
    BinaryMask m(g.width, g.height);
    for (std::size_t i = 0; i < g.pixels.size(); ++i)
        m.bits[i] = g.pixels[i] != 0 ? 1 : 0;
    return m;
}

inline void write_mask_png(const std::filesystem::path& path, const BinaryMask& m) {
    std::vector<std::uint8_t> px(m.bits.size());
    for (std::size_t i = 0; i < m.bits.size(); ++i)
        px[i] = m.bits[i] ? 255 : 0;
    detail::write_png_gray8(path, m.width, m.height, px);
}

// ---------------------------------------------------------------------------
// Label rasters + legend sidecars
// ---------------------------------------------------------------------------

/// Legend JSON shape:
///   {"labels": [{"id": 0, "name": "background"},
///               {"id": 2, "name": "shirt", "category": "upper_garment"}, ...]}
inline json legend_to_json(const LabelRaster& raster) {
    json labels = json::array();
    for (const auto& [id, name] : raster.legend) {
        json entry{{"id", id}, {"name", name}};
        auto cat = raster.categories.find(id);
        if (cat != raster.categories.end())
            entry["category"] = to_string(cat->second);
        labels.push_back(entry);
    }
    return json{{"labels", labels}};
}

inline void legend_from_json(const json& j, LabelRaster& raster) {
    raster.legend.clear();
    raster.categories.clear();
    if (!j.contains("labels") || !j["labels"].is_array())
        throw ContractError("legend JSON: missing \"labels\" array");
    try {
        for (const auto& entry : j["labels"]) {
            int id = entry.at("id").get<int>();
            if (id < 0 || id > 255)
                throw ContractError("legend JSON: label id out of range: " + std::to_string(id));
            raster.legend[id] = entry.at("name").get<std::string>();
            if (entry.contains("category"))
                raster.categories[id] =
                    parse_clothing_category(entry["category"].get<std::string>());
        }
    } catch (const json::exception& e) {
        throw ContractError(std::string("legend JSON: malformed entry: ") + e.what());
    }
}

inline LabelRaster read_label_raster(const std::filesystem::path& png_path,
                                     const std::filesystem::path& legend_path) {
    detail::GrayPng g = detail::read_png_gray8(png_path);
    LabelRaster r;
    r.width = g.width;
    r.height = g.height;
    r.labels = std::move(g.pixels);
    legend_from_json(read_json_file(legend_path), r);
    r.validate();
    return r;
}

inline void write_label_raster(const std::filesystem::path& png_path,
                               const std::filesystem::path& legend_path,
                               const LabelRaster& raster) {
    raster.validate();
    detail::write_png_gray8(png_path, raster.width, raster.height, raster.labels);
    write_json_file(legend_path, legend_to_json(raster));
}

} // namespace ivton

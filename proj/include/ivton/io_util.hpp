#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ivton/errors.hpp"

namespace ivton {

using json = nlohmann::json;

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ContractError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ContractError("cannot write file: " + path.string());
    out << text;
    if (!out)
        throw ContractError("write failed: " + path.string());
}

inline json read_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ContractError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

/// Sidecar naming for an image at e.g. person.png:
///   person.parts.png / person.parts.json   (body-parts map + legend)
///   person.cloth.png / person.cloth.json   (clothing map + legend)
inline std::filesystem::path sidecar_path(const std::filesystem::path& image,
                                          const std::string& suffix) {
    std::filesystem::path p = image;
    p.replace_extension();
    p += suffix;
    return p;
}

inline std::filesystem::path parts_png_path(const std::filesystem::path& image) {
    return sidecar_path(image, ".parts.png");
}
inline std::filesystem::path parts_json_path(const std::filesystem::path& image) {
    return sidecar_path(image, ".parts.json");
}
inline std::filesystem::path cloth_png_path(const std::filesystem::path& image) {
    return sidecar_path(image, ".cloth.png");
}
inline std::filesystem::path cloth_json_path(const std::filesystem::path& image) {
    return sidecar_path(image, ".cloth.json");
}
inline std::filesystem::path garment_spec_sidecar_path(const std::filesystem::path& image) {
    return sidecar_path(image, ".spec.json");
}

} // namespace ivton

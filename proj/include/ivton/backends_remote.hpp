#pragma once

// Remote backend clients speaking a minimal JSON-over-HTTP envelope:
// base64-encoded PNG payloads plus a request id and model id per call.
//
//   POST /segment  {request_id, model_id, image_png_b64}
//              ->  {body_png_b64, body_legend, cloth_png_b64, cloth_legend}
//   POST /tryon    {request_id, model_id, person_png_b64, garment_png_b64,
//                   mask_png_b64} -> {image_png_b64}
//   POST /plan     {request_id, model_id, garments, instruction}
//              ->  {order, instructions}
//   POST /dummy    {request_id, model_id, classification, required_exposure}
//              ->  {garment, image_png_b64}
//
// Every response is validated against the same invariants as the stub
// outputs before use.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ivton/backends.hpp"
#include "ivton/errors.hpp"
#include "ivton/io_util.hpp"
#include "ivton/png_io.hpp"

namespace ivton {

// ---------------------------------------------------------------------------
// base64 (RFC 4648)
// ---------------------------------------------------------------------------

namespace detail {

inline const char* b64_alphabet() {
    return "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

inline std::string base64_encode(const std::vector<std::uint8_t>& data) {
    const char* tbl = b64_alphabet();
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        const unsigned v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out += tbl[(v >> 18) & 63];
        out += tbl[(v >> 12) & 63];
        out += tbl[(v >> 6) & 63];
        out += tbl[v & 63];
    }
    if (i + 1 == data.size()) {
        const unsigned v = data[i] << 16;
        out += tbl[(v >> 18) & 63];
        out += tbl[(v >> 12) & 63];
        out += "==";
    } else if (i + 2 == data.size()) {
        const unsigned v = (data[i] << 16) | (data[i + 1] << 8);
        out += tbl[(v >> 18) & 63];
        out += tbl[(v >> 12) & 63];
        out += tbl[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

inline std::vector<std::uint8_t> base64_decode(const std::string& text) {
    int rev[256];
    for (int& v : rev) v = -1;
    const char* tbl = b64_alphabet();
    for (int k = 0; k < 64; ++k) rev[static_cast<unsigned char>(tbl[k])] = k;

    std::vector<std::uint8_t> out;
    unsigned acc = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=' || c == '\n' || c == '\r') continue;
        const int v = rev[static_cast<unsigned char>(c)];
        if (v < 0) throw ContractError("base64: invalid character in payload");
        acc = (acc << 6) | static_cast<unsigned>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xff));
        }
    }
    return out;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    return std::vector<std::uint8_t>(text.begin(), text.end());
}

inline void write_file_bytes(const std::filesystem::path& path,
                             const std::vector<std::uint8_t>& bytes) {
    write_text_file(path, std::string(bytes.begin(), bytes.end()));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Endpoint plumbing
// ---------------------------------------------------------------------------

struct RemoteEndpoint {
    std::string endpoint; // e.g. http://localhost:8080
    int timeout_ms = 30000;
    std::string model_id;
    std::string auth_token_env; // env var NAME holding the bearer token
};

inline void from_json(const json& j, RemoteEndpoint& e) {
    e.endpoint = j.at("endpoint").get<std::string>();
    e.timeout_ms = j.value("timeout_ms", 30000);
    e.model_id = j.value("model_id", std::string());
    e.auth_token_env = j.value("auth_token_env", std::string());
}

namespace detail {

class RemoteClient {
public:
    RemoteClient(std::string role, RemoteEndpoint endpoint)
        : role_(std::move(role)), cfg_(std::move(endpoint)) {}

    json post(const std::string& path, json body) {
        body["request_id"] = role_ + "-" + std::to_string(++counter_);
        body["model_id"] = cfg_.model_id;

        httplib::Client client(cfg_.endpoint);
        client.set_connection_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
        client.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
        httplib::Headers headers;
        if (!cfg_.auth_token_env.empty()) {
            if (const char* token = std::getenv(cfg_.auth_token_env.c_str()))
                headers.emplace("Authorization", std::string("Bearer ") + token);
        }
        auto res = client.Post(path, headers, body.dump(), "application/json");
        if (!res)
            throw BackendError(role_ + " backend at " + cfg_.endpoint + ": transport failure (" +
                               httplib::to_string(res.error()) + ")");
        if (res->status != 200)
            throw BackendError(role_ + " backend at " + cfg_.endpoint + ": HTTP " +
                               std::to_string(res->status) + " for " + path);
        try {
            return json::parse(res->body);
        } catch (const json::exception& e) {
            throw BackendError(role_ + " backend at " + cfg_.endpoint +
                               ": malformed JSON response: " + e.what());
        }
    }

private:
    std::string role_;
    RemoteEndpoint cfg_;
    std::atomic<long long> counter_{0};
};

} // namespace detail

// ---------------------------------------------------------------------------
// Remote backends
// ---------------------------------------------------------------------------

class RemoteSegmentation final : public SegmentationProvider {
public:
    explicit RemoteSegmentation(RemoteEndpoint e)
        : client_("segmentation", e), label_(e.endpoint) {}

    std::string name() const override { return "remote(" + label_ + ")"; }

    SegmentationResult segment(const std::string& image_ref) override {
        const std::vector<std::uint8_t> image_bytes = detail::read_file_bytes(image_ref);
        const Image source = decode_image_rgb(image_bytes);
        json req{{"image_png_b64", detail::base64_encode(image_bytes)}};
        json res = client_.post("/segment", std::move(req));
        SegmentationResult out;
        try {
            detail::GrayPng body_png =
                decode_gray8(detail::base64_decode(res.at("body_png_b64").get<std::string>()));
            detail::GrayPng cloth_png =
                decode_gray8(detail::base64_decode(res.at("cloth_png_b64").get<std::string>()));
            out.body.width = body_png.width;
            out.body.height = body_png.height;
            out.body.labels = std::move(body_png.pixels);
            legend_from_json(res.at("body_legend"), out.body);
            out.clothing.width = cloth_png.width;
            out.clothing.height = cloth_png.height;
            out.clothing.labels = std::move(cloth_png.pixels);
            legend_from_json(res.at("cloth_legend"), out.clothing);
            out.body.validate();
            out.clothing.validate();
            if (out.body.width != source.width || out.body.height != source.height)
                throw ContractError("maps do not match the source image dimensions");
        } catch (const std::exception& e) {
            throw BackendError("segmentation provider '" + name() +
                               "' returned an invalid payload: " + e.what());
        }
        out.figure = BinaryMask(out.body.width, out.body.height);
        for (std::size_t i = 0; i < out.body.labels.size(); ++i)
            out.figure.bits[i] = out.body.labels[i] != 0 ? 1 : 0;
        validate_segmentation(out, name());
        return out;
    }

private:
    detail::RemoteClient client_;
    std::string label_;
};

class RemoteVto final : public VtoBackend {
public:
    explicit RemoteVto(RemoteEndpoint e) : client_("vto", e), label_(e.endpoint) {}

    std::string name() const override { return "remote(" + label_ + ")"; }

    std::string try_on(const TryOnRequest& req, const std::string& output_ref) override {
        std::vector<std::uint8_t> mask_px(req.mask.bits.size());
        for (std::size_t i = 0; i < mask_px.size(); ++i) mask_px[i] = req.mask.bits[i] ? 255 : 0;
        json body{
            {"person_png_b64",
             detail::base64_encode(detail::read_file_bytes(req.person_image_ref))},
            {"garment_png_b64",
             detail::base64_encode(detail::read_file_bytes(req.garment_image_ref))},
            {"mask_png_b64",
             detail::base64_encode(encode_gray8(req.mask.width, req.mask.height, mask_px))}};
        json res = client_.post("/tryon", std::move(body));
        std::vector<std::uint8_t> png_bytes;
        try {
            png_bytes = detail::base64_decode(res.at("image_png_b64").get<std::string>());
            Image decoded = decode_image_rgb(png_bytes);
            if (decoded.width != req.mask.width || decoded.height != req.mask.height)
                throw ContractError("output dimensions do not match the person image");
        } catch (const std::exception& e) {
            throw BackendError("vto backend '" + name() + "' returned an invalid payload: " +
                               e.what());
        }
        detail::write_file_bytes(output_ref, png_bytes);
        return output_ref;
    }

private:
    detail::RemoteClient client_;
    std::string label_;
};

class RemoteVlm final : public VlmPlanner {
public:
    explicit RemoteVlm(RemoteEndpoint e) : client_("vlm", e), label_(e.endpoint) {}

    std::string name() const override { return "remote(" + label_ + ")"; }

    VlmProposal propose(const std::vector<GarmentSpec>& garments,
                        const std::string& instruction_text,
                        const std::string& person_image_ref) override {
        json req{{"garments", garments}, {"instruction", instruction_text}};
        if (!person_image_ref.empty() && std::filesystem::exists(person_image_ref))
            req["person_png_b64"] =
                detail::base64_encode(detail::read_file_bytes(person_image_ref));
        json res = client_.post("/plan", std::move(req));
        VlmProposal p;
        try {
            p.order = res.at("order").get<std::vector<std::string>>();
            for (const auto& [id, instr] : res.value("instructions", json::object()).items())
                p.instructions[id] = instr.get<StyleInstruction>();
        } catch (const std::exception& e) {
            throw BackendError("vlm planner '" + name() + "' returned an invalid payload: " +
                               e.what());
        }
        return p;
    }

private:
    detail::RemoteClient client_;
    std::string label_;
};

/// Remote dummy-garment generator; decoded garment images land in work_dir.
class RemoteDummyGenerator final : public DummyGarmentProvider {
public:
    RemoteDummyGenerator(RemoteEndpoint e, std::filesystem::path work_dir)
        : client_("dummy", e), label_(e.endpoint), work_dir_(std::move(work_dir)) {}

    std::string name() const override { return "remote(" + label_ + ")"; }

    GarmentSpec fetch(Classification classification,
                      const std::set<int>& required_exposure) override {
        json exposure = json::array();
        for (int id : required_exposure) exposure.push_back(body_part::name(id));
        json req{{"classification", to_string(classification)},
                 {"required_exposure", exposure}};
        json res = client_.post("/dummy", std::move(req));
        GarmentSpec spec;
        std::vector<std::uint8_t> png_bytes;
        try {
            spec = res.at("garment").get<GarmentSpec>();
            png_bytes = detail::base64_decode(res.at("image_png_b64").get<std::string>());
            decode_image_rgb(png_bytes); // must decode
        } catch (const std::exception& e) {
            throw BackendError("dummy generator '" + name() + "' returned an invalid payload: " +
                               e.what());
        }
        std::filesystem::create_directories(work_dir_);
        const std::filesystem::path img = work_dir_ / (spec.id + ".png");
        detail::write_file_bytes(img, png_bytes);
        write_json_file(garment_spec_sidecar_path(img), json(spec));
        spec.image_ref = img.string();
        return spec;
    }

private:
    detail::RemoteClient client_;
    std::string label_;
    std::filesystem::path work_dir_;
};

} // namespace ivton

#pragma once

// Image-quality measurement: SSIM over Gaussian-weighted local windows on
// luma, plus per-category aggregation of evaluation records.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivton/errors.hpp"
#include "ivton/image.hpp"

namespace ivton {

// ---------------------------------------------------------------------------
// SSIM
// ---------------------------------------------------------------------------

/// Grayscale plane with double precision samples (luma keeps its fractions).
struct LumaImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// ITU-R 601 luma: 0.299 R + 0.587 G + 0.114 B.
inline LumaImage luma_of(const Image& img) {
    LumaImage out;
    out.width = img.width;
    out.height = img.height;
    out.values.resize(static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0, p = 0; i < out.values.size(); ++i, p += 3)
        out.values[i] = 0.299 * img.rgb[p] + 0.587 * img.rgb[p + 1] + 0.114 * img.rgb[p + 2];
    return out;
}

struct SsimParams {
    int window = 11;      // odd
    double sigma = 1.5;   // Gaussian window weights
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 255.0;
};

/// Mean local SSIM over all fully interior window positions, Gaussian
/// weighting. Symmetric in (a, b).
inline double ssim(const LumaImage& a, const LumaImage& b, const SsimParams& p = {}) {
    if (a.width != b.width || a.height != b.height)
        throw ContractError("ssim: dimension mismatch");
    if (p.window <= 0 || p.window % 2 == 0)
        throw ContractError("ssim: window must be odd and positive");
    if (p.window > a.width || p.window > a.height)
        throw ContractError("ssim: window exceeds image dimensions");

    const int w = p.window;
    std::vector<double> kernel(static_cast<std::size_t>(w) * w);
    {
        const double c = (w - 1) / 2.0;
        double sum = 0.0;
        for (int y = 0; y < w; ++y)
            for (int x = 0; x < w; ++x) {
                const double d2 = (x - c) * (x - c) + (y - c) * (y - c);
                const double v = std::exp(-d2 / (2.0 * p.sigma * p.sigma));
                kernel[static_cast<std::size_t>(y) * w + x] = v;
                sum += v;
            }
        for (double& v : kernel) v /= sum;
    }

    const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
    const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);

    double total = 0.0;
    long long positions = 0;
    for (int oy = 0; oy + w <= a.height; ++oy)
        for (int ox = 0; ox + w <= a.width; ++ox) {
            double mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
            for (int y = 0; y < w; ++y)
                for (int x = 0; x < w; ++x) {
                    const double k = kernel[static_cast<std::size_t>(y) * w + x];
                    const double va = a.at(ox + x, oy + y);
                    const double vb = b.at(ox + x, oy + y);
                    mu_a += k * va;
                    mu_b += k * vb;
                    aa += k * (va * va);
                    bb += k * (vb * vb);
                    ab += k * (va * vb);
                }
            const double var_a = aa - mu_a * mu_a;
            const double var_b = bb - mu_b * mu_b;
            const double cov = ab - mu_a * mu_b;
            const double num = (2.0 * (mu_a * mu_b) + c1) * (2.0 * cov + c2);
            const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
            total += num / den;
            ++positions;
        }
    return total / static_cast<double>(positions);
}

inline double ssim(const Image& a, const Image& b, const SsimParams& p = {}) {
    return ssim(luma_of(a), luma_of(b), p);
}

// ---------------------------------------------------------------------------
// Evaluation records and aggregation
// ---------------------------------------------------------------------------

namespace eval_category {
inline bool is_known(const std::string& c) {
    return c == "dresses" || c == "upper_body" || c == "lower_body" || c == "viton_hd" ||
           c == "synthetic";
}
} // namespace eval_category

struct EvalRecord {
    std::string pair_id;
    std::string category; // dresses | upper_body | lower_body | viton_hd | synthetic
    double efficiency = 0.0;
    std::optional<double> ssim;
    double bbox_efficiency = 0.0; // bounding-box baseline masker, for the dominance check
};

inline void to_json(nlohmann::json& j, const EvalRecord& r) {
    j = nlohmann::json{{"pair_id", r.pair_id},
                       {"category", r.category},
                       {"efficiency", r.efficiency},
                       {"bbox_efficiency", r.bbox_efficiency}};
    if (r.ssim) j["ssim"] = *r.ssim;
}

inline void from_json(const nlohmann::json& j, EvalRecord& r) {
    j.at("pair_id").get_to(r.pair_id);
    j.at("category").get_to(r.category);
    j.at("efficiency").get_to(r.efficiency);
    j.at("bbox_efficiency").get_to(r.bbox_efficiency);
    if (j.contains("ssim")) r.ssim = j["ssim"].get<double>();
}

struct CategoryAggregate {
    long long count = 0;
    double efficiency_mean = 0.0;
    double bbox_efficiency_mean = 0.0;
    std::optional<double> ssim_mean;
};

/// Arithmetic means per category; empty categories are simply absent.
inline std::map<std::string, CategoryAggregate> aggregate(const std::vector<EvalRecord>& records) {
    struct Acc {
        long long n = 0;
        double eff = 0.0, bbox = 0.0, ssim = 0.0;
        long long ssim_n = 0;
    };
    std::map<std::string, Acc> accs;
    for (const EvalRecord& r : records) {
        Acc& a = accs[r.category];
        ++a.n;
        a.eff += r.efficiency;
        a.bbox += r.bbox_efficiency;
        if (r.ssim) {
            a.ssim += *r.ssim;
            ++a.ssim_n;
        }
    }
    std::map<std::string, CategoryAggregate> out;
    for (const auto& [cat, a] : accs) {
        CategoryAggregate agg;
        agg.count = a.n;
        agg.efficiency_mean = a.eff / static_cast<double>(a.n);
        agg.bbox_efficiency_mean = a.bbox / static_cast<double>(a.n);
        if (a.ssim_n > 0) agg.ssim_mean = a.ssim / static_cast<double>(a.ssim_n);
        out[cat] = agg;
    }
    return out;
}

inline void to_json(nlohmann::json& j, const CategoryAggregate& a) {
    j = nlohmann::json{{"count", a.count},
                       {"efficiency_mean", a.efficiency_mean},
                       {"bbox_efficiency_mean", a.bbox_efficiency_mean}};
    if (a.ssim_mean) j["ssim_mean"] = *a.ssim_mean;
}

/// Aligned markdown rendering: one metric table with maskers as rows and
/// categories as columns, mirroring the usual try-on report layout.
inline std::string render_markdown(const std::map<std::string, CategoryAggregate>& aggs) {
    std::vector<std::string> cats;
    for (const auto& [cat, _] : aggs) cats.push_back(cat);

    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        return std::string(buf);
    };
    std::string md;
    auto row = [&md](const std::vector<std::string>& cells) {
        md += "|";
        for (const std::string& c : cells) {
            md += " " + c + " |";
        }
        md += "\n";
    };

    std::vector<std::string> header{"Mask efficiency"};
    header.insert(header.end(), cats.begin(), cats.end());
    row(header);
    std::vector<std::string> sep(header.size(), "---");
    row(sep);
    std::vector<std::string> ours{"trace masker"};
    std::vector<std::string> bbox{"bbox baseline"};
    for (const std::string& c : cats) {
        ours.push_back(fmt(aggs.at(c).efficiency_mean));
        bbox.push_back(fmt(aggs.at(c).bbox_efficiency_mean));
    }
    row(ours);
    row(bbox);

    bool any_ssim = false;
    for (const auto& [_, a] : aggs)
        if (a.ssim_mean) any_ssim = true;
    if (any_ssim) {
        md += "\n";
        std::vector<std::string> h2{"SSIM"};
        h2.insert(h2.end(), cats.begin(), cats.end());
        row(h2);
        row(std::vector<std::string>(h2.size(), "---"));
        std::vector<std::string> vals{"trace masker"};
        for (const std::string& c : cats)
            vals.push_back(aggs.at(c).ssim_mean ? fmt(*aggs.at(c).ssim_mean) : "-");
        row(vals);
    }
    return md;
}

} // namespace ivton

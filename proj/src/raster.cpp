#include "roadsight/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace roadsight {

namespace {

std::uint8_t clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

int clamp_idx(int i, int n) { return std::clamp(i, 0, n - 1); }

}  // namespace

Raster::Raster(int w, int h, int c, ColorSpace sp, std::uint8_t fill)
    : width(w), height(h), channels(c), space(sp),
      data(static_cast<std::size_t>(w) * h * c, fill) {
    if (w < 1 || h < 1) throw InvalidInput("Raster: dimensions must be >= 1");
    if (c != 1 && c != 3) throw InvalidInput("Raster: channels must be 1 or 3");
    if ((c == 1) != (sp == ColorSpace::GRAY))
        throw InvalidInput("Raster: channels=1 iff space=GRAY");
}

std::size_t BitMask::count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

Raster to_hsv(const Raster& img) {
    if (img.space != ColorSpace::RGB) throw InvalidInput("to_hsv: input must be RGB");
    Raster out(img.width, img.height, 3, ColorSpace::HSV);
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        const int r = img.data[p * 3 + 0];
        const int g = img.data[p * 3 + 1];
        const int b = img.data[p * 3 + 2];
        const int v = std::max({r, g, b});
        const int m = std::min({r, g, b});
        const int delta = v - m;

        int h8 = 0;
        if (delta != 0) {
            double h;
            if (v == r)
                h = 60.0 * (g - b) / delta;
            else if (v == g)
                h = 120.0 + 60.0 * (b - r) / delta;
            else
                h = 240.0 + 60.0 * (r - g) / delta;
            if (h < 0) h += 360.0;
            h8 = static_cast<int>(std::lround(h / 2.0));
            if (h8 >= 180) h8 -= 180;
        }
        const int s = (v == 0) ? 0 : static_cast<int>(std::lround(255.0 * delta / v));

        out.data[p * 3 + 0] = static_cast<std::uint8_t>(h8);
        out.data[p * 3 + 1] = static_cast<std::uint8_t>(s);
        out.data[p * 3 + 2] = static_cast<std::uint8_t>(v);
    }
    return out;
}

Raster to_gray(const Raster& img) {
    if (img.space != ColorSpace::RGB) throw InvalidInput("to_gray: input must be RGB");
    Raster out(img.width, img.height, 1, ColorSpace::GRAY);
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        const double luma = 0.299 * img.data[p * 3 + 0] + 0.587 * img.data[p * 3 + 1] +
                            0.114 * img.data[p * 3 + 2];
        out.data[p] = clamp_u8(luma);
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0)) throw InvalidInput("gaussian_kernel: sigma must be > 0");
    const int hw = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * hw + 1);
    for (int i = -hw; i <= hw; ++i)
        k[i + hw] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    const double sum = std::accumulate(k.begin(), k.end(), 0.0);
    for (double& w : k) w /= sum;
    return k;
}

Raster gaussian_blur(const Raster& img, double sigma) {
    const std::vector<double> k = gaussian_kernel(sigma);
    const int hw = static_cast<int>(k.size() / 2);
    const int w = img.width, h = img.height, c = img.channels;

    // horizontal pass into float buffer, then vertical pass, one quantization
    std::vector<double> tmp(img.data.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int ch = 0; ch < c; ++ch) {
                double acc = 0.0;
                for (int i = -hw; i <= hw; ++i)
                    acc += k[i + hw] * img.at(clamp_idx(x + i, w), y, ch);
                tmp[(static_cast<std::size_t>(y) * w + x) * c + ch] = acc;
            }
        }
    }
    Raster out(w, h, c, img.space);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int ch = 0; ch < c; ++ch) {
                double acc = 0.0;
                for (int i = -hw; i <= hw; ++i)
                    acc += k[i + hw] * tmp[(static_cast<std::size_t>(clamp_idx(y + i, h)) * w + x) * c + ch];
                out.at(x, y, ch) = clamp_u8(acc);
            }
        }
    }
    return out;
}

BitMask band_threshold(const Raster& img, const std::vector<std::uint8_t>& lo,
                       const std::vector<std::uint8_t>& hi) {
    if (static_cast<int>(lo.size()) != img.channels || static_cast<int>(hi.size()) != img.channels)
        throw InvalidInput("band_threshold: band vector length must equal channel count");
    for (int ch = 0; ch < img.channels; ++ch)
        if (lo[ch] > hi[ch]) throw InvalidInput("band_threshold: lo > hi");

    BitMask out(img.width, img.height);
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        bool in = true;
        for (int ch = 0; ch < img.channels && in; ++ch) {
            const std::uint8_t v = img.data[p * img.channels + ch];
            in = lo[ch] <= v && v <= hi[ch];
        }
        out.bits[p] = in ? 1 : 0;
    }
    return out;
}

Raster resize(const Raster& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) throw InvalidInput("resize: target dimensions must be >= 1");
    Raster out(out_w, out_h, img.channels, img.space);
    const double sx = static_cast<double>(img.width) / out_w;
    const double sy = static_cast<double>(img.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < out_w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;
            for (int ch = 0; ch < img.channels; ++ch) {
                const double top = (1.0 - wx) * img.at(x0, y0, ch) + wx * img.at(x1, y0, ch);
                const double bot = (1.0 - wx) * img.at(x0, y1, ch) + wx * img.at(x1, y1, ch);
                out.at(x, y, ch) = clamp_u8((1.0 - wy) * top + wy * bot);
            }
        }
    }
    return out;
}

Raster downscale2(const Raster& img) {
    if (img.width % 2 != 0 || img.height % 2 != 0)
        throw InvalidInput("downscale2: dimensions must be even");
    Raster out(img.width / 2, img.height / 2, img.channels, img.space);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            for (int ch = 0; ch < img.channels; ++ch) {
                const int sum = img.at(2 * x, 2 * y, ch) + img.at(2 * x + 1, 2 * y, ch) +
                                img.at(2 * x, 2 * y + 1, ch) + img.at(2 * x + 1, 2 * y + 1, ch);
                out.at(x, y, ch) = static_cast<std::uint8_t>(sum / 4);
            }
        }
    }
    return out;
}

}  // namespace roadsight

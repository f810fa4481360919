#include "panorel/sga.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <limits>
#include <tuple>
#include <type_traits>

namespace panorel {

SamplingMap::SamplingMap(const GridSpec& grid, const Rotation& rotation) : grid_(grid)
{
    const int w = grid.width();
    const int h = grid.height();
    src_u_.resize(grid.pixel_count());
    src_v_.resize(grid.pixel_count());
    const Mat3 inv = rotation.matrix().transpose();
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const UnitVec3 out_dir = sph_to_dir(pixel_to_sph(u, v, grid));
            const UnitVec3 in_dir = UnitVec3::normalized(inv * out_dir.vec());
            const PixelCoord src = sph_to_pixel(dir_to_sph(in_dir), grid);
            src_u_[index(u, v)] = src.u;
            src_v_[index(u, v)] = src.v;
        }
    }
}

namespace {

struct Tap {
    int u0, u1, v0, v1;
    double fu, fv;
};

int wrap_col(long long u, int w)
{
    const long long m = u % w;
    return static_cast<int>(m < 0 ? m + w : m);
}

int clamp_row(long long v, int h)
{
    return static_cast<int>(std::clamp<long long>(v, 0, h - 1));
}

std::pair<int, int> nearest_tap(double su, double sv, const GridSpec& g)
{
    const auto iu = static_cast<long long>(std::floor(su + 0.5));
    const auto iv = static_cast<long long>(std::floor(sv + 0.5));
    return {wrap_col(iu, g.width()), clamp_row(iv, g.height())};
}

Tap bilinear_tap(double su, double sv, const GridSpec& g)
{
    const double fu0 = std::floor(su);
    const double fv0 = std::floor(sv);
    const auto iu = static_cast<long long>(fu0);
    const auto iv = static_cast<long long>(fv0);
    return {wrap_col(iu, g.width()), wrap_col(iu + 1, g.width()), clamp_row(iv, g.height()),
            clamp_row(iv + 1, g.height()), su - fu0, sv - fv0};
}

template <typename T>
T from_real(double x)
{
    if constexpr (std::is_integral_v<T>) {
        const double lo = static_cast<double>(std::numeric_limits<T>::min());
        const double hi = static_cast<double>(std::numeric_limits<T>::max());
        return static_cast<T>(std::clamp(std::round(x), lo, hi));
    } else {
        return static_cast<T>(x);
    }
}

} // namespace

template <typename T>
ErpImage<T> rotate_erp(const ErpImage<T>& img, const SamplingMap& map, Sampling sampling, Content content)
{
    if (content == Content::labels && sampling == Sampling::bilinear) {
        throw Error("invalid_argument", "label images must be rotated with nearest sampling");
    }
    if (!(img.grid() == map.grid())) {
        throw Error("shape_mismatch", "sampling map was built for a different grid");
    }
    const GridSpec& g = img.grid();
    const int channels = img.channels();
    ErpImage<T> out(g, channels);
    for (int v = 0; v < g.height(); ++v) {
        for (int u = 0; u < g.width(); ++u) {
            const double su = map.src_u(u, v);
            const double sv = map.src_v(u, v);
            if (sampling == Sampling::nearest) {
                const auto [iu, iv] = nearest_tap(su, sv, g);
                for (int c = 0; c < channels; ++c) {
                    out.at(u, v, c) = img.at(iu, iv, c);
                }
                continue;
            }
            const Tap t = bilinear_tap(su, sv, g);
            for (int c = 0; c < channels; ++c) {
                const double top = (1.0 - t.fu) * static_cast<double>(img.at(t.u0, t.v0, c)) +
                                   t.fu * static_cast<double>(img.at(t.u1, t.v0, c));
                const double bottom = (1.0 - t.fu) * static_cast<double>(img.at(t.u0, t.v1, c)) +
                                      t.fu * static_cast<double>(img.at(t.u1, t.v1, c));
                out.at(u, v, c) = from_real<T>((1.0 - t.fv) * top + t.fv * bottom);
            }
        }
    }
    return out;
}

template <typename T>
ErpImage<T> rotate_erp(const ErpImage<T>& img, const Rotation& rotation, Sampling sampling, Content content)
{
    if (content == Content::labels && sampling == Sampling::bilinear) {
        throw Error("invalid_argument", "label images must be rotated with nearest sampling");
    }
    if (rotation.is_identity()) {
        return img;
    }
    return rotate_erp(img, SamplingMap(img.grid(), rotation), sampling, content);
}

template ErpImage<std::uint8_t> rotate_erp(const ErpImage<std::uint8_t>&, const Rotation&, Sampling, Content);
template ErpImage<std::uint16_t> rotate_erp(const ErpImage<std::uint16_t>&, const Rotation&, Sampling, Content);
template ErpImage<float> rotate_erp(const ErpImage<float>&, const Rotation&, Sampling, Content);
template ErpImage<double> rotate_erp(const ErpImage<double>&, const Rotation&, Sampling, Content);
template ErpImage<std::uint8_t> rotate_erp(const ErpImage<std::uint8_t>&, const SamplingMap&, Sampling, Content);
template ErpImage<std::uint16_t> rotate_erp(const ErpImage<std::uint16_t>&, const SamplingMap&, Sampling, Content);
template ErpImage<float> rotate_erp(const ErpImage<float>&, const SamplingMap&, Sampling, Content);
template ErpImage<double> rotate_erp(const ErpImage<double>&, const SamplingMap&, Sampling, Content);

DepthImage rotate_depth(const DepthImage& depth, const SamplingMap& map, Sampling sampling)
{
    if (!(depth.grid() == map.grid())) {
        throw Error("shape_mismatch", "sampling map was built for a different grid");
    }
    const GridSpec& g = depth.grid();
    DepthImage out(g);
    for (int v = 0; v < g.height(); ++v) {
        for (int u = 0; u < g.width(); ++u) {
            const double su = map.src_u(u, v);
            const double sv = map.src_v(u, v);
            if (sampling == Sampling::nearest) {
                const auto [iu, iv] = nearest_tap(su, sv, g);
                if (depth.valid(iu, iv)) {
                    out.set(u, v, depth.at(iu, iv));
                }
                continue;
            }
            const Tap t = bilinear_tap(su, sv, g);
            const std::array<std::tuple<int, int, double>, 4> taps{{
                {t.u0, t.v0, (1.0 - t.fu) * (1.0 - t.fv)},
                {t.u1, t.v0, t.fu * (1.0 - t.fv)},
                {t.u0, t.v1, (1.0 - t.fu) * t.fv},
                {t.u1, t.v1, t.fu * t.fv},
            }};
            double acc = 0.0;
            double weight = 0.0;
            for (const auto& [tu, tv, wgt] : taps) {
                if (wgt > 0.0 && depth.valid(tu, tv)) {
                    acc += wgt * depth.at(tu, tv);
                    weight += wgt;
                }
            }
            if (weight > 0.0) {
                out.set(u, v, acc / weight);
            }
        }
    }
    return out;
}

DepthImage rotate_depth(const DepthImage& depth, const Rotation& rotation, Sampling sampling)
{
    if (rotation.is_identity()) {
        return depth;
    }
    return rotate_depth(depth, SamplingMap(depth.grid(), rotation), sampling);
}

} // namespace panorel

#pragma once

#include "panorel/coords.hpp"
#include "panorel/error.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace panorel {

/// Interleaved row-major raster on an equirectangular grid.
template <typename T>
class ErpImage {
public:
    using value_type = T;

    explicit ErpImage(GridSpec grid, int channels = 1, T fill = T{})
        : grid_(grid), channels_(channels)
    {
        if (channels < 1) {
            throw Error("invalid_argument", "image needs at least one channel");
        }
        data_.assign(grid.pixel_count() * static_cast<std::size_t>(channels), fill);
    }

    const GridSpec& grid() const noexcept { return grid_; }
    int width() const noexcept { return grid_.width(); }
    int height() const noexcept { return grid_.height(); }
    int channels() const noexcept { return channels_; }

    std::size_t index(int u, int v, int c = 0) const noexcept
    {
        return (static_cast<std::size_t>(v) * static_cast<std::size_t>(grid_.width()) +
                static_cast<std::size_t>(u)) *
                   static_cast<std::size_t>(channels_) +
               static_cast<std::size_t>(c);
    }

    T& at(int u, int v, int c = 0) noexcept { return data_[index(u, v, c)]; }
    const T& at(int u, int v, int c = 0) const noexcept { return data_[index(u, v, c)]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    friend bool operator==(const ErpImage&, const ErpImage&) = default;

private:
    GridSpec grid_;
    int channels_;
    std::vector<T> data_;
};

/// Single-channel validity mask; nonzero means valid.
using Mask = ErpImage<std::uint8_t>;
using RgbImage = ErpImage<std::uint8_t>;
/// Semantic labels, one class id per pixel.
using LabelImage = ErpImage<std::uint8_t>;

/// Radial distance per pixel in meters plus a validity mask. Valid depths are
/// finite and strictly positive; invalid pixels hold 0 and are flagged in the mask.
class DepthImage {
public:
    explicit DepthImage(GridSpec grid) : meters_(grid, 1, 0.0), valid_(grid, 1, 0) {}

    /// Builds a depth image from raw meters; non-finite or non-positive values become invalid.
    static DepthImage from_meters(GridSpec grid, std::span<const double> meters);

    const GridSpec& grid() const noexcept { return meters_.grid(); }
    int width() const noexcept { return meters_.width(); }
    int height() const noexcept { return meters_.height(); }

    bool valid(int u, int v) const noexcept { return valid_.at(u, v) != 0; }
    double at(int u, int v) const noexcept { return meters_.at(u, v); }

    void set(int u, int v, double meters)
    {
        if (std::isfinite(meters) && meters > 0.0) {
            meters_.at(u, v) = meters;
            valid_.at(u, v) = 1;
        } else {
            invalidate(u, v);
        }
    }
    void invalidate(int u, int v) noexcept
    {
        meters_.at(u, v) = 0.0;
        valid_.at(u, v) = 0;
    }

    const ErpImage<double>& meters() const noexcept { return meters_; }
    const Mask& mask() const noexcept { return valid_; }
    std::size_t valid_count() const noexcept;

    friend bool operator==(const DepthImage&, const DepthImage&) = default;

private:
    ErpImage<double> meters_;
    Mask valid_;
};

inline DepthImage DepthImage::from_meters(GridSpec grid, std::span<const double> meters)
{
    if (meters.size() != grid.pixel_count()) {
        throw Error("shape_mismatch", "depth buffer size does not match the grid");
    }
    DepthImage out(grid);
    for (int v = 0; v < grid.height(); ++v) {
        for (int u = 0; u < grid.width(); ++u) {
            out.set(u, v, meters[static_cast<std::size_t>(v) * grid.width() + u]);
        }
    }
    return out;
}

inline std::size_t DepthImage::valid_count() const noexcept
{
    std::size_t n = 0;
    for (auto m : valid_.data()) {
        n += m != 0;
    }
    return n;
}

} // namespace panorel

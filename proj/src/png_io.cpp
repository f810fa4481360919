#include "panorel/io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>

namespace panorel {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode)
{
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) {
        throw Error("io", "cannot open " + path.string());
    }
    return f;
}

void on_png_error(png_structp png, png_const_charp msg)
{
    auto* text = static_cast<std::string*>(png_get_error_ptr(png));
    *text = msg;
    std::longjmp(png_jmpbuf(png), 1);
}

void on_png_warning(png_structp, png_const_charp) {}

class PngReader {
public:
    explicit PngReader(const fs::path& path) : path_(path), file_(open_file(path, "rb"))
    {
        png_byte sig[8];
        if (std::fread(sig, 1, 8, file_.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
            throw Error("format", path.string() + " is not a PNG file");
        }
        png_ = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error_, on_png_error, on_png_warning);
        info_ = png_create_info_struct(png_);
        if (png_ == nullptr || info_ == nullptr) {
            throw Error("io", "libpng initialization failed");
        }
    }
    ~PngReader() { png_destroy_read_struct(&png_, &info_, nullptr); }
    PngReader(const PngReader&) = delete;
    PngReader& operator=(const PngReader&) = delete;

    PngImage read(bool header_only)
    {
        PngImage img;
        std::vector<png_bytep> rows;
        std::vector<png_byte> buffer;
        if (setjmp(png_jmpbuf(png_))) {
            throw Error("format", "cannot decode " + path_.string() + ": " + error_);
        }
        png_init_io(png_, file_.get());
        png_set_sig_bytes(png_, 8);
        png_read_info(png_, info_);
        const int color = png_get_color_type(png_, info_);
        const int depth = png_get_bit_depth(png_, info_);
        if (color == PNG_COLOR_TYPE_PALETTE) {
            png_set_palette_to_rgb(png_);
        }
        if (color == PNG_COLOR_TYPE_GRAY && depth < 8) {
            png_set_expand_gray_1_2_4_to_8(png_);
        }
        if (png_get_valid(png_, info_, PNG_INFO_tRNS)) {
            png_set_tRNS_to_alpha(png_);
        }
        if (depth == 16) {
            png_set_swap(png_);
        }
        png_read_update_info(png_, info_);
        img.info.width = static_cast<int>(png_get_image_width(png_, info_));
        img.info.height = static_cast<int>(png_get_image_height(png_, info_));
        img.info.channels = png_get_channels(png_, info_);
        img.info.bit_depth = png_get_bit_depth(png_, info_);
        if (header_only) {
            return img;
        }
        const std::size_t rowbytes = png_get_rowbytes(png_, info_);
        buffer.resize(rowbytes * static_cast<std::size_t>(img.info.height));
        rows.resize(static_cast<std::size_t>(img.info.height));
        for (int y = 0; y < img.info.height; ++y) {
            rows[static_cast<std::size_t>(y)] = buffer.data() + rowbytes * static_cast<std::size_t>(y);
        }
        png_read_image(png_, rows.data());
        png_read_end(png_, nullptr);

        const std::size_t n =
            static_cast<std::size_t>(img.info.width) * img.info.height * static_cast<std::size_t>(img.info.channels);
        img.samples.resize(n);
        if (img.info.bit_depth == 16) {
            for (std::size_t i = 0; i < n; ++i) {
                img.samples[i] = static_cast<std::uint16_t>(buffer[2 * i] | (buffer[2 * i + 1] << 8));
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                img.samples[i] = buffer[i];
            }
        }
        return img;
    }

private:
    fs::path path_;
    FilePtr file_;
    std::string error_;
    png_structp png_ = nullptr;
    png_infop info_ = nullptr;
};

} // namespace

PngInfo read_png_info(const fs::path& path)
{
    return PngReader(path).read(true).info;
}

PngImage read_png(const fs::path& path)
{
    return PngReader(path).read(false);
}

void write_png(const fs::path& path, const PngInfo& info, std::span<const std::uint16_t> samples)
{
    if (info.bit_depth != 8 && info.bit_depth != 16) {
        throw Error("invalid_argument", "only 8- and 16-bit PNG output is supported");
    }
    if (info.channels < 1 || info.channels > 4 || info.width < 1 || info.height < 1) {
        throw Error("invalid_argument", "bad PNG dimensions");
    }
    const std::size_t n = static_cast<std::size_t>(info.width) * info.height * static_cast<std::size_t>(info.channels);
    if (samples.size() != n) {
        throw Error("shape_mismatch", "sample count does not match PNG dimensions");
    }
    static constexpr int kColor[] = {PNG_COLOR_TYPE_GRAY, PNG_COLOR_TYPE_GRAY_ALPHA, PNG_COLOR_TYPE_RGB,
                                     PNG_COLOR_TYPE_RGB_ALPHA};
    const std::size_t bytes = static_cast<std::size_t>(info.bit_depth / 8);
    std::vector<png_byte> buffer(n * bytes);
    for (std::size_t i = 0; i < n; ++i) {
        if (bytes == 2) {
            buffer[2 * i] = static_cast<png_byte>(samples[i] >> 8);
            buffer[2 * i + 1] = static_cast<png_byte>(samples[i] & 0xff);
        } else {
            buffer[i] = static_cast<png_byte>(std::min<std::uint16_t>(samples[i], 255));
        }
    }
    const std::size_t rowbytes = static_cast<std::size_t>(info.width) * info.channels * bytes;
    std::vector<png_bytep> rows(static_cast<std::size_t>(info.height));
    for (int y = 0; y < info.height; ++y) {
        rows[static_cast<std::size_t>(y)] = buffer.data() + rowbytes * static_cast<std::size_t>(y);
    }

    FilePtr file = open_file(path, "wb");
    std::string error;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, on_png_error, on_png_warning);
    png_infop pinfo = png_create_info_struct(png);
    if (png == nullptr || pinfo == nullptr) {
        png_destroy_write_struct(&png, &pinfo);
        throw Error("io", "libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &pinfo);
        throw Error("io", "cannot encode " + path.string() + ": " + error);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, pinfo, static_cast<png_uint_32>(info.width), static_cast<png_uint_32>(info.height),
                 info.bit_depth, kColor[info.channels - 1], PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, pinfo);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &pinfo);
}

ErpImage<std::uint8_t> read_png8(const fs::path& path)
{
    const PngImage png = read_png(path);
    if (png.info.bit_depth != 8) {
        throw Error("format", path.string() + " must be an 8-bit PNG");
    }
    ErpImage<std::uint8_t> img(GridSpec(png.info.width, png.info.height), png.info.channels);
    auto dst = img.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = static_cast<std::uint8_t>(png.samples[i]);
    }
    return img;
}

void write_png8(const fs::path& path, const ErpImage<std::uint8_t>& img)
{
    const auto src = img.data();
    std::vector<std::uint16_t> samples(src.begin(), src.end());
    write_png(path, {img.width(), img.height(), img.channels(), 8}, samples);
}

void write_encoded(const fs::path& path, const EncodedImage& img, const std::optional<fs::path>& mask_path)
{
    write_png8(path, img.channels());
    if (mask_path) {
        Mask vis = img.mask();
        for (auto& m : vis.data()) {
            m = m != 0 ? 255 : 0;
        }
        write_png8(*mask_path, vis);
    }
}

} // namespace panorel

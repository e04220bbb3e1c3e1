#include "qpc/image.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include <png.h>

namespace qpc {

RasterImage RasterImage::create(uint32_t w, uint32_t h, uint32_t c, uint8_t fill) {
    if (c != 1 && c != 3)
        raise(errc::channel_mismatch, "images carry 1 or 3 channels, got " +
                                      std::to_string(c));
    RasterImage img;
    img.width = w;
    img.height = h;
    img.channels = c;
    img.samples.assign(static_cast<size_t>(w) * h * c, fill);
    return img;
}

namespace {

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(errc::io_error, "cannot open " + path.string());
    std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    if (!in.good() && !in.eof())
        raise(errc::io_error, "read error on " + path.string());
    return data;
}

void write_file(const std::filesystem::path& path, const void* data, size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        raise(errc::io_error, "cannot create " + path.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out)
        raise(errc::io_error, "write error on " + path.string());
}

// --------------------------------------------------------------------------
// PNG via libpng
// --------------------------------------------------------------------------

struct MemReader {
    const uint8_t* data;
    size_t size;
    size_t offset;
};

extern "C" void qpc_png_mem_read(png_structp png, png_bytep out, png_size_t count) {
    auto* r = static_cast<MemReader*>(png_get_io_ptr(png));
    if (r->offset + count > r->size)
        png_error(png, "unexpected end of PNG stream");
    std::memcpy(out, r->data + r->offset, count);
    r->offset += count;
}

struct PngReadGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadGuard() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWriteGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* file = nullptr;
    ~PngWriteGuard() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (file) std::fclose(file);
    }
};

RasterImage load_png(const std::vector<uint8_t>& bytes,
                     const std::filesystem::path& path) {
    PngReadGuard g;
    g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png)
        raise(errc::io_error, "libpng initialization failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info)
        raise(errc::io_error, "libpng initialization failed");

    MemReader reader{bytes.data(), bytes.size(), 0};
    RasterImage img;
    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(g.png)))
        raise(errc::io_error, "corrupt PNG: " + path.string());

    png_set_read_fn(g.png, &reader, qpc_png_mem_read);
    png_read_info(g.png, g.info);

    if (png_get_bit_depth(g.png, g.info) == 16)
        raise(errc::bit_depth_unsupported,
              "16-bit PNG not supported: " + path.string());

    png_byte color_type = png_get_color_type(g.png, g.info);
    if (color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(g.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(g.png, g.info) < 8)
        png_set_expand_gray_1_2_4_to_8(g.png);
    if (png_get_valid(g.png, g.info, PNG_INFO_tRNS))
        png_set_tRNS_to_alpha(g.png);
    png_set_strip_alpha(g.png);
    png_set_interlace_handling(g.png);
    png_read_update_info(g.png, g.info);

    uint32_t channels = png_get_channels(g.png, g.info);
    if (channels != 1 && channels != 3)
        raise(errc::unsupported_format,
              "PNG decodes to " + std::to_string(channels) + " channels: " +
              path.string());

    img = RasterImage::create(png_get_image_width(g.png, g.info),
                              png_get_image_height(g.png, g.info), channels);
    rows.resize(img.height);
    size_t stride = static_cast<size_t>(img.width) * img.channels;
    for (uint32_t y = 0; y < img.height; ++y)
        rows[y] = img.samples.data() + y * stride;
    png_read_image(g.png, rows.data());
    png_read_end(g.png, nullptr);
    return img;
}

void save_png(const RasterImage& img, const std::filesystem::path& path) {
    PngWriteGuard g;
    g.file = std::fopen(path.string().c_str(), "wb");
    if (!g.file)
        raise(errc::io_error, "cannot create " + path.string());
    g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png)
        raise(errc::io_error, "libpng initialization failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info)
        raise(errc::io_error, "libpng initialization failed");

    std::vector<png_bytep> rows(img.height);
    size_t stride = static_cast<size_t>(img.width) * img.channels;
    for (uint32_t y = 0; y < img.height; ++y)
        rows[y] = const_cast<png_bytep>(img.samples.data() + y * stride);

    if (setjmp(png_jmpbuf(g.png)))
        raise(errc::io_error, "PNG write failed: " + path.string());

    png_init_io(g.png, g.file);
    png_set_IHDR(g.png, g.info, img.width, img.height, 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(g.png, g.info);
    png_write_image(g.png, rows.data());
    png_write_end(g.png, g.info);
}

// --------------------------------------------------------------------------
// BMP (24-bit uncompressed)
// --------------------------------------------------------------------------

uint16_t le16(const uint8_t* p) {
    return static_cast<uint16_t>(p[0] | p[1] << 8);
}
uint32_t le32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0] | p[1] << 8 | p[2] << 16 |
                                 static_cast<uint32_t>(p[3]) << 24);
}
void put16(std::vector<uint8_t>& v, uint16_t x) {
    v.push_back(static_cast<uint8_t>(x));
    v.push_back(static_cast<uint8_t>(x >> 8));
}
void put32(std::vector<uint8_t>& v, uint32_t x) {
    for (int i = 0; i < 4; ++i) v.push_back(static_cast<uint8_t>(x >> (8 * i)));
}

RasterImage load_bmp(const std::vector<uint8_t>& b,
                     const std::filesystem::path& path) {
    if (b.size() < 54)
        raise(errc::io_error, "truncated BMP: " + path.string());
    uint32_t data_offset = le32(&b[10]);
    uint32_t header_size = le32(&b[14]);
    if (header_size < 40)
        raise(errc::unsupported_format,
              "BMP header variant not supported: " + path.string());
    int32_t w = static_cast<int32_t>(le32(&b[18]));
    int32_t h = static_cast<int32_t>(le32(&b[22]));
    uint16_t bpp = le16(&b[28]);
    uint32_t compression = le32(&b[30]);
    if (bpp != 24)
        raise(errc::bit_depth_unsupported,
              "only 24-bit BMP supported, got " + std::to_string(bpp) + "-bit");
    if (compression != 0)
        raise(errc::unsupported_format, "compressed BMP not supported");
    bool top_down = h < 0;
    uint32_t height = static_cast<uint32_t>(top_down ? -h : h);
    if (w <= 0 || height == 0)
        raise(errc::io_error, "corrupt BMP dimensions: " + path.string());
    uint32_t width = static_cast<uint32_t>(w);

    size_t stride = (static_cast<size_t>(width) * 3 + 3) / 4 * 4;
    if (static_cast<size_t>(data_offset) + stride * height > b.size())
        raise(errc::io_error, "truncated BMP pixel data: " + path.string());

    RasterImage img = RasterImage::create(width, height, 3);
    for (uint32_t y = 0; y < height; ++y) {
        const uint8_t* src = b.data() + data_offset +
                             stride * (top_down ? y : height - 1 - y);
        uint8_t* dst = img.samples.data() + static_cast<size_t>(y) * width * 3;
        for (uint32_t x = 0; x < width; ++x) {
            dst[x * 3 + 0] = src[x * 3 + 2];
            dst[x * 3 + 1] = src[x * 3 + 1];
            dst[x * 3 + 2] = src[x * 3 + 0];
        }
    }
    return img;
}

void save_bmp(const RasterImage& img, const std::filesystem::path& path) {
    if (img.channels != 3)
        raise(errc::channel_mismatch, "BMP output requires an RGB image");
    size_t stride = (static_cast<size_t>(img.width) * 3 + 3) / 4 * 4;
    size_t data_size = stride * img.height;

    std::vector<uint8_t> out;
    out.reserve(54 + data_size);
    out.push_back('B');
    out.push_back('M');
    put32(out, static_cast<uint32_t>(54 + data_size));
    put32(out, 0);
    put32(out, 54);
    put32(out, 40);
    put32(out, img.width);
    put32(out, img.height);
    put16(out, 1);
    put16(out, 24);
    put32(out, 0);
    put32(out, static_cast<uint32_t>(data_size));
    put32(out, 2835);
    put32(out, 2835);
    put32(out, 0);
    put32(out, 0);

    std::vector<uint8_t> row(stride, 0);
    for (uint32_t y = 0; y < img.height; ++y) {
        const uint8_t* src = img.samples.data() +
                             static_cast<size_t>(img.height - 1 - y) * img.width * 3;
        for (uint32_t x = 0; x < img.width; ++x) {
            row[x * 3 + 0] = src[x * 3 + 2];
            row[x * 3 + 1] = src[x * 3 + 1];
            row[x * 3 + 2] = src[x * 3 + 0];
        }
        out.insert(out.end(), row.begin(), row.end());
    }
    write_file(path, out.data(), out.size());
}

// --------------------------------------------------------------------------
// PPM / PGM (binary)
// --------------------------------------------------------------------------

RasterImage load_pnm(const std::vector<uint8_t>& b,
                     const std::filesystem::path& path) {
    uint32_t channels = b[1] == '6' ? 3 : 1;
    size_t i = 2;

    auto next_field = [&]() -> uint64_t {
        for (;;) {
            while (i < b.size() && std::isspace(b[i])) ++i;
            if (i < b.size() && b[i] == '#') {
                while (i < b.size() && b[i] != '\n') ++i;
                continue;
            }
            break;
        }
        if (i >= b.size() || !std::isdigit(b[i]))
            raise(errc::io_error, "corrupt PNM header: " + path.string());
        uint64_t v = 0;
        while (i < b.size() && std::isdigit(b[i])) {
            v = v * 10 + (b[i] - '0');
            if (v > 0xFFFFFFFFull)
                raise(errc::io_error, "corrupt PNM header: " + path.string());
            ++i;
        }
        return v;
    };

    uint64_t w = next_field();
    uint64_t h = next_field();
    uint64_t maxval = next_field();
    if (maxval > 255)
        raise(errc::bit_depth_unsupported,
              "PNM maxval " + std::to_string(maxval) + " exceeds 8 bits");
    if (maxval == 0 || w == 0 || h == 0)
        raise(errc::io_error, "corrupt PNM header: " + path.string());
    ++i;  // single whitespace byte separates header from raster

    size_t need = static_cast<size_t>(w) * h * channels;
    if (i + need > b.size())
        raise(errc::io_error, "truncated PNM pixel data: " + path.string());

    RasterImage img = RasterImage::create(static_cast<uint32_t>(w),
                                          static_cast<uint32_t>(h), channels);
    std::copy_n(b.begin() + static_cast<std::ptrdiff_t>(i), need,
                img.samples.begin());
    return img;
}

void save_pnm(const RasterImage& img, const std::filesystem::path& path,
              bool color) {
    if (color && img.channels != 3)
        raise(errc::channel_mismatch, "PPM output requires an RGB image");
    if (!color && img.channels != 1)
        raise(errc::channel_mismatch, "PGM output requires a grayscale image");
    std::string header = std::string(color ? "P6" : "P5") + "\n" +
                         std::to_string(img.width) + " " +
                         std::to_string(img.height) + "\n255\n";
    std::vector<uint8_t> out;
    out.reserve(header.size() + img.samples.size());
    out.insert(out.end(), header.begin(), header.end());
    out.insert(out.end(), img.samples.begin(), img.samples.end());
    write_file(path, out.data(), out.size());
}

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

} // namespace

RasterImage load_image(const std::filesystem::path& path) {
    std::vector<uint8_t> bytes = read_file(path);
    if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0)
        return load_png(bytes, path);
    if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF)
        raise(errc::unsupported_format,
              "JPEG is lossy and cannot carry intensity deltas: " + path.string());
    if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M')
        return load_bmp(bytes, path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6'))
        return load_pnm(bytes, path);
    raise(errc::unsupported_format, "unrecognized image format: " + path.string());
}

void save_image(const RasterImage& img, const std::filesystem::path& path) {
    if (img.channels != 1 && img.channels != 3)
        raise(errc::channel_mismatch, "images carry 1 or 3 channels, got " +
                                      std::to_string(img.channels));
    if (img.sample_count() != img.samples.size())
        raise(errc::io_error, "image buffer does not match its dimensions");

    std::string ext = lower_extension(path);
    if (ext == ".png") {
        save_png(img, path);
    } else if (ext == ".bmp") {
        save_bmp(img, path);
    } else if (ext == ".ppm") {
        save_pnm(img, path, true);
    } else if (ext == ".pgm") {
        save_pnm(img, path, false);
    } else if (ext == ".jpg" || ext == ".jpeg") {
        raise(errc::unsupported_format,
              "refusing lossy JPEG output: " + path.string());
    } else {
        raise(errc::unsupported_format, "unknown output extension: " + ext);
    }
}

void require_same_shape(const RasterImage& a, const RasterImage& b) {
    if (a.width != b.width || a.height != b.height)
        raise(errc::dimension_mismatch,
              "images are " + std::to_string(a.width) + "x" +
              std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
              std::to_string(b.height));
    if (a.channels != b.channels)
        raise(errc::channel_mismatch,
              "images carry " + std::to_string(a.channels) + " vs " +
              std::to_string(b.channels) + " channel(s)");
}

RasterImage to_grayscale(const RasterImage& img) {
    if (img.channels == 1) return img;
    RasterImage gray = RasterImage::create(img.width, img.height, 1);
    const uint8_t* src = img.samples.data();
    for (size_t p = 0; p < gray.samples.size(); ++p, src += 3) {
        uint32_t luma = (299u * src[0] + 587u * src[1] + 114u * src[2] + 500u) / 1000u;
        gray.samples[p] = static_cast<uint8_t>(luma);
    }
    return gray;
}

} // namespace qpc

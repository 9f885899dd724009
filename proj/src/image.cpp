#include "rfer/image.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>

#include <png.h>

#include "rfer/error.hpp"

namespace rfer {

namespace {

constexpr int kMinSide = 3;

std::uint8_t luma(int r, int g, int b) {
    double v = 0.299 * r + 0.587 * g + 0.114 * b;
    long rounded = std::lround(v);
    if (rounded < 0) rounded = 0;
    if (rounded > 255) rounded = 255;
    return static_cast<std::uint8_t>(rounded);
}

void check_dims(long w, long h, const std::string& path) {
    if (w < kMinSide || h < kMinSide)
        raise(Errc::corrupt_image,
              path + ": image is " + std::to_string(w) + "x" + std::to_string(h) +
                  ", need at least 3x3");
}

// --- PGM / PPM ---------------------------------------------------------

// Reads one whitespace/comment-separated token from a P5/P6 header.
bool next_pnm_token(std::ifstream& in, std::string& tok) {
    tok.clear();
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (!std::isspace(c)) break;
    }
    if (c == EOF) return false;
    do {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    } while (c != EOF && !std::isspace(c) && c != '#');
    if (c == '#') in.unget();
    return true;
}

long parse_pnm_int(std::ifstream& in, const std::string& path, const char* what) {
    std::string tok;
    if (!next_pnm_token(in, tok))
        raise(Errc::corrupt_image, path + ": truncated header, missing " + what);
    try {
        std::size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size() || v < 0)
            raise(Errc::corrupt_image, path + ": bad " + std::string(what) + " '" + tok + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        raise(Errc::corrupt_image, path + ": bad " + std::string(what) + " '" + tok + "'");
    }
}

Image load_pnm(std::ifstream& in, const std::string& path, bool color) {
    long w = parse_pnm_int(in, path, "width");
    long h = parse_pnm_int(in, path, "height");
    long maxval = parse_pnm_int(in, path, "maxval");
    if (maxval <= 0 || maxval > 255)
        raise(Errc::unsupported_format, path + ": only 8-bit PNM supported (maxval " +
                                            std::to_string(maxval) + ")");
    check_dims(w, h, path);
    // exactly one whitespace byte separates header and raster
    std::size_t npx = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    std::size_t nbytes = color ? npx * 3 : npx;
    std::vector<std::uint8_t> raw(nbytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(nbytes));
    if (static_cast<std::size_t>(in.gcount()) != nbytes)
        raise(Errc::corrupt_image, path + ": raster truncated");

    Image img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    if (!color) {
        img.data = std::move(raw);
    } else {
        img.data.resize(npx);
        for (std::size_t i = 0; i < npx; ++i)
            img.data[i] = luma(raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]);
    }
    return img;
}

// --- PNG ----------------------------------------------------------------

struct PngReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReadCtx() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

Image load_png(const std::string& path) {
    PngReadCtx ctx;
    ctx.fp = std::fopen(path.c_str(), "rb");
    if (!ctx.fp) raise(Errc::file_not_found, path);

    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) raise(Errc::io_error, path + ": png_create_read_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) raise(Errc::io_error, path + ": png_create_info_struct failed");

    if (setjmp(png_jmpbuf(ctx.png)))
        raise(Errc::corrupt_image, path + ": libpng rejected the stream");

    png_init_io(ctx.png, ctx.fp);
    png_read_info(ctx.png, ctx.info);

    png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    int color_type = png_get_color_type(ctx.png, ctx.info);
    check_dims(static_cast<long>(w), static_cast<long>(h), path);

    // normalize everything to 8-bit RGB or gray
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
    if (bit_depth == 16) png_set_strip_16(ctx.png);
    png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    int channels = png_get_channels(ctx.png, ctx.info);
    if (channels != 1 && channels != 3)
        raise(Errc::unsupported_format,
              path + ": unsupported channel count " + std::to_string(channels));

    std::size_t rowbytes = png_get_rowbytes(ctx.png, ctx.info);
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(h) * rowbytes);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = raw.data() + y * rowbytes;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    Image img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.data.resize(static_cast<std::size_t>(w) * h);
    for (png_uint_32 y = 0; y < h; ++y) {
        const std::uint8_t* src = raw.data() + y * rowbytes;
        std::uint8_t* dst = img.data.data() + static_cast<std::size_t>(y) * w;
        if (channels == 1) {
            std::memcpy(dst, src, w);
        } else {
            for (png_uint_32 x = 0; x < w; ++x)
                dst[x] = luma(src[3 * x], src[3 * x + 1], src[3 * x + 2]);
        }
    }
    return img;
}

struct PngWriteCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngWriteCtx() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

void write_png_impl(const std::string& path, int width, int height, int channels,
                    const std::uint8_t* pixels) {
    PngWriteCtx ctx;
    ctx.fp = std::fopen(path.c_str(), "wb");
    if (!ctx.fp) raise(Errc::io_error, path + ": cannot open for writing");
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) raise(Errc::io_error, path + ": png_create_write_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) raise(Errc::io_error, path + ": png_create_info_struct failed");
    if (setjmp(png_jmpbuf(ctx.png))) raise(Errc::io_error, path + ": png write failed");

    png_init_io(ctx.png, ctx.fp);
    png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(width),
                 static_cast<png_uint_32>(height), 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    std::size_t rowbytes = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y)
        png_write_row(ctx.png, const_cast<png_bytep>(pixels + y * rowbytes));
    png_write_end(ctx.png, nullptr);
}

} // namespace

Image make_image(int width, int height, std::uint8_t fill) {
    if (width < kMinSide || height < kMinSide)
        raise(Errc::invalid_argument, "image dimensions must be at least 3x3");
    Image img;
    img.width = width;
    img.height = height;
    img.data.assign(static_cast<std::size_t>(width) * height, fill);
    return img;
}

Image load_grayscale_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(path)) raise(Errc::file_not_found, path);
        raise(Errc::io_error, path + ": cannot open");
    }
    unsigned char sig[8] = {0};
    in.read(reinterpret_cast<char*>(sig), 8);
    std::size_t got = static_cast<std::size_t>(in.gcount());

    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (got == 8 && std::memcmp(sig, png_sig, 8) == 0) {
        in.close();
        return load_png(path);
    }
    if (got >= 2 && sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6')) {
        in.clear();
        in.seekg(2);
        return load_pnm(in, path, sig[1] == '6');
    }
    raise(Errc::unsupported_format, path + ": not a PGM (P5/P6) or PNG file");
}

void write_pgm(const std::string& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_error, path + ": cannot open for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    if (!out) raise(Errc::io_error, path + ": write failed");
}

void write_png_gray(const std::string& path, const Image& img) {
    write_png_impl(path, img.width, img.height, 1, img.data.data());
}

void write_png_rgb(const std::string& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb) {
    if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
        raise(Errc::invalid_argument, "rgb buffer size does not match dimensions");
    write_png_impl(path, width, height, 3, rgb.data());
}

} // namespace rfer

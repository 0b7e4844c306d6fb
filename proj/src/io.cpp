#include "curvisynth/io.hpp"

#include <png.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace curvisynth {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const
    {
        if (f) {
            std::fclose(f);
        }
    }
};

void put_u32(std::vector<unsigned char>& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<unsigned char>(v >> (8 * i)));
    }
}

std::uint32_t get_u32(const std::vector<unsigned char>& in, std::size_t off)
{
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(in[off + static_cast<std::size_t>(i)]) << (8 * i);
    }
    return v;
}

struct Header {
    std::uint32_t h, w, c;
};

Header parse_header(const std::vector<unsigned char>& bytes, const char* magic, std::size_t elem_size)
{
    if (bytes.size() < 16 || std::memcmp(bytes.data(), magic, 4) != 0) {
        throw IoError(std::string("not a ") + magic + " tensor file");
    }
    Header hd{get_u32(bytes, 4), get_u32(bytes, 8), get_u32(bytes, 12)};
    const std::size_t expected = 16 + static_cast<std::size_t>(hd.h) * hd.w * hd.c * elem_size;
    if (bytes.size() != expected) {
        throw IoError(std::string(magic) + " tensor size does not match its header");
    }
    return hd;
}

void png_write_to_vector(png_structp png, png_bytep data, png_size_t length)
{
    auto* out = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

} // namespace

std::vector<unsigned char> read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const fs::path& path, const std::vector<unsigned char>& bytes)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write '" + tmp.string() + "'");
        }
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw IoError("write failed for '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

GrayImage read_png(const fs::path& path)
{
    std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.string().c_str(), "rb"));
    if (!file) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_stdio(&img, file.get())) {
        throw IoError("cannot decode PNG '" + path.string() + "': " + img.message);
    }
    const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
    img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    GrayImage out(static_cast<int>(img.height), static_cast<int>(img.width), color ? 3 : 1);
    if (!png_image_finish_read(&img, nullptr, out.data.data(), 0, nullptr)) {
        png_image_free(&img);
        throw IoError("cannot decode PNG '" + path.string() + "': " + img.message);
    }
    return out;
}

std::vector<unsigned char> encode_png(const GrayImage& image)
{
    if (image.channels != 1 && image.channels != 3) {
        throw ValidationError("PNG output supports 1 or 3 channels");
    }
    std::vector<unsigned char> out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) {
        throw IoError("png_create_write_struct failed");
    }
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encoding failed");
    }
    png_set_write_fn(png, &out, png_write_to_vector, png_flush_noop);
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::size_t stride = static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.channels);
    for (int y = 0; y < image.height; ++y) {
        png_write_row(png, const_cast<png_bytep>(image.data.data() + static_cast<std::size_t>(y) * stride));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

void write_png(const fs::path& path, const GrayImage& image)
{
    write_file_atomic(path, encode_png(image));
}

void write_mask_png(const fs::path& path, const Mask& mask)
{
    GrayImage img(mask.height, mask.width);
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
        img.data[i] = mask.data[i] ? 255 : 0;
    }
    write_png(path, img);
}

Mask read_mask_png(const fs::path& path)
{
    GrayImage img = read_png(path);
    if (img.channels != 1) {
        img = to_single_channel(img);
    }
    for (auto& v : img.data) {
        v = v ? 1 : 0;
    }
    return img;
}

std::vector<unsigned char> encode_lio1(const Tensor<std::uint8_t>& t)
{
    std::vector<unsigned char> out{'L', 'I', 'O', '1'};
    put_u32(out, static_cast<std::uint32_t>(t.height));
    put_u32(out, static_cast<std::uint32_t>(t.width));
    put_u32(out, static_cast<std::uint32_t>(t.channels));
    out.insert(out.end(), t.data.begin(), t.data.end());
    return out;
}

Tensor<std::uint8_t> decode_lio1(const std::vector<unsigned char>& bytes)
{
    const Header hd = parse_header(bytes, "LIO1", 1);
    Tensor<std::uint8_t> t{static_cast<int>(hd.h), static_cast<int>(hd.w), static_cast<int>(hd.c), {}};
    t.data.assign(bytes.begin() + 16, bytes.end());
    return t;
}

std::vector<unsigned char> encode_lf64(const Tensor<double>& t)
{
    std::vector<unsigned char> out{'L', 'F', '6', '4'};
    put_u32(out, static_cast<std::uint32_t>(t.height));
    put_u32(out, static_cast<std::uint32_t>(t.width));
    put_u32(out, static_cast<std::uint32_t>(t.channels));
    out.reserve(out.size() + t.data.size() * 8);
    for (double v : t.data) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) {
            out.push_back(static_cast<unsigned char>(bits >> (8 * i)));
        }
    }
    return out;
}

Tensor<double> decode_lf64(const std::vector<unsigned char>& bytes)
{
    const Header hd = parse_header(bytes, "LF64", 8);
    Tensor<double> t{static_cast<int>(hd.h), static_cast<int>(hd.w), static_cast<int>(hd.c), {}};
    const std::size_t n = (bytes.size() - 16) / 8;
    t.data.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) {
            bits |= static_cast<std::uint64_t>(bytes[16 + 8 * k + static_cast<std::size_t>(i)]) << (8 * i);
        }
        t.data[k] = std::bit_cast<double>(bits);
    }
    return t;
}

Tensor<std::uint8_t> to_tensor(const LiotImage& liot)
{
    const auto& first = liot.channels[0];
    Tensor<std::uint8_t> t{first.height, first.width, 4, {}};
    t.data.reserve(first.pixel_count() * 4);
    for (const auto& ch : liot.channels) {
        t.data.insert(t.data.end(), ch.data.begin(), ch.data.end());
    }
    return t;
}

void write_liot(const fs::path& path, const LiotImage& liot)
{
    write_file_atomic(path, encode_lio1(to_tensor(liot)));
}

void write_liot_pngs(const fs::path& stem, const LiotImage& liot)
{
    for (std::size_t d = 0; d < liot.channels.size(); ++d) {
        fs::path p = stem;
        p += std::string("_") + kDirectionNames[d] + ".png";
        write_png(p, liot.channels[d]);
    }
}

Tensor<double> read_tensor(const fs::path& path)
{
    const auto bytes = read_file(path);
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), "LIO1", 4) == 0) {
        const auto raw = decode_lio1(bytes);
        Tensor<double> t{raw.height, raw.width, raw.channels, {}};
        t.data.reserve(raw.data.size());
        for (auto v : raw.data) {
            t.data.push_back(v / 255.0);
        }
        return t;
    }
    return decode_lf64(bytes);
}

void write_lf64(const fs::path& path, const Tensor<double>& t)
{
    write_file_atomic(path, encode_lf64(t));
}

} // namespace curvisynth

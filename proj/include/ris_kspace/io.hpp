#pragma once

// File formats shared by the library and the CLI.
//
// .cf64: one JSON header line {nx, ny, dx, dy, kind, units} terminated by '\n',
// followed by nx*ny little-endian float64 (re, im) pairs in row-major (y, x)
// order.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "grid.hpp"

namespace ris::io {

namespace fs = std::filesystem;

/// Writes through a sibling temporary file and renames it into place, so
/// readers never observe a partially written file.
inline void write_atomically(const fs::path& path, const std::function<void(std::ostream&)>& writer)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        writer(out);
        out.flush();
        if (!out) throw Error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

inline void write_text(const fs::path& path, const std::string& text)
{
    write_atomically(path, [&](std::ostream& os) { os << text; });
}

namespace detail {

inline void put_f64_le(std::ostream& os, double v)
{
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char buf[8];
    std::memcpy(buf, &bits, 8);
    os.write(buf, 8);
}

inline double get_f64_le(const char* p)
{
    std::uint64_t bits;
    std::memcpy(&bits, p, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace detail

struct Cf64Header {
    std::size_t nx = 0, ny = 0;
    double dx = 0.0, dy = 0.0;
    std::string kind;
    std::string units;
};

template <class Tag>
void write_cf64(std::ostream& os, const Sampled2D<Tag>& data, const std::string& units)
{
    const Grid2D& g = data.grid();
    nlohmann::ordered_json h;
    h["nx"] = g.nx();
    h["ny"] = g.ny();
    h["dx"] = g.dx();
    h["dy"] = g.dy();
    h["kind"] = Tag::kind;
    h["units"] = units;
    os << h.dump() << '\n';
    for (const auto& v : data.values()) {
        detail::put_f64_le(os, v.real());
        detail::put_f64_le(os, v.imag());
    }
}

template <class Tag>
void write_cf64(const fs::path& path, const Sampled2D<Tag>& data, const std::string& units)
{
    write_atomically(path, [&](std::ostream& os) { write_cf64(os, data, units); });
}

inline Cf64Header parse_cf64_header(const std::string& line)
{
    nlohmann::json h;
    try {
        h = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("cf64: malformed header: ") + e.what());
    }
    Cf64Header out;
    try {
        out.nx = h.at("nx").get<std::size_t>();
        out.ny = h.at("ny").get<std::size_t>();
        out.dx = h.at("dx").get<double>();
        out.dy = h.at("dy").get<double>();
        out.kind = h.at("kind").get<std::string>();
        out.units = h.value("units", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("cf64: incomplete header: ") + e.what());
    }
    if (out.kind != "field" && out.kind != "spectrum") throw ValidationError("cf64: unknown kind '" + out.kind + "'");
    return out;
}

/// Reads a .cf64 stream; the header kind must match Tag.
template <class Tag>
Sampled2D<Tag> read_cf64(std::istream& is, Cf64Header* header_out = nullptr)
{
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("cf64: missing header line");
    Cf64Header h = parse_cf64_header(line);
    if (h.kind != Tag::kind) throw ValidationError("cf64: expected kind '" + std::string(Tag::kind) + "', got '" + h.kind + "'");
    Grid2D g(h.nx, h.ny, h.dx, h.dy);
    std::vector<char> raw(g.size() * 16);
    is.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(is.gcount()) != raw.size()) throw ValidationError("cf64: truncated sample block");
    std::vector<cplx> v(g.size());
    for (std::size_t n = 0; n < v.size(); ++n)
        v[n] = {detail::get_f64_le(&raw[16 * n]), detail::get_f64_le(&raw[16 * n + 8])};
    if (header_out) *header_out = h;
    return Sampled2D<Tag>(g, std::move(v));
}

template <class Tag>
Sampled2D<Tag> read_cf64(const fs::path& path, Cf64Header* header_out = nullptr)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cf64: cannot open " + path.string());
    return read_cf64<Tag>(in, header_out);
}

/// CSV (x, y, re, im) of a real-space field; meant for small grids.
inline void write_field_csv(std::ostream& os, const ComplexField2D& f)
{
    const Grid2D& g = f.grid();
    os << "x,y,re,im\n" << std::setprecision(17);
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i)
            os << g.x(i) << ',' << g.y(j) << ',' << f(i, j).real() << ',' << f(i, j).imag() << '\n';
}

}  // namespace ris::io

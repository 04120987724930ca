#ifndef CGO_SERIALIZE_HPP
#define CGO_SERIALIZE_HPP

// Field snapshots.
//
// Binary layout (little-endian):
//   char[4]  "CGOF"
//   uint32   version (1)
//   uint32   n
//   float64  L
//   uint32   component count (8)
//   uint8[8] blade bitmask per component, in storage order
//   payload  component-major, row-major grid, (re, im) float64 pairs

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <string>

#include "errors.hpp"
#include "grid.hpp"

namespace cgo {

namespace detail {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is)
{
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error("truncated field snapshot");
    return v;
}

}  // namespace detail

inline constexpr std::uint32_t kSnapshotVersion = 1;

inline void write_binary(std::ostream& os, const FormField& f)
{
    os.write("CGOF", 4);
    detail::put<std::uint32_t>(os, kSnapshotVersion);
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().n()));
    detail::put<double>(os, f.grid().L());
    detail::put<std::uint32_t>(os, kBlades);
    for (int b = 0; b < kBlades; ++b) detail::put<std::uint8_t>(os, algebra::kBladeMask[b]);
    for (const auto& z : f.data()) {
        detail::put<double>(os, z.real());
        detail::put<double>(os, z.imag());
    }
}

inline FormField read_binary(std::istream& is)
{
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "CGOF", 4) != 0) throw Error("not a field snapshot");
    if (detail::get<std::uint32_t>(is) != kSnapshotVersion) throw Error("unsupported snapshot version");
    const auto n = detail::get<std::uint32_t>(is);
    const auto L = detail::get<double>(is);
    if (detail::get<std::uint32_t>(is) != kBlades) throw Error("unexpected component count");
    for (int b = 0; b < kBlades; ++b)
        if (detail::get<std::uint8_t>(is) != algebra::kBladeMask[b]) throw Error("unexpected component order");
    FormField f(Grid(static_cast<int>(n), L));
    for (auto& z : f.data()) {
        const double re = detail::get<double>(is);
        const double im = detail::get<double>(is);
        z = {re, im};
    }
    return f;
}

inline void save_binary(const std::string& path, const FormField& f)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path);
    write_binary(os, f);
}

inline FormField load_binary(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path);
    return read_binary(is);
}

inline constexpr int kJsonMaxN = 16;

inline nlohmann::json to_json(const FormField& f)
{
    if (f.grid().n() > kJsonMaxN) throw Error("JSON snapshots are limited to n <= 16");
    nlohmann::json j;
    j["n"] = f.grid().n();
    j["L"] = f.grid().L();
    auto& names = j["components"] = nlohmann::json::array();
    auto& values = j["values"] = nlohmann::json::array();
    for (int b = 0; b < kBlades; ++b) {
        names.push_back(algebra::blade_name(b));
        auto comp = nlohmann::json::array();
        for (const auto& z : f.comp(b)) comp.push_back({z.real(), z.imag()});
        values.push_back(std::move(comp));
    }
    return j;
}

inline FormField from_json(const nlohmann::json& j)
{
    const Grid g(j.at("n").get<int>(), j.at("L").get<double>());
    const auto& names = j.at("components");
    const auto& values = j.at("values");
    if (names.size() != kBlades || values.size() != kBlades) throw Error("JSON snapshot needs 8 components");
    FormField f(g);
    for (int b = 0; b < kBlades; ++b) {
        if (names[b].get<std::string>() != algebra::blade_name(b)) throw Error("unexpected component order");
        const auto& comp = values[b];
        if (comp.size() != g.size()) throw Error("component length mismatch");
        for (std::size_t i = 0; i < g.size(); ++i) f(b, i) = {comp[i][0].get<double>(), comp[i][1].get<double>()};
    }
    return f;
}

}  // namespace cgo

#endif  // CGO_SERIALIZE_HPP

#pragma once

// Flat binary snapshot container.
//
// Byte layout (all integers and floats little-endian):
//
//   offset  size  content
//   0       8     magic "RZSNAP01"
//   8       4     uint32 dim (1 or 2)
//   12      8     uint32 N_0, uint32 N_1 (N_1 = 1 when dim = 1)
//   20      16    float64 L_0, float64 L_1 (L_1 = 1 when dim = 1)
//   36      8     float64 time
//   44      4     uint32 field count F
//   48      ...   F blocks of N_0*N_1 float64 values, row-major (last axis fastest)
//
// Field order for a FieldState: a, then u_0, ..., u_{d-1}.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "riesz/field.hpp"

namespace riesz::io {

inline constexpr std::array<char, 8> kSnapshotMagic{'R', 'Z', 'S', 'N', 'A', 'P', '0', '1'};
inline constexpr std::size_t kSnapshotHeaderBytes = 48;

struct Snapshot {
    SpectralGrid grid;
    double time = 0.0;
    std::vector<Field> fields;
};

namespace detail {

template <class T>
void put_le(std::vector<unsigned char>& out, T value) {
    static_assert(sizeof(T) == 4 || sizeof(T) == 8);
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xffu));
}

template <class T>
T get_le(const unsigned char* p) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(p[i]) << (8 * i);
    return std::bit_cast<T>(bits);
}

}  // namespace detail

inline std::vector<unsigned char> encode_snapshot(const Snapshot& s) {
    const SpectralGrid& g = s.grid;
    for (const Field& f : s.fields) require(f.grid() == g, "snapshot: field grid differs from header grid");
    std::vector<unsigned char> out;
    out.reserve(kSnapshotHeaderBytes + s.fields.size() * g.size() * 8);
    for (char c : kSnapshotMagic) out.push_back(static_cast<unsigned char>(c));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.modes(0)));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim() == 2 ? g.modes(1) : 1));
    detail::put_le<double>(out, g.length(0));
    detail::put_le<double>(out, g.dim() == 2 ? g.length(1) : 1.0);
    detail::put_le<double>(out, s.time);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.fields.size()));
    for (const Field& f : s.fields)
        for (double v : f.values()) detail::put_le<double>(out, v);
    return out;
}

inline Snapshot decode_snapshot(const std::vector<unsigned char>& bytes) {
    require(bytes.size() >= kSnapshotHeaderBytes, "snapshot: truncated header");
    require(std::memcmp(bytes.data(), kSnapshotMagic.data(), kSnapshotMagic.size()) == 0, "snapshot: bad magic");
    const unsigned char* p = bytes.data();
    const auto dim = detail::get_le<std::uint32_t>(p + 8);
    const auto n0 = detail::get_le<std::uint32_t>(p + 12);
    const auto n1 = detail::get_le<std::uint32_t>(p + 16);
    const double l0 = detail::get_le<double>(p + 20);
    const double l1 = detail::get_le<double>(p + 28);
    Snapshot s;
    s.time = detail::get_le<double>(p + 36);
    const auto count = detail::get_le<std::uint32_t>(p + 44);
    if (dim == 1) {
        s.grid = make_grid_1d(l0, n0);
    } else {
        require(dim == 2, "snapshot: unsupported dimension");
        s.grid = make_grid_2d(l0, l1, n0, n1);
    }
    const std::size_t n = s.grid.size();
    require(bytes.size() == kSnapshotHeaderBytes + static_cast<std::size_t>(count) * n * 8,
            "snapshot: payload size does not match header");
    const unsigned char* q = p + kSnapshotHeaderBytes;
    for (std::uint32_t c = 0; c < count; ++c) {
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i, q += 8) values[i] = detail::get_le<double>(q);
        s.fields.emplace_back(s.grid, std::move(values));
    }
    return s;
}

inline Snapshot to_snapshot(const FieldState& state) {
    Snapshot s{state.grid(), state.t, {state.a}};
    for (const Field& c : state.u) s.fields.push_back(c);
    return s;
}

inline FieldState to_state(const Snapshot& s) {
    require(s.fields.size() == static_cast<std::size_t>(s.grid.dim()) + 1, "snapshot: expected a and d velocity fields");
    FieldState st{s.time, s.fields[0], {}};
    for (std::size_t i = 1; i < s.fields.size(); ++i) st.u.push_back(s.fields[i]);
    return st;
}

inline void write_snapshot(const std::string& path, const Snapshot& s) {
    const auto bytes = encode_snapshot(s);
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), "snapshot: cannot open " + path);
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(os), "snapshot: write failed for " + path);
}

inline Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), "snapshot: cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes);
}

}  // namespace riesz::io

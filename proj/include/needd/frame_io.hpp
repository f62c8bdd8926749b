#pragma once

#include "needd/needlet_frame.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace needd
{

/// Binary container: "NDLT", u32 version, parameters, then one block per level
/// (j, counts, nodes, weights, row-major ψ). All numbers little-endian; reals are f64.
inline constexpr std::uint32_t kFrameFormatVersion = 1;

void write_frame(const NeedletFrame& frame, std::ostream& out);
void save_frame(const NeedletFrame& frame, const std::string& path);

/// Throws std::runtime_error on bad magic, unsupported version or truncation.
NeedletFrame read_frame(std::istream& in);
NeedletFrame load_frame(const std::string& path);

} // namespace needd

#pragma once
// Text trace: a header line, then one tab-separated record per kept
// iteration. Vector fields are comma-separated; delta is a 0/1 string.
// Doubles use the shortest round-trip form, so reading a written trace
// returns the same values bit for bit.

#include "hbmut/engine.hpp"

#include <filesystem>
#include <iosfwd>

namespace hbmut {

void write_trace(std::ostream& out, const Trace& trace);
void write_trace(const Trace& trace, const std::filesystem::path& path);
Trace read_trace(const std::filesystem::path& path);

} // namespace hbmut

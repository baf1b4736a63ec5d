#pragma once

// Decoding map persistence.
//
// Text format, version 1. Floats are C99 hex literals so the round trip is
// exact; layer and filter indices are 1-based.
//
//   vlcmap 1
//   scene_hash <16 hex digits>
//   filter <q>
//   grid <nx> <ny> <spacing> <height>
//   world_offset <x> <y> <z>
//   tau <tau>
//   noise_var <sigma^2>
//   thresholds <tau_diff> <tau_loss>
//   transmitters <N_t>
//   layers <L>
//   cells <count>
//   cell <ix> <iy> <outage 0|1> <cluster> <C|D> <source> <swap> <flip_x> <flip_y>
//   gains <N_t values>
//   detectable <n> <layers...>
//   groups <p> [| <layers of Q_1>] ... [| <layers of Q_p>]
//   rates <L values, inf where unconstrained>
//   ... (one block of five lines per cell, row-major)
//   end

#include <iosfwd>
#include <string>

#include "vlc/decmap.hpp"

namespace vlc {

void write_map(std::ostream& out, const DecodingMap& map);
/// Throws ConfigError on malformed input.
DecodingMap read_map(std::istream& in);

void save_map(const std::string& path, const DecodingMap& map);
DecodingMap load_map(const std::string& path);

/// One row per cell: position, outage flag, cluster, provenance, group count,
/// min and sum of the local rates. Plot-ready.
void write_map_csv(std::ostream& out, const DecodingMap& map);

/// One row per (cell, detectable layer): decoding stage and local rate.
void write_rate_csv(std::ostream& out, const DecodingMap& map);

}  // namespace vlc

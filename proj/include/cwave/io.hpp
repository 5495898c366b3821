#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cwave/simulate.hpp"

namespace cwave {

std::string format_g17(double x);

std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Two-column profile CSV: "x,u".
std::string profile_csv(const std::vector<double>& xs, const std::vector<double>& us);

// Snapshot CSV rows "t,x,u" across a trace.
std::string snapshots_csv(const SimTrace& trace);

// Binary snapshot records: per snapshot, little-endian u64 N, f64 t, then N
// f64 field values.
std::string snapshots_binary(const SimTrace& trace);

std::string diagnostics_json(const SimTrace& trace);

// Run manifest written next to each output (one per output directory):
// subcommand, argv, tool version, timestamp, input hashes, output paths.
// Everything except the timestamp is reproducible byte-for-byte.
void write_manifest(const std::string& out_dir, const std::string& subcommand,
                    const std::vector<std::string>& argv,
                    const std::vector<std::pair<std::string, std::string>>& input_hashes,
                    const std::vector<std::string>& output_paths, bool failed = false);

}  // namespace cwave

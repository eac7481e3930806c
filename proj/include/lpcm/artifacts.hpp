#pragma once

// Run artifact files: draws and positions as CSV, everything else as JSON.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpcm/bic.hpp"
#include "lpcm/hyperparams.hpp"
#include "lpcm/postprocess.hpp"
#include "lpcm/sampler.hpp"

namespace lpcm {

inline constexpr int kSchemaVersion = 1;

inline constexpr const char* kDrawsFile = "draws.csv";
inline constexpr const char* kPositionsFile = "positions.csv";
inline constexpr const char* kAlignedPositionsFile = "positions_aligned.csv";
inline constexpr const char* kSummaryFile = "summary.json";
inline constexpr const char* kCountersFile = "counters.json";
inline constexpr const char* kMetadataFile = "metadata.json";
inline constexpr const char* kBicFile = "bic.json";

/// Header `iter,G,beta,loglik,logpost,k_1..k_n`; labels written 1-based.
void write_draws_csv(std::ostream& out, std::span<const DrawRecord> draws);

/// Reads the draws file; positions are left empty. Labels come back 0-based.
std::vector<DrawRecord> read_draws_csv(std::istream& in);

/// Header `iter,actor,x_1..x_d`; one row per (draw, actor), actor 1-based.
void write_positions_csv(std::ostream& out, std::span<const DrawRecord> draws);
void write_positions_csv(std::ostream& out, std::span<const DrawRecord> draws, std::span<const Positions> z);

/// Fills draws[t].z from a positions file written for the same draws (matched by iter, in order).
void read_positions_csv(std::istream& in, std::vector<DrawRecord>& draws);

nlohmann::json counters_to_json(const MoveCounters& c);
MoveCounters counters_from_json(const nlohmann::json& j);

nlohmann::json summary_to_json(const RunSummary& s);

nlohmann::json hyperparams_to_json(const Hyperparams& hp);

nlohmann::json bic_to_json(std::span<const BicEntry> reports, int selected, std::size_t reference_index,
                           long reference_iter);

/// CRC-32 of a file's bytes, as 8 lowercase hex digits.
std::string file_checksum(const std::filesystem::path& path);

/// Pretty JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// Throws std::runtime_error naming the file when it does not exist.
void require_file(const std::filesystem::path& path);

}  // namespace lpcm

// Run manifest: config hash, toolkit version, seed, and the list of
// emitted files with content hashes. Re-running with an identical
// config and seed reproduces identical content hashes.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vls::io {

inline constexpr const char* toolkit_version = "0.1.0";

// FNV-1a 64-bit content hash (stability, not cryptography)
std::uint64_t content_hash(const std::string& bytes);
std::uint64_t file_hash(const std::string& path);

struct RunManifest {
  std::uint64_t config_hash = 0;
  std::string version = toolkit_version;
  std::uint64_t seed = 0;
  std::string wall_clock_utc;  // ISO 8601
  struct Entry {
    std::string path;          // relative to the output directory
    std::uint64_t hash = 0;
  };
  std::vector<Entry> files;

  void add_file(const std::string& out_dir, const std::string& name);
  std::string to_json() const;
};

// write `name` under out_dir (creating it), record in the manifest
void emit_file(RunManifest& manifest, const std::string& out_dir,
               const std::string& name, const std::string& contents);

std::string now_utc_iso8601();

}  // namespace vls::io

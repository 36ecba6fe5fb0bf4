#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace carlab {

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

// Reproducibility record written next to every command's outputs. Artifacts
// carry content checksums; re-running with the same config must reproduce
// them byte for byte.
struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  struct Artifact {
    std::string path;
    std::string checksum;  // fnv1a64 of the file content
  };
  std::vector<Artifact> artifacts;
  double duration_sec = 0.0;

  void add_artifact(const std::string& path, const std::string& content);
  nlohmann::json to_json() const;
  // Atomic write (temp file + rename).
  void write(const std::string& path) const;
};

}  // namespace carlab

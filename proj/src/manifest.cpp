#include "carlab/manifest.hpp"

#include <cstdio>

#include "carlab/serialize.hpp"

namespace carlab {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

void RunManifest::add_artifact(const std::string& path,
                               const std::string& content) {
  artifacts.push_back({path, fnv1a64_hex(content)});
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  j["inputs"] = inputs;
  nlohmann::json arts = nlohmann::json::array();
  for (const auto& a : artifacts)
    arts.push_back({{"path", a.path}, {"checksum_fnv1a64", a.checksum}});
  j["artifacts"] = std::move(arts);
  j["duration_sec"] = duration_sec;
  return j;
}

void RunManifest::write(const std::string& path) const {
  write_file_atomic(path, to_json().dump(2) + "\n");
}

}  // namespace carlab

#pragma once

// Run manifests: config snapshot, input/output digests, timings.

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "netchron/error.hpp"
#include "netchron/io.hpp"
#include "netchron/ordering.hpp"

namespace netchron::tool {

inline constexpr const char* kVersion = "0.1.0";

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::IoError, "sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

inline std::string manifest_path_for(const std::string& output) { return output + ".manifest.json"; }

class RunManifest {
 public:
  RunManifest(std::string command, std::uint64_t seed, io::json config)
      : command_(std::move(command)), seed_(seed), config_(std::move(config)),
        start_(std::chrono::steady_clock::now()) {}

  /// Records an input file. If the file was produced by an earlier command,
  /// its manifest is linked and the digest checked against that manifest.
  void add_input(const std::string& role, const std::string& path) {
    const std::string digest = sha256_hex(io::read_file(path));
    io::json entry = {{"role", role}, {"path", path}, {"sha256", digest}};
    const std::string upstream = manifest_path_for(path);
    if (std::filesystem::exists(upstream)) {
      const auto up = io::json::parse(io::read_file(upstream));
      bool matched = false;
      for (const auto& out : up.value("outputs", io::json::array())) {
        if (out.value("sha256", "") == digest) matched = true;
      }
      entry["upstream"] = {{"manifest", upstream},
                           {"command", up.value("command", "")},
                           {"digest_matches", matched}};
    }
    inputs_.push_back(std::move(entry));
  }

  /// Writes `content` to `path` and records its digest.
  void write_output(const std::string& role, const std::string& path, const std::string& content) {
    io::write_file(path, content);
    outputs_.push_back({{"role", role}, {"path", path}, {"sha256", sha256_hex(content)}});
  }

  void write(const std::string& primary_output) const {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    io::json j;
    j["tool"] = "netchron";
    j["version"] = kVersion;
    j["compiler"] = __VERSION__;
    j["command"] = command_;
    j["seed"] = seed_;
    j["threads"] = worker_count();
    j["config"] = config_;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["timings"] = {{"wall_seconds", seconds}};
    io::write_file(manifest_path_for(primary_output), io::dump(j));
  }

 private:
  std::string command_;
  std::uint64_t seed_;
  io::json config_;
  io::json inputs_ = io::json::array();
  io::json outputs_ = io::json::array();
  std::chrono::steady_clock::time_point start_;
};

}  // namespace netchron::tool

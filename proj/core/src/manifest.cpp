#include "vls/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vls/errors.hpp"

namespace vls::io {

std::uint64_t content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t file_hash(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("manifest: cannot open '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return content_hash(buf.str());
}

void RunManifest::add_file(const std::string& out_dir, const std::string& name) {
  files.push_back({name, file_hash(out_dir + "/" + name)});
}

std::string RunManifest::to_json() const {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "{\n  \"config_hash\": \"%016llx\",\n  \"version\": \"%s\",\n"
                "  \"seed\": %llu,\n  \"wall_clock_utc\": \"%s\",\n  \"files\": [\n",
                static_cast<unsigned long long>(config_hash), version.c_str(),
                static_cast<unsigned long long>(seed), wall_clock_utc.c_str());
  os << buf;
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "    {\"path\": \"%s\", \"hash\": \"%016llx\"}%s\n",
                  files[i].path.c_str(),
                  static_cast<unsigned long long>(files[i].hash),
                  i + 1 < files.size() ? "," : "");
    os << buf;
  }
  os << "  ]\n}\n";
  return os.str();
}

void emit_file(RunManifest& manifest, const std::string& out_dir,
               const std::string& name, const std::string& contents) {
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/" + name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << contents;
  f.close();
  manifest.files.push_back({name, content_hash(contents)});
}

std::string now_utc_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace vls::io

#include "predprey/io/artifacts.hpp"

#include "predprey/errors.hpp"

#include <cstdlib>
#include <fstream>

#ifndef PREDPREY_BUILD_ID
#define PREDPREY_BUILD_ID "unknown"
#endif

namespace predprey::io {

std::string build_id() { return PREDPREY_BUILD_ID; }

std::filesystem::path default_output_root() {
  const char* env = std::getenv("PREDPREY_OUT");
  if (env && *env) return env;
  return "runs";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

void write_manifest(const std::filesystem::path& dir, const std::string& subcommand, std::uint64_t seed,
                    const std::vector<ManifestEntry>& outputs) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / "seed.txt", std::to_string(seed) + "\n");
  std::string text = "subcommand = " + subcommand + "\nseed = " + std::to_string(seed) +
                     "\nbuild = " + build_id() + "\n";
  for (const auto& o : outputs) text += "output = " + o.file + " " + o.schema + "\n";
  write_text(dir / "manifest.txt", text);
}

}  // namespace predprey::io

#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace testsupport {

inline std::string data_dir() {
  const char* dir = std::getenv("KGTYPE_DATA_DIR");
  if (!dir) throw std::runtime_error("KGTYPE_DATA_DIR is not set");
  return dir;
}

inline std::string data_path(const std::string& name) { return data_dir() + "/" + name; }

inline std::string cli_path() {
  const char* path = std::getenv("KGTYPE_CLI");
  if (!path) throw std::runtime_error("KGTYPE_CLI is not set");
  return path;
}

}  // namespace testsupport

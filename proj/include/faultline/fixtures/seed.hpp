#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "faultline/errors.hpp"
#include "faultline/value.hpp"

namespace faultline::fixtures {

/// Reads a JSON seed file. The accepted shape is store-specific; each store
/// documents the one it expects next to its seeding method.
inline Value read_seed_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open seed file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return Value::parse(buffer.str());
  } catch (const std::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

}  // namespace faultline::fixtures

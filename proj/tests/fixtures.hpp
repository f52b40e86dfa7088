#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "vortexcrypt/vortex.hpp"

inline vortexcrypt::VortexKey load_fixture_key(const std::string& name) {
  std::ifstream in(std::string(VORTEXCRYPT_FIXTURE_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return vortexcrypt::key_from_string(ss.str());
}

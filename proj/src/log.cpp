// Copyright (c) 2026, the kdnet authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kdn/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace kdn {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("KDN_LOG");
    if (!env) return LogLevel::Error;
    std::string s(env);
    if (s == "debug") return LogLevel::Debug;
    if (s == "info") return LogLevel::Info;
    return LogLevel::Error;
  }();
  return level;
}

namespace {
std::mutex log_mutex;

void emit(const char* tag, const std::string& msg) {
  std::lock_guard<std::mutex> lock(log_mutex);
  std::cerr << tag << msg << std::endl;
}
}  // namespace

void log_error(const std::string& msg) { emit("[kdn:error] ", msg); }

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) emit("[kdn:info] ", msg);
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::Debug) emit("[kdn:debug] ", msg);
}

}  // namespace kdn

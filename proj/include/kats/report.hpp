#pragma once
// Deterministic key=value reports: keys print in sorted order so that
// certificate output is stable under diff-based testing.

#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>

namespace kats {

class Report {
 public:
  void put(const std::string& key, const std::string& value) { kv_[key] = value; }
  void put(const std::string& key, const char* value) { kv_[key] = value; }
  void put(const std::string& key, bool value) { kv_[key] = value ? "true" : "false"; }

  template <class T>
    requires std::is_integral_v<T>
  void put(const std::string& key, T value) {
    kv_[key] = std::to_string(value);
  }

  // Anything exposing to_string() (field elements, characters, ...).
  template <class T>
    requires requires(const T& t) { { t.to_string() } -> std::convertible_to<std::string>; }
  void put(const std::string& key, const T& value) {
    kv_[key] = value.to_string();
  }

  bool empty() const { return kv_.empty(); }

  std::string str() const {
    std::ostringstream os;
    for (const auto& [k, v] : kv_) os << k << '=' << v << '\n';
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Report& r) {
    return os << r.str();
  }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace kats

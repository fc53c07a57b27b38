#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sic {

// Flat dotted-key configuration with a pinned schema. Unknown keys are usage
// errors, so a typo in a rate name can never pass silently. Values stay as the
// strings the user supplied; typed getters parse on access. The canonical
// serialization (sorted key=value lines) feeds the config hash recorded in
// every output file.
class RunConfig {
public:
  // Sets one key. Throws UsageError when the key is not in the schema.
  void set(const std::string& key, const std::string& value);

  // INI-style file: [section] headers turn "k = v" lines into "section.k".
  // Bare dotted keys outside any section are accepted too. '#' or ';' start
  // full-line comments. Throws UsageError on unreadable files, malformed
  // lines, or unknown keys.
  void load_file(const std::string& path);

  // Environment overrides: SIC_MODEL__LAMBDA=2 sets model.lambda=2 (prefix
  // stripped, lowercased, "__" becomes "."). Unknown keys throw.
  void load_env();

  bool has(const std::string& key) const;
  std::string get_str(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key, double dflt) const;
  int64_t get_int(const std::string& key, int64_t dflt) const;
  uint64_t get_u64(const std::string& key, uint64_t dflt) const;

  // Sorted "key=value\n" lines; identical configs hash identically regardless
  // of how the keys arrived (file, env, or set()).
  std::string canonical() const;
  uint64_t hash() const;          // FNV-1a 64 of canonical()
  std::string hash_hex() const;   // 16 hex digits

  const std::map<std::string, std::string>& entries() const { return kv_; }

  static bool is_known_key(const std::string& key);
  static const std::vector<std::string>& known_keys();

private:
  std::map<std::string, std::string> kv_;
};

} // namespace sic

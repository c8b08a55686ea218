#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sperner {

// Flat record of every CLI knob.  A config file (JSON with these keys) is
// merged underneath explicit flags; flags win.  parse -> serialize -> parse
// is the identity, which keeps sweep configs self-describing.
struct RunConfig {
  std::string subcommand;

  int n = 0;
  std::vector<int> n_values;  // sweep ranges
  int k = 0;
  int layer = -1;
  std::vector<double> p_values;
  int trials = 100;
  int runs = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t stream = 0;
  int threads = 1;

  std::string family_spec;  // "all", inline sets, or @file
  std::string dir = "auto";
  std::string kind;           // sweep/audit kind
  std::string special = "isolated";
  std::string mode = "random";
  std::string solver = "auto";
  bool exhaustive = false;
  bool weak_only = false;
  bool star = false;
  bool random_family = false;
  bool hex = false;
  int grow_size = 0;  // 0 = uniform in [max(2,ceil(log2 k)), 4k]

  double c = 0.0625;  // default scan constant eps^2/16 at eps = 1
  double cap_k = 0;   // verification K for weak containers
  double q = -1;      // -1 = pipeline default
  double q_prime = -1;
  int psi = -1;
  double slack = 3.0;
  int retry_cap = 1000;

  std::uint64_t max_elements = 50000;
  std::uint64_t max_pairs = 100000000;
  std::uint64_t max_ground = 1ull << 28;
  std::uint64_t enum_cap = 10000000;

  std::string out;
  std::string json_out;
  std::string trace_out;
  std::string format = "csv";

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Comma-separated doubles / ints, and "a..b" integer ranges.
std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace sperner

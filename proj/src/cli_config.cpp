#include "spernerlab/cli_config.hpp"

#include <charconv>

#include "spernerlab/errors.hpp"

namespace sperner {

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j{
      {"subcommand", subcommand},
      {"n", n},
      {"n_values", n_values},
      {"k", k},
      {"layer", layer},
      {"p_values", p_values},
      {"trials", trials},
      {"runs", runs},
      {"stream", stream},
      {"threads", threads},
      {"family", family_spec},
      {"dir", dir},
      {"kind", kind},
      {"special", special},
      {"mode", mode},
      {"solver", solver},
      {"exhaustive", exhaustive},
      {"weak_only", weak_only},
      {"star", star},
      {"random_family", random_family},
      {"hex", hex},
      {"grow_size", grow_size},
      {"c", c},
      {"cap_k", cap_k},
      {"q", q},
      {"q_prime", q_prime},
      {"psi", psi},
      {"slack", slack},
      {"retry_cap", retry_cap},
      {"max_elements", max_elements},
      {"max_pairs", max_pairs},
      {"max_ground", max_ground},
      {"enum_cap", enum_cap},
      {"out", out},
      {"json_out", json_out},
      {"trace_out", trace_out},
      {"format", format},
  };
  if (seed) j["seed"] = *seed;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  static const char* known[] = {
      "subcommand", "n", "n_values", "k", "layer", "p_values", "trials", "runs", "seed",
      "stream", "threads", "family", "dir", "kind", "special", "mode",
      "solver", "exhaustive", "weak_only", "star", "random_family", "hex",
      "grow_size", "c", "cap_k", "q", "q_prime", "psi", "slack", "retry_cap",
      "max_elements", "max_pairs", "max_ground", "enum_cap", "out",
      "json_out", "trace_out", "format"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* key : known) ok = ok || it.key() == key;
    if (!ok) throw ConfigError("unknown config key: " + it.key());
  }

  RunConfig cfg;
  read_field(j, "subcommand", cfg.subcommand);
  read_field(j, "n", cfg.n);
  read_field(j, "n_values", cfg.n_values);
  read_field(j, "k", cfg.k);
  read_field(j, "layer", cfg.layer);
  read_field(j, "p_values", cfg.p_values);
  read_field(j, "trials", cfg.trials);
  read_field(j, "runs", cfg.runs);
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  read_field(j, "stream", cfg.stream);
  read_field(j, "threads", cfg.threads);
  read_field(j, "family", cfg.family_spec);
  read_field(j, "dir", cfg.dir);
  read_field(j, "kind", cfg.kind);
  read_field(j, "special", cfg.special);
  read_field(j, "mode", cfg.mode);
  read_field(j, "solver", cfg.solver);
  read_field(j, "exhaustive", cfg.exhaustive);
  read_field(j, "weak_only", cfg.weak_only);
  read_field(j, "star", cfg.star);
  read_field(j, "random_family", cfg.random_family);
  read_field(j, "hex", cfg.hex);
  read_field(j, "grow_size", cfg.grow_size);
  read_field(j, "c", cfg.c);
  read_field(j, "cap_k", cfg.cap_k);
  read_field(j, "q", cfg.q);
  read_field(j, "q_prime", cfg.q_prime);
  read_field(j, "psi", cfg.psi);
  read_field(j, "slack", cfg.slack);
  read_field(j, "retry_cap", cfg.retry_cap);
  read_field(j, "max_elements", cfg.max_elements);
  read_field(j, "max_pairs", cfg.max_pairs);
  read_field(j, "max_ground", cfg.max_ground);
  read_field(j, "enum_cap", cfg.enum_cap);
  read_field(j, "out", cfg.out);
  read_field(j, "json_out", cfg.json_out);
  read_field(j, "trace_out", cfg.trace_out);
  read_field(j, "format", cfg.format);
  return cfg;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string token = text.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad number in list: '" + token + "'");
    }
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string token = text.substr(pos, comma - pos);
    std::size_t dots = token.find("..");
    auto to_int = [&](const std::string& s) {
      int v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("bad integer in list: '" + s + "'");
      return v;
    };
    if (dots == std::string::npos) {
      out.push_back(to_int(token));
    } else {
      int lo = to_int(token.substr(0, dots));
      int hi = to_int(token.substr(dots + 2));
      if (hi < lo) throw ConfigError("bad range: '" + token + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

}  // namespace sperner

// spernerlab: antichains, shadows, and graph containers on the Boolean
// lattice, with seeded Monte Carlo sweeps and numeric audits.
//
// Exit codes: 0 ok (verdict failures are data), 2 config error,
// 3 guard exceeded, 4 pipeline retry exhaustion.

#include <CLI11.hpp>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

#include "spernerlab/antichain.hpp"
#include "spernerlab/cli_config.hpp"
#include "spernerlab/containers.hpp"
#include "spernerlab/experiments.hpp"

using namespace sperner;

namespace {

std::string resolve_out(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("SPERNERLAB_OUT_DIR");
  if (!dir || !*dir) return path;
  return std::string(dir) + "/" + path;
}

std::ofstream open_out(const std::string& path) {
  std::string full = resolve_out(path);
  std::ofstream out(full);
  if (!out) throw ConfigError("cannot open output file: " + full);
  return out;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

std::uint64_t require_seed(RunConfig& cfg) {
  if (!cfg.seed) {
    std::random_device rd;
    cfg.seed = (std::uint64_t(rd()) << 32) ^ rd();
    std::cout << "master_seed " << *cfg.seed
              << " (generated; pass --seed to reproduce)\n";
  } else {
    std::cout << "master_seed " << *cfg.seed << "\n";
  }
  return *cfg.seed;
}

// "all", "@file" (or a readable path), or inline sets split on ';' and
// whitespace outside braces.
Family resolve_family(const RunConfig& cfg, int n) {
  const std::string& spec = cfg.family_spec;
  if (spec.empty())
    throw ConfigError("--family is required ('all', inline sets, or @file)");
  if (spec == "all") {
    if (cfg.layer >= 0) return full_layer(n, cfg.layer, cfg.max_ground);
    if (cfg.k > 0 && cfg.subcommand != "width" && cfg.subcommand != "sample")
      return full_layer(n, cfg.k, cfg.max_ground);
    return full_powerset(n, cfg.max_ground);
  }
  if (spec.front() == '@') return Family::from_file(spec.substr(1), n);
  {
    std::ifstream probe(spec);
    if (probe.good()) return Family::read(probe, n);
  }
  std::vector<Mask> masks;
  std::size_t i = 0;
  while (i < spec.size()) {
    while (i < spec.size() &&
           (spec[i] == ';' || std::isspace((unsigned char)spec[i])))
      ++i;
    if (i >= spec.size()) break;
    std::size_t start = i;
    if (spec[i] == '{') {
      while (i < spec.size() && spec[i] != '}') ++i;
      if (i == spec.size()) throw ConfigError("unterminated '{' in --family");
      ++i;
    } else {
      while (i < spec.size() && spec[i] != ';' &&
             !std::isspace((unsigned char)spec[i]))
        ++i;
    }
    masks.push_back(parse_mask(spec.substr(start, i - start), n));
  }
  if (masks.empty()) throw ConfigError("no sets in --family");
  return Family(n, std::move(masks));
}

ShadowDir parse_dir(const std::string& dir) {
  if (dir == "lower") return ShadowDir::Lower;
  if (dir == "upper") return ShadowDir::Upper;
  if (dir == "auto") return ShadowDir::Auto;
  throw ConfigError("--dir must be lower, upper, or auto");
}

PipelineParams pipeline_params(const RunConfig& cfg) {
  auto params = PipelineParams::defaults(cfg.k);
  if (cfg.q >= 0) params.q = cfg.q;
  if (cfg.q_prime >= 0) params.q_prime = cfg.q_prime;
  if (cfg.psi >= 0) params.psi = cfg.psi;
  params.slack = cfg.slack;
  params.retry_cap = cfg.retry_cap;
  params.validate();
  return params;
}

SolverGuards solver_guards(const RunConfig& cfg) {
  SolverGuards guards;
  guards.max_elements = cfg.max_elements;
  guards.max_pairs = cfg.max_pairs;
  return guards;
}

Family star_family(int k) {
  MiddleGraph mg(k);
  std::vector<Mask> masks;
  for (Mask m : mg.upper().masks())
    if (m & 1) masks.push_back(m);
  return Family(mg.ground(), std::move(masks));
}

void emit_family(const Family& f, const RunConfig& cfg) {
  if (!cfg.out.empty()) {
    auto out = open_out(cfg.out);
    f.write(out, cfg.hex);
  } else {
    f.write(std::cout, cfg.hex);
  }
}

int run_sample(RunConfig& cfg) {
  std::uint64_t seed = require_seed(cfg);
  RngStream rng = derive_stream(seed, cfg.stream);
  Family ground(1);
  if (cfg.k > 0) {
    ground = MiddleGraph(cfg.k).vertices();
  } else if (cfg.n > 0) {
    ground = cfg.layer >= 0 ? full_layer(cfg.n, cfg.layer, cfg.max_ground)
                            : full_powerset(cfg.n, cfg.max_ground);
  } else {
    throw ConfigError("sample needs --n (with optional --layer) or --k");
  }
  if (cfg.p_values.size() != 1)
    throw ConfigError("sample needs exactly one --p value");
  Family x = sample_family(ground, cfg.p_values[0], rng);
  emit_family(x, cfg);
  std::cout << "sampled " << x.size() << " of " << ground.size()
            << " sets at p=" << format_double(cfg.p_values[0]) << "\n";
  return 0;
}

int run_shadow(RunConfig& cfg, bool closure_mode) {
  if (cfg.n <= 0) throw ConfigError("--n is required");
  Family a = resolve_family(cfg, cfg.n);
  ShadowDir dir = parse_dir(cfg.dir);
  Family result = closure_mode ? closure(a, dir) : shadow(a, dir);
  emit_family(result, cfg);
  if (closure_mode)
    std::cout << "closure has " << result.size() << " sets ("
              << (result == a ? "already closed" : "grew") << ")\n";
  else
    std::cout << "shadow has " << result.size() << " sets\n";
  return 0;
}

int run_width(RunConfig& cfg) {
  if (cfg.n <= 0) throw ConfigError("--n is required");
  Family x = resolve_family(cfg, cfg.n);
  auto guards = solver_guards(cfg);

  AntichainResult result;
  auto layers = x.layers_present();
  bool bipartite_ok =
      layers.size() <= 2 && (layers.size() < 2 || layers[1] == layers[0] + 1);
  if (cfg.solver == "bipartite" || (cfg.solver == "auto" && bipartite_ok))
    result = max_antichain_bipartite(x, guards);
  else if (cfg.solver == "general" || cfg.solver == "auto")
    result = max_antichain(x, guards);
  else
    throw ConfigError("--solver must be auto, general, or bipartite");

  std::cout << "width " << result.width << " (|X|=" << x.size()
            << ", matching=" << result.stats.matching_size
            << ", phases=" << result.stats.phases << ")\n";

  if (!cfg.kind.empty()) {
    auto report = cfg.kind == "hit"
                      ? check_hit_conclusion(x, cfg.exhaustive, guards)
                      : check_main_conclusion(x, cfg.exhaustive, guards);
    std::cout << cfg.kind << " conclusion: " << to_string(report.verdict)
              << " (width=" << report.width
              << ", target=" << report.target_width << ", k=" << report.best_k
              << ")\n";
  }
  if (!cfg.json_out.empty()) write_json(cfg.json_out, result.to_json());
  return 0;
}

int run_container(RunConfig& cfg) {
  if (cfg.k < 2) throw ConfigError("--k >= 2 is required");
  auto params = pipeline_params(cfg);
  std::uint64_t seed = require_seed(cfg);

  if (cfg.runs > 1) {
    ContainerBatch batch =
        container_batch(cfg.k, cfg.runs, params, seed, cfg.threads);
    std::cout << "container batch: " << batch.runs << " runs, "
              << batch.exhausted << " retry-exhausted\n";
    double worst_k = 0;
    for (const auto& s : batch.summaries)
      if (!s.exhausted) worst_k = std::max(worst_k, s.measured_k);
    std::cout << "worst measured K " << format_double(worst_k) << "\n";
    if (!cfg.out.empty()) write_json(cfg.out, batch.to_json());
    return 0;
  }

  Family a(2 * cfg.k - 1);
  if (cfg.star) {
    a = star_family(cfg.k);
  } else if (cfg.random_family) {
    RngStream grow_rng = derive_stream(seed, cfg.stream + 1000003);
    std::size_t target =
        cfg.grow_size > 0
            ? std::size_t(cfg.grow_size)
            : std::size_t(std::max(
                  2, int(std::ceil(std::log2(double(cfg.k)))))) +
                  grow_rng.next_below(std::uint64_t(4 * cfg.k));
    a = grow_closed_two_linked(cfg.k, target, grow_rng);
  } else {
    a = resolve_family(cfg, 2 * cfg.k - 1);
  }

  RngStream rng = derive_stream(seed, cfg.stream);
  ContainerTrace trace = cfg.weak_only ? weak_container(a, params, rng)
                                       : run_container_pipeline(a, params, rng);
  std::cout << "pipeline ok: a=" << trace.a << " g=" << trace.g
            << " t=" << trace.t
            << " |S'\\A|=" << trace.s_weak.size() - trace.a
            << " |N(A)\\F'|=" << trace.g - trace.f_weak.size()
            << " retries=" << trace.retries_r << "/" << trace.retries_r_prime
            << "\n";
  if (trace.t > 0) {
    double k_measured = double(std::max(trace.s_weak.size() - trace.a,
                                        trace.g - trace.f_weak.size())) /
                        double(trace.t);
    std::cout << "measured K " << format_double(k_measured) << "\n";
  }
  if (trace.has_strong) {
    std::cout << "strong: |S|=" << trace.s_strong.size()
              << " |F|=" << trace.f_strong.size() << " gap="
              << (std::int64_t(trace.s_strong.size()) -
                  std::int64_t(trace.f_strong.size()))
              << " bound="
              << format_double(2.0 * double(trace.t) * params.psi /
                               (params.k - params.psi))
              << " ledger_bits=" << format_double(trace.ledger.total_bits())
              << "\n";
  }
  if (!cfg.trace_out.empty()) write_json(cfg.trace_out, trace.to_json());
  return 0;
}

int run_verify(RunConfig& cfg, const std::string& trace_in,
               const std::string& s_file, const std::string& f_file) {
  if (cfg.k < 2) throw ConfigError("--k >= 2 is required");
  int n = 2 * cfg.k - 1;
  Family a = resolve_family(cfg, n);
  ContainerKind kind =
      cfg.kind == "strong" ? ContainerKind::Strong : ContainerKind::Weak;

  Family s(n), f(n);
  if (!trace_in.empty()) {
    std::ifstream in(trace_in);
    if (!in) throw ConfigError("cannot open trace: " + trace_in);
    nlohmann::json j;
    in >> j;
    ContainerTrace trace = ContainerTrace::from_json(j);
    if (kind == ContainerKind::Strong && !trace.has_strong)
      throw ConfigError("trace has no strong stages; verify --kind weak");
    s = kind == ContainerKind::Strong ? trace.s_strong : trace.s_weak;
    f = kind == ContainerKind::Strong ? trace.f_strong : trace.f_weak;
  } else if (!s_file.empty() && !f_file.empty()) {
    s = Family::from_file(s_file, n);
    f = Family::from_file(f_file, n);
  } else {
    throw ConfigError("verify needs --trace, or --s-file and --f-file");
  }

  double cap = cfg.cap_k > 0 ? cfg.cap_k : 10.0;
  auto report =
      verify_container(a, s, f, kind, cap,
                       cfg.psi >= 0 ? std::optional<int>(cfg.psi) : std::nullopt);
  std::cout << report.to_json().dump(2) << "\n";
  std::cout << (report.all_pass() ? "verification passed\n"
                                  : "verification FAILED\n");
  return 0;  // report-only
}

int run_sweep(RunConfig& cfg) {
  if (cfg.kind.empty()) cfg.kind = "main";
  if (cfg.n_values.empty()) {
    if (cfg.n <= 0) throw ConfigError("sweep needs --n");
    cfg.n_values = {cfg.n};
  }
  if (cfg.p_values.empty()) throw ConfigError("sweep needs --p");
  std::uint64_t seed = require_seed(cfg);
  auto rows = sweep(cfg.kind, cfg.n_values, cfg.p_values, cfg.trials, seed,
                    cfg.threads, solver_guards(cfg));
  for (const auto& r : rows)
    std::cout << r.kind << " n=" << r.n << " p=" << format_double(r.p)
              << " holds=" << r.holds << "/" << r.trials
              << " errors=" << r.errors
              << " mean_width=" << format_double(r.mean_width())
              << " witness3=" << r.three_layer_sum
              << " defect_pairs=" << r.defect_pair_sum << " ("
              << format_double(r.wall_seconds) << "s)\n";
  if (!cfg.out.empty()) {
    auto out = open_out(cfg.out);
    write_sweep_csv(rows, out);
  } else if (cfg.format == "csv") {
    write_sweep_csv(rows, std::cout);
  }
  if (!cfg.json_out.empty()) write_json(cfg.json_out, sweep_json(rows));
  return 0;
}

int run_audit(RunConfig& cfg) {
  if (cfg.kind == "expectation") {
    if (cfg.n <= 0 || cfg.layer < 0 || cfg.p_values.size() != 1)
      throw ConfigError("expectation audit needs --n, --layer, one --p");
    SpecialKind kind = cfg.special == "nearly_isolated"
                           ? SpecialKind::NearlyIsolated
                           : SpecialKind::Isolated;
    std::uint64_t seed = require_seed(cfg);
    auto audit = expectation_audit(cfg.n, cfg.p_values[0], cfg.layer, kind,
                                   cfg.trials, seed, cfg.threads);
    std::cout << audit.row.id << " " << audit.row.point
              << ": exact=" << format_double(audit.exact)
              << " mc=" << format_double(audit.mc_mean) << " +- "
              << format_double(audit.mc_stderr)
              << (audit.row.pass ? " PASS" : " FAIL") << "\n";
    if (!cfg.out.empty()) open_out(cfg.out) << audit.csv();
    if (!cfg.json_out.empty()) write_json(cfg.json_out, audit.to_json());
    return 0;
  }
  if (cfg.kind.empty() || cfg.kind == "inequality") {
    auto rows = inequality_audit();
    int failures = 0;
    for (const auto& r : rows) failures += r.pass ? 0 : 1;
    std::cout << rows.size() << " rows, " << failures << " failures";
    std::cout << (failures == 0 ? " - all rows pass\n" : "\n");
    if (!cfg.out.empty()) {
      auto out = open_out(cfg.out);
      write_audit_csv(rows, out);
    }
    if (!cfg.json_out.empty()) write_json(cfg.json_out, audit_json(rows));
    return 0;
  }
  throw ConfigError("--kind must be inequality or expectation");
}

int run_scan(RunConfig& cfg) {
  if (cfg.k < 2) throw ConfigError("--k >= 2 is required");
  if (cfg.p_values.size() != 1) throw ConfigError("scan needs one --p value");
  ScanMode mode =
      cfg.mode == "enum" ? ScanMode::Enumeration : ScanMode::RandomGrowth;
  std::uint64_t seed = require_seed(cfg);
  auto report = theorem4_scan(cfg.k, cfg.p_values[0], cfg.c, cfg.trials, mode,
                              seed, cfg.enum_cap);
  std::cout << "scan k=" << report.k << " p=" << format_double(report.p)
            << " c=" << format_double(report.c)
            << (report.theorem_regime ? "" : " [outside p>1/2 regime]")
            << ": families=" << report.families
            << " evaluations=" << report.evaluations
            << " violations=" << report.violations
            << " rate=" << format_double(report.violation_rate)
            << " worst_margin=" << format_double(report.worst_margin) << "\n";
  if (!cfg.out.empty()) write_json(cfg.out, report.to_json());
  return 0;
}

struct CliStrings {
  std::string config_path, p_list, n_list, trace_in, s_file, f_file;
};

// CLI11 writes a bound variable only when its flag appears, so loading the
// config file into cfg first and parsing afterwards merges config under
// explicit flags.
void add_common(CLI::App* app, RunConfig& cfg, CliStrings& strings) {
  app->add_option("--config", strings.config_path, "JSON config file (flags win)");
  app->add_option("--n", strings.n_list,
                  "ground set size (comma list / a..b range for sweep)");
  app->add_option("--k", cfg.k,
                  "half-size parameter (containers/scan) or layer shorthand");
  app->add_option("--layer", cfg.layer, "layer index");
  app->add_option("--p", strings.p_list, "probability or comma list");
  app->add_option("--trials", cfg.trials, "Monte Carlo trials");
  app->add_option("--runs", cfg.runs, "pipeline runs (container batch)");
  app->add_option("--seed", cfg.seed,
                  "master seed (randomized runs refuse to start without one "
                  "explicit or generated-and-printed)");
  app->add_option("--stream", cfg.stream, "stream id offset");
  app->add_option("--threads", cfg.threads, "worker threads for sweeps/batches");
  app->add_option("--family", cfg.family_spec, "'all', inline sets, or @file");
  app->add_option("--dir", cfg.dir, "shadow direction: lower|upper|auto");
  app->add_option("--check,--kind", cfg.kind,
                  "main|hit (width), weak|strong (verify), "
                  "inequality|expectation (audit)");
  app->add_option("--special", cfg.special, "isolated|nearly_isolated");
  app->add_option("--mode", cfg.mode, "scan mode: enum|random");
  app->add_option("--solver", cfg.solver, "auto|general|bipartite");
  app->add_flag("--exhaustive", cfg.exhaustive,
                "certify every maximum antichain (n <= 8)");
  app->add_flag("--weak-only", cfg.weak_only, "stop after the weak container");
  app->add_flag("--star", cfg.star, "use the star family {v : 1 in v}");
  app->add_flag("--random", cfg.random_family,
                "grow a random closed 2-linked family");
  app->add_flag("--hex", cfg.hex, "emit families in hex form");
  app->add_option("--size", cfg.grow_size, "grown family target size (0 = random)");
  app->add_option("--c", cfg.c, "scan constant c");
  app->add_option("--K", cfg.cap_k, "weak container verification constant");
  app->add_option("--q", cfg.q, "pipeline q (default 6 log^5 k / k^3)");
  app->add_option("--q-prime", cfg.q_prime, "pipeline q' (default 5 log k / k)");
  app->add_option("--psi", cfg.psi, "pipeline psi (default ceil(log^2 k))");
  app->add_option("--slack", cfg.slack, "rejection-sampling slack multiplier");
  app->add_option("--retry-cap", cfg.retry_cap, "rejection-sampling retry cap");
  app->add_option("--max-elements", cfg.max_elements, "solver element guard");
  app->add_option("--max-pairs", cfg.max_pairs, "solver pair guard");
  app->add_option("--max-ground", cfg.max_ground, "sampling ground guard");
  app->add_option("--enum-cap", cfg.enum_cap, "closed 2-linked enumeration cap");
  app->add_option("--out", cfg.out, "output file (CSV or JSON per subcommand)");
  app->add_option("--json-out", cfg.json_out, "JSON mirror output");
  app->add_option("--trace-out", cfg.trace_out, "container trace JSON output");
  app->add_option("--trace", strings.trace_in, "container trace JSON input (verify)");
  app->add_option("--s-file", strings.s_file, "S side family file (verify)");
  app->add_option("--f-file", strings.f_file, "F side family file (verify)");
  app->add_option("--format", cfg.format, "csv|json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"antichain and container laboratory for the Boolean lattice"};
  app.require_subcommand(1);

  RunConfig cfg;
  CliStrings strings;

  const std::vector<std::string> names{"sample",    "width",  "shadow",
                                       "closure",   "container", "verify",
                                       "sweep",     "audit",  "scan"};
  for (const auto& name : names) add_common(app.add_subcommand(name), cfg, strings);

  // pre-scan for --config so file values sit underneath explicit flags
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") strings.config_path = argv[i + 1];
  try {
    if (!strings.config_path.empty()) {
      std::ifstream in(strings.config_path);
      if (!in) throw ConfigError("cannot open config: " + strings.config_path);
      nlohmann::json j;
      in >> j;
      cfg = RunConfig::from_json(j);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad config JSON: " << e.what() << "\n";
    return 2;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  try {
    if (!strings.p_list.empty()) cfg.p_values = parse_double_list(strings.p_list);
    if (!strings.n_list.empty()) {
      auto ns = parse_int_list(strings.n_list);
      if (ns.size() > 1 && cfg.subcommand != "sweep")
        throw ConfigError("--n takes a single value here");
      cfg.n = ns.front();
      cfg.n_values = ns;
    }

    if (cfg.subcommand == "sample") return run_sample(cfg);
    if (cfg.subcommand == "width") return run_width(cfg);
    if (cfg.subcommand == "shadow") return run_shadow(cfg, false);
    if (cfg.subcommand == "closure") return run_shadow(cfg, true);
    if (cfg.subcommand == "container") return run_container(cfg);
    if (cfg.subcommand == "verify")
      return run_verify(cfg, strings.trace_in, strings.s_file, strings.f_file);
    if (cfg.subcommand == "sweep") return run_sweep(cfg);
    if (cfg.subcommand == "audit") return run_audit(cfg);
    if (cfg.subcommand == "scan") return run_scan(cfg);
    throw ConfigError("unknown subcommand");
  } catch (const RetryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

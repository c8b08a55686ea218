// Python bindings for the core operations.  Families cross the boundary as
// (n, list-of-int-masks); structured reports cross as plain dicts/lists via
// their JSON form.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spernerlab/antichain.hpp"
#include "spernerlab/cli_config.hpp"
#include "spernerlab/containers.hpp"
#include "spernerlab/experiments.hpp"

namespace py = pybind11;
using namespace sperner;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it)
        out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default: return py::none();
  }
}

Family to_family(int n, const std::vector<Mask>& masks) {
  return Family(n, masks);
}

ShadowDir to_dir(const std::string& dir) {
  if (dir == "lower") return ShadowDir::Lower;
  if (dir == "upper") return ShadowDir::Upper;
  if (dir == "auto") return ShadowDir::Auto;
  throw ConfigError("dir must be 'lower', 'upper', or 'auto'");
}

PipelineParams params_from_kwargs(int k, double q, double q_prime, int psi,
                                  double slack, int retry_cap) {
  auto params = PipelineParams::defaults(k);
  if (q >= 0) params.q = q;
  if (q_prime >= 0) params.q_prime = q_prime;
  if (psi >= 0) params.psi = psi;
  params.slack = slack;
  params.retry_cap = retry_cap;
  params.validate();
  return params;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact and Monte Carlo tools for antichains, shadows, and graph "
            "containers on the Boolean lattice";

  py::register_exception<GuardError>(m, "GuardError", PyExc_RuntimeError);
  py::register_exception<RetryError>(m, "RetryError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  // subsets and families
  m.def("parse_subset",
        [](const std::string& text, int n) { return parse_mask(text, n); },
        py::arg("text"), py::arg("n"),
        "parse '{1,3,7}' or a lowercase hex mask into an integer mask");
  m.def("subset_text", [](Mask m) { return mask_text(m); }, py::arg("mask"));
  m.def("layer_of", [](Mask m) { return layer_of(m); }, py::arg("mask"));
  m.def("binom", &binom_u64, py::arg("n"), py::arg("k"));
  m.def("full_layer",
        [](int n, int k) { return full_layer(n, k).masks(); },
        py::arg("n"), py::arg("k"));
  m.def("full_powerset",
        [](int n) { return full_powerset(n).masks(); }, py::arg("n"));

  // lattice operations
  m.def("shadow",
        [](int n, const std::vector<Mask>& a, const std::string& dir) {
          return shadow(to_family(n, a), to_dir(dir)).masks();
        },
        py::arg("n"), py::arg("family"), py::arg("dir") = "auto");
  m.def("closure",
        [](int n, const std::vector<Mask>& a, const std::string& dir) {
          return closure(to_family(n, a), to_dir(dir)).masks();
        },
        py::arg("n"), py::arg("family"), py::arg("dir") = "auto");
  m.def("is_closed",
        [](int n, const std::vector<Mask>& a, const std::string& dir) {
          return is_closed(to_family(n, a), to_dir(dir));
        },
        py::arg("n"), py::arg("family"), py::arg("dir") = "auto");
  m.def("two_linked_components",
        [](int n, const std::vector<Mask>& a) {
          std::vector<std::vector<Mask>> out;
          for (auto& c : two_linked_components(to_family(n, a)))
            out.push_back(c.masks());
          return out;
        },
        py::arg("n"), py::arg("family"));
  m.def("degree",
        [](int n, Mask v, const std::vector<Mask>& y) {
          return degree(v, n, to_family(n, y));
        },
        py::arg("n"), py::arg("v"), py::arg("family"));

  // bounds
  m.def("gen_binomial", &gen_binomial, py::arg("z"), py::arg("k"));
  m.def("kk_shadow_bound",
        [](std::uint64_t a, int k, int n) {
          return json_to_py(kk_shadow_bound(a, k, n).to_json());
        },
        py::arg("a"), py::arg("k"), py::arg("n"));
  m.def("iso_bounds",
        [](std::uint64_t a, int k) {
          auto bounds = iso_bounds(a, k);
          py::dict out;
          out["log_bound"] = json_to_py(bounds.log_bound.to_json());
          out["small_a"] = bounds.small_a
                               ? json_to_py(bounds.small_a->to_json())
                               : py::object(py::none());
          return out;
        },
        py::arg("a"), py::arg("k"));
  m.def("cost_binomial_bits", &cost_binomial_bits, py::arg("n"), py::arg("m"));
  m.def("cost_binomial_at_most_bits",
        [](std::uint64_t n, std::uint64_t m) {
          return cost_binomial_at_most_bits(n, m);
        },
        py::arg("n"), py::arg("m"));
  m.def("cost_tree_bits", &cost_tree_bits, py::arg("max_degree"), py::arg("a"));

  // sampling
  m.def("sample_powerset",
        [](int n, double p, std::uint64_t seed, std::uint64_t stream) {
          RngStream rng(seed, stream);
          return sample_powerset(n, p, rng).masks();
        },
        py::arg("n"), py::arg("p"), py::arg("seed"), py::arg("stream") = 0);
  m.def("sample_layer",
        [](int n, int k, double p, std::uint64_t seed, std::uint64_t stream) {
          RngStream rng(seed, stream);
          return sample_layer(n, k, p, rng).masks();
        },
        py::arg("n"), py::arg("k"), py::arg("p"), py::arg("seed"),
        py::arg("stream") = 0);
  m.def("sample_middle_graph",
        [](int k, double p, std::uint64_t seed, std::uint64_t stream) {
          RngStream rng(seed, stream);
          return sample_family(MiddleGraph(k).vertices(), p, rng).masks();
        },
        py::arg("k"), py::arg("p"), py::arg("seed"), py::arg("stream") = 0);

  // antichains
  m.def("max_antichain",
        [](int n, const std::vector<Mask>& x) {
          return json_to_py(max_antichain(to_family(n, x)).to_json());
        },
        py::arg("n"), py::arg("family"));
  m.def("max_antichain_bipartite",
        [](int n, const std::vector<Mask>& x) {
          return json_to_py(max_antichain_bipartite(to_family(n, x)).to_json());
        },
        py::arg("n"), py::arg("family"));
  m.def("find_special",
        [](int n, const std::vector<Mask>& x, int layer) {
          auto special = find_special(to_family(n, x), layer);
          py::dict out;
          out["isolated"] = special.isolated.masks();
          out["nearly_isolated"] = special.nearly_isolated.masks();
          out["layer_members"] = special.layer_members.masks();
          out["shadow_counts"] = special.shadow_counts;
          return out;
        },
        py::arg("n"), py::arg("family"), py::arg("layer"));
  m.def("check_main_conclusion",
        [](int n, const std::vector<Mask>& x, bool exhaustive) {
          return json_to_py(
              check_main_conclusion(to_family(n, x), exhaustive).to_json());
        },
        py::arg("n"), py::arg("family"), py::arg("exhaustive") = false);
  m.def("check_hit_conclusion",
        [](int n, const std::vector<Mask>& x, bool exhaustive) {
          return json_to_py(
              check_hit_conclusion(to_family(n, x), exhaustive).to_json());
        },
        py::arg("n"), py::arg("family"), py::arg("exhaustive") = false);

  // containers
  m.def("pipeline_defaults",
        [](int k) { return json_to_py(PipelineParams::defaults(k).to_json()); },
        py::arg("k"));
  m.def("run_container",
        [](int k, const std::vector<Mask>& a, std::uint64_t seed,
           std::uint64_t stream, bool weak_only, double q, double q_prime,
           int psi, double slack, int retry_cap) {
          auto params = params_from_kwargs(k, q, q_prime, psi, slack, retry_cap);
          RngStream rng(seed, stream);
          Family family = to_family(2 * k - 1, a);
          ContainerTrace trace =
              weak_only ? weak_container(family, params, rng)
                        : run_container_pipeline(family, params, rng);
          return json_to_py(trace.to_json());
        },
        py::arg("k"), py::arg("family"), py::arg("seed"), py::arg("stream") = 0,
        py::arg("weak_only") = false, py::arg("q") = -1.0,
        py::arg("q_prime") = -1.0, py::arg("psi") = -1,
        py::arg("slack") = 3.0, py::arg("retry_cap") = 1000);
  m.def("verify_container",
        [](int n, const std::vector<Mask>& a, const std::vector<Mask>& s,
           const std::vector<Mask>& f, const std::string& kind, double K) {
          return json_to_py(
              verify_container(to_family(n, a), to_family(n, s),
                               to_family(n, f),
                               kind == "strong" ? ContainerKind::Strong
                                                : ContainerKind::Weak,
                               K)
                  .to_json());
        },
        py::arg("n"), py::arg("a"), py::arg("s"), py::arg("f"),
        py::arg("kind") = "weak", py::arg("K") = 10.0);
  m.def("grow_closed_two_linked",
        [](int k, std::size_t target, std::uint64_t seed, std::uint64_t stream) {
          RngStream rng(seed, stream);
          return grow_closed_two_linked(k, target, rng).masks();
        },
        py::arg("k"), py::arg("target"), py::arg("seed"), py::arg("stream") = 0);
  m.def("enumerate_closed_two_linked",
        [](int k, std::uint64_t cap) {
          std::vector<std::vector<Mask>> out;
          for (auto& f : enumerate_closed_two_linked(k, cap))
            out.push_back(f.masks());
          return out;
        },
        py::arg("k"), py::arg("cap") = 10000000);
  m.def("container_batch",
        [](int k, int runs, std::uint64_t seed, int threads) {
          return json_to_py(
              container_batch(k, runs, PipelineParams::defaults(k), seed, threads)
                  .to_json());
        },
        py::arg("k"), py::arg("runs"), py::arg("seed"), py::arg("threads") = 1);

  // experiments
  m.def("sweep",
        [](const std::string& kind, const std::vector<int>& n_values,
           const std::vector<double>& p_grid, int trials, std::uint64_t seed,
           int threads) {
          return json_to_py(
              sweep_json(sweep(kind, n_values, p_grid, trials, seed, threads)));
        },
        py::arg("kind"), py::arg("n_values"), py::arg("p_grid"),
        py::arg("trials"), py::arg("seed"), py::arg("threads") = 1);
  m.def("sweep_csv",
        [](const std::string& kind, const std::vector<int>& n_values,
           const std::vector<double>& p_grid, int trials, std::uint64_t seed,
           int threads) {
          return sweep_csv(sweep(kind, n_values, p_grid, trials, seed, threads));
        },
        py::arg("kind"), py::arg("n_values"), py::arg("p_grid"),
        py::arg("trials"), py::arg("seed"), py::arg("threads") = 1);
  m.def("expectation_audit",
        [](int n, double p, int layer, const std::string& kind, int trials,
           std::uint64_t seed, int threads) {
          return json_to_py(
              expectation_audit(n, p, layer,
                                kind == "nearly_isolated"
                                    ? SpecialKind::NearlyIsolated
                                    : SpecialKind::Isolated,
                                trials, seed, threads)
                  .to_json());
        },
        py::arg("n"), py::arg("p"), py::arg("layer"),
        py::arg("kind") = "isolated", py::arg("trials") = 10000,
        py::arg("seed") = 0, py::arg("threads") = 1);
  m.def("theorem4_scan",
        [](int k, double p, double c, int trials, const std::string& mode,
           std::uint64_t seed) {
          return json_to_py(theorem4_scan(k, p, c, trials,
                                          mode == "enum"
                                              ? ScanMode::Enumeration
                                              : ScanMode::RandomGrowth,
                                          seed)
                                .to_json());
        },
        py::arg("k"), py::arg("p"), py::arg("c"), py::arg("trials"),
        py::arg("mode") = "random", py::arg("seed") = 0);
  m.def("inequality_audit",
        []() { return json_to_py(audit_json(inequality_audit())); });
  m.def("defect_pair_count",
        [](int n, const std::vector<Mask>& x, int k) {
          return defect_pair_count(to_family(n, x), k);
        },
        py::arg("n"), py::arg("family"), py::arg("k"));

#ifdef VERSION_INFO
#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "0.1.0";
#endif
}

#include "tomolab/runner.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tomolab/diagnostics.hpp"
#include "tomolab/error.hpp"
#include "tomolab/regression.hpp"
#include "tomolab/transfer.hpp"

namespace tomolab {

namespace pt = boost::property_tree;
using nlohmann::json;

std::string_view to_string(Task t) {
  switch (t) {
    case Task::simulate: return "simulate";
    case Task::translate: return "translate";
    case Task::distances: return "distances";
    case Task::zeta: return "zeta";
    case Task::corollaries: return "corollaries";
    case Task::estimator_transfer: return "estimator_transfer";
    case Task::scaling: return "scaling";
  }
  return "simulate";
}

Task parse_task(std::string_view text) {
  for (Task t : {Task::simulate, Task::translate, Task::distances, Task::zeta, Task::corollaries,
                 Task::estimator_transfer, Task::scaling})
    if (to_string(t) == text) return t;
  throw Error(ErrorCode::ConfigError, "unknown task '" + std::string(text) + "'");
}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"experiment", {"task", "seed", "output"}},
      {"basis", {"kind", "d", "gvectors"}},
      {"state", {"witness", "class", "s", "r", "gamma", "samples", "matrix", "beta", "j_star"}},
      {"design", {"mode", "pi", "xi"}},
      {"sizes", {"n", "m", "detail"}},
      {"tolerances", {"active", "c0", "c1"}},
      {"distances", {"theta", "m_grid", "order", "reference_order", "window", "mc_samples"}},
      {"zeta", {"weights", "C"}},
      {"corollaries", {"samples"}},
      {"transfer", {"replications", "m_grid"}},
  };
  return s;
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::ConfigError, key + ": " + why);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_words(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(x)) bad(key, "expected a number, got '" + v + "'");
  return x;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  std::int64_t x = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) bad(key, "expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    bad(key, "expected an unsigned integer, got '" + v + "'");
  return x;
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const auto x = to_int(key, v);
  if (x < 0) bad(key, "must be nonnegative");
  return static_cast<std::size_t>(x);
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& w : split_words(v)) out.push_back(to_double(key, w));
  return out;
}

std::vector<std::int64_t> to_ints(const std::string& key, const std::string& v) {
  std::vector<std::int64_t> out;
  for (const auto& w : split_words(v)) out.push_back(to_int(key, w));
  if (out.empty()) bad(key, "empty list");
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
  std::filesystem::path p(trim(file));
  return p.is_absolute() ? p : base / p;
}

void check_m(const std::string& key, std::int64_t m) {
  if (m < 1 || m > kMaxConfigM) bad(key, "m must lie in [1, " + std::to_string(kMaxConfigM) + "]");
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  ExperimentConfig c;
  std::map<std::string, std::string> kv;
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end() || body.data().size() > 0) bad(section, "unknown section or key outside a section");
    for (const auto& [key, node] : body) {
      if (!it->second.count(key)) bad(section + "." + key, "unknown key");
      if (!node.empty()) bad(section + "." + key, "nested keys are not allowed");
      kv[section + "." + key] = node.data();
      c.echo.emplace_back(section + "." + key, node.data());
    }
  }
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return trim(it->second);
  };

  const auto task = get("experiment.task");
  if (!task) bad("experiment.task", "required");
  c.task = parse_task(*task);
  if (auto v = get("experiment.seed")) c.seed = to_uint("experiment.seed", *v);
  if (auto v = get("experiment.output")) c.output_dir = *v;

  try {
    if (auto v = get("basis.kind")) c.basis_kind = parse_basis_kind(*v);
  } catch (const Error& e) {
    bad("basis.kind", e.what());
  }
  if (auto v = get("basis.d")) c.d = static_cast<int>(to_int("basis.d", *v));
  if (c.d < 2 || c.d > kMaxConfigDim) bad("basis.d", "d must lie in [2, " + std::to_string(kMaxConfigDim) + "]");
  if (auto v = get("basis.gvectors")) {
    const auto path = resolve(base_dir, *v);
    if (!std::filesystem::exists(path)) bad("basis.gvectors", "file not found: " + path.string());
    c.gvectors = read_gvectors_file(path.string());
  }

  if (auto v = get("state.witness")) c.witnesses = split_words(*v);
  if (auto v = get("state.class")) {
    StateClassSpec spec;
    try {
      spec.state_class = parse_state_class(*v);
    } catch (const Error& e) {
      bad("state.class", e.what());
    }
    spec.d = c.d;
    if (auto s = get("state.s")) spec.s = static_cast<int>(to_int("state.s", *s));
    if (auto s = get("state.r")) spec.r = static_cast<int>(to_int("state.r", *s));
    if (auto s = get("state.gamma")) spec.gamma = static_cast<int>(to_int("state.gamma", *s));
    spec.gvectors = c.gvectors;
    try {
      spec.validate();
    } catch (const Error& e) {
      bad("state.class", e.what());
    }
    c.state_class = spec;
  }
  if (auto v = get("state.samples")) c.class_samples = to_count("state.samples", *v);
  if (auto v = get("state.matrix")) {
    const auto path = resolve(base_dir, *v);
    if (!std::filesystem::exists(path)) bad("state.matrix", "file not found: " + path.string());
    c.state_matrix = read_matrix_file(path.string());
  }
  if (auto v = get("state.beta")) c.beta = to_double("state.beta", *v);
  if (auto v = get("state.j_star")) c.j_star = to_count("state.j_star", *v);

  if (auto v = get("design.mode")) {
    if (*v == "fixed")
      c.design_mode = DesignMode::fixed;
    else if (*v == "random")
      c.design_mode = DesignMode::random;
    else
      bad("design.mode", "expected fixed or random");
  }
  if (auto v = get("design.pi"); v && *v != "uniform") c.pi = to_doubles("design.pi", *v);
  if (auto v = get("design.xi"); v && *v != "uniform") c.xi = to_doubles("design.xi", *v);

  if (auto v = get("sizes.n")) {
    c.n = to_count("sizes.n", *v);
    if (*c.n > kMaxConfigN) bad("sizes.n", "n must not exceed " + std::to_string(kMaxConfigN));
  }
  if (auto v = get("sizes.m")) c.m = to_int("sizes.m", *v);
  check_m("sizes.m", c.m);
  if (auto v = get("sizes.detail")) {
    if (*v == "counts")
      c.detail = Detail::counts;
    else if (*v == "summary")
      c.detail = Detail::summary;
    else if (*v == "individual")
      c.detail = Detail::individual;
    else
      bad("sizes.detail", "expected counts, summary or individual");
  }

  if (auto v = get("tolerances.active")) c.active_tol = to_double("tolerances.active", *v);
  if (!(c.active_tol > 0.0 && c.active_tol < 0.1)) bad("tolerances.active", "must lie in (0, 0.1)");
  if (auto v = get("tolerances.c0")) c.c0 = to_double("tolerances.c0", *v);
  if (auto v = get("tolerances.c1")) c.c1 = to_double("tolerances.c1", *v);

  if (auto v = get("distances.theta")) {
    c.thetas.clear();
    std::string rest = *v;
    std::size_t pos;
    do {
      pos = rest.find('|');
      auto th = to_doubles("distances.theta", rest.substr(0, pos));
      if (th.size() < 2) bad("distances.theta", "each theta needs at least two cells");
      c.thetas.push_back(std::move(th));
      if (pos != std::string::npos) rest = rest.substr(pos + 1);
    } while (pos != std::string::npos);
  }
  if (auto v = get("distances.m_grid")) c.m_grid = to_ints("distances.m_grid", *v);
  for (auto m : c.m_grid) check_m("distances.m_grid", m);
  if (auto v = get("distances.order")) c.quadrature.order = static_cast<int>(to_int("distances.order", *v));
  if (auto v = get("distances.reference_order"))
    c.quadrature.reference_order = static_cast<int>(to_int("distances.reference_order", *v));
  if (auto v = get("distances.window")) c.quadrature.window_sigmas = to_double("distances.window", *v);
  if (auto v = get("distances.mc_samples")) c.mc_samples = to_count("distances.mc_samples", *v);

  if (auto v = get("zeta.weights")) {
    if (*v != "uniform" && *v != "regression" && *v != "tomography")
      bad("zeta.weights", "expected uniform, regression or tomography");
    c.zeta_weights = *v;
  }
  if (auto v = get("zeta.C")) c.bound_C = to_double("zeta.C", *v);

  if (auto v = get("corollaries.samples")) c.corollary_samples = to_count("corollaries.samples", *v);

  if (auto v = get("transfer.replications")) c.replications = to_count("transfer.replications", *v);
  if (auto v = get("transfer.m_grid")) c.transfer_m_grid = to_ints("transfer.m_grid", *v);
  for (auto m : c.transfer_m_grid) check_m("transfer.m_grid", m);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  return parse_config(in, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

void apply_seed_override(ExperimentConfig& config, const char* env_value) {
  if (env_value == nullptr || *env_value == '\0') return;
  config.seed = to_uint("TOMOLAB_SEED", env_value);
  for (auto& [k, v] : config.echo)
    if (k == "experiment.seed") v = env_value;
}

// ---------------------------------------------------------------------------

namespace {

struct Output {
  std::filesystem::path dir;
  RunResult result;

  std::ofstream open(const std::string& name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + (dir / name).string());
    result.artifacts.push_back(name);
    return f;
  }
  void write_json(const std::string& name, const json& j) { open(name) << j.dump(2) << '\n'; }
  void fail(const std::string& anchor) {
    result.pass = false;
    result.failures.push_back(anchor);
  }
};

ObservableBasis make_basis(const ExperimentConfig& c) {
  if (c.basis_kind == BasisKind::custom) throw Error(ErrorCode::ConfigError, "basis.kind: custom is not configurable");
  if (c.basis_kind == BasisKind::gvector)
    return build_basis(c.basis_kind, c.d, c.gvectors ? *c.gvectors : haar_vectors(c.d));
  return build_basis(c.basis_kind, c.d);
}

DensityMatrix witness_state(const ExperimentConfig& c, const std::string& name) {
  if (name == "cor2_line" && (c.beta || c.j_star)) return pauli_line_state(c.d, c.j_star.value_or(1), c.beta.value_or(0.5));
  return named_witness(name, c.d);
}

struct NamedStates {
  std::vector<DensityMatrix> states;
  std::vector<std::string> names;
};

NamedStates make_states(const ExperimentConfig& c) {
  NamedStates out;
  for (const auto& w : c.witnesses) {
    out.states.push_back(witness_state(c, w));
    out.names.push_back(w);
  }
  if (c.state_matrix) {
    if (c.state_matrix->rows() != c.d) throw Error(ErrorCode::DimensionMismatch, "state matrix dimension differs from basis.d");
    out.states.push_back(validate_density(*c.state_matrix));
    out.names.push_back("matrix");
  }
  if (c.state_class) {
    for (std::size_t i = 0; i < c.class_samples; ++i) {
      out.states.push_back(sample_class(*c.state_class, substream_seed(c.seed, i, stream_tag::sampler)));
      out.names.push_back(std::string(to_string(c.state_class->state_class)) + "_" + std::to_string(i));
    }
  }
  if (out.states.empty()) throw Error(ErrorCode::ConfigError, "state: no witness, class or matrix given");
  return out;
}

SamplingDesign make_design(const ExperimentConfig& c, std::size_t p) {
  if (c.design_mode == DesignMode::fixed) return SamplingDesign::fixed();
  const std::vector<double> uni(p, 1.0 / static_cast<double>(p));
  auto d = SamplingDesign::random(c.pi.empty() ? uni : c.pi, c.xi.empty() ? uni : c.xi);
  d.validate(p);
  return d;
}

std::size_t sample_size(const ExperimentConfig& c, std::size_t p) { return c.n.value_or(p); }

void run_simulate(const ExperimentConfig& c, Output& out) {
  const auto basis = make_basis(c);
  const auto states = make_states(c);
  const auto& rho = states.states.front();
  const std::size_t p = basis.size();
  const auto design = make_design(c, p);
  const std::size_t n = sample_size(c, p);

  const auto data = run_tomography(rho, basis, design, n, c.m, c.seed, c.detail);
  {
    auto f = out.open("tomography.csv");
    write_dataset_csv(f, data);
  }
  if (c.detail == Detail::individual) {
    auto f = out.open("individuals.csv");
    write_individuals_csv(f, data);
  }
  const auto fine = simulate_fine(rho, basis, design, n, c.m, c.seed);
  {
    auto f = out.open("regression_fine.csv");
    write_fine_csv(f, fine);
  }
  const auto coarse = simulate_coarse(rho, basis, design, n, c.m, c.seed);
  {
    auto f = out.open("regression_coarse.csv");
    write_coarse_csv(f, coarse);
  }
  {
    auto f = out.open("state.txt");
    write_matrix(f, rho.matrix());
  }
}

void run_translate(const ExperimentConfig& c, Output& out) {
  const auto basis = make_basis(c);
  const auto states = make_states(c);
  const auto& rho = states.states.front();
  const std::size_t p = basis.size();
  const auto design = make_design(c, p);
  const std::size_t n = sample_size(c, p);

  std::vector<std::vector<double>> eigen(p);
  for (std::size_t j = 0; j < p; ++j)
    if (basis.measurable(j)) eigen[j] = basis.decomposition(j).eigenvalues;

  const auto data = run_tomography(rho, basis, design, n, c.m, c.seed, Detail::counts);
  const auto translated = translate_qst_to_regression(data, c.seed);
  {
    auto f = out.open("qst_to_regression.csv");
    write_fine_csv(f, translated.samples);
  }
  const auto back = translate_regression_to_qst(translated, eigen);
  std::size_t mismatches = back.dropped;
  for (std::size_t k = 0; k < back.data.records.size() && k < data.records.size(); ++k)
    if (back.data.records[k].counts != data.records[k].counts) ++mismatches;
  {
    auto f = out.open("roundtrip.csv");
    write_dataset_csv(f, back.data);
  }

  const auto fine = simulate_fine_dataset(rho, basis, design, n, c.m, c.seed);
  const auto to_qst = translate_regression_to_qst(fine, eigen);
  {
    auto f = out.open("regression_to_qst.csv");
    write_dataset_csv(f, to_qst.data);
  }
  json j;
  j["records"] = n;
  j["roundtrip_mismatches"] = mismatches;
  j["roundtrip_pass"] = mismatches == 0;
  j["regression_to_qst_dropped"] = to_qst.dropped;
  j["regression_to_qst_dropped_indices"] = to_qst.dropped_indices;
  j["regression_to_qst_drop_rate"] = n ? static_cast<double>(to_qst.dropped) / static_cast<double>(n) : 0.0;
  j["anchor"] = "kernel_roundtrip";
  out.write_json("translate.json", j);
  if (mismatches != 0) out.fail("kernel_roundtrip");
}

void run_distances(const ExperimentConfig& c, Output& out) {
  auto csv = out.open("distances.csv");
  csv << "theta,m,H,H_error,TV,TV_error,pass\n";
  json fixtures = json::array();
  bool all = true;
  for (std::size_t t = 0; t < c.thetas.size(); ++t) {
    const auto& th = c.thetas[t];
    for (std::size_t i = 0; i < c.m_grid.size(); ++i) {
      const auto m = c.m_grid[i];
      const auto h = hellinger_perturbed_vs_gaussian(m, th, c.quadrature);
      const auto tv = tv_perturbed_vs_gaussian(m, th, c.mc_samples, substream_seed(c.seed, t * 1000 + i));
      const bool ok = tv.value <= h.value + h.error_bar + tv.error_bar;
      all = all && ok;
      std::string ths;
      for (std::size_t a = 0; a < th.size(); ++a) ths += (a ? "|" : "") + format_double(th[a]);
      csv << ths << ',' << m << ',' << format_double(h.value) << ',' << format_double(h.error_bar) << ','
          << format_double(tv.value) << ',' << format_double(tv.error_bar) << ',' << (ok ? 1 : 0) << '\n';
      fixtures.push_back(json::parse(distance_fixture_json(h)));
      fixtures.push_back(json::parse(distance_fixture_json(tv)));
    }
  }
  json j;
  j["fixtures"] = fixtures;
  j["tv_below_hellinger"] = all;
  j["anchor"] = "tv_hellinger";
  out.write_json("distances.json", j);
  if (!all) out.fail("tv_hellinger");
}

void run_scaling(const ExperimentConfig& c, Output& out) {
  json arr = json::array();
  for (std::size_t t = 0; t < c.thetas.size(); ++t) {
    const auto rep = scaling_study(c.thetas[t], c.m_grid, c.quadrature);
    {
      auto f = out.open("scaling_" + std::to_string(t) + ".csv");
      write_scaling_csv(f, rep);
    }
    arr.push_back(json::parse(scaling_summary_json(rep)));
    if (!rep.pass) out.fail("hellinger_scaling_theta" + std::to_string(t));
  }
  json j;
  j["studies"] = arr;
  j["anchor"] = "hellinger_scaling";
  out.write_json("scaling.json", j);
}

void run_zeta(const ExperimentConfig& c, Output& out) {
  const auto basis = make_basis(c);
  const auto states = make_states(c);
  const std::size_t p = basis.size();
  const auto design = make_design(c, p);
  ZetaOptions opt;
  opt.names = states.names;
  opt.tol = c.active_tol;
  opt.c0 = c.c0;
  opt.c1 = c.c1;
  if (c.zeta_weights == "regression" || c.zeta_weights == "tomography") {
    if (design.mode != DesignMode::random)
      throw Error(ErrorCode::ConfigError, "zeta.weights: design weights need design.mode = random");
    opt.weights = c.zeta_weights == "regression" ? design.weights_regression : design.weights_tomography;
    opt.source = c.zeta_weights == "regression" ? WeightSource::regression : WeightSource::tomography;
  }
  const auto z = zeta_fraction(states.states, basis, opt);
  const std::size_t n = sample_size(c, p);
  double g = 0.0;
  if (design.mode == DesignMode::random) g = gamma_p(design.weights_regression, design.weights_tomography);
  const auto variant = design.mode == DesignMode::fixed ? BoundVariant::fixed
                       : g == 0.0                       ? BoundVariant::uniform
                                                        : BoundVariant::random;
  const auto bound = deficiency_bound(static_cast<std::int64_t>(n), c.m, static_cast<std::int64_t>(p), basis.kappa, g,
                                      z.zeta, c.bound_C, variant);
  const auto ident = identifiability_check(std::max<std::int64_t>(1, static_cast<std::int64_t>(n)), c.m, c.d,
                                           std::max(2, basis.kappa));

  json j;
  j["zeta"] = z.zeta;
  j["zeta_is_lower_bound_of_class_sup"] = true;
  j["weights"] = to_string(z.source);
  json per = json::array();
  for (std::size_t i = 0; i < z.fractions.size(); ++i)
    per.push_back({{"state", z.witnesses[i]}, {"nondegenerate", z.counts[i]}, {"fraction", z.fractions[i]}});
  j["states"] = per;
  j["c3"] = {{"c0", z.c3.c0},
             {"c1", z.c3.c1},
             {"min_active_trace", z.c3.min_active_trace},
             {"max_active_trace", z.c3.max_active_trace},
             {"within", z.c3.within}};
  j["max_rj"] = z.max_rj;
  j["kappa"] = basis.kappa;
  j["gamma_p"] = g;
  j["deficiency_bound"] = {{"variant", to_string(bound.variant)}, {"n", bound.n},
                           {"m", bound.m},                        {"p", bound.p},
                           {"C", bound.C},                        {"bound_random", bound.bound_random},
                           {"bound_uniform", bound.bound_uniform}};
  j["identifiability"] = {{"free_parameters", ident.free_parameters}, {"individual_n", ident.individual_n},
                          {"individual_m", ident.individual_m},       {"summarized_n", ident.summarized_n},
                          {"product", ident.product}};
  out.write_json("zeta.json", j);
}

void run_corollaries(const ExperimentConfig& c, Output& out) {
  const auto rep = corollary_suite(c.d, c.corollary_samples, c.seed);
  json checks = json::array();
  for (const auto& chk : rep.checks) {
    checks.push_back({{"anchor", chk.anchor},
                      {"description", chk.description},
                      {"pass", chk.pass},
                      {"observed", chk.observed},
                      {"bound", chk.bound},
                      {"detail", chk.detail}});
    if (!chk.pass) out.fail(chk.anchor);
  }
  json j;
  j["d"] = c.d;
  j["samples_per_class"] = c.corollary_samples;
  j["checks"] = checks;
  j["pass"] = rep.pass();
  out.write_json("corollaries.json", j);
}

void run_transfer(const ExperimentConfig& c, Output& out) {
  const auto basis = make_basis(c);
  const auto states = make_states(c);
  const std::size_t p = basis.size();
  const std::size_t n = sample_size(c, p);
  const auto rep = estimator_transfer(states.states.front(), basis, n, c.transfer_m_grid, c.replications, c.seed);
  {
    auto f = out.open("transfer.csv");
    f << "m,risk_tomography,risk_regression,gap,gap_error\n";
    for (const auto& pt : rep.points)
      f << pt.m << ',' << format_double(pt.risk_tomography) << ',' << format_double(pt.risk_regression) << ','
        << format_double(pt.gap) << ',' << format_double(pt.gap_error) << '\n';
  }
  json pts = json::array();
  for (const auto& pt : rep.points)
    pts.push_back({{"m", pt.m},
                   {"risk_tomography", pt.risk_tomography},
                   {"risk_regression", pt.risk_regression},
                   {"gap", pt.gap},
                   {"gap_error", pt.gap_error},
                   {"mean_alpha_tomography", pt.mean_alpha_tomography},
                   {"mean_alpha_regression", pt.mean_alpha_regression},
                   {"sq_error_tomography", pt.sq_error_tomography},
                   {"sq_error_regression", pt.sq_error_regression}});
  json j;
  j["alpha"] = rep.alpha;
  j["n"] = rep.n;
  j["replications"] = rep.replications;
  j["points"] = pts;
  j["monotone"] = rep.monotone;
  j["anchor"] = "estimator_transfer";
  out.write_json("transfer.json", j);
  if (!rep.monotone) out.fail("estimator_transfer");
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  Output out{out_dir, {}};
  try {
    switch (config.task) {
      case Task::simulate: run_simulate(config, out); break;
      case Task::translate: run_translate(config, out); break;
      case Task::distances: run_distances(config, out); break;
      case Task::scaling: run_scaling(config, out); break;
      case Task::zeta: run_zeta(config, out); break;
      case Task::corollaries: run_corollaries(config, out); break;
      case Task::estimator_transfer: run_transfer(config, out); break;
    }
  } catch (const Error& e) {
    throw Error(e.code(), "task " + std::string(to_string(config.task)) + ": " + e.what());
  }

  json manifest;
  manifest["tool"] = "tomolab";
  manifest["version"] = kVersion;
  manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION);
  manifest["task"] = to_string(config.task);
  manifest["seed"] = config.seed;
  json echo = json::object();
  for (const auto& [k, v] : config.echo) echo[k] = v;
  manifest["config"] = echo;
  manifest["artifacts"] = out.result.artifacts;
  manifest["pass"] = out.result.pass;
  manifest["failures"] = out.result.failures;
  {
    std::ofstream f(out_dir / "manifest.json", std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot write manifest");
    f << manifest.dump(2) << '\n';
  }
  return out.result;
}

}  // namespace tomolab

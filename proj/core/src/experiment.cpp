#include "cavity/experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cavity/csv.hpp"
#include "cavity/enumeration.hpp"
#include "cavity/errors.hpp"
#include "cavity/fermi_entropy.hpp"
#include "cavity/fermi_sampler.hpp"
#include "cavity/graph.hpp"
#include "cavity/numeric.hpp"
#include "cavity/parallel.hpp"
#include "cavity/params.hpp"
#include "cavity/rng.hpp"
#include "cavity/second_moment.hpp"
#include "cavity/thermo.hpp"

#ifndef CAVITY_VERSION_STRING
#define CAVITY_VERSION_STRING "0.0.0"
#endif

namespace cavity {

namespace fs = std::filesystem;

const char* version() { return CAVITY_VERSION_STRING; }

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "experiment",
      "seed",
      "out",
      "model.n",
      "model.c",
      "model.k",
      "model.p",
      "model.beta",
      "model.htilde",
      "graph.file",
      "run.steps",
      "run.replicas",
      "run.initial",
      "run.window",
      "budget.enumeration",
      "budget.clique_nodes",
      "budget.second_moment",
      "phase.beta_min",
      "phase.beta_max",
      "phase.points",
      "second_moment.mode",
      "second_moment.k_list",
      "selfavg.c_bar",
      "selfavg.k_list",
      "selfavg.replicas",
      "fermi.spectrum",
      "fermi.particles",
      "fermi.energy",
      "fermi.sigma",
      "fermi.alpha",
      "fermi.rho",
      "fermi.delta",
      "cliquenum.n",
      "cliquenum.graphs",
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string hex(const unsigned char* data, unsigned len) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 15]);
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig config;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (!known_keys().count(full)) throw ConfigError(where + "unknown key '" + full + "'");
    if (config.values_.count(full)) throw ConfigError(where + "duplicate key '" + full + "'");
    config.values_[full] = value;
  }
  return config;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  return parse(read_file(path));
}

std::string ExperimentConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second;
}

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key) const {
  const std::string text = get_string(key);
  try {
    return parse_double(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError("key '" + key + "': not a number: '" + text + "'");
  }
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t ExperimentConfig::get_int(const std::string& key) const {
  const std::string text = get_string(key);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError("key '" + key + "': not an integer: '" + text + "'");
  return v;
}

std::int64_t ExperimentConfig::get_int(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t ExperimentConfig::get_seed() const {
  if (!has("seed")) throw ConfigError("a seed is required (no wall-clock default)");
  const std::string text = get_string("seed");
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError("seed must be a non-negative integer: '" + text + "'");
  return v;
}

std::vector<int> ExperimentConfig::get_int_list(const std::string& key) const {
  std::vector<int> out;
  std::string text = get_string(key);
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::string item;
  while (in >> item) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size())
      throw ConfigError("key '" + key + "': not an integer list");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::string ExperimentConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::string git_blob_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw std::runtime_error("EVP_MD_CTX_new failed");
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("SHA-1 digest failed");
  return hex(digest, len);
}

namespace {

/// Collects output files; everything is written from the calling thread.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_))
      throw ConfigError("cannot create output directory " + dir_.string());
  }

  const fs::path& dir() const { return dir_; }

  fs::path write(const std::string& name, const std::string& body) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << body;
    out.close();
    if (!out) throw ConfigError("write failed: " + path.string());
    record(path);
    return path;
  }

  void record(const fs::path& path) { files_.push_back(path); }
  const std::vector<fs::path>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<fs::path> files_;
};

struct Context {
  const ExperimentConfig& config;
  std::uint64_t seed;
  Outputs& out;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, hash
};

ModelParams model_params(const ExperimentConfig& cfg) {
  const int k = static_cast<int>(cfg.get_int("model.k"));
  const double p = cfg.get_double("model.p", 0.5);
  const double beta = cfg.get_double("model.beta", 1.0);
  const double htilde = cfg.get_double("model.htilde", 0.0);
  ModelParams params;
  if (cfg.has("model.n"))
    params = ModelParams::for_graph(cfg.get_int("model.n"), k, p, beta, htilde);
  else if (cfg.has("model.c"))
    params = ModelParams::for_ratio(cfg.get_double("model.c"), k, p, beta, htilde);
  else
    throw ConfigError("model.n or model.c is required");
  params.validate();
  return params;
}

std::uint64_t budget(const ExperimentConfig& cfg, const std::string& key,
                     std::uint64_t fallback) {
  const std::int64_t v = cfg.get_int(key, static_cast<std::int64_t>(fallback));
  if (v <= 0) throw ConfigError("key '" + key + "' must be positive");
  return static_cast<std::uint64_t>(v);
}

Graph obtain_graph(Context& ctx, const ModelParams& params) {
  if (ctx.config.has("graph.file")) {
    const std::string path = ctx.config.get_string("graph.file");
    const std::string body = read_file(path);
    ctx.inputs.emplace_back(path, git_blob_hash(body));
    std::istringstream in(body);
    Graph g = read_graph(in);
    if (static_cast<std::int64_t>(g.size()) != params.n_int())
      throw ConfigError("graph file size does not match model.n");
    return g;
  }
  return generate_graph(static_cast<std::uint32_t>(params.n_int()), params.p, ctx.seed);
}

void run_gen(Context& ctx) {
  const ModelParams params = model_params(ctx.config);
  const Graph g = obtain_graph(ctx, params);
  std::ostringstream graph_text;
  write_graph(graph_text, g);
  ctx.out.write("graph.txt", graph_text.str());

  std::ostringstream csv;
  CsvWriter w(csv, {"n", "p", "seed", "edges", "missing"});
  w.cell(g.size()).cell(g.density()).cell(std::to_string(g.seed()));
  w.cell(static_cast<long long>(g.edge_count()));
  w.cell(static_cast<long long>(g.missing_count()));
  w.end_row();
  ctx.out.write("summary.csv", csv.str());
}

struct ReplicaSummary {
  bool period2 = false;
  bool fixed = false;
  double mean_energy = 0.0;
  double mean_overlap = 0.0;
  double final_energy = 0.0;
};

void run_chain_experiment(Context& ctx) {
  const ModelParams params = model_params(ctx.config);
  const Graph g = obtain_graph(ctx, params);
  const auto steps = static_cast<std::uint64_t>(ctx.config.get_int("run.steps", 1000));
  const auto replicas = static_cast<std::size_t>(ctx.config.get_int("run.replicas", 1));
  const auto window = static_cast<std::size_t>(
      ctx.config.get_int("run.window", static_cast<std::int64_t>(std::min<std::uint64_t>(steps, 20))));
  if (steps == 0 || replicas == 0) throw ConfigError("run.steps and run.replicas must be positive");
  if (window == 0 || window > steps) throw ConfigError("run.window must lie in [1, run.steps]");

  std::optional<Configuration> initial;
  if (ctx.config.has("run.initial")) {
    std::string text = ctx.config.get_string("run.initial");
    std::replace(text.begin(), text.end(), ',', ' ');
    initial = Configuration::parse(text);
    initial->validate(g.size());
    if (static_cast<int>(initial->size()) != params.k)
      throw ConfigError("run.initial must have model.k vertices");
  }

  std::vector<ReplicaSummary> summaries(replicas);
  Trajectory first;
  parallel_for(replicas, [&](std::size_t r) {
    Trajectory t = run_chain(g, params, steps, mix_seed(ctx.seed, r), initial);
    ReplicaSummary s;
    const auto osc = detect_oscillation(t, window);
    s.period2 = osc.period2;
    s.fixed = osc.fixed;
    for (std::size_t i = 0; i < t.steps(); ++i) {
      s.mean_energy += t.energies[i];
      s.mean_overlap += t.overlaps[i];
    }
    s.mean_energy /= static_cast<double>(t.steps());
    s.mean_overlap /= static_cast<double>(t.steps());
    s.final_energy = t.energies.back();
    summaries[r] = s;
    if (r == 0) first = std::move(t);
  });

  std::ostringstream traj;
  write_trajectory_csv(traj, first);
  const fs::path traj_path = ctx.out.write("trajectory.csv", traj.str());

  std::ostringstream csv;
  CsvWriter w(csv, {"replica", "steps", "period2", "fixed", "mean_energy", "mean_overlap",
                    "final_energy"});
  for (std::size_t r = 0; r < replicas; ++r) {
    const auto& s = summaries[r];
    w.cell(static_cast<long long>(r)).cell(static_cast<long long>(steps));
    w.cell(s.period2 ? 1 : 0).cell(s.fixed ? 1 : 0);
    w.cell(s.mean_energy).cell(s.mean_overlap).cell(s.final_energy);
    w.end_row();
  }
  ctx.out.write("summary.csv", csv.str());

  const fs::path script = ctx.out.dir() / "plot_trajectory.py";
  emit_plot_script({traj_path}, PlotKind::Trajectory, script);
  ctx.out.record(script);
}

void run_exact(Context& ctx) {
  const ModelParams params = model_params(ctx.config);
  const Graph g = obtain_graph(ctx, params);
  const std::uint64_t cap = budget(ctx.config, "budget.enumeration", kDefaultEnumerationCap);
  const EntropyReport e = exact_entropy(g, params, cap);
  const double pairs = exact_log_z_pairs(g, params, cap);
  const double annealed = thermo::annealed_log_z(params, thermo::AnnealedMode::ExactSum);

  std::ostringstream csv;
  CsvWriter w(csv, {"n", "k", "p", "beta", "htilde", "log_z", "log_z_pairs",
                    "entropy_direct", "entropy_free_energy", "log_annealed"});
  w.cell(static_cast<long long>(params.n_int())).cell(params.k).cell(params.p);
  w.cell(params.beta).cell(params.htilde);
  w.cell(e.log_z).cell(pairs).cell(e.direct).cell(e.via_free_energy).cell(annealed);
  w.end_row();
  ctx.out.write("exact.csv", csv.str());
}

void run_annealed(Context& ctx) {
  const ModelParams params = model_params(ctx.config);
  const auto terms = thermo::annealed_terms(params);
  std::ostringstream csv;
  CsvWriter w(csv, {"q", "log_term"});
  for (std::size_t q = 0; q < terms.size(); ++q) w.cell(static_cast<long long>(q)).cell(terms[q]).end_row();
  ctx.out.write("annealed.csv", csv.str());

  const double exact_sum = thermo::annealed_log_z(params, thermo::AnnealedMode::ExactSum);
  const auto arg = thermo::argmax_overlap(params);
  std::ostringstream sum;
  CsvWriter s(sum, {"log_z_exact_sum", "region", "log_z_identical", "log_z_disjoint",
                    "dropped", "argmax_q", "tie"});
  s.cell(exact_sum);
  if (params.c() > 1.0) {
    const auto asym = thermo::annealed_log_z_asymptotic(params);
    s.cell(thermo::to_string(asym.region)).cell(asym.identical).cell(asym.disjoint);
  } else {
    s.cell("none").cell(thermo::phi(params, params.k) + thermo::theta(params, params.k));
    s.cell(thermo::phi(params, 0) + thermo::theta(params, 0));
  }
  s.cell(thermo::AsymptoticLogZ::kDroppedTerms).cell(arg.q).cell(arg.tie ? 1 : 0);
  s.end_row();
  ctx.out.write("summary.csv", sum.str());
}

void run_phase_diagram(Context& ctx) {
  const auto& cfg = ctx.config;
  const double p = cfg.get_double("model.p", 0.5);
  const double c = cfg.get_double("model.c");
  const double lo = cfg.get_double("phase.beta_min", 0.1);
  const double hi = cfg.get_double("phase.beta_max", 5.0);
  const auto points = cfg.get_int("phase.points", 200);
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("model.p must lie in (0,1)");
  if (!(c > 1.0)) throw ConfigError("model.c must exceed 1 for the phase diagram");
  if (!(lo > 0.0 && hi > lo) || points < 2) throw ConfigError("bad phase grid");

  const double beta_c = thermo::critical_beta(p, c);
  std::vector<double> betas(static_cast<std::size_t>(points)), fields(betas.size());
  parallel_for(betas.size(), [&](std::size_t i) {
    betas[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    fields[i] = thermo::critical_field(betas[i], p, c);
  });

  std::ostringstream csv;
  CsvWriter w(csv, {"beta", "htilde_c", "beta_c_flag"});
  for (std::size_t i = 0; i < betas.size(); ++i)
    w.cell(betas[i]).cell(fields[i]).cell(betas[i] >= beta_c ? 1 : 0).end_row();
  const fs::path path = ctx.out.write("phase_diagram.csv", csv.str());

  std::ostringstream sum;
  CsvWriter s(sum, {"p", "c", "beta_c", "bar_beta_c", "hat_beta_c"});
  const auto bar = thermo::bar_critical_beta(p, c);
  const auto hat = thermo::hat_critical_beta(p, c);
  s.cell(p).cell(c).cell(beta_c);
  s.cell(bar ? format_double(*bar) : std::string("none"));
  s.cell(hat ? format_double(*hat) : std::string("none"));
  s.end_row();
  ctx.out.write("summary.csv", sum.str());

  const fs::path script = ctx.out.dir() / "plot_phase_diagram.py";
  emit_plot_script({path}, PlotKind::PhaseDiagram, script);
  ctx.out.record(script);
}

void write_selfavg(Context& ctx, const second_moment::SelfAveragingSetup& setup) {
  const auto rows = second_moment::self_averaging_experiment(setup);
  std::ostringstream csv;
  CsvWriter w(csv, {"k", "n", "replicas", "log_mean_z", "log_var_z", "ratio", "log_ratio",
                    "reference", "log_annealed"});
  for (const auto& r : rows) {
    w.cell(r.k).cell(r.n).cell(r.replicas).cell(r.log_mean_z).cell(r.log_var_z);
    w.cell(r.ratio).cell(std::log(r.ratio)).cell(r.reference).cell(r.log_annealed);
    w.end_row();
  }
  const fs::path path = ctx.out.write("selfavg.csv", csv.str());
  const fs::path script = ctx.out.dir() / "plot_selfavg.py";
  emit_plot_script({path}, PlotKind::SelfAveraging, script);
  ctx.out.record(script);
}

second_moment::SelfAveragingSetup selfavg_setup(const Context& ctx) {
  const auto& cfg = ctx.config;
  second_moment::SelfAveragingSetup setup;
  setup.p = cfg.get_double("model.p", setup.p);
  setup.beta = cfg.get_double("model.beta", setup.beta);
  setup.htilde = cfg.get_double("model.htilde", setup.htilde);
  setup.c_bar = cfg.get_double("selfavg.c_bar", setup.c_bar);
  if (cfg.has("selfavg.k_list")) setup.k_list = cfg.get_int_list("selfavg.k_list");
  setup.replicas = static_cast<int>(cfg.get_int("selfavg.replicas", setup.replicas));
  setup.seed = ctx.seed;
  setup.enumeration_cap = budget(cfg, "budget.enumeration", setup.enumeration_cap);
  if (setup.replicas < 2) throw ConfigError("selfavg.replicas must be at least 2");
  return setup;
}

void run_selfavg(Context& ctx) { write_selfavg(ctx, selfavg_setup(ctx)); }

void run_second_moment(Context& ctx) {
  const auto& cfg = ctx.config;
  const std::string mode = cfg.get_string("second_moment.mode", "decomp");
  if (mode == "selfavg") {
    write_selfavg(ctx, selfavg_setup(ctx));
    return;
  }
  if (mode == "brute" || mode == "decomp") {
    const ModelParams params = model_params(cfg);
    const auto m = mode == "brute" ? second_moment::Mode::Brute
                                   : second_moment::Mode::Decomposition;
    const std::uint64_t cap = budget(
        cfg, "budget.second_moment",
        m == second_moment::Mode::Brute ? second_moment::kDefaultBruteCap
                                        : second_moment::kDefaultDecompositionCap);
    const double second = second_moment::log_second_moment(params, m, cap);
    const double first = thermo::annealed_log_z(params, thermo::AnnealedMode::ExactSum);
    std::ostringstream csv;
    CsvWriter w(csv, {"mode", "k", "log_n", "log_second_moment", "log_first_moment",
                      "log_ratio"});
    w.cell(mode).cell(params.k).cell(params.log_n).cell(second).cell(first);
    w.cell(second - 2.0 * first).end_row();
    ctx.out.write("second_moment.csv", csv.str());
    return;
  }
  if (mode == "lemmas") {
    const double p = cfg.get_double("model.p", 0.5);
    const double c = cfg.get_double("model.c");
    const double beta = cfg.get_double("model.beta", 1.0);
    const double htilde = cfg.get_double("model.htilde", 0.0);
    const std::vector<int> ks = cfg.has("second_moment.k_list")
                                    ? cfg.get_int_list("second_moment.k_list")
                                    : std::vector<int>{10, 20, 40};
    struct Row {
      second_moment::LemmaPoint point, constrained;
      double log_first = 0.0;
    };
    std::vector<Row> rows(ks.size());
    parallel_for(ks.size(), [&](std::size_t i) {
      const auto params = ModelParams::for_ratio(c, ks[i], p, beta, htilde);
      rows[i].point = second_moment::lemma_max(params);
      rows[i].constrained = second_moment::lemma_max(params, 2);
      rows[i].log_first = thermo::annealed_log_z(params, thermo::AnnealedMode::ExactSum);
    });
    std::ostringstream csv;
    CsvWriter w(csv, {"k", "q", "g", "g5", "lemma_max", "log_first_moment", "diff",
                      "diff_over_k", "constrained_q", "constrained_g", "constrained_g5",
                      "constrained_max"});
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const auto& r = rows[i];
      const double diff = r.point.value - 2.0 * r.log_first;
      w.cell(ks[i]).cell(r.point.q).cell(r.point.g).cell(r.point.g5).cell(r.point.value);
      w.cell(r.log_first).cell(diff).cell(diff / ks[i]);
      w.cell(r.constrained.q).cell(r.constrained.g).cell(r.constrained.g5);
      w.cell(r.constrained.value).end_row();
    }
    ctx.out.write("lemmas.csv", csv.str());
    return;
  }
  throw ConfigError("second_moment.mode must be brute, decomp, lemmas or selfavg");
}

void run_fermi(Context& ctx) {
  const auto& cfg = ctx.config;
  if (cfg.has("fermi.spectrum")) {
    const std::string path = cfg.get_string("fermi.spectrum");
    const std::string body = read_file(path);
    ctx.inputs.emplace_back(path, git_blob_hash(body));
    const LevelSpectrum spectrum = parse_spectrum(body);
    const double N = cfg.get_double("fermi.particles");
    const double E = cfg.get_double("fermi.energy");
    const OccupationSolution sol = occupation_solve(spectrum, N, E);

    std::ostringstream csv;
    CsvWriter w(csv, {"particles", "energy", "lambda", "mu", "entropy",
                      "residual_particles", "residual_energy", "iterations"});
    w.cell(N).cell(E).cell(sol.lambda).cell(sol.mu).cell(sol.entropy);
    w.cell(sol.residual_particles).cell(sol.residual_energy).cell(sol.iterations).end_row();
    ctx.out.write("fermi.csv", csv.str());

    std::ostringstream occ;
    CsvWriter o(occ, {"j", "energy", "g", "occupation"});
    for (std::size_t j = 0; j < spectrum.g.size(); ++j) {
      o.cell(static_cast<long long>(j)).cell(static_cast<double>(j) + spectrum.offset);
      o.cell(spectrum.g[j]).cell(sol.occupations[j]).end_row();
    }
    ctx.out.write("occupations.csv", occ.str());
    return;
  }

  const ModelParams params = model_params(cfg);
  const Graph g = obtain_graph(ctx, params);
  Configuration sigma;
  if (cfg.has("fermi.sigma")) {
    std::string text = cfg.get_string("fermi.sigma");
    std::replace(text.begin(), text.end(), ',', ' ');
    sigma = Configuration::parse(text);
  } else {
    CounterRng rng(mix_seed(ctx.seed, 1));
    sigma = Configuration(random_subset(rng, g.size(), static_cast<std::uint32_t>(params.k)));
  }
  sigma.validate(g.size());
  if (static_cast<int>(sigma.size()) != params.k)
    throw ConfigError("fermi.sigma must have model.k vertices");
  const double delta = cfg.get_double("fermi.delta", 0.05);
  const auto stats = degeneracy_stats(g, sigma, params, delta);

  std::ostringstream csv;
  CsvWriter w(csv, {"j", "empirical", "expected", "sd", "in_jc", "log_lower", "log_upper",
                    "within_window"});
  for (const auto& s : stats) {
    w.cell(s.j).cell(static_cast<long long>(s.empirical)).cell(s.expected).cell(s.sd);
    w.cell(s.in_jc ? 1 : 0).cell(s.log_lower).cell(s.log_upper);
    w.cell(s.within_window ? 1 : 0).end_row();
  }
  ctx.out.write("levels.csv", csv.str());

  if (cfg.has("fermi.alpha") && cfg.has("fermi.rho")) {
    const double alpha = cfg.get_double("fermi.alpha");
    const double rho = cfg.get_double("fermi.rho");
    const double estimate = entropy_estimate(g, sigma, params, alpha, rho, delta);
    std::ostringstream est;
    CsvWriter e(est, {"sigma", "alpha", "rho", "delta", "entropy_density"});
    e.cell(sigma.to_string()).cell(alpha).cell(rho).cell(delta).cell(estimate).end_row();
    ctx.out.write("fermi.csv", est.str());
  }
}

void run_cliquenum(Context& ctx) {
  const auto& cfg = ctx.config;
  const auto n = cfg.get_int("cliquenum.n", 100);
  const double p = cfg.get_double("model.p", 0.5);
  const auto graphs = static_cast<std::size_t>(cfg.get_int("cliquenum.graphs", 50));
  if (n < 1 || graphs == 0) throw ConfigError("cliquenum.n and cliquenum.graphs must be positive");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("model.p must lie in (0,1)");
  const std::uint64_t nodes = budget(cfg, "budget.clique_nodes", kDefaultCliqueNodeBudget);
  const CliqueWindow window = clique_window(static_cast<double>(n), p);

  std::vector<CliqueResult> results(graphs);
  parallel_for(graphs, [&](std::size_t i) {
    const Graph g = generate_graph(static_cast<std::uint32_t>(n), p, mix_seed(ctx.seed, i));
    results[i] = max_clique(g, nodes);
  });

  std::ostringstream csv;
  CsvWriter w(csv, {"graph", "omega", "nodes", "center", "in_window", "witness"});
  for (std::size_t i = 0; i < graphs; ++i) {
    const double omega = results[i].size;
    w.cell(static_cast<long long>(i)).cell(results[i].size);
    w.cell(static_cast<long long>(results[i].nodes)).cell(window.center);
    w.cell(omega >= window.lower && omega <= window.upper ? 1 : 0);
    w.cell(results[i].witness.to_string()).end_row();
  }
  ctx.out.write("cliquenum.csv", csv.str());
}

void write_manifest(const Context& ctx, const std::string& name) {
  std::string body;
  body += "tool = cavity " + std::string(version()) + "\n";
  body += "experiment = " + name + "\n";
  std::string hashed = ctx.config.canonical();
  for (const auto& [path, hash] : ctx.inputs) hashed += "input " + path + " = " + hash + "\n";
  body += "input_hash = " + git_blob_hash(hashed) + "\n";
  for (const auto& [path, hash] : ctx.inputs) body += "input " + path + " = " + hash + "\n";
  body += "\n[config]\n" + ctx.config.canonical();
  body += "\n[outputs]\n";
  for (const auto& f : ctx.out.files()) {
    const auto rel = fs::relative(f, ctx.out.dir()).generic_string();
    body += rel + " = " + git_blob_hash(read_file(f)) + "\n";
  }
  std::ofstream out(ctx.out.dir() / "manifest", std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write manifest");
  out << body;
}

}  // namespace

ExperimentResult run_experiment(const std::string& name_arg, const ExperimentConfig& config) {
  const std::string name =
      name_arg.empty() ? config.get_string("experiment") : name_arg;
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ConfigError("unknown experiment '" + name + "'");
  if (config.has("experiment") && config.get_string("experiment") != name)
    throw ConfigError("experiment key '" + config.get_string("experiment") +
                      "' does not match '" + name + "'");

  const std::uint64_t seed = config.get_seed();
  Outputs outputs(config.get_string("out", "cavity-out/" + name));
  Context ctx{config, seed, outputs, {}};

  try {
    if (name == "gen") run_gen(ctx);
    else if (name == "run") run_chain_experiment(ctx);
    else if (name == "exact") run_exact(ctx);
    else if (name == "annealed") run_annealed(ctx);
    else if (name == "phase-diagram") run_phase_diagram(ctx);
    else if (name == "second-moment") run_second_moment(ctx);
    else if (name == "selfavg") run_selfavg(ctx);
    else if (name == "fermi") run_fermi(ctx);
    else if (name == "cliquenum") run_cliquenum(ctx);
  } catch (const std::logic_error& e) {
    // bad parameters surface from the modules as logic errors
    throw ConfigError(e.what());
  }

  write_manifest(ctx, name);
  ExperimentResult result{outputs.dir(), outputs.files()};
  result.files.push_back(outputs.dir() / "manifest");
  return result;
}

}  // namespace cavity

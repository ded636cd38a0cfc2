// gtqa: command-line front end for the glued-trees annealing library.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "gtqa/gtqa.hpp"

namespace {

using namespace gtqa;
using gtqa::cli::UsageError;

struct Globals {
  std::uint64_t seed = 0;
  double alpha = kDefaultAlpha;
  std::string out;
  std::size_t jobs = default_jobs();
  std::string config;
  std::string manifest;
};

template <class T>
std::string default_text(const T& v) {
  if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else if constexpr (std::is_arithmetic_v<T>) {
    return format_number(v);
  } else {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + default_text(v[i]);
    return out;
  }
}

// Defaults are recorded at full precision so a manifest replays exactly.
template <class T>
CLI::Option* add_option(CLI::App& sub, const std::string& name, T& var, const std::string& help) {
  return sub.add_option(name, var, help)->default_str(default_text(var));
}

void add_globals(CLI::App& sub, Globals& g) {
  add_option(sub, "--seed", g.seed, "Base random seed");
  add_option(sub, "--alpha", g.alpha, "Endpoint weight alpha in (0, 1/2)");
  add_option(sub, "--out", g.out, "Output file (default or -: standard output)");
  add_option(sub, "--jobs", g.jobs, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);
  add_option(sub, "--config", g.config, "key=value file supplying defaults for any flag");
  add_option(sub, "--manifest", g.manifest, "Manifest path (default: <out>.manifest or gtqa-<subcommand>.manifest)");
}

// Where a run writes and what its CSV header names.
struct Output {
  std::string subcommand;
  std::string path;           // empty for standard output
  std::string manifest_path;
  std::vector<std::string> extra_files;
  std::ostringstream buffer;  // flushed only after success

  std::string label() const { return path.empty() ? "-" : path; }
};

std::unique_ptr<CsvWriter> csv(Output& o, const std::string& schema, std::vector<std::string> columns) {
  return std::make_unique<CsvWriter>(o.buffer, schema, o.manifest_path, std::move(columns));
}

NoiseModel model_option(const std::string& s) { return parse_noise_model(s); }

Normalization normalization_option(const std::string& s) {
  if (s == "spectral") return Normalization::SpectralNorm;
  if (s == "signed") return Normalization::SignedLargest;
  throw InvalidParameter("unknown normalization '" + s + "' (expected spectral or signed)");
}

EvolveOptions evolve_options(std::size_t steps, std::size_t min_steps, double per_time) {
  EvolveOptions e;
  e.steps = steps;
  e.min_steps = min_steps;
  e.steps_per_unit_time = per_time;
  return e;
}

struct IntegratorFlags {
  std::size_t steps = 0;
  std::size_t min_steps = 20000;
  double per_time = 40.0;

  void add(CLI::App& sub) {
    add_option(sub, "--steps", steps, "Fixed midpoint step count (0 = automatic)");
    add_option(sub, "--min-steps", min_steps, "Lower bound on the automatic step count");
    add_option(sub, "--steps-per-time", per_time, "Automatic steps per unit of t_f");
  }
  EvolveOptions options() const { return evolve_options(steps, min_steps, per_time); }
};

struct ThresholdFlags {
  double p_th = 0.95;
  double ratio = 1.05;
  double resolution = 1e-3;
  double t_cap = 1e5;
  double peak_window = 0.2;
  std::string cache;

  void add(CLI::App& sub) {
    add_option(sub, "--pth", p_th, "Threshold success probability");
    add_option(sub, "--ratio", ratio, "Coarse scan ratio between successive t_f");
    add_option(sub, "--resolution", resolution, "Relative bisection resolution");
    add_option(sub, "--tcap", t_cap, "Largest t_f probed before giving up");
    add_option(sub, "--peak-window", peak_window, "Refine coarse maxima within this distance of pth (<0 disables)");
    add_option(sub, "--cache", cache, "Threshold cache file");
  }

  ThresholdOptions options(const Globals& g, const IntegratorFlags& integ) const {
    ThresholdOptions o;
    o.alpha = g.alpha;
    o.p_th = p_th;
    o.ratio = ratio;
    o.resolution = resolution;
    o.t_cap = t_cap;
    o.peak_window = peak_window;
    o.evolve = integ.options();
    return o;
  }
};

// ---------------------------------------------------------------- threshold

struct ThresholdCmd {
  std::vector<int> ns{10};
  std::string model = "NONE";
  double epsilon = 0.0;
  std::uint64_t realization = 0;
  ThresholdFlags th;
  IntegratorFlags integ;

  void add(CLI::App& sub) {
    add_option(sub, "--n", ns, "Tree depth(s)")->delimiter(',');
    add_option(sub, "--model", model, "Noise model for the search");
    add_option(sub, "--epsilon", epsilon, "Noise strength");
    add_option(sub, "--realization", realization, "Noise realization index");
    th.add(sub);
    integ.add(sub);
  }

  void run(const Globals& g, Output& o) const {
    auto opts = th.options(g, integ);
    opts.model = model_option(model);
    opts.epsilon = epsilon;
    opts.seed = g.seed;
    opts.realization = realization;
    std::unique_ptr<ThresholdCache> cache;
    if (!th.cache.empty()) cache = std::make_unique<ThresholdCache>(th.cache);
    std::vector<ThresholdResult> results(ns.size());
    parallel_for(ns.size(), g.jobs, [&](std::size_t i) { results[i] = cached_threshold_time(ns[i], opts, cache.get()); });
    auto w = csv(o, "threshold", {"n", "p_th", "t_f", "p_at", "t_below", "p_below", "resolution", "evaluations", "peak_refined"});
    for (const auto& r : results) {
      w->row({format_number(r.n), format_number(r.p_th), format_number(r.t_f), format_number(r.p_at),
             format_number(r.t_below), format_number(r.p_below), format_number(r.resolution),
             format_number(r.evaluations), r.peak_refined ? "1" : "0"});
    }
  }
};

// -------------------------------------------------------------------- sweep

struct SweepCmd {
  std::string model = "LA";
  std::vector<double> epsilons{1e-3, 1e-2};
  std::vector<int> ns{8};
  std::size_t realizations = 300;
  std::size_t resamples = 1000;
  std::string normalization = "spectral";
  std::string raw;
  ThresholdFlags th;
  IntegratorFlags integ;

  void add(CLI::App& sub) {
    add_option(sub, "--model", model, "Noise model");
    add_option(sub, "--epsilons", epsilons, "Noise strengths")->delimiter(',');
    add_option(sub, "--ns", ns, "Tree depths")->delimiter(',');
    add_option(sub, "--realizations", realizations, "Noise realizations per point")->check(CLI::PositiveNumber);
    add_option(sub, "--resamples", resamples, "Bootstrap resamples")->check(CLI::PositiveNumber);
    add_option(sub, "--normalization", normalization, "LA_NORMALIZED divisor: spectral or signed");
    add_option(sub, "--raw", raw, "Also write per-realization success probabilities here");
    th.add(sub);
    integ.add(sub);
  }

  void run(const Globals& g, Output& o) const {
    const NoiseModel m = model_option(model);
    auto topts = th.options(g, integ);
    std::unique_ptr<ThresholdCache> cache;
    if (!th.cache.empty()) cache = std::make_unique<ThresholdCache>(th.cache);
    std::map<int, double> thresholds;
    for (int n : ns) thresholds[n] = cached_threshold_time(n, topts, cache.get()).t_f;
    SweepOptions s;
    s.alpha = g.alpha;
    s.realizations = realizations;
    s.seed = g.seed;
    s.resamples = resamples;
    s.jobs = g.jobs;
    s.normalization = normalization_option(normalization);
    s.evolve = integ.options();
    const auto records = noise_sweep(m, epsilons, ns, thresholds, s);
    auto w = csv(o, "sweep", {"model", "epsilon", "n", "t_f", "realizations", "median", "ci_low", "ci_high"});
    for (const auto& r : records) {
      w->row({std::string(to_string(r.model)), format_number(r.epsilon), format_number(r.n), format_number(r.t_f),
             format_number(r.realizations()), format_number(r.summary.median), format_number(r.summary.ci_low),
             format_number(r.summary.ci_high)});
    }
    if (!raw.empty()) {
      std::ostringstream buf;
      CsvWriter rw(buf, "sweep-raw", o.manifest_path, {"model", "epsilon", "n", "realization", "stream_seed", "p_gs"});
      for (const auto& r : records)
        for (std::size_t k = 0; k < r.p_gs.size(); ++k)
          rw.row({std::string(to_string(r.model)), format_number(r.epsilon), format_number(r.n), format_number(k),
                  format_number(r.realization_seeds[k]), format_number(r.p_gs[k])});
      rw.flush_columns();
      std::ofstream f(raw);
      if (!f) throw IoError("cannot write '" + raw + "'");
      f << buf.str();
      o.extra_files.push_back(raw);
    }
  }
};

// ----------------------------------------------------------------- gapstats

struct GapstatsCmd {
  std::string model = "LA";
  std::vector<double> epsilons{1e-2};
  std::vector<int> ns{8};
  std::size_t realizations = 300;
  std::size_t resamples = 1000;
  std::size_t grid = 2001;
  std::string normalization = "spectral";

  void add(CLI::App& sub) {
    add_option(sub, "--model", model, "Noise model");
    add_option(sub, "--epsilons", epsilons, "Noise strengths")->delimiter(',');
    add_option(sub, "--ns", ns, "Tree depths")->delimiter(',');
    add_option(sub, "--realizations", realizations, "Noise realizations per point")->check(CLI::PositiveNumber);
    add_option(sub, "--resamples", resamples, "Bootstrap resamples")->check(CLI::PositiveNumber);
    add_option(sub, "--grid", grid, "Uniform s-grid points");
    add_option(sub, "--normalization", normalization, "LA_NORMALIZED divisor: spectral or signed");
  }

  void run(const Globals& g, Output& o) const {
    const NoiseModel m = model_option(model);
    GapStatisticsOptions opts;
    opts.alpha = g.alpha;
    opts.grid_points = grid;
    opts.resamples = resamples;
    opts.jobs = g.jobs;
    opts.normalization = normalization_option(normalization);
    auto w = csv(o, "gapstats", {"n", "epsilon", "median_gap", "ci_low", "ci_high"});
    w->comment("model=" + std::string(to_string(m)) + " realizations=" + std::to_string(realizations));
    for (double eps : epsilons) {
      for (int n : ns) {
        const auto st = min_gap_statistics(m, eps, n, realizations, g.seed, opts);
        w->row({format_number(n), format_number(eps), format_number(st.summary.median),
               format_number(st.summary.ci_low), format_number(st.summary.ci_high)});
      }
    }
  }
};

// ---------------------------------------------------------------------- fit

struct FitCmd {
  std::string in;
  std::string x = "n";
  std::string y;
  std::string form = "POLY";
  double min_x = -std::numeric_limits<double>::infinity();
  double max_x = std::numeric_limits<double>::infinity();
  double floor = -1.0;
  double confidence = 0.95;
  std::vector<std::string> where;

  void add(CLI::App& sub) {
    add_option(sub, "--in", in, "Input CSV (as written by the other subcommands)")->required();
    add_option(sub, "--x", x, "Column holding x");
    add_option(sub, "--y", y, "Column holding y")->required();
    add_option(sub, "--form", form, "POLY (y = c x^a) or EXP (y = c 2^(a x))");
    add_option(sub, "--min-x", min_x, "Smallest x kept (default: 8 for POLY)");
    add_option(sub, "--max-x", max_x, "Largest x kept");
    add_option(sub, "--floor", floor, "Stop at the first y below this (default: 1e-4 for EXP)");
    add_option(sub, "--confidence", confidence, "Confidence level of the exponent interval");
    add_option(sub, "--where", where, "Row filters column=value")->delimiter(';');
  }

  void run(const Globals&, Output& o) const {
    const FitForm f = parse_fit_form(form);
    std::ifstream file(in);
    if (!file) throw IoError("cannot open '" + in + "'");
    std::vector<std::string> header;
    RealVector xs, ys;
    std::string line;
    auto split = [](const std::string& s) {
      std::vector<std::string> cells;
      std::stringstream ss(s);
      std::string c;
      while (std::getline(ss, c, ',')) cells.push_back(cli::trim(c));
      return cells;
    };
    std::vector<std::pair<std::string, std::string>> filters;
    for (const auto& wcl : where) {
      const auto eq = wcl.find('=');
      if (eq == std::string::npos) throw InvalidParameter("--where expects column=value, got '" + wcl + "'");
      filters.emplace_back(wcl.substr(0, eq), wcl.substr(eq + 1));
    }
    auto column = [&](const std::string& name) {
      for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
      throw InvalidParameter("column '" + name + "' not found in '" + in + "'");
    };
    while (std::getline(file, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto cells = split(line);
      if (header.empty()) {
        header = cells;
        continue;
      }
      bool keep = true;
      for (const auto& [c, v] : filters) keep &= cells.at(column(c)) == v;
      if (!keep) continue;
      try {
        xs.push_back(std::stod(cells.at(column(x))));
        ys.push_back(std::stod(cells.at(column(y))));
      } catch (const std::invalid_argument&) {
        throw InvalidParameter("non-numeric value in '" + in + "': " + line);
      }
    }
    FitWindow window = default_fit_window(f);
    if (min_x != -std::numeric_limits<double>::infinity()) window.min_x = min_x;
    window.max_x = max_x;
    if (floor >= 0.0) window.y_floor = floor;
    const auto fit = windowed_fit(xs, ys, f, window, confidence);
    auto w = csv(o, "fit", {"form", "exponent", "ci_low", "ci_high", "prefactor", "r_squared", "points", "x_min",
                            "x_max", "classification"});
    w->comment("window min_x=" + format_number(window.min_x) + " max_x=" + format_number(window.max_x) +
              " y_floor=" + format_number(window.y_floor) + " confidence=" + format_number(confidence));
    w->row({std::string(to_string(fit.form)), format_number(fit.exponent), format_number(fit.ci_low),
           format_number(fit.ci_high), format_number(fit.prefactor), format_number(fit.r_squared),
           format_number(fit.points), format_number(fit.x_min), format_number(fit.x_max),
           f == FitForm::Exp ? std::string(to_string(classify_speedup(fit.exponent))) : std::string("n/a")});
  }
};

// ------------------------------------------------------------------- evolve

struct EvolveCmd {
  int n = 6;
  double t_f = 100.0;
  std::string model = "NONE";
  double epsilon = 0.0;
  std::uint64_t realization = 0;
  std::size_t grid = 101;
  std::size_t levels = 3;
  std::string normalization = "spectral";
  IntegratorFlags integ;

  void add(CLI::App& sub) {
    add_option(sub, "--n", n, "Tree depth");
    add_option(sub, "--tf", t_f, "Anneal time t_f");
    add_option(sub, "--model", model, "Noise model");
    add_option(sub, "--epsilon", epsilon, "Noise strength");
    add_option(sub, "--realization", realization, "Noise realization index");
    add_option(sub, "--grid", grid, "Output s-grid points");
    add_option(sub, "--levels", levels, "Instantaneous eigenstate populations per row");
    add_option(sub, "--normalization", normalization, "LA_NORMALIZED divisor: spectral or signed");
    integ.add(sub);
  }

  void run(const Globals& g, Output& o) const {
    const ColumnHamiltonian base{HamiltonianParams(n, g.alpha)};
    const auto noise = build_noise(model_option(model), n, epsilon, g.seed, realization,
                                   normalization_option(normalization));
    auto opts = integ.options();
    opts.populations = levels;
    const auto trace = evolve(NoisyHamiltonian(base, noise), AnnealSchedule::uniform(t_f, grid), opts);
    std::vector<std::string> cols{"s", "norm_error"};
    const std::size_t k = trace.populations.empty() ? 0 : trace.populations.front().size();
    for (std::size_t j = 0; j < k; ++j) cols.push_back("p_" + std::to_string(j));
    auto w = csv(o, "evolve", cols);
    w->comment("p_gs=" + format_number(trace.p_gs) + " steps=" + format_number(trace.steps));
    for (std::size_t i = 0; i < trace.s.size(); ++i) {
      std::vector<std::string> row{format_number(trace.s[i]), format_number(trace.norm_errors[i])};
      for (std::size_t j = 0; j < k; ++j) row.push_back(format_number(trace.populations[i][j]));
      w->row(row);
    }
  }
};

// ----------------------------------------------------------------- spectrum

struct SpectrumCmd {
  int n = 6;
  std::size_t grid = 2001;
  std::size_t levels = 3;
  std::string model = "NONE";
  double epsilon = 0.0;
  std::uint64_t realization = 0;
  std::string normalization = "spectral";

  void add(CLI::App& sub) {
    add_option(sub, "--n", n, "Tree depth");
    add_option(sub, "--grid", grid, "Uniform s-grid points");
    add_option(sub, "--levels", levels, "Lowest eigenvalues per row");
    add_option(sub, "--model", model, "Noise model");
    add_option(sub, "--epsilon", epsilon, "Noise strength");
    add_option(sub, "--realization", realization, "Noise realization index");
    add_option(sub, "--normalization", normalization, "LA_NORMALIZED divisor: spectral or signed");
  }

  void run(const Globals& g, Output& o) const {
    const ColumnHamiltonian base{HamiltonianParams(n, g.alpha)};
    const auto noise = build_noise(model_option(model), n, epsilon, g.seed, realization,
                                   normalization_option(normalization));
    const auto s = uniform_grid(grid);
    const auto rows = spectrum_scan(NoisyHamiltonian(base, noise), s, levels);
    std::vector<std::string> cols{"s"};
    for (std::size_t j = 0; j < levels; ++j) cols.push_back("E_" + std::to_string(j));
    auto w = csv(o, "spectrum", cols);
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<std::string> row{format_number(s[i])};
      for (double e : rows[i]) row.push_back(format_number(e));
      w->row(row);
    }
  }
};

// --------------------------------------------------------------------- walk

struct WalkCmd {
  std::string variant = "VERTEX_NOISELESS";
  std::vector<int> ns{4};
  std::size_t trials = 1000;
  std::uint64_t max_steps = 0;
  double nn_weight = 1.0;

  void add(CLI::App& sub) {
    add_option(sub, "--variant", variant, "VERTEX_NOISELESS, COLUMN_LONG_RANGE or COLUMN_NOISELESS");
    add_option(sub, "--ns", ns, "Tree depths")->delimiter(',');
    add_option(sub, "--trials", trials, "Walks per n")->check(CLI::PositiveNumber);
    add_option(sub, "--max-steps", max_steps, "Step cap (0 = variant default)");
    add_option(sub, "--nn-weight", nn_weight, "Long-range walk: weight of the nearest-neighbour moves");
  }

  void run(const Globals& g, Output& o) const {
    auto w = csv(o, "walk", {"n", "variant", "trials", "success_fraction", "median_hit", "mean_hit"});
    for (int n : ns) {
      WalkConfig c;
      c.variant = parse_walk_variant(variant);
      c.n = n;
      c.trials = trials;
      c.max_steps = max_steps;
      c.seed = g.seed;
      c.jobs = g.jobs;
      c.nearest_neighbor_weight = nn_weight;
      const auto st = random_walk(c);
      w->row({format_number(n), variant, format_number(trials), format_number(st.success_fraction),
             format_number(st.median_hit), format_number(st.mean_hit)});
    }
  }
};

// -------------------------------------------------------------------- pauli

struct PauliCmd {
  std::string instance;
  std::string matrix;
  std::string labels;
  std::string op = "all";
  double tolerance = kPauliTolerance;

  void add(CLI::App& sub) {
    add_option(sub, "--instance", instance, "Built-in labelled instance (n1)");
    add_option(sub, "--matrix", matrix, "Vertex-space operator as CSV");
    add_option(sub, "--labels", labels, "Label file: <vertex_index> <bitstring> per line");
    add_option(sub, "--operator", op, "For --instance: A, H0, H1 or all");
    add_option(sub, "--tolerance", tolerance, "Drop coefficients at or below this magnitude");
  }

  static void emit(std::ostream& out, const PauliExpansion& e) {
    const auto r = locality_report(e);
    out << "# operator=" << e.source << " qubits=" << e.qubits << " terms=" << e.terms.size()
        << " max_weight=" << r.max_weight << " cross_terms=" << r.cross_terms << '\n';
    for (const auto& t : e.terms) {
      out << t.word.word() << ' ' << std::setprecision(17) << t.coefficient << '\n';
    }
  }

  void run(const Globals&, Output& o) const {
    o.buffer << "# schema=pauli/v" << kCsvSchemaVersion << " manifest=" << o.manifest_path << '\n';
    if (!instance.empty()) {
      if (!matrix.empty()) throw UsageError("pauli: give either --instance or --matrix, not both");
      if (instance != "n1") throw InvalidParameter("pauli: unknown instance '" + instance + "' (only n1 ships)");
      const auto inst = n1_labeled_instance();
      const std::vector<std::pair<std::string, const Matrix*>> ops{
          {"A", &inst.adjacency}, {"H0", &inst.initial}, {"H1", &inst.final}};
      bool any = false;
      for (const auto& [name, m] : ops) {
        if (op != "all" && op != name) continue;
        emit(o.buffer, expand_operator(*m, tolerance, name));
        any = true;
      }
      if (!any) throw InvalidParameter("pauli: unknown operator '" + op + "' (expected A, H0, H1 or all)");
      return;
    }
    if (matrix.empty() || labels.empty()) throw UsageError("pauli: need --instance n1 or both --matrix and --labels");
    std::ifstream mf(matrix);
    if (!mf) throw IoError("cannot open '" + matrix + "'");
    std::ifstream lf(labels);
    if (!lf) throw IoError("cannot open '" + labels + "'");
    const Matrix vm = read_matrix_csv(mf);
    const auto map = read_labels(lf);
    emit(o.buffer, expand_operator(embed_operator(vm, map), tolerance, matrix));
  }
};

// ------------------------------------------------------------------ predict

struct PredictCmd {
  int n = 12;
  std::string s_at = "min";
  std::vector<double> epsilons{1e-5, 1e-4, 1e-3};
  std::string model = "LA";
  std::uint64_t realization = 0;
  std::size_t grid = 2001;
  std::string normalization = "spectral";

  void add(CLI::App& sub) {
    add_option(sub, "--n", n, "Tree depth");
    add_option(sub, "--s", s_at, "Anneal point, or 'min' for the noiseless gap minimum");
    add_option(sub, "--epsilons", epsilons, "Noise strengths")->delimiter(',');
    add_option(sub, "--model", model, "Noise model of the perturbation");
    add_option(sub, "--realization", realization, "Noise realization index");
    add_option(sub, "--grid", grid, "s-grid used to locate the gap minimum");
    add_option(sub, "--normalization", normalization, "LA_NORMALIZED divisor: spectral or signed");
  }

  void run(const Globals& g, Output& o) const {
    const ColumnHamiltonian base{HamiltonianParams(n, g.alpha)};
    double s = 0.0;
    if (s_at == "min") {
      s = gap_scan(base, uniform_grid(grid)).s_at_min;
    } else {
      try {
        s = std::stod(s_at);
      } catch (const std::exception&) {
        throw InvalidParameter("--s expects a number or 'min', got '" + s_at + "'");
      }
      require_unit_interval(s, "predict");
    }
    const Matrix h0 = base(s);
    const auto dec = eigendecompose(h0);
    const auto h = build_noise(model_option(model), n, 1.0, g.seed, realization, normalization_option(normalization)).matrix;
    auto w = csv(o, "predict", {"s", "epsilon", "pred_gap", "exact_gap", "pred_overlap", "exact_overlap"});
    for (double eps : epsilons) {
      const auto p = predict(dec, h, eps, s);
      const auto ex = exact_perturbed(h0, dec, h, eps);
      w->row({format_number(s), format_number(eps), format_number(p.predicted_gap), format_number(ex.gap),
             format_number(p.predicted_overlap), format_number(ex.overlap)});
    }
  }
};

int exit_code_for(const std::string& kind) {
  if (kind == "usage") return 2;
  if (kind == "invalid-parameter" || kind == "domain" || kind == "dimension-mismatch" || kind == "not-symmetric")
    return 3;
  if (kind == "io") return 4;
  if (kind == "convergence" || kind == "search-failure" || kind == "degenerate") return 5;
  return 1;
}

int fail(const std::string& kind, const std::string& message) {
  std::cerr << cli::error_line(kind, message) << std::endl;
  return exit_code_for(kind);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Glued-trees quantum annealing simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gtqa::cli::kToolVersion);

  Globals globals;
  ThresholdCmd threshold;
  SweepCmd sweep;
  GapstatsCmd gapstats;
  FitCmd fit;
  EvolveCmd evolve_cmd;
  SpectrumCmd spectrum;
  WalkCmd walk;
  PauliCmd pauli;
  PredictCmd predict_cmd;

  std::map<std::string, std::function<void(const Globals&, Output&)>> runners;
  auto reg = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_globals(*sub, globals);
    cmd.add(*sub);
    runners[name] = [&cmd](const Globals& g, Output& o) { cmd.run(g, o); };
    return sub;
  };
  reg("threshold", "Minimum anneal time reaching a success probability", threshold);
  reg("sweep", "Median success probability under noise at the threshold times", sweep);
  reg("gapstats", "Median minimum gap under noise", gapstats);
  reg("fit", "Scaling-law fit of a CSV column", fit);
  reg("evolve", "Single anneal with instantaneous populations", evolve_cmd);
  reg("spectrum", "Lowest eigenvalues along the anneal", spectrum);
  reg("walk", "Classical random-walk hitting statistics", walk);
  reg("pauli", "Pauli-string expansion of a labelled operator", pauli);
  reg("predict", "First-order perturbation theory against exact diagonalization", predict_cmd);

  std::vector<std::string> raw(argv + 1, argv + argc);
  if (raw.empty()) {
    std::cerr << app.help() << std::endl;
    return fail("usage", "no subcommand given");
  }
  // Fold config file and environment into the arguments of the chosen subcommand.
  CLI::App* chosen = nullptr;
  std::size_t at = 0;
  for (; at < raw.size(); ++at) {
    if (raw[at].rfind("-", 0) == 0) continue;
    try {
      chosen = app.get_subcommand(raw[at]);
    } catch (const CLI::OptionNotFound&) {
      chosen = nullptr;
    }
    break;
  }
  try {
    if (chosen) {
      std::vector<std::string> rest(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(at));
      rest.insert(rest.end(), raw.begin() + static_cast<std::ptrdiff_t>(at) + 1, raw.end());
      const auto assembled = gtqa::cli::assemble_arguments(*chosen, rest);
      raw.assign(1, chosen->get_name());
      raw.insert(raw.end(), assembled.begin(), assembled.end());
    }
    std::vector<std::string> reversed(raw.rbegin(), raw.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    std::cout << (chosen ? chosen->help() : app.help());
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << gtqa::cli::kToolVersion << '\n';
    return 0;
  } catch (const CLI::Success&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  } catch (const gtqa::Error& e) {
    return fail(e.kind(), e.what());
  }

  const std::string name = app.get_subcommands().front()->get_name();
  Output out;
  out.subcommand = name;
  if (globals.out == "-") globals.out.clear();
  out.path = globals.out;
  out.manifest_path = !globals.manifest.empty() ? globals.manifest
                      : !globals.out.empty()    ? globals.out + ".manifest"
                                                : "gtqa-" + name + ".manifest";
  try {
    if (!(globals.alpha > 0.0 && globals.alpha < 0.5)) {
      throw gtqa::InvalidParameter("--alpha must lie in (0, 1/2), got " + gtqa::format_number(globals.alpha));
    }
    runners.at(name)(globals, out);
    if (out.path.empty()) {
      std::cout << out.buffer.str() << std::flush;
    } else {
      std::ofstream f(out.path);
      if (!f) throw gtqa::IoError("cannot write '" + out.path + "'");
      f << out.buffer.str();
    }
    std::vector<std::string> outputs{out.label()};
    outputs.insert(outputs.end(), out.extra_files.begin(), out.extra_files.end());
    std::ofstream mf(out.manifest_path);
    if (!mf) throw gtqa::IoError("cannot write manifest '" + out.manifest_path + "'");
    mf << gtqa::cli::render_manifest(name, gtqa::cli::resolved_options(*app.get_subcommands().front()), outputs);
  } catch (const gtqa::Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}

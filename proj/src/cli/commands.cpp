#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "mixcomp/cli.hpp"
#include "mixcomp/error.hpp"

namespace mixcomp::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxN = 5000;

struct EstimatorFlags {
  double delta = 0.05;
  std::string kernel = "gaussian";
  std::optional<double> h;
  double silverman_constant = 1.06;
  std::string strategy = "pairs";
  std::string threshold = "solved";
  bool undropped = false;
  std::size_t max_partitions = 256;
  std::string spectrum = "factored";
};

struct DataFlags {
  std::string input;
  std::string groups;
  bool header = false;
  int design = 0;
  std::string design_file;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string pair = "0,1";
};

struct OutputFlags {
  std::string out;
  std::optional<unsigned> threads;
  bool full_spectrum = false;
};

void add_estimator_flags(CLI::App* cmd, EstimatorFlags& f) {
  cmd->add_option("--delta", f.delta, "Confidence parameter in (0,1)")->capture_default_str();
  cmd->add_option("--kernel", f.kernel, "Smoothing kernel")
      ->check(CLI::IsMember({"gaussian", "uniform"}))
      ->capture_default_str();
  cmd->add_option("--h", f.h, "Fixed bandwidth for every component (default: Silverman)");
  cmd->add_option("--silverman-constant", f.silverman_constant, "Constant in 1.06 sd N^{-1/6}")
      ->capture_default_str();
  cmd->add_option("--strategy", f.strategy, "Multivariate strategy")
      ->check(CLI::IsMember({"pairs", "bipartitions"}))
      ->capture_default_str();
  cmd->add_option("--threshold", f.threshold, "Threshold form")
      ->check(CLI::IsMember({"solved", "closed_form"}))
      ->capture_default_str();
  cmd->add_flag("--undropped-variance", f.undropped, "Keep the lower-order variance term");
  cmd->add_option("--max-partitions", f.max_partitions, "Cap on enumerated bipartitions")
      ->capture_default_str();
  cmd->add_option("--spectrum", f.spectrum, "Spectrum route")
      ->check(CLI::IsMember({"factored", "dense"}))
      ->capture_default_str();
}

void add_csv_flags(CLI::App* cmd, DataFlags& d, bool required) {
  auto* input = cmd->add_option("input", d.input, "CSV file, one observation per row")->check(CLI::ExistingFile);
  auto* groups = cmd->add_option("--groups", d.groups, "Column groups, e.g. \"0;1\" or \"0-3;4-7:d\"");
  if (required) {
    input->required();
    groups->required();
  }
  cmd->add_flag("--header", d.header, "First row is a header");
}

void add_design_flags(CLI::App* cmd, DataFlags& d) {
  cmd->add_option("--design", d.design, "Builtin design 1-5")->check(CLI::Range(1, 5));
  cmd->add_option("--design-file", d.design_file, "JSON mixture design")->check(CLI::ExistingFile);
  cmd->add_option("--n", d.n, "Sample size");
  cmd->add_option("--seed", d.seed, "RNG seed")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, OutputFlags& o, bool spectra) {
  cmd->add_option("--out", o.out, "Write output here instead of stdout");
  cmd->add_option("--threads", o.threads, "Worker threads (falls back to MIXCOMP_THREADS)")
      ->check(CLI::PositiveNumber);
  if (spectra) cmd->add_flag("--full-spectrum", o.full_spectrum, "Do not truncate spectra at 50 entries");
}

EstimatorConfig make_config(const EstimatorFlags& f) {
  EstimatorConfig cfg;
  cfg.delta = f.delta;
  cfg.kernel = f.kernel == "uniform" ? KernelFamily::uniform : KernelFamily::gaussian;
  if (f.h) {
    cfg.bandwidth = FixedBandwidth{*f.h};
  } else {
    cfg.bandwidth = SilvermanBandwidth{f.silverman_constant};
  }
  cfg.strategy = f.strategy == "bipartitions" ? Strategy::bipartitions : Strategy::pairs;
  cfg.threshold = f.threshold == "closed_form" ? ThresholdForm::closed_form : ThresholdForm::solved;
  cfg.variance = f.undropped ? VarianceTerm::undropped : VarianceTerm::dropped;
  cfg.max_partitions = f.max_partitions;
  cfg.spectrum_method = f.spectrum == "dense" ? SpectrumMethod::dense : SpectrumMethod::factored;
  try {
    validate(cfg);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

unsigned resolve_threads(const OutputFlags& o) {
  if (o.threads) return *o.threads;
  if (const char* env = std::getenv("MIXCOMP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("MIXCOMP_THREADS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Sample load_csv_sample(const DataFlags& d) {
  const auto groups = parse_grouping(d.groups);
  std::ifstream in(d.input);
  if (!in) throw ParseError("cannot open " + d.input);
  const auto table = read_csv(in, d.header);
  return build_sample(table, groups);
}

MixtureDesign load_design(const DataFlags& d) {
  if ((d.design != 0) == !d.design_file.empty()) {
    throw UsageError("give exactly one of --design or --design-file");
  }
  if (d.design != 0) return builtin_design(d.design);
  std::ifstream in(d.design_file);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(d.design_file + ": " + e.what());
  }
  return design_from_json(doc);
}

// Data for the single-pair diagnostics: CSV groups or a simulated design.
PairData load_pair(const DataFlags& d) {
  const bool from_csv = !d.input.empty();
  const bool from_design = d.design != 0 || !d.design_file.empty();
  if (from_csv == from_design) throw UsageError("give either an input CSV or --design/--design-file");
  Sample sample = [&] {
    if (from_csv) {
      if (d.groups.empty()) throw UsageError("--groups is required with an input CSV");
      return load_csv_sample(d);
    }
    if (d.n == 0) throw UsageError("--n is required with --design");
    return generate(load_design(d), d.n, d.seed).sample;
  }();
  const auto comma = d.pair.find(',');
  if (comma == std::string::npos) throw UsageError("--pair takes two component indices, e.g. 0,1");
  std::size_t i = 0, j = 0;
  try {
    i = std::stoul(d.pair.substr(0, comma));
    j = std::stoul(d.pair.substr(comma + 1));
  } catch (const std::exception&) {
    throw UsageError("bad --pair '" + d.pair + "'");
  }
  if (i == j || i >= sample.num_components() || j >= sample.num_components()) {
    throw UsageError("--pair must name two distinct components out of " +
                     std::to_string(sample.num_components()));
  }
  return PairData(sample.component(i), sample.component(j));
}

void check_size(std::size_t n) {
  if (n > kMaxN) {
    throw Error(ErrorCode::TooLarge, "N = " + std::to_string(n) + " exceeds the limit of " +
                                         std::to_string(kMaxN) + " observations");
  }
}

void emit(const std::string& text, const OutputFlags& o, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw UsageError("cannot write " + o.out);
  file << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json singvals_json(const PairData& pair, const EstimatorConfig& cfg, bool full) {
  check_size(pair.size());
  if (pair.size() < 2) throw Error(ErrorCode::InvalidArgument, "need N >= 2");
  const KernelSpec k1{cfg.kernel, select_bandwidth(pair.left, cfg.bandwidth), pair.left.dim()};
  const KernelSpec k2{cfg.kernel, select_bandwidth(pair.right, cfg.bandwidth), pair.right.dim()};
  const auto s = spectrum(pair, k1, k2, cfg.spectrum_method);
  const auto stats = concentration_stats(pair, k1, k2, cfg.delta);
  json doc = {{"command", "singvals"},
              {"n", pair.size()},
              {"h", {k1.h, k2.h}},
              {"delta", cfg.delta},
              {"L_hat", stats.L_hat},
              {"sigma2_hat", stats.sigma2_hat},
              {"tau_solved", solve_threshold(stats, cfg.variance)}};
  if (cfg.delta < 0.5) {
    doc["tau_closed_form"] = closed_form_threshold(analytic_L(k1, k2), 2.0 * stats.sigma2_hat, stats.n, cfg.delta);
  } else {
    doc["tau_closed_form"] = nullptr;
  }
  doc.update(spectrum_to_json(s, full));
  return doc;
}

json pdelta_json(const PairData& pair, std::size_t m0) {
  if (pair.left.dim() != 1 || pair.right.dim() != 1) {
    throw UsageError("pdelta needs two scalar components");
  }
  const auto values = [](const ComponentSample& c) {
    return std::vector<double>(c.values().data(), c.values().data() + c.values().size());
  };
  const auto p1 = equiprobable_edges(values(pair.left), m0);
  const auto p2 = equiprobable_edges(values(pair.right), m0);
  const auto P = build_pdelta_hat(pair, p1, p2);
  json matrix = json::array();
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < P.cols(); ++j) row.push_back(P(i, j));
    matrix.push_back(row);
  }
  json doc = {{"command", "pdelta"},
              {"n", pair.size()},
              {"m0", m0},
              {"edges", {{"left", p1.edges}, {"right", p2.edges}}},
              {"matrix", matrix}};
  doc.update(spectrum_to_json(pdelta_spectrum(P), true));
  return doc;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimate the number of mixture components from multivariate data"};
  app.name("mixcomp");
  app.require_subcommand(1);
  // "--h" is the bandwidth flag, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");

  EstimatorFlags est_flags;
  DataFlags data;
  OutputFlags output;
  std::size_t reps = 0;
  std::size_t m0 = 3;
  bool csv_header = false;
  bool csv_labels = false;

  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate M from a CSV file");
  add_csv_flags(estimate_cmd, data, true);
  add_estimator_flags(estimate_cmd, est_flags);
  add_output_flags(estimate_cmd, output, true);

  auto* simulate_cmd = app.add_subcommand("simulate", "Draw a sample from a mixture design as CSV");
  add_design_flags(simulate_cmd, data);
  simulate_cmd->add_flag("--header", csv_header, "Write a header row");
  simulate_cmd->add_flag("--labels", csv_labels, "Append the latent label as a last column");
  add_output_flags(simulate_cmd, output, false);

  auto* mc_cmd = app.add_subcommand("montecarlo", "Selection frequencies over seeded replicates");
  add_design_flags(mc_cmd, data);
  mc_cmd->add_option("--reps", reps, "Number of replicates")->required();
  add_estimator_flags(mc_cmd, est_flags);
  add_output_flags(mc_cmd, output, false);

  auto* sv_cmd = app.add_subcommand("singvals", "Spectrum, tail norms and thresholds of one pair");
  add_csv_flags(sv_cmd, data, false);
  add_design_flags(sv_cmd, data);
  sv_cmd->add_option("--pair", data.pair, "Two component indices")->capture_default_str();
  add_estimator_flags(sv_cmd, est_flags);
  add_output_flags(sv_cmd, output, true);

  auto* pd_cmd = app.add_subcommand("pdelta", "Cell-probability matrix on equiprobable partitions");
  add_csv_flags(pd_cmd, data, false);
  add_design_flags(pd_cmd, data);
  pd_cmd->add_option("--pair", data.pair, "Two component indices")->capture_default_str();
  pd_cmd->add_option("--m0", m0, "Cells per axis")->capture_default_str();
  add_output_flags(pd_cmd, output, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (estimate_cmd->parsed()) {
      const auto cfg = make_config(est_flags);
      const auto sample = load_csv_sample(data);
      check_size(sample.size());
      const auto est = estimate(sample, cfg);
      emit(dump(estimate_to_json(est, cfg, sample.size(), output.full_spectrum)), output, out);
    } else if (simulate_cmd->parsed()) {
      if (data.n == 0) throw UsageError("--n must be >= 1");
      const auto generated = generate(load_design(data), data.n, data.seed);
      std::ostringstream csv;
      write_csv(csv, generated, csv_header, csv_labels);
      emit(csv.str(), output, out);
    } else if (mc_cmd->parsed()) {
      if (reps == 0) throw UsageError("--reps must be >= 1");
      if (data.n < 2) throw UsageError("--n must be >= 2");
      const auto cfg = make_config(est_flags);
      const auto design = load_design(data);
      check_size(data.n);
      const auto table = run_montecarlo(design, data.n, reps, cfg, data.seed, resolve_threads(output));
      emit(dump(frequency_table_to_json(table)), output, out);
    } else if (sv_cmd->parsed()) {
      const auto cfg = make_config(est_flags);
      emit(dump(singvals_json(load_pair(data), cfg, output.full_spectrum)), output, out);
    } else if (pd_cmd->parsed()) {
      emit(dump(pdelta_json(load_pair(data), m0)), output, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::BadDesign ? kParse : kEstimation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kEstimation;
  }
  return kOk;
}

}  // namespace mixcomp::cli

// Command-line front end: generate states, sweep entropies, fit the
// entanglement adjacency matrix, emit contours, run the CFT checks.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "eamkit/cft.hpp"
#include "eamkit/contour.hpp"
#include "eamkit/eamfit.hpp"
#include "eamkit/entropy.hpp"
#include "eamkit/errors.hpp"
#include "eamkit/io.hpp"
#include "eamkit/states.hpp"

namespace {

using namespace eamkit;

constexpr int kExitUsage = 1;
constexpr int kExitComputation = 2;
constexpr int kExitIo = 3;

struct ModelOpts {
  std::string model;
  int n = 0;
  double dimerized = 0.0;
  double aniso = 1.0;
  std::string boundary = "periodic";
  int filling = -1;              // freefermion particles; -1 = half filling
  std::string matching;          // "0-1,2-3"
  std::string engine = "auto";
  int threads = 0;
  int seed = 0;                  // reserved; the pipeline is deterministic
};

int statevector_cap() {
  if (const char* env = std::getenv("EAMKIT_MAX_N")) {
    const int cap = std::atoi(env);
    if (cap > 0) return cap;
  }
  return 14;
}

constexpr int kFreefermionCap = 20;

void add_model_options(CLI::App* cmd, ModelOpts& opts) {
  cmd->add_option("--model", opts.model, "dimer|rainbow|ghz|freefermion|xxz")
      ->required()
      ->check(CLI::IsMember({"dimer", "rainbow", "ghz", "freefermion", "xxz"}));
  cmd->add_option("--n", opts.n, "number of sites")->required();
  cmd->add_option("--dimerized", opts.dimerized,
                  "bond alternation delta (freefermion hopping or spin-chain bonds)");
  cmd->add_option("--aniso", opts.aniso, "XXZ anisotropy Delta (default 1)");
  cmd->add_option("--boundary", opts.boundary, "xxz boundary (default periodic)")
      ->check(CLI::IsMember({"open", "periodic"}));
  cmd->add_option("--filling", opts.filling,
                  "freefermion particle number (default N/2)");
  cmd->add_option("--matching", opts.matching,
                  "dimer pairing like 0-1,2-3 (default nearest neighbor)");
  cmd->add_option("--engine", opts.engine, "auto|statevector|freefermion")
      ->check(CLI::IsMember({"auto", "statevector", "freefermion"}));
  cmd->add_option("--threads", opts.threads, "sweep parallel width (default all)");
  cmd->add_option("--seed", opts.seed,
                  "reserved; every pipeline stage is deterministic");
}

Matching parse_matching(const std::string& text, int n) {
  if (text.empty()) return nearest_neighbor_matching(n);
  Matching matching;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto dash = token.find('-');
    if (dash == std::string::npos)
      throw std::invalid_argument("bad --matching entry '" + token + "'");
    matching.pairs.emplace_back(std::atoi(token.substr(0, dash).c_str()),
                                std::atoi(token.substr(dash + 1).c_str()));
  }
  return matching;
}

struct BuiltModel {
  std::string engine;      // statevector | freefermion
  std::string descriptor;
  std::optional<PureState> state;
  std::optional<FreeFermionGround> ffg;
};

std::string format_param(double x) { return format_sig12(x); }

BuiltModel build_model(const ModelOpts& opts) {
  if (opts.n < 2) throw std::invalid_argument("--n must be at least 2");

  BuiltModel built;
  built.engine = opts.engine;
  if (built.engine == "auto")
    built.engine = opts.model == "freefermion" ? "freefermion" : "statevector";
  if (built.engine == "freefermion" && opts.model != "freefermion")
    throw std::invalid_argument("engine=freefermion requires --model freefermion");
  if (built.engine == "statevector" && opts.model == "freefermion")
    throw std::invalid_argument("the freefermion model has no statevector engine");

  if (built.engine == "statevector" && opts.n > statevector_cap())
    throw std::invalid_argument("statevector models are capped at n = " +
                                std::to_string(statevector_cap()) +
                                " sites (override with EAMKIT_MAX_N)");
  if (built.engine == "freefermion" && opts.n > kFreefermionCap)
    throw std::invalid_argument("freefermion models are capped at n = " +
                                std::to_string(kFreefermionCap) + " sites");

  std::ostringstream desc;
  if (opts.model == "dimer") {
    const Matching matching = parse_matching(opts.matching, opts.n);
    built.state = build_dimer(opts.n, matching);
    desc << "dimer:n=" << opts.n << ",matching=";
    for (std::size_t k = 0; k < matching.pairs.size(); ++k) {
      if (k) desc << ';';
      desc << matching.pairs[k].first << '-' << matching.pairs[k].second;
    }
  } else if (opts.model == "rainbow") {
    built.state = build_rainbow(opts.n);
    desc << "rainbow:n=" << opts.n;
  } else if (opts.model == "ghz") {
    built.state = build_ghz(opts.n);
    desc << "ghz:n=" << opts.n;
  } else if (opts.model == "xxz") {
    XxzSpec spec;
    spec.n_sites = opts.n;
    spec.delta = opts.aniso;
    spec.boundary = opts.boundary == "open" ? Boundary::open : Boundary::periodic;
    spec.dimerization = opts.dimerized;
    spec.max_sites = statevector_cap();
    XxzGroundState ground = xxz_ground_state(spec);
    if (ground.degenerate)
      std::cerr << "warning: XXZ sector ground state is degenerate (gap "
                << ground.sector_gap << "); using the solver's lowest vector\n";
    built.state = std::move(ground.state);
    desc << "xxz:n=" << opts.n << ",delta=" << format_param(opts.aniso)
         << ",boundary=" << opts.boundary
         << ",dimerization=" << format_param(opts.dimerized);
  } else {  // freefermion
    const HoppingMatrix hopping = dimerized_hopping(opts.n, opts.dimerized);
    const int particles = opts.filling >= 0 ? opts.filling : opts.n / 2;
    built.ffg = freefermion_ground(hopping, particles);
    desc << "freefermion:n=" << opts.n
         << ",dimerization=" << format_param(opts.dimerized)
         << ",filling=" << particles;
  }
  built.descriptor = desc.str();
  return built;
}

SweepOptions sweep_options(const ModelOpts& opts) {
  SweepOptions sweep;
  sweep.threads = opts.threads;
  sweep.max_n = statevector_cap() > 14 ? statevector_cap() : 0;
  return sweep;
}

EntropyTable model_table(const ModelOpts& opts, const BuiltModel& built) {
  EntropyTable table = built.state ? all_entropies(*built.state, sweep_options(opts))
                                   : all_entropies(*built.ffg, sweep_options(opts));
  table.model = built.descriptor;
  return table;
}

bool ends_with(const std::string& text, const std::string& suffix) {
  return text.size() >= suffix.size() &&
         text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string sibling_path(const std::string& path, const std::string& tag) {
  // table.csv -> table<tag>.csv
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

double display_value(double nats, bool bits) {
  return bits ? nats / std::log(2.0) : nats;
}

// ---------------------------------------------------------------------------

struct EntropiesArgs {
  ModelOpts model;
  std::string out = "entropies.csv";
  std::string format;  // csv|json, default from extension
  bool no_timestamp = false;
  bool bits = false;
};

void run_entropies(const EntropiesArgs& args) {
  const BuiltModel built = build_model(args.model);
  const EntropyTable table = model_table(args.model, built);

  std::string format = args.format;
  if (format.empty()) format = ends_with(args.out, ".json") ? "json" : "csv";
  if (format == "json")
    write_entropy_table_json(table, args.out);
  else
    write_entropy_table_csv(table, args.out, !args.no_timestamp);

  double mean = 0.0;
  for (const double s : table.entropies) mean += s;
  mean /= static_cast<double>(table.size());
  const char* unit = args.bits ? "bits" : "nats";
  std::cout << "wrote " << args.out << ": " << table.size() << " masks, mean entropy "
            << format_sig12(display_value(mean, args.bits)) << ' ' << unit << '\n';
}

struct FitArgs {
  ModelOpts model;
  std::string table_path;
  std::string out = "eam.json";
  std::string report_path;
  std::string csv_path;
  bool offset = false;
  bool no_timestamp = false;
  bool bits = false;
  bool have_model = false;
};

void run_fit(const FitArgs& args) {
  EntropyTable table;
  if (!args.table_path.empty()) {
    table = read_entropy_table(args.table_path);
  } else if (args.have_model) {
    const BuiltModel built = build_model(args.model);
    table = model_table(args.model, built);
  } else {
    throw std::invalid_argument("fit needs either --model or --table");
  }

  SweepOptions opts;
  opts.threads = args.model.threads;
  const auto [eam, report] = fit_eam(table, args.offset, opts);

  write_eam_json(eam, args.out);
  const std::string report_path =
      args.report_path.empty() ? sibling_path(args.out, ".report") : args.report_path;
  write_fit_report_json(report, report_path);
  if (!args.csv_path.empty()) write_eam_csv(eam, args.csv_path, !args.no_timestamp);

  const char* unit = args.bits ? "bits" : "nats";
  std::cout << "wrote " << args.out << " (report " << report_path << "): error "
            << format_sig12(display_value(report.error, args.bits)) << ' ' << unit
            << ", max residual "
            << format_sig12(display_value(report.max_residual, args.bits)) << ' '
            << unit;
  if (eam.s0)
    std::cout << ", s0 " << format_sig12(display_value(*eam.s0, args.bits)) << ' '
              << unit;
  if (report.rank_deficient) std::cout << " [rank deficient, minimum-norm]";
  std::cout << '\n';
}

struct ContourArgs {
  ModelOpts model;
  std::string route = "eam";  // eam|freefermion|both
  std::string out = "contour.csv";
  std::uint64_t mask = 0;
  bool half_chain = false;
  bool offset = false;
  bool no_timestamp = false;
};

void run_contour(const ContourArgs& args) {
  if (args.route != "eam" && args.model.model != "freefermion")
    throw std::invalid_argument("route=" + args.route +
                                " requires --model freefermion");

  const BuiltModel built = build_model(args.model);
  const int n = args.model.n;

  Mask mask = args.mask;
  if (args.half_chain || mask == 0) mask = (Mask{1} << (n / 2)) - 1;
  if (!mask_valid(mask, n) || mask == 0 || mask == full_mask(n))
    throw std::invalid_argument("contour mask must be a nontrivial subset");

  std::optional<ContourVector> eam_contour;
  std::optional<ContourVector> ff_contour;
  if (args.route == "eam" || args.route == "both") {
    const EntropyTable table = model_table(args.model, built);
    SweepOptions opts;
    opts.threads = args.model.threads;
    const auto [eam, report] = fit_eam(table, args.offset, opts);
    eam_contour = contour_from_eam(eam, mask);
  }
  if (args.route == "freefermion" || args.route == "both")
    ff_contour = contour_freefermion(*built.ffg, mask);

  if (args.route == "both") {
    const std::string eam_path = sibling_path(args.out, ".eam");
    const std::string ff_path = sibling_path(args.out, ".freefermion");
    write_contour_csv(*eam_contour, "eam", built.descriptor, n, eam_path,
                      !args.no_timestamp);
    write_contour_csv(*ff_contour, "freefermion", built.descriptor, n, ff_path,
                      !args.no_timestamp);
    const ContourComparison cmp = compare_contours(*eam_contour, *ff_contour);
    std::filesystem::path cmp_path(args.out);
    cmp_path.replace_extension();
    write_comparison_json(cmp, mask, "eam", "freefermion",
                          cmp_path.string() + ".compare.json");
    std::cout << "wrote " << eam_path << ", " << ff_path << ": pearson "
              << format_sig12(cmp.pearson) << ", L1 " << format_sig12(cmp.l1)
              << '\n';
  } else {
    const ContourVector& contour =
        args.route == "eam" ? *eam_contour : *ff_contour;
    write_contour_csv(contour, args.route, built.descriptor, n, args.out,
                      !args.no_timestamp);
    std::cout << "wrote " << args.out << ": sum "
              << format_sig12(contour.sum()) << " nats over "
              << contour.sites.size() << " sites\n";
  }
}

struct CftArgs {
  double u = 0.0, v = 0.0, eps = 0.0, c = 1.0;
  bool have_u = false, have_v = false, have_eps = false;
  bool lattice = false;
  int n = 16;
  int min_sep = 2, max_sep = 6;
  double dimerized = 0.0;
  int threads = 0;
  std::string out;
};

void run_cft_check(const CftArgs& args) {
  nlohmann::json doc;
  if (args.lattice) {
    if (args.n < 4 || args.n > kFreefermionCap)
      throw std::invalid_argument("--lattice needs 4 <= n <= " +
                                  std::to_string(kFreefermionCap));
    const HoppingMatrix hopping = dimerized_hopping(args.n, args.dimerized);
    const FreeFermionGround ground = freefermion_ground(hopping, args.n / 2);
    SweepOptions opts;
    opts.threads = args.threads;
    EntropyTable table = all_entropies(ground, opts);
    const auto [eam, report] = fit_eam(table, false, opts);
    const PowerLawFit fit = power_law_exponent(eam, args.min_sep, args.max_sep);
    doc["separations"] = fit.separations;
    nlohmann::json weights = nlohmann::json::array();
    for (const double w : fit.mean_weights) weights.push_back(round_sig12(w));
    doc["mean_weights"] = std::move(weights);
    doc["exponent"] = round_sig12(fit.exponent);
    doc["amplitude"] = round_sig12(fit.amplitude);
    doc["r2"] = round_sig12(fit.r_squared);
  } else {
    if (!args.have_u || !args.have_v || !args.have_eps)
      throw std::invalid_argument("interval mode needs --u, --v and --eps");
    const IntervalSpec spec{args.u, args.v, args.eps, args.c};
    const double integral = interval_entropy_integral(spec);
    const double closed = interval_entropy_cft(spec);
    const double expected_gap =
        spec.c / 3.0 * std::log((spec.v - spec.u) / (spec.v - spec.u - spec.epsilon));
    doc["integral"] = round_sig12(integral);
    doc["closed_form"] = round_sig12(closed);
    doc["gap"] = round_sig12(closed - integral);
    doc["expected_gap"] = round_sig12(expected_gap);
  }
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  if (!args.out.empty()) atomic_write(args.out, text);
}

struct StateDumpArgs {
  ModelOpts model;
  std::string out = "state.csv";
  bool no_timestamp = false;
};

void run_state_dump(const StateDumpArgs& args) {
  if (args.model.model == "freefermion")
    throw std::invalid_argument("state-dump needs a statevector model");
  const BuiltModel built = build_model(args.model);
  write_state_csv(*built.state, built.descriptor, args.out, !args.no_timestamp);
  std::cout << "wrote " << args.out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eamkit: entanglement adjacency matrices, contours and CFT checks"};
  app.require_subcommand(1);

  EntropiesArgs entropies_args;
  auto* entropies = app.add_subcommand("entropies",
                                       "sweep all 2^N block entropies to a file");
  add_model_options(entropies, entropies_args.model);
  entropies->add_option("--out", entropies_args.out, "output path");
  entropies->add_option("--format", entropies_args.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  entropies->add_flag("--no-timestamp", entropies_args.no_timestamp,
                      "omit the generated= header");
  entropies->add_flag("--bits", entropies_args.bits,
                      "print the summary in bits (files stay in nats)");
  entropies->callback([&] { run_entropies(entropies_args); });

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "least-squares entanglement adjacency fit");
  add_model_options(fit, fit_args.model);
  fit->get_option("--model")->required(false);
  fit->get_option("--n")->required(false);
  fit->add_option("--table", fit_args.table_path,
                  "read an entropy table instead of building a model");
  fit->add_option("--out", fit_args.out, "EAM JSON output path");
  fit->add_option("--report", fit_args.report_path,
                  "fit report path (default <out>.report.json)");
  fit->add_option("--csv", fit_args.csv_path, "also export the dense matrix CSV");
  fit->add_flag("--offset", fit_args.offset, "fit the constant offset s0");
  fit->add_flag("--no-timestamp", fit_args.no_timestamp,
                "omit generated= headers in CSV exports");
  fit->add_flag("--bits", fit_args.bits,
                "print the summary in bits (files stay in nats)");
  fit->callback([&] {
    fit_args.have_model = fit->count("--model") > 0;
    if (fit_args.have_model && !fit_args.table_path.empty())
      throw CLI::ValidationError("fit", "--model and --table are exclusive");
    if (fit_args.have_model && fit->count("--n") == 0)
      throw CLI::ValidationError("fit", "--model requires --n");
    run_fit(fit_args);
  });

  ContourArgs contour_args;
  auto* contour = app.add_subcommand("contour", "per-site entanglement contour");
  add_model_options(contour, contour_args.model);
  contour->add_option("--route", contour_args.route, "eam|freefermion|both")
      ->check(CLI::IsMember({"eam", "freefermion", "both"}));
  contour->add_option("--mask", contour_args.mask, "block mask (decimal)");
  contour->add_flag("--half-chain", contour_args.half_chain,
                    "use the block {0..N/2-1} (default when --mask is absent)");
  contour->add_flag("--offset", contour_args.offset, "fit s0 for the eam route");
  contour->add_option("--out", contour_args.out, "output path (routes add suffixes)");
  contour->add_flag("--no-timestamp", contour_args.no_timestamp,
                    "omit the generated= header");
  contour->callback([&] { run_contour(contour_args); });

  CftArgs cft_args;
  auto* cft = app.add_subcommand("cft-check",
                                 "interval entropy integral / lattice power law");
  auto* opt_u = cft->add_option("--u", cft_args.u, "interval left endpoint");
  auto* opt_v = cft->add_option("--v", cft_args.v, "interval right endpoint");
  auto* opt_eps = cft->add_option("--eps", cft_args.eps, "UV cutoff");
  cft->add_option("--c", cft_args.c, "central charge (default 1)");
  cft->add_flag("--lattice", cft_args.lattice, "fit the lattice power law instead");
  cft->add_option("--n", cft_args.n, "lattice sites (default 16)");
  cft->add_option("--min-sep", cft_args.min_sep, "smallest separation (default 2)");
  cft->add_option("--max-sep", cft_args.max_sep, "largest separation (default 6)");
  cft->add_option("--dimerized", cft_args.dimerized, "lattice bond alternation");
  cft->add_option("--threads", cft_args.threads, "sweep parallel width");
  cft->add_option("--out", cft_args.out, "also write the JSON record here");
  cft->callback([&] {
    cft_args.have_u = opt_u->count() > 0;
    cft_args.have_v = opt_v->count() > 0;
    cft_args.have_eps = opt_eps->count() > 0;
    run_cft_check(cft_args);
  });

  StateDumpArgs dump_args;
  auto* dump = app.add_subcommand("state-dump", "write amplitudes as CSV");
  add_model_options(dump, dump_args.model);
  dump->add_option("--out", dump_args.out, "output path");
  dump->add_flag("--no-timestamp", dump_args.no_timestamp,
                 "omit the generated= header");
  dump->callback([&] { run_state_dump(dump_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ComputationError& e) {
    std::cerr << "computation error: " << e.what() << '\n';
    return kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return 0;
}

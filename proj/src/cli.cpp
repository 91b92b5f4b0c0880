#include "srip/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "srip/dict_io.hpp"
#include "srip/error.hpp"
#include "srip/parallel.hpp"
#include "srip/paths.hpp"
#include "srip/report.hpp"
#include "srip/spectra.hpp"

namespace srip {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string command;
  std::string kind = "heisenberg";
  std::uint32_t p = 0;
  std::string in;
  std::string out;
  std::string json_out;
  std::string eigen_csv;
  std::string moments_csv_out;
  std::string srip_csv_out;
  std::string classes_csv_out;
  std::string estimates_csv_out;
  double epsilon = 0.3;
  double e = 0.1;
  unsigned kmax = 6;
  std::size_t trials = 200;
  std::uint64_t seed = 42;
  std::size_t n = 0;  // 0: floor(p^(1 - epsilon))
  std::vector<double> thresholds;
  std::size_t subsample_count = 0;
  std::uint64_t subsample_seed = 42;
  bool allow_full = false;
  std::size_t sample_pairs = 0;
  unsigned k = 8;
  std::vector<std::uint32_t> ladder;
  unsigned threads = 0;
};

void invalid(const std::string& msg) { throw Error(Errc::InvalidArgument, msg); }

unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("SRIP_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) invalid(std::string("SRIP_THREADS must be a positive integer, got '") + env + "'");
    return static_cast<unsigned>(v);
  }
  return 0;
}

bool uses_dictionary(const std::string& cmd) {
  return cmd == "build" || cmd == "coherence" || cmd == "spectrum" || cmd == "srip" || cmd == "moments";
}

std::size_t expected_atoms(DictionaryKind kind, std::uint32_t p, const RunConfig& c) {
  const std::size_t pp = p;
  switch (kind) {
    case DictionaryKind::heisenberg: return (pp + 1) * pp;
    case DictionaryKind::oscillator: return expected_nonsplit_torus_count(p) * pp;
    case DictionaryKind::extended_oscillator: {
      const std::size_t translations = c.subsample_count > 0 ? c.subsample_count : pp * pp;
      return expected_nonsplit_torus_count(p) * translations * pp;
    }
  }
  return 0;
}

// Everything that can be checked without building anything.
void validate(const RunConfig& c) {
  if (uses_dictionary(c.command)) {
    if (c.in.empty()) {
      if (c.p == 0) invalid("either --in or --p is required");
      require_field_prime(c.p);
      const DictionaryKind kind = parse_kind(c.kind);
      if (kind == DictionaryKind::extended_oscillator) {
        if (c.subsample_count == 0 && c.p > 5 && !c.allow_full) {
          invalid("extended_oscillator above p = 5 needs --subsample-count or --allow-full");
        }
        if (c.subsample_count > static_cast<std::size_t>(c.p) * c.p) {
          invalid("--subsample-count exceeds the p^2 available translations");
        }
      }
      if (c.command != "build" && c.command != "coherence") {
        const std::size_t n = c.n > 0 ? c.n : support_size(c.p, c.epsilon);
        if (n > expected_atoms(kind, c.p, c)) {
          throw Error(Errc::NTooLarge, "n = " + std::to_string(n) + " exceeds the dictionary size");
        }
      }
    } else if (!fs::exists(c.in)) {
      throw Error(Errc::IoError, "input file " + c.in + " does not exist");
    }
  }
  if (c.command == "build" && c.out.empty()) invalid("build needs --out");
  if (!(c.epsilon >= 0.0 && c.epsilon < 1.0)) invalid("--epsilon must lie in [0, 1)");
  if (!(c.e > 0.0)) invalid("--e must be positive");
  if (c.trials < 1) invalid("--trials must be >= 1");
  if (c.kmax < 1 || c.kmax > 12) invalid("--kmax must lie in [1, 12]");
  if (c.command == "srip" && c.n == 1) invalid("srip needs n >= 2");
  if (c.command == "paths-verify") {
    if (c.k < 2) invalid("--k must be at least 2");
    if (c.k > kMaxPathLength) {
      throw Error(Errc::BudgetExceeded, "--k exceeds the path-length budget of " + std::to_string(kMaxPathLength));
    }
    for (const auto p : c.ladder) require_field_prime(p);
    if (!c.estimates_csv_out.empty() && c.ladder.empty()) invalid("--estimates-csv needs --ladder");
  }
}

Dictionary obtain_dictionary(const RunConfig& c) {
  if (!c.in.empty()) return load_dictionary(c.in);
  switch (parse_kind(c.kind)) {
    case DictionaryKind::heisenberg: return build_heisenberg_dict(c.p);
    case DictionaryKind::oscillator: return build_oscillator_dict(c.p);
    case DictionaryKind::extended_oscillator: {
      ExtendedOptions opt;
      if (c.subsample_count > 0) opt.subsample = TranslationSubsample{c.subsample_count, c.subsample_seed};
      opt.allow_full = c.allow_full;
      return build_extended_oscillator_dict(c.p, opt);
    }
  }
  throw Error(Errc::InvalidArgument, "unknown kind");
}

void emit_json(const RunConfig& c, const json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (c.json_out.empty()) {
    out << text;
  } else {
    write_file_atomic(c.json_out, text);
  }
}

void maybe_write(const std::string& path, const std::string& contents) {
  if (!path.empty()) write_file_atomic(path, contents);
}

json source_json(const RunConfig& c, const Dictionary& d) {
  json j{{"p", d.p()}, {"kind", kind_name(d.kind())}, {"atoms", d.atom_count()}};
  if (!c.in.empty()) j["in"] = c.in;
  return j;
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_build(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Dictionary d = obtain_dictionary(c);
  save_dictionary(c.out, d);
  json cfg{{"kind", c.kind}, {"p", c.p}, {"out", c.out}};
  if (c.subsample_count > 0) cfg["subsample"] = {{"count", c.subsample_count}, {"seed", c.subsample_seed}};
  json result{{"p", d.p()}, {"kind", kind_name(d.kind())}, {"mu", d.mu()}, {"bases", d.basis_count()},
              {"atoms", d.atom_count()}};
  emit_json(c, envelope("build", c.subsample_seed, cfg, result, elapsed(start)), out);
  return kExitOk;
}

int cmd_coherence(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const Dictionary d = obtain_dictionary(c);
  const CoherenceReport r = c.sample_pairs > 0 ? sampled_coherence_report(d, c.sample_pairs, c.seed)
                                               : coherence_report(d);
  json cfg = source_json(c, d);
  cfg["sample_pairs"] = c.sample_pairs;
  emit_json(c, envelope("coherence", c.seed, cfg, to_json(r), elapsed(start)), out);
  if (!r.pass) {
    err << "coherence violation: max sqrt(p)|<phi,varphi>| = " << format_double(r.cross_max) << " exceeds mu = "
        << format_double(r.mu) << "\n";
    return kExitContract;
  }
  return kExitOk;
}

std::optional<std::size_t> n_override(const RunConfig& c) {
  return c.n > 0 ? std::optional<std::size_t>(c.n) : std::nullopt;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Dictionary d = obtain_dictionary(c);
  SpectrumConfig sc;
  sc.epsilon = c.epsilon;
  sc.e = c.e;
  sc.kmax = c.kmax;
  sc.trials = c.trials;
  sc.seed = c.seed;
  sc.n = n_override(c);
  sc.extra_thresholds = c.thresholds;
  const SpectralReport r = spectral_report(d, sc);
  json cfg = config_json(sc);
  cfg["source"] = source_json(c, d);
  maybe_write(c.eigen_csv, eigenvalues_csv(r.pooled_eigenvalues));
  maybe_write(c.moments_csv_out, moments_csv(r.moments));
  maybe_write(c.srip_csv_out, srip_csv(r.srip));
  emit_json(c, envelope("spectrum", c.seed, cfg, to_json(r), elapsed(start)), out);
  return kExitOk;
}

int cmd_srip(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Dictionary d = obtain_dictionary(c);
  SripConfig sc;
  sc.epsilon = c.epsilon;
  sc.e = c.e;
  sc.trials = c.trials;
  sc.seed = c.seed;
  sc.n = n_override(c);
  sc.extra_thresholds = c.thresholds;
  const SripResult r = srip_probability(d, sc);
  json cfg = config_json(sc);
  cfg["source"] = source_json(c, d);
  maybe_write(c.srip_csv_out, srip_csv(r.rows));
  emit_json(c, envelope("srip", c.seed, cfg, to_json(r), elapsed(start)), out);
  return kExitOk;
}

int cmd_moments(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Dictionary d = obtain_dictionary(c);
  MomentConfig mc;
  mc.epsilon = c.epsilon;
  mc.kmax = c.kmax;
  mc.trials = c.trials;
  mc.seed = c.seed;
  mc.n = n_override(c);
  const MomentStats r = moment_stats(d, mc);
  json cfg = config_json(mc);
  cfg["source"] = source_json(c, d);
  maybe_write(c.moments_csv_out, moments_csv(r.rows));
  emit_json(c, envelope("moments", c.seed, cfg, to_json(r), elapsed(start)), out);
  return kExitOk;
}

int cmd_paths_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  json lengths = json::array();
  std::vector<PathClass> last;
  for (unsigned len = 2; len <= c.k; ++len) {
    auto classes = enumerate_classes(len);
    std::size_t trees = 0;
    bool roundtrip = true;
    for (const auto& pc : classes) {
      if (!pc.is_tree) continue;
      ++trees;
      roundtrip = roundtrip && from_dyck(to_dyck(pc)) == pc;
    }
    json row{{"k", len}, {"classes", classes.size()}, {"trees", trees}, {"dyck_roundtrip", roundtrip}};
    if (len % 2 == 0) {
      const auto expected = catalan(len / 2);
      row["catalan"] = expected;
      ok = ok && trees == expected;
    } else {
      ok = ok && trees == 0;
    }
    ok = ok && roundtrip;
    lengths.push_back(row);
    if (len == c.k) last = std::move(classes);
  }
  maybe_write(c.classes_csv_out, classes_csv(last));

  json result{{"lengths", lengths}, {"pass", ok}};
  json cfg{{"k", c.k}};
  if (!c.ladder.empty()) {
    std::vector<Dictionary> dicts;
    for (const auto p : c.ladder) dicts.push_back(build_heisenberg_dict(p));
    std::vector<const Dictionary*> ptrs;
    for (const auto& d : dicts) ptrs.push_back(&d);
    std::vector<PathClass> classes;
    for (unsigned len = 2; len <= std::min(4u, c.k); ++len) {
      for (auto& pc : enumerate_classes(len)) classes.push_back(pc);
    }
    const auto table = fundamental_estimate_table(ptrs, classes, c.epsilon);
    maybe_write(c.estimates_csv_out, estimates_csv(table));
    json est = json::array();
    for (const auto& tr : table) {
      json vals = json::array();
      for (const auto& r : tr.rows) vals.push_back({{"p", r.p}, {"n", r.n}, {"re", r.value.real()}, {"im", r.value.imag()}});
      est.push_back({{"class", tr.pc.to_string()}, {"is_tree", tr.pc.is_tree}, {"values", vals},
                     {"monotone_toward_limit", tr.monotone_toward_limit}});
    }
    result["estimates"] = est;
    cfg["ladder"] = c.ladder;
    cfg["epsilon"] = c.epsilon;
  }
  emit_json(c, envelope("paths-verify", c.seed, cfg, result, elapsed(start)), out);
  if (!ok) {
    err << "paths-verify: tree counts or Dyck round trip disagree with the Catalan numbers\n";
    return kExitContract;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherence and statistical RIP experiments for Heisenberg and oscillator dictionaries", "srip"};
  app.require_subcommand(1);
  RunConfig c;
  app.add_option("--threads", c.threads, "Worker cap (default: SRIP_THREADS, else all cores)");

  auto dict_flags = [&c](CLI::App* s) {
    s->add_option("--kind", c.kind, "heisenberg | oscillator | extended_oscillator");
    s->add_option("--p", c.p, "Prime field size, p >= 5");
    s->add_option("--in", c.in, "Load the dictionary from a file instead of building it");
    s->add_option("--subsample-count", c.subsample_count, "Extended dictionary: translations kept");
    s->add_option("--subsample-seed", c.subsample_seed, "Extended dictionary: subsample seed");
    s->add_flag("--allow-full", c.allow_full, "Extended dictionary: permit all p^2 translations");
    s->add_option("--threads", c.threads, "Worker cap (default: SRIP_THREADS, else all cores)");
  };
  auto stat_flags = [&c](CLI::App* s) {
    s->add_option("--epsilon", c.epsilon, "Support exponent, n = floor(p^(1-epsilon))");
    s->add_option("--trials", c.trials, "Monte Carlo trials");
    s->add_option("--seed", c.seed, "Base seed; trial t uses seed + t");
    s->add_option("--n", c.n, "Support size override");
    s->add_option("--json", c.json_out, "Report path (default: stdout)");
  };

  auto* build = app.add_subcommand("build", "Build a dictionary and save it");
  dict_flags(build);
  build->add_option("--out", c.out, "Output dictionary file")->required();
  build->add_option("--json", c.json_out, "Report path (default: stdout)");

  auto* coherence = app.add_subcommand("coherence", "Scan cross-basis inner products");
  dict_flags(coherence);
  coherence->add_option("--sample-pairs", c.sample_pairs, "Sample this many pairs instead of scanning all");
  coherence->add_option("--seed", c.seed, "Pair-sampling seed");
  coherence->add_option("--json", c.json_out, "Report path (default: stdout)");

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues, moments, SRIP tails and KS distance");
  dict_flags(spectrum);
  stat_flags(spectrum);
  spectrum->add_option("--e", c.e, "Slack in the (n/p)^(1/(2+e)) threshold");
  spectrum->add_option("--kmax", c.kmax, "Highest moment");
  spectrum->add_option("--threshold", c.thresholds, "Extra deviation thresholds");
  spectrum->add_option("--eigen-csv", c.eigen_csv, "Pooled eigenvalues of E");
  spectrum->add_option("--moments-csv", c.moments_csv_out, "Moment table");
  spectrum->add_option("--srip-csv", c.srip_csv_out, "Tail-frequency table");

  auto* srip = app.add_subcommand("srip", "Tail frequency of ||G - I||");
  dict_flags(srip);
  stat_flags(srip);
  srip->add_option("--e", c.e, "Slack in the (n/p)^(1/(2+e)) threshold");
  srip->add_option("--threshold", c.thresholds, "Extra deviation thresholds");
  srip->add_option("--csv", c.srip_csv_out, "Tail-frequency table");

  auto* moments = app.add_subcommand("moments", "Moments of the normalized Gram error");
  dict_flags(moments);
  stat_flags(moments);
  moments->add_option("--kmax", c.kmax, "Highest moment");
  moments->add_option("--csv", c.moments_csv_out, "Moment table");

  auto* paths = app.add_subcommand("paths-verify", "Path classes, tree counts and Dyck words");
  paths->add_option("--k", c.k, "Largest path length (<= 10)");
  paths->add_option("--classes-csv", c.classes_csv_out, "Class table for length k");
  paths->add_option("--ladder", c.ladder, "Primes for the D_H estimate table")->delimiter(',');
  paths->add_option("--epsilon", c.epsilon, "Support exponent for the estimate table");
  paths->add_option("--estimates-csv", c.estimates_csv_out, "Estimate table");
  paths->add_option("--json", c.json_out, "Report path (default: stdout)");
  paths->add_option("--threads", c.threads, "Worker cap");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "srip: " << e.what() << "\n";
    return kExitValidation;
  }
  for (const auto* sub : app.get_subcommands()) c.command = sub->get_name();

  try {
    set_thread_limit(resolve_threads(c.threads));
    validate(c);
    if (c.command == "build") return cmd_build(c, out);
    if (c.command == "coherence") return cmd_coherence(c, out, err);
    if (c.command == "spectrum") return cmd_spectrum(c, out);
    if (c.command == "srip") return cmd_srip(c, out);
    if (c.command == "moments") return cmd_moments(c, out);
    if (c.command == "paths-verify") return cmd_paths_verify(c, out, err);
    invalid("unknown subcommand");
  } catch (const Error& e) {
    err << "srip: " << e.what() << "\n";
    return e.is_contract_violation() ? kExitContract : kExitValidation;
  } catch (const std::exception& e) {
    err << "srip: internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitValidation;
}

}  // namespace srip

#include "fbstab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "fbstab/filters.hpp"
#include "fbstab/iterate.hpp"
#include "fbstab/json_io.hpp"
#include "fbstab/stability.hpp"

namespace fbstab::cli {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct FilterOptions {
  std::string family;
  double a = 0.0;
  std::string filter_file;
  std::string highpass = "orthogonal";
};

struct LoadedFilter {
  FiniteSeq h;
  std::optional<FactoredLowpass> factored;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write '" + path + "'");
  f << text;
  if (!f) throw InvalidArgument("failed while writing '" + path + "'");
}

void add_filter_options(CLI::App* cmd, FilterOptions& o, bool with_highpass = true) {
  auto* fam = cmd->add_option("--family", o.family, "Filter family: burt-adelson or higher-order");
  auto* a = cmd->add_option("--a", o.a, "Family parameter a");
  auto* file = cmd->add_option("--filter", o.filter_file,
                               "Low-pass filter JSON: a sequence, or {\"n\", \"p\"}");
  fam->needs(a);
  a->needs(fam);
  fam->excludes(file);
  file->excludes(fam);
  if (with_highpass) {
    cmd->add_option("--highpass", o.highpass, "\"orthogonal\" or a sequence JSON file")
        ->capture_default_str();
  }
}

LoadedFilter load_lowpass(const FilterOptions& o) {
  if (!o.family.empty()) {
    const Family f = parse_family(o.family);
    return {family_lowpass(f, o.a), family_factored(f, o.a)};
  }
  if (o.filter_file.empty()) throw InvalidArgument("give either --family/--a or --filter");
  const json j = parse_json(read_file(o.filter_file));
  if (j.is_object() && j.contains("n") && j.contains("p")) {
    const FactoredLowpass f = factored_from_json(j);
    return {assemble(f), f};
  }
  FiniteSeq h = seq_from_json(j);
  check_lowpass(h);
  return {std::move(h), std::nullopt};
}

FilterPair load_pair(const FilterOptions& o, const FiniteSeq& h) {
  if (o.highpass == "orthogonal") return orthogonal_pair(h);
  return FilterPair::make(h, seq_from_json(parse_json(read_file(o.highpass))));
}

void require_grid(std::size_t n) {
  if (n < 2) throw InvalidArgument("--grid must be at least 2");
}

int cmd_certify(const FilterOptions& fo, std::size_t grid_size, int order, int s_max,
                double tol_expand, const std::string& out_path, std::ostream& out) {
  require_grid(grid_size);
  if (s_max < 1) throw InvalidArgument("--s-max must be >= 1");
  if (order < 1 || order > kMaxGramianOrder) {
    throw InvalidArgument("--order must be in 1.." + std::to_string(kMaxGramianOrder));
  }
  const LoadedFilter lf = load_lowpass(fo);
  const FilterPair pair = load_pair(fo, lf.h);
  const FactoredLowpass factored = lf.factored ? *lf.factored : factor(lf.h);
  const Grid grid(grid_size);

  json report;
  report["filter"] = {{"h", to_json(pair.h())}, {"g", to_json(pair.g())},
                      {"factored", to_json(factored)}};
  json bessel = json::array();
  bool bessel_ok = false;
  for (int s = 1; s <= s_max; ++s) {
    const BesselCertificate c = bessel_certificate(factored, s, grid);
    bessel_ok = bessel_ok || c.verdict;
    bessel.push_back(to_json(c));
  }
  report["bessel"] = std::move(bessel);
  const ExpandCertificate ex = expand_certificate(pair, grid, tol_expand);
  report["expand"] = to_json(ex);
  const SpanCertificate sp = span_certificate(pair, grid);
  report["span"] = to_json(sp);
  const FiniteSeq& h = pair.h();
  const int L = static_cast<int>(std::max(std::abs(h.first()), std::abs(h.last())));
  report["contraction"] = to_json(contraction_certificate(h, L));
  json gram = json::array();
  for (int j = 1; j <= order; ++j) gram.push_back(to_json(gramian_bounds(pair, j, grid)));
  report["gramian"] = std::move(gram);
  // The contraction test and the Gramian bounds are diagnostics: the first
  // has a sign hypothesis that stable filters need not meet, the second has
  // no pass/fail threshold.
  const bool stable = bessel_ok && ex.verdict && sp.verdict;
  report["bessel_ok"] = bessel_ok;
  report["stable"] = stable;
  emit(report.dump(2) + "\n", out_path, out);
  return stable ? kExitOk : kExitCertificateFailed;
}

int cmd_sweep(const std::string& family, double a_min, double a_max, int steps,
              std::size_t grid_size, double tol_expand, const std::string& out_path,
              std::ostream& out) {
  require_grid(grid_size);
  const Family fam = parse_family(family);
  if (!(a_min < a_max)) throw InvalidArgument("--a-min must be less than --a-max");
  if (steps < 2) throw InvalidArgument("--steps must be >= 2");
  const Grid grid(grid_size);
  std::ostringstream csv;
  csv << "a,bessel_s1,bessel_s2,expand_min,expand_ok,gramian_lower_j4,gramian_upper_j4\n";
  for (int i = 0; i < steps; ++i) {
    const double a = i == steps - 1 ? a_max : a_min + (a_max - a_min) * i / (steps - 1);
    const FactoredLowpass f = family_factored_closed(fam, a);
    const FiniteSeq h = assemble(f);
    const FilterPair pair = orthogonal_pair(h);
    const bool s1 = bessel_certificate(f, 1, grid).verdict;
    const bool s2 = bessel_certificate(f, 2, grid).verdict;
    const std::vector<double> prof = std_expand_profile(h, grid);
    const double emin = *std::min_element(prof.begin(), prof.end());
    const GramianReport g4 = gramian_bounds(pair, 4, grid);
    csv << format_number(a) << ',' << (s1 ? 1 : 0) << ',' << (s2 ? 1 : 0) << ','
        << format_number(emin) << ',' << (emin >= 2.0 - tol_expand ? 1 : 0) << ','
        << format_number(g4.lower) << ',' << format_number(g4.upper) << '\n';
  }
  emit(csv.str(), out_path, out);
  return kExitOk;
}

int cmd_apply(const FilterOptions& fo, const std::string& signal_file, int order,
              const std::string& out_path, std::ostream& out) {
  const FiniteSeq x = seq_from_json(parse_json(read_file(signal_file)));
  const LoadedFilter lf = load_lowpass(fo);
  const FilterPair pair = load_pair(fo, lf.h);
  json report = to_json(analyze(pair, x, order));
  report["input_energy"] = norm_sq(x);
  emit(report.dump(2) + "\n", out_path, out);
  return kExitOk;
}

int cmd_profile(const FilterOptions& fo, const std::string& which, std::size_t grid_size,
                int order, const std::string& out_path, std::ostream& out) {
  require_grid(grid_size);
  const Grid grid(grid_size);
  const std::size_t N = grid.size();
  std::ostringstream csv;
  if (which == "sine-product") {
    if (order < 1) throw InvalidArgument("--order must be >= 1");
    csv << "xi,product,bound\n";
    for (std::size_t m = 0; m < N; ++m) {
      double xi = grid.point(m);
      const double centred = xi >= 0.5 ? xi - 1.0 : xi;
      csv << format_number(xi) << ',' << format_number(sine_product(order, centred)) << ','
          << format_number(sine_product_bound(order, centred)) << '\n';
    }
  } else if (which == "std-expand") {
    const LoadedFilter lf = load_lowpass(fo);
    const std::vector<double> prof = std_expand_profile(lf.h, grid);
    csv << "xi,value\n";
    for (std::size_t m = 0; m < N; ++m) {
      csv << format_number(grid.point(m)) << ',' << format_number(prof[m]) << '\n';
    }
  } else if (which == "eigenfunctions") {
    const LoadedFilter lf = load_lowpass(fo);
    const FilterPair pair = load_pair(fo, lf.h);
    const EigenProfile prof = mstar_m_eigenfunctions(pair, grid);
    csv << "xi,lambda_min,lambda_max\n";
    for (std::size_t m = 0; m < N; ++m) {
      csv << format_number(grid.point(m)) << ',' << format_number(prof.lambda_min[m]) << ','
          << format_number(prof.lambda_max[m]) << '\n';
    }
  } else {
    throw InvalidArgument("unknown profile '" + which +
                          "' (expected std-expand, eigenfunctions or sine-product)");
  }
  emit(csv.str(), out_path, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability certificates and frame bounds for iterated two-channel filter banks",
               "fbstab"};
  app.require_subcommand(1);

  FilterOptions fo;
  std::size_t grid_size = 8192;
  int order = 4;
  int s_max = 3;
  double tol_expand = kDefaultTolExpand;
  std::string out_path;

  auto* certify = app.add_subcommand("certify", "Run every certificate on one filter pair");
  add_filter_options(certify, fo);
  certify->add_option("--grid", grid_size, "Grid size N")->capture_default_str();
  certify->add_option("--order", order, "Largest Gramian order")->capture_default_str();
  certify->add_option("--s-max", s_max, "Largest Bessel product length s")->capture_default_str();
  certify->add_option("--tol-expand", tol_expand, "Slack for the expanding test")
      ->capture_default_str();
  certify->add_option("--out", out_path, "Output file (default stdout)");

  std::string family;
  double a_min = 0.0;
  double a_max = 0.0;
  int steps = 0;
  auto* sweep = app.add_subcommand("sweep", "Sweep a family parameter and write CSV");
  sweep->add_option("--family", family, "burt-adelson or higher-order")->required();
  sweep->add_option("--a-min", a_min)->required();
  sweep->add_option("--a-max", a_max)->required();
  sweep->add_option("--steps", steps)->required();
  sweep->add_option("--grid", grid_size, "Grid size N")->capture_default_str();
  sweep->add_option("--tol-expand", tol_expand)->capture_default_str();
  sweep->add_option("--out", out_path, "Output file (default stdout)");

  std::string signal_file;
  auto* apply = app.add_subcommand("apply", "Run the order-j analysis operator on a signal");
  apply->add_option("--signal", signal_file, "Signal sequence JSON")->required();
  add_filter_options(apply, fo);
  apply->add_option("--order", order, "Order j")->capture_default_str();
  apply->add_option("--out", out_path, "Output file (default stdout)");

  std::string which;
  auto* profile = app.add_subcommand("profile", "Write a frequency profile as CSV");
  profile->add_option("--which", which, "std-expand, eigenfunctions or sine-product")->required();
  add_filter_options(profile, fo);
  profile->add_option("--grid", grid_size, "Grid size N")->capture_default_str();
  profile->add_option("--order", order, "Order j for sine-product")->capture_default_str();
  profile->add_option("--out", out_path, "Output file (default stdout)");

  // CLI11 takes the arguments without the program name, in reverse order.
  std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (certify->parsed()) {
      return cmd_certify(fo, grid_size, order, s_max, tol_expand, out_path, out);
    }
    if (sweep->parsed()) {
      return cmd_sweep(family, a_min, a_max, steps, grid_size, tol_expand, out_path, out);
    }
    if (apply->parsed()) return cmd_apply(fo, signal_file, order, out_path, out);
    if (profile->parsed()) return cmd_profile(fo, which, grid_size, order, out_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace fbstab::cli

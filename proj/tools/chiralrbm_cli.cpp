// chiralrbm: command-line front end for the chiral random band matrix laboratory.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <chrono>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "chiralrbm/errors.hpp"
#include "chiralrbm/experiments.hpp"
#include "chiralrbm/lyapunov.hpp"
#include "chiralrbm/model.hpp"
#include "chiralrbm/newman.hpp"
#include "chiralrbm/resolvent.hpp"
#include "chiralrbm/table.hpp"

namespace {

using namespace chiralrbm;
using ojson = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  int workers = 0;
  std::string timestamp;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--out", c.out, "Output path (stdout when omitted)");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--workers", c.workers, "Worker threads (0 = all cores); never changes results");
  cmd->add_option("--timestamp", c.timestamp, "Timestamp recorded in JSON metadata");
}

std::complex<double> parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {re, 0.0};
    }
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(text);
    const double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(text);
    return {re, im};
  } catch (const std::logic_error&) {
    throw ConfigError("cannot parse complex value '" + text + "', expected re,im");
  }
}

std::string resolve_timestamp(const Common& c) {
  if (!c.timestamp.empty()) return c.timestamp;
  std::time_t t{};
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ojson meta(const Common& c, const std::string& subcommand, ojson config) {
  ojson m;
  m["tool"] = "chiralrbm";
  m["version"] = kVersion;
  m["subcommand"] = subcommand;
  m["seed"] = c.seed;
  m["config"] = std::move(config);
  m["timestamp"] = resolve_timestamp(c);
  return m;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f << text;
}

void emit_table(const Common& c, const std::string& subcommand, const Table& table, ojson config) {
  if (c.format == "csv") {
    std::ostringstream os;
    write_csv(table, os);
    write_text(c.out, os.str());
    return;
  }
  ojson doc;
  doc["columns"] = columns_json(table);
  doc["meta"] = meta(c, subcommand, std::move(config));
  write_text(c.out, doc.dump(2) + "\n");
}

ojson int_list(const std::vector<int>& v) { return ojson(v); }

// ---------------------------------------------------------------------------

struct SampleArgs {
  Common common;
  int n = 4;
  int W = 2;
  std::string model = "full";
};

void run_sample(const SampleArgs& a) {
  RngStream rng(a.common.seed, 0);
  const auto H = build_model(parse_model_kind(a.model), a.n, a.W, rng);
  ojson config{{"model", a.model}, {"n", a.n}, {"W", a.W}};
  if (a.common.format == "json") {
    ojson doc = ojson::parse(to_json(H).dump());
    doc["meta"] = meta(a.common, "sample", std::move(config));
    write_text(a.common.out, doc.dump(2) + "\n");
    return;
  }
  Table t;
  t.columns = {"block", "index", "i", "j", "re", "im"};
  auto dump = [&](const char* name, const std::vector<ComplexMatrix>& blocks) {
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (int i = 0; i < H.width(); ++i)
        for (int j = 0; j < H.width(); ++j)
          t.add_row({std::string(name), std::int64_t(b + 1), std::int64_t(i), std::int64_t(j),
                     blocks[b](i, j).real(), blocks[b](i, j).imag()});
  };
  dump("V", H.diagonal());
  dump("T", H.hopping());
  emit_table(a.common, "sample", t, std::move(config));
}

struct LyapunovArgs {
  Common common;
  int W = 4;
  long steps = 100000;
  long burn_in = 100;
  std::string kind = "ginibre";
  std::string field = "complex";
  std::string odd = "ginibre";
  double odd_scale = 1.0;
  int replicas = 1;
};

void run_lyapunov(const LyapunovArgs& a) {
  FactorSpec spec;
  spec.W = a.W;
  spec.kind = a.kind == "pair" ? FactorKind::pair : FactorKind::ginibre;
  spec.field = a.field == "real" ? GinibreField::real : GinibreField::complex;
  spec.odd = a.odd == "identity" ? OddFactor::identity : OddFactor::ginibre;
  spec.odd_scale = a.odd_scale;
  const auto result =
      estimate_lyapunov_replicas(spec, a.steps, a.burn_in, a.replicas, RngStream(a.common.seed, 0),
                                 a.common.workers);
  ojson config{{"W", a.W},           {"steps", a.steps}, {"burn_in", a.burn_in},
               {"kind", a.kind},     {"field", a.field}, {"odd", a.odd},
               {"odd_scale", a.odd_scale}, {"replicas", a.replicas},
               {"batch_size", result.pooled.batch_size},
               {"order_violations", result.pooled.order_violations},
               {"factor_failures", result.pooled.factor_failures}};
  emit_table(a.common, "lyapunov", lyapunov_table(result.pooled), std::move(config));
}

struct GreenArgs {
  Common common;
  int n = 4;
  int W = 2;
  std::string model = "chiral";
  std::string z = "0,0";
  int x = 1;
  int y = 0;
  std::string norm = "operator";
  std::string method = "auto";
};

ResolventOptions resolvent_options(const std::string& method, const std::string& norm) {
  ResolventOptions o;
  o.method = method == "dense"   ? ResolventMethod::dense
             : method == "block" ? ResolventMethod::block_recursion
                                 : ResolventMethod::automatic;
  o.norm = norm == "frobenius" ? BlockNorm::frobenius : BlockNorm::operator_norm;
  return o;
}

void run_green(const GreenArgs& a) {
  RngStream rng(a.common.seed, 0);
  const auto H = build_model(parse_model_kind(a.model), a.n, a.W, rng);
  const auto z = parse_complex(a.z);
  const int y = a.y == 0 ? a.n : a.y;
  const auto block = resolvent_block(H, z, a.x, y, resolvent_options(a.method, a.norm));
  Table t;
  t.columns = {"x", "y", "z_re", "z_im", "i", "j", "re", "im", "norm"};
  for (int i = 0; i < a.W; ++i)
    for (int j = 0; j < a.W; ++j)
      t.add_row({std::int64_t(a.x), std::int64_t(y), z.real(), z.imag(), std::int64_t(i),
                 std::int64_t(j), block.block(i, j).real(), block.block(i, j).imag(), block.norm});
  ojson config{{"model", a.model}, {"n", a.n},         {"W", a.W},
               {"z", {z.real(), z.imag()}}, {"x", a.x}, {"y", y},
               {"norm", a.norm},   {"method", a.method}};
  emit_table(a.common, "green", t, std::move(config));
}

struct DecayArgs {
  Common common;
  std::vector<int> widths{1, 2, 4};
  std::vector<int> blocks{8, 16, 32, 48, 64, 96, 128};
  int samples = 200;
  std::string model = "chiral";
  std::string summary;
  int fit_min = 8;
};

void run_decay(const DecayArgs& a) {
  DecayScanConfig cfg;
  cfg.widths = a.widths;
  cfg.blocks = a.blocks;
  cfg.samples = a.samples;
  cfg.seed = a.common.seed;
  cfg.workers = a.common.workers;
  cfg.kind = parse_model_kind(a.model);
  cfg.fit_min_blocks_per_width = a.fit_min;
  const DecayScan scan = run_decay_scan(cfg);
  const Table cells = decay_cells_table(scan);
  const Table fits = decay_fits_table(scan);

  if (a.common.format == "csv") {
    std::ostringstream cells_csv, fits_csv;
    write_csv(cells, cells_csv);
    write_csv(fits, fits_csv);
    if (a.common.out.empty() && a.summary.empty()) {
      std::cout << cells_csv.str() << '\n' << fits_csv.str();
      if (scan.scaling) {
        std::ostringstream s;
        write_csv(scaling_fit_table(*scan.scaling), s);
        std::cout << '\n' << s.str();
      }
      return;
    }
    write_text(a.common.out, cells_csv.str());
    const std::string summary = !a.summary.empty() ? a.summary : a.common.out + ".fits.csv";
    write_text(summary, fits_csv.str());
    return;
  }
  ojson doc;
  doc["cells"] = columns_json(cells);
  doc["fits"] = columns_json(fits);
  doc["scaling"] = scan.scaling ? columns_json(scaling_fit_table(*scan.scaling)) : ojson(nullptr);
  ojson config{{"widths", int_list(a.widths)}, {"blocks", int_list(a.blocks)},
               {"samples", a.samples},         {"model", a.model},
               {"fit_min_blocks_per_width", a.fit_min}};
  doc["meta"] = meta(a.common, "decay-scan", std::move(config));
  doc["meta"]["statistics"] =
      "mu_hat is the per-block slope of E log||(H^-1)_{1,n}||. log E||.|| >= E log||.|| "
      "(Jensen), so a lower bound on the E-log rate does not transfer to the log-E rate; "
      "log_mean_mu is reported alongside.";
  write_text(a.common.out, doc.dump(2) + "\n");
}

struct FmcArgs {
  Common common;
  std::vector<int> widths{2};
  std::vector<int> blocks{8};
  std::vector<std::string> energies;
  std::vector<double> exponents{0.5};
  int x = 1;
  int y = 0;
  int samples = 100;
  std::string model = "full";
  std::string method = "auto";
  std::string norm = "operator";
  std::string raw;
};

void run_fmc(const FmcArgs& a) {
  FractionalMomentScanConfig cfg;
  cfg.widths = a.widths;
  cfg.blocks = a.blocks;
  for (const auto& z : a.energies) cfg.energies.push_back(parse_complex(z));
  cfg.exponents = a.exponents;
  cfg.positions = {{a.x, a.y}};
  cfg.samples = a.samples;
  cfg.kind = parse_model_kind(a.model);
  cfg.resolvent = resolvent_options(a.method, a.norm);
  cfg.seed = a.common.seed;
  cfg.workers = a.common.workers;
  const auto scan = run_fractional_moment_scan(cfg);
  ojson zs = ojson::array();
  for (const auto& z : cfg.energies) zs.push_back({z.real(), z.imag()});
  ojson config{{"widths", int_list(a.widths)}, {"blocks", int_list(a.blocks)},
               {"z", zs}, {"s", a.exponents}, {"x", a.x}, {"y", a.y},
               {"samples", a.samples}, {"model", a.model}, {"method", a.method},
               {"norm", a.norm}};
  if (!a.raw.empty()) {
    std::ostringstream os;
    write_csv(scan.raw, os);
    write_text(a.raw, os.str());
  }
  emit_table(a.common, "fmc-scan", scan.summary, std::move(config));
}

struct ScalingArgs {
  Common common;
  std::vector<double> widths;
  std::vector<double> mu;
  std::string from;
  std::string oracle;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

void run_scaling(ScalingArgs a) {
  if (!a.from.empty()) {
    std::ifstream f(a.from);
    if (!f) throw ConfigError("cannot read '" + a.from + "'");
    std::string line;
    std::getline(f, line);
    const auto header = split(line);
    int wcol = -1, mcol = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == "W") wcol = int(i);
      if (header[i] == "mu_hat") mcol = int(i);
    }
    if (wcol < 0 || mcol < 0) throw ConfigError("input needs W and mu_hat columns");
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      const auto cells = split(line);
      a.widths.push_back(std::stod(cells.at(wcol)));
      a.mu.push_back(std::stod(cells.at(mcol)));
    }
  } else if (!a.oracle.empty()) {
    a.mu.clear();
    for (double W : a.widths)
      a.mu.push_back(a.oracle == "newman" ? newman_decay_rate(int(W))
                                          : complex_newman_decay_rate(int(W)));
  }
  const ScalingFit fit = fit_power_law(a.widths, a.mu);
  ojson config{{"widths", a.widths}, {"mu", a.mu}, {"from", a.from}, {"oracle", a.oracle}};
  emit_table(a.common, "scaling-fit", scaling_fit_table(fit), std::move(config));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chiral random band matrices: sampling, zero-energy Green's functions, "
               "Lyapunov spectra and decay scans"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::function<void()> action;
  const std::vector<std::string> models{"full", "chiral", "general-chiral"};

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "Draw one model and dump its blocks");
  add_common(s, sample.common);
  s->add_option("-n,--blocks", sample.n, "Number of blocks");
  s->add_option("-W,--width", sample.W, "Block size");
  s->add_option("--model", sample.model)->check(CLI::IsMember(models));
  s->callback([&] { action = [&] { run_sample(sample); }; });

  LyapunovArgs lyap;
  auto* l = app.add_subcommand("lyapunov", "QR estimate of the Lyapunov spectrum vs Newman");
  add_common(l, lyap.common);
  l->add_option("-W,--width", lyap.W, "Matrix size");
  l->add_option("--steps", lyap.steps, "Post-burn-in factors per replica");
  l->add_option("--burn-in", lyap.burn_in);
  l->add_option("--kind", lyap.kind)->check(CLI::IsMember({"ginibre", "pair"}));
  l->add_option("--field", lyap.field, "Entry field of the Gaussian factors")
      ->check(CLI::IsMember({"complex", "real"}));
  l->add_option("--odd", lyap.odd, "Odd factor of a pair")->check(CLI::IsMember({"ginibre", "identity"}));
  l->add_option("--odd-scale", lyap.odd_scale, "Scale c of the odd factor, T_odd = c G");
  l->add_option("--replicas", lyap.replicas, "Independent trajectories");
  l->callback([&] { action = [&] { run_lyapunov(lyap); }; });

  GreenArgs green;
  auto* g = app.add_subcommand("green", "One block of the resolvent (H - z)^-1");
  add_common(g, green.common);
  g->add_option("-n,--blocks", green.n);
  g->add_option("-W,--width", green.W);
  g->add_option("--model", green.model)->check(CLI::IsMember(models));
  g->add_option("--z", green.z, "Energy as re,im");
  g->add_option("--x", green.x, "Block row (1-based)");
  g->add_option("--y", green.y, "Block column (1-based, 0 = n)");
  g->add_option("--norm", green.norm)->check(CLI::IsMember({"operator", "frobenius"}));
  g->add_option("--method", green.method)->check(CLI::IsMember({"auto", "dense", "block"}));
  g->callback([&] { action = [&] { run_green(green); }; });

  DecayArgs decay;
  auto* d = app.add_subcommand("decay-scan", "Zero-energy corner decay over a (W, n) grid");
  add_common(d, decay.common);
  d->add_option("-W,--width", decay.widths, "Block sizes")->delimiter(',');
  d->add_option("-n,--blocks", decay.blocks, "Even block counts")->delimiter(',');
  d->add_option("--samples", decay.samples, "Samples per cell");
  d->add_option("--model", decay.model)->check(CLI::IsMember({"chiral", "general-chiral"}));
  d->add_option("--summary", decay.summary, "CSV path for the per-W fits");
  d->add_option("--fit-min-per-width", decay.fit_min,
                "Fit only cells with n >= this many blocks per unit of W");
  d->callback([&] { action = [&] { run_decay(decay); }; });

  FmcArgs fmc;
  auto* f = app.add_subcommand("fmc-scan", "Fractional moments E||(H - z)^-1_{x,y}||^s");
  add_common(f, fmc.common);
  f->add_option("-W,--width", fmc.widths)->delimiter(',');
  f->add_option("-n,--blocks", fmc.blocks)->delimiter(',');
  f->add_option("--z", fmc.energies, "Energy re,im (repeatable)");
  f->add_option("--s", fmc.exponents, "Fractional exponent (repeatable)");
  f->add_option("--x", fmc.x);
  f->add_option("--y", fmc.y, "0 = n");
  f->add_option("--samples", fmc.samples);
  f->add_option("--model", fmc.model)->check(CLI::IsMember(models));
  f->add_option("--method", fmc.method)->check(CLI::IsMember({"auto", "dense", "block"}));
  f->add_option("--norm", fmc.norm)->check(CLI::IsMember({"operator", "frobenius"}));
  f->add_option("--raw", fmc.raw, "CSV path for per-sample log norms");
  f->callback([&] { action = [&] { run_fmc(fmc); }; });

  ScalingArgs scaling;
  auto* c = app.add_subcommand("scaling-fit", "Fit mu ~ W^-alpha");
  add_common(c, scaling.common);
  c->add_option("-W,--width", scaling.widths)->delimiter(',');
  c->add_option("--mu", scaling.mu, "Decay rates aligned with -W")->delimiter(',');
  c->add_option("--from", scaling.from, "decay-scan fits CSV (columns W, mu_hat)");
  c->add_option("--oracle", scaling.oracle, "Use exact rates instead of --mu")
      ->check(CLI::IsMember({"newman", "complex-newman"}));
  c->callback([&] { action = [&] { run_scaling(scaling); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    action();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidDimension& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const IndexOutOfRange& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const NotInvertible& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

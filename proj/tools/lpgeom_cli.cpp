// lpgeom: L_p support functions, L_p polar volumes, Mahler volumes, shadow
// systems and the verification suite from the command line.
#include "lpgeom/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace lpgeom;

namespace {

constexpr int kExitOk = 0, kExitFailures = 1, kExitUsage = 2, kExitPrecondition = 3;

struct Common {
  std::uint64_t seed = 20240917;
  double tol = 1e-10;
  std::uint64_t mc_samples = 400000;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "master seed for every random choice");
  cmd->add_option("--tol", c.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--mc-samples", c.mc_samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
}

std::string read_arg(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw ParseError("cannot read " + arg.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw ParseError("empty list");
  return out;
}

Vec parse_vec(const std::string& text) {
  const auto xs = parse_list(text);
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

// "e2,0" or "0.6,0.8,0.1": a direction followed by the offset s.
std::pair<Vec, double> parse_section(const std::string& text, int n) {
  const auto comma = text.rfind(',');
  if (comma == std::string::npos) throw ParseError("--section wants v,s");
  const auto head = text.substr(0, comma);
  const double s = parse_list(text.substr(comma + 1)).front();
  if (!head.empty() && head[0] == 'e') {
    int i = 0;
    try {
      i = std::stoi(head.substr(1));
    } catch (const std::exception&) {
      throw ParseError("bad axis '" + head + "'");
    }
    if (i < 1 || i > n) throw ParseError("axis " + head + " out of range");
    return {unit_axis(n, i - 1), s};
  }
  Vec v = parse_vec(head);
  if (v.size() != n) throw ParseError("section direction has the wrong dimension");
  return {v, s};
}

// "a:b:m" for m points from a to b, or a comma list.
std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_list(text);
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(parse_list(item).front());
  if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2])) throw ParseError("t-grid wants a:b:m");
  const int m = static_cast<int>(parts[2]);
  std::vector<double> out;
  for (int i = 0; i < m; ++i) out.push_back(m == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * i / (m - 1));
  return out;
}

void print_estimate(const std::string& label, const Estimate& e) {
  std::printf("%s = %.12g +- %.3g (%s, %llu)\n", label.c_str(), e.value, e.error, to_string(e.method),
              static_cast<unsigned long long>(e.samples_or_cells));
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) s += (s.empty() ? "" : ",") + c;
  return s;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L_p polar bodies, Mahler volumes, shadow systems and their inequalities"};
  app.set_version_flag("--version", std::string(LPGEOM_VERSION));
  app.require_subcommand(1);
  Common common;

  // support
  std::string body_arg, p_arg = "1", y_arg;
  auto* support_cmd = app.add_subcommand("support", "L_p support function h_{p,K}(y)");
  support_cmd->add_option("--body", body_arg, "body JSON, or @file")->required();
  support_cmd->add_option("--p", p_arg, "p > 0 or inf");
  support_cmd->add_option("--y", y_arg, "point, comma separated")->required();
  add_common(support_cmd, common);

  // polar
  int resolution = 0;
  std::string section_arg, dump_path;
  bool translate_flag = false;
  auto* polar_cmd = app.add_subcommand("polar", "volume (or section volume) of the L_p polar body");
  polar_cmd->add_option("--body", body_arg, "body JSON, or @file")->required();
  polar_cmd->add_option("--p", p_arg, "p > 0 or inf");
  polar_cmd->add_option("--resolution", resolution, "sphere grid resolution (0: default)");
  polar_cmd->add_option("--section", section_arg, "v,s: slice {<x,v> = s}; v may be an axis such as e2");
  polar_cmd->add_option("--dump", dump_path, "write inner and outer approximating polytopes as JSON");
  polar_cmd->add_flag("--translate", translate_flag, "move the barycenter of K to the origin first");
  add_common(polar_cmd, common);

  // mahler
  std::string sweep_arg;
  auto* mahler_cmd = app.add_subcommand("mahler", "L_p Mahler volume |K| |K^{o,p}| against the ball");
  mahler_cmd->add_option("--body", body_arg, "body JSON, or @file")->required();
  auto* mahler_p_opt = mahler_cmd->add_option("--p", p_arg, "p > 0 or inf");
  mahler_cmd->add_option("--p-sweep", sweep_arg, "comma-separated p values; prints CSV")->excludes(mahler_p_opt);
  mahler_cmd->add_option("--resolution", resolution, "sphere grid resolution (0: default)");
  mahler_cmd->add_flag("--translate", translate_flag, "move the barycenter of K to the origin first");
  add_common(mahler_cmd, common);

  // shadow
  std::string v_arg, speed_arg = R"({"kind":"steiner"})", grid_arg = "0:1:5", quantity = "polarvol";
  double slice_s = 0.0;
  auto* shadow_cmd = app.add_subcommand("shadow", "a quantity along a parallel chord movement, as CSV over t");
  shadow_cmd->add_option("--body", body_arg, "body JSON, or @file")->required();
  shadow_cmd->add_option("--v", v_arg, "movement direction")->required();
  shadow_cmd->add_option("--speed", speed_arg, "speed JSON, or @file (default: Steiner)");
  shadow_cmd->add_option("--t-grid", grid_arg, "a:b:m or a comma list");
  shadow_cmd->add_option("--quantity", quantity, "support | slicevol | polarvol")
      ->check(CLI::IsMember({"support", "slicevol", "polarvol"}));
  shadow_cmd->add_option("--p", p_arg, "p > 0 or inf");
  shadow_cmd->add_option("--y", y_arg, "point for --quantity support");
  shadow_cmd->add_option("--s", slice_s, "slice offset along v for --quantity slicevol");
  shadow_cmd->add_option("--resolution", resolution, "sphere grid resolution (0: default)");
  add_common(shadow_cmd, common);

  // verify
  std::string config_path, checks_arg, dims_arg, ps_arg, out_prefix = "lpgeom_report";
  int instances = -1;
  double base_tol = -1.0;
  bool quiet = false;
  auto* verify_cmd = app.add_subcommand("verify", "run the verification suite; writes <out>.json and <out>.csv");
  verify_cmd->add_option("--config", config_path, "suite config JSON file");
  verify_cmd->add_option("--checks", checks_arg, "comma-separated check ids");
  verify_cmd->add_option("--dims", dims_arg, "comma-separated dimensions");
  verify_cmd->add_option("--p-values", ps_arg, "comma-separated p values");
  verify_cmd->add_option("--instances", instances, "instances per check (0: per-check defaults)");
  verify_cmd->add_option("--base-tol", base_tol, "absolute slack added to every check");
  verify_cmd->add_option("--resolution", resolution, "sphere resolution for polar approximations (0: default)");
  verify_cmd->add_option("--out", out_prefix, "report path prefix");
  verify_cmd->add_flag("--quiet", quiet, "no summary table");
  add_common(verify_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*support_cmd) {
      const auto k = body_from_string(read_arg(body_arg));
      const auto y = parse_vec(y_arg);
      if (y.size() != k.dim()) throw ParseError("--y has the wrong dimension");
      LpEvaluator e(k, parse_p(p_arg), common.tol);
      print_estimate("h_{" + parse_p(p_arg).to_string() + ",K}(y)", lp_support(e, y, common.mc_samples, common.seed));
      return kExitOk;
    }

    if (*polar_cmd) {
      auto k = body_from_string(read_arg(body_arg));
      if (translate_flag) k = translate(k, -barycenter(k));
      const PParam p = parse_p(p_arg);
      if (!section_arg.empty()) {
        const auto [v, s] = parse_section(section_arg, k.dim());
        const auto b = polar_bracket(k, p, resolution, common.tol);
        print_estimate("|K^{o,p} cap {<x,v> = s}|", section_volume(b, Direction(v), s));
      } else {
        print_estimate("|K^{o,p}|", lp_polar_volume(LpEvaluator(k, p, common.tol, resolution)));
      }
      if (!dump_path.empty()) {
        const auto b = polar_bracket(k, p, resolution, common.tol);
        write_file(dump_path,
                   json{{"p", p_to_json(p)}, {"inner", body_to_json(b.inner)}, {"outer", body_to_json(b.outer)}}.dump(2) +
                       "\n");
      }
      return kExitOk;
    }

    if (*mahler_cmd) {
      auto k = body_from_string(read_arg(body_arg));
      if (translate_flag) k = translate(k, -barycenter(k));
      std::vector<PParam> ps;
      if (!sweep_arg.empty()) {
        std::stringstream ss(sweep_arg);
        std::string item;
        while (std::getline(ss, item, ',')) ps.push_back(parse_p(item));
      } else {
        ps.push_back(parse_p(p_arg));
      }
      if (!sweep_arg.empty()) std::printf("p,M_p,M_p_error,M_p_ball,M_p_ball_error,ratio\n");
      for (const auto& p : ps) {
        const auto m = mahler_p(LpEvaluator(k, p, common.tol, resolution));
        const auto mb = mahler_p_ball(k.dim(), p);
        if (!sweep_arg.empty()) {
          std::printf("%s\n", csv_row({p.to_string(), fmt17(m.value), fmt17(m.error), fmt17(mb.value),
                                       fmt17(mb.error), fmt17(m.value / mb.value)})
                                  .c_str());
        } else {
          print_estimate("M_" + p.to_string() + "(K)", m);
          print_estimate("M_" + p.to_string() + "(B)", mb);
          std::printf("ratio = %.12g\n", m.value / mb.value);
        }
      }
      return kExitOk;
    }

    if (*shadow_cmd) {
      const auto k = body_from_string(read_arg(body_arg));
      const Vec v = parse_vec(v_arg);
      if (v.size() != k.dim()) throw ParseError("--v has the wrong dimension");
      const Direction dir(v);
      const auto speed = speed_from_string(read_arg(speed_arg));
      const PParam p = parse_p(p_arg);
      const auto sys = speed.chordwise() ? make_parallel_chord(k, dir, speed) : make_shadow_system(k, dir, speed);
      Vec y;
      if (quantity == "support") {
        if (y_arg.empty()) throw ParseError("--quantity support needs --y");
        y = parse_vec(y_arg);
        if (y.size() != k.dim()) throw ParseError("--y has the wrong dimension");
      }
      std::vector<double> ts;
      for (double t : parse_grid(grid_arg)) {
        if (sys.valid_at(t))
          ts.push_back(t);
        else
          std::fprintf(stderr, "warning: t = %g outside the validity interval [%g, %g], skipped\n", t, sys.valid_lo,
                       sys.valid_hi);
      }
      std::printf("t,%s,error\n", quantity.c_str());
      for (double t : ts) {
        const auto kt = body_at(sys, t);
        Estimate q;
        if (quantity == "support") {
          q = lp_support(LpEvaluator(kt, p, common.tol), y, common.mc_samples, common.seed);
        } else if (quantity == "polarvol") {
          q = lp_polar_volume(LpEvaluator(kt, p, common.tol, resolution));
        } else {
          q = section_volume(polar_bracket(kt, p, resolution, common.tol), dir, slice_s);
        }
        std::printf("%s\n", csv_row({fmt17(t), fmt17(q.value), fmt17(q.error)}).c_str());
      }
      return kExitOk;
    }

    if (*verify_cmd) {
      SuiteConfig cfg;
      if (!config_path.empty()) {
        json j;
        try {
          j = json::parse(read_arg("@" + config_path));
        } catch (const json::exception& e) {
          throw ParseError(std::string("config JSON: ") + e.what());
        }
        cfg = config_from_json(j);
      }
      // flags given explicitly override the file
      if (verify_cmd->count("--seed")) cfg.master_seed = common.seed;
      if (verify_cmd->count("--tol")) cfg.tol = common.tol;
      if (verify_cmd->count("--mc-samples")) cfg.mc_samples = common.mc_samples;
      if (!checks_arg.empty()) {
        cfg.checks.clear();
        std::stringstream ss(checks_arg);
        std::string item;
        while (std::getline(ss, item, ',')) cfg.checks.push_back(item);
      }
      if (!dims_arg.empty()) {
        cfg.dimensions.clear();
        for (double d : parse_list(dims_arg)) cfg.dimensions.push_back(static_cast<int>(d));
      }
      if (!ps_arg.empty()) {
        cfg.p_values.clear();
        std::stringstream ss(ps_arg);
        std::string item;
        while (std::getline(ss, item, ',')) cfg.p_values.push_back(parse_p(item));
      }
      if (instances >= 0) cfg.instances_per_check = instances;
      if (base_tol >= 0.0) cfg.base_tol = base_tol;
      if (verify_cmd->count("--resolution")) cfg.resolution = resolution;
      validate_config(cfg);

      const auto start = std::chrono::steady_clock::now();
      const auto records = run_suite(cfg);
      RunManifest m;
      for (int i = 0; i < argc; ++i) m.command_line += (i ? " " : "") + std::string(argv[i]);
      m.config = config_to_json(cfg);
      m.master_seed = cfg.master_seed;
      m.platform = platform_tag();
      m.wall_clock_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      write_file(out_prefix + ".json", report_json(records, m).dump(2) + "\n");
      write_file(out_prefix + ".csv", report_csv(records));
      const int failures = count_failures(records);
      if (!quiet) {
        std::printf("%-32s %9s %8s %13s %11s\n", "check_id", "instances", "failures", "worst_margin", "runtime_s");
        for (const auto& s : summarize(records))
          std::printf("%-32s %9d %8d %13.4g %11.2f\n", s.check_id.c_str(), s.instances, s.failures, s.worst_margin,
                      s.runtime_ms / 1000.0);
        std::printf("%d failure(s) in %zu record(s); wall clock %.1f s; reports %s.json, %s.csv\n", failures,
                    records.size(), m.wall_clock_ms / 1000.0, out_prefix.c_str(), out_prefix.c_str());
      }
      return failures > 0 ? kExitFailures : kExitOk;
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const GeometryError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == ErrorKind::invalid_argument ? kExitUsage : kExitPrecondition;
  }
  return kExitUsage;
}

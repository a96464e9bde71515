#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nullflow/hierarchy.hpp"
#include "nullflow/numsim.hpp"
#include "nullflow/report.hpp"

namespace nullflow {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 2;  // parse errors, bad options, unbound or non-invertible symbols
inline constexpr int not_exact = 3;
inline constexpr int verification = 4;
inline constexpr int blow_up = 5;
}  // namespace exit_code

/// NULLFLOW_MAX_ORDER, or 12 when unset.
inline int max_order_from_env() {
  const char* s = std::getenv("NULLFLOW_MAX_ORDER");
  if (!s || !*s) return 12;
  try {
    return std::stoi(s);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("NULLFLOW_MAX_ORDER is not an integer: ") + s);
  }
}

inline LocalVectorField parse_field(const std::string& text) {
  auto parts = detail::split_top_level(text, ';');
  if (parts.size() != 4) throw SyntaxError("vector field needs four ';'-separated components f;h;g;l", 0);
  LocalVectorField V;
  DiffPoly* slots[4] = {&V.f, &V.h, &V.g, &V.l};
  std::size_t offset = 0;
  for (int i = 0; i < 4; ++i) {
    try {
      *slots[i] = parse_expr(parts[i]);
    } catch (const SyntaxError& e) {
      throw SyntaxError(e.message, e.offset + offset);
    }
    offset += parts[i].size() + 1;
  }
  return V;
}

namespace detail {

struct CliState {
  bool latex = false;

  std::string bracket_a, bracket_b;

  int seed_index = 1;
  std::string seed_const = "c";

  int upto = 3;
  std::string constants = "fresh";
  bool verify = false;

  std::string field;

  std::string flow_kind = "nlie";
  std::string flow_file;
  std::string out_dir = "nullflow_out";
  std::string init = "periodic";
  double speed = 1.0;
  std::string stencil = "central4";
  std::vector<std::string> params;
  SimConfig sim;
};

inline void print_field(std::ostream& out, const LocalVectorField& V, RenderFormat fmt) {
  out << "  T:  " << render(V.f, fmt) << '\n';
  out << "  W1: " << render(V.h, fmt) << '\n';
  out << "  N:  " << render(V.g, fmt) << '\n';
  out << "  W2: " << render(V.l, fmt) << '\n';
}

inline void print_flow(std::ostream& out, const FlowPair& fp, RenderFormat fmt) {
  out << "  k1_t = " << render(fp.p1, fmt) << '\n';
  out << "  k2_t = " << render(fp.p2, fmt) << '\n';
}

inline int run_hierarchy(const CliState& st, std::ostream& out) {
  RenderFormat fmt = st.latex ? RenderFormat::latex : RenderFormat::plain;
  GenerateOptions opt;
  opt.constants = st.constants == "zero" ? ConstantPolicy::Kind::zero : ConstantPolicy::Kind::fresh;
  opt.max_order = max_order_from_env();
  auto entries = generate(st.upto, opt);
  for (const auto& e : entries) {
    out << "V" << e.index << ":\n";
    print_field(out, e.field, fmt);
    print_flow(out, e.flow, fmt);
  }
  if (!st.verify) return exit_code::ok;

  bool ok = true;
  if (st.upto >= 3) {
    VerificationReport r = verify_against_paper({}, opt.constants);
    for (const auto& c : r.checks) {
      out << (c.passed ? "PASS " : "FAIL ") << c.name;
      if (!c.passed) out << "  difference: " << render(c.difference, fmt);
      out << '\n';
    }
    ok = r.all_passed();
  } else {
    out << "fixture comparison skipped (needs --upto 3 or more)\n";
  }
  for (const auto& c : commutation_suite(entries, 2 * st.upto)) {
    if (c.i == c.j) continue;
    out << (c.commute ? "PASS " : "FAIL ") << "[V" << c.i << ", V" << c.j << "] = 0\n";
    ok = ok && c.commute;
  }
  out << (ok ? "all checks passed" : "verification failed") << '\n';
  return ok ? exit_code::ok : exit_code::verification;
}

inline double smooth_k1(double s, double L) { return 0.5 + 0.25 * std::sin(2 * std::numbers::pi * s / L); }
inline double smooth_k2(double s, double L) { return 0.25 * std::cos(2 * std::numbers::pi * s / L); }

inline int run_simulate(CliState st, std::ostream& out) {
  SimConfig& cfg = st.sim;
  cfg.stencil = st.stencil == "central6" ? Stencil::central6 : Stencil::central4;
  Bindings bind = cfg.frame_bindings();
  bind["b"] = 1.0;
  bind["c"] = 1.0;
  for (const auto& kv : st.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--param expects name=value, got '" + kv + "'");
    bind[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  cfg.validate();

  FlowPair fp;
  if (st.flow_kind == "nlie") {
    fp = seed(1, param("c")).flow;
  } else if (st.flow_kind == "translation") {
    fp = seed(0, param("b")).flow;
  } else {
    std::ifstream is(st.flow_file);
    if (!is) throw std::invalid_argument("cannot read flow file '" + st.flow_file + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    std::string text = ss.str();
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    fp = parse_flow(text);
  }
  CompiledFlow rhs = compile_flow(fp, bind);

  const double L = cfg.domain_length;
  CurvatureGrid g0;
  if (st.init == "soliton") {
    double x0 = cfg.sigma0 + L / 2, v = st.speed;
    g0 = make_grid(cfg, [&](double s) { return kdv_soliton(s, 0, v, x0); }, [](double) { return 0.0; });
  } else {
    g0 = make_grid(cfg, [&](double s) { return smooth_k1(s - cfg.sigma0, L); },
                   [&](double s) { return smooth_k2(s - cfg.sigma0, L); });
  }

  std::filesystem::path dir(st.out_dir);
  std::filesystem::create_directories(dir);
  Trajectory tr;
  std::vector<FramePath> curves;
  try {
    if (st.flow_kind == "nlie") {
      NlieResult r = nlie_run(cfg, g0, rhs);
      write_curve_csv(dir, r);
      tr = std::move(r.trajectory);
      curves = std::move(r.curves);
    } else {
      tr = evolve(g0, rhs, cfg);
    }
  } catch (const SimulationBlowUp& e) {
    Trajectory partial;
    partial.frames.push_back(e.last_good);
    write_curvature_csv(dir, partial);
    throw;
  }
  write_curvature_csv(dir, tr);
  nlohmann::json report = run_report(cfg, tr, curves);
  report["flow"] = {{"kind", st.flow_kind}, {"k1_t", render(fp.p1)}, {"k2_t", render(fp.p2)}};
  report["initial_data"] = st.init;
  std::ofstream(dir / "report.json") << report.dump(2) << '\n';

  out << "steps " << tr.steps << ", dt " << format_value(tr.dt_used) << ", frames " << tr.frames.size() << '\n';
  out << "mass drift k1 " << format_value(tr.mass_drift(0)) << ", k2 " << format_value(tr.mass_drift(1)) << '\n';
  if (!curves.empty()) {
    double gram = 0;
    for (const auto& c : curves) gram = std::max(gram, c.gram_drift);
    out << "max Gram drift " << format_value(gram) << '\n';
  }
  out << "wrote " << dir.string() << '\n';
  return exit_code::ok;
}

}  // namespace detail

/// Parses and runs one command. args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  detail::CliState st;
  CLI::App app{"Symbolic and numerical tools for null curve flows", "nullflow"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--latex", st.latex, "Render expressions as LaTeX");

  auto* bracket = app.add_subcommand("bracket", "Lie bracket of two flows given as \"p1, p2\"");
  bracket->add_option("A", st.bracket_a)->required();
  bracket->add_option("B", st.bracket_b)->required();

  auto* flow = app.add_subcommand("flow", "Curvature flow of the seed field V0 or V1");
  flow->add_option("--seed", st.seed_index)->check(CLI::IsMember({0, 1}));
  flow->add_option("--const", st.seed_const, "Constant multiplying the seed");

  auto* hier = app.add_subcommand("hierarchy", "Generate V0 ... VN and their flows");
  hier->add_option("--upto", st.upto)->check(CLI::NonNegativeNumber);
  hier->add_option("--constants", st.constants)->check(CLI::IsMember({"fresh", "zero"}));
  hier->add_flag("--verify", st.verify, "Compare with reference expressions and check commutation");

  auto* cls = app.add_subcommand("classify", "Class of a field \"f;h;g;l\"");
  cls->add_option("field", st.field)->required();

  auto* sim = app.add_subcommand("simulate", "Evolve curvatures and rebuild the curve");
  sim->add_option("--flow", st.flow_kind)->check(CLI::IsMember({"nlie", "translation", "file"}));
  sim->add_option("--flow-file", st.flow_file, "File holding \"p1, p2\" for --flow file");
  sim->add_option("--n", st.sim.grid_points);
  sim->add_option("--dt", st.sim.dt);
  sim->add_option("--t-end", st.sim.t_end);
  sim->add_option("--length", st.sim.domain_length);
  sim->add_option("--a", st.sim.a);
  sim->add_option("--eps1", st.sim.eps1);
  sim->add_option("--eps2", st.sim.eps2);
  sim->add_option("--stride", st.sim.output_stride);
  sim->add_option("--stability-constant", st.sim.stability_constant);
  sim->add_option("--stencil", st.stencil)->check(CLI::IsMember({"central4", "central6"}));
  sim->add_option("--init", st.init)->check(CLI::IsMember({"periodic", "soliton"}));
  sim->add_option("--speed", st.speed, "Soliton speed for --init soliton");
  sim->add_option("--param", st.params, "Numeric value for a flow parameter, name=value");
  sim->add_option("--out", st.out_dir);

  std::vector<std::string> argv_store{"nullflow"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::usage;
  }

  const RenderFormat fmt = st.latex ? RenderFormat::latex : RenderFormat::plain;
  try {
    if (bracket->parsed()) {
      out << render(lie_bracket_flows(parse_flow(st.bracket_a), parse_flow(st.bracket_b)), fmt) << '\n';
    } else if (flow->parsed()) {
      detail::print_flow(out, seed(st.seed_index, parse_expr(st.seed_const)).flow, fmt);
    } else if (hier->parsed()) {
      return detail::run_hierarchy(st, out);
    } else if (cls->parsed()) {
      out << to_string(classify(parse_field(st.field))) << '\n';
    } else if (sim->parsed()) {
      return detail::run_simulate(st, out);
    }
  } catch (const NotExact& e) {
    err << "not exact: " << e.what() << '\n';
    return exit_code::not_exact;
  } catch (const BlowUp& e) {
    err << "blow-up: " << e.what() << '\n';
    return exit_code::blow_up;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  }
  return exit_code::ok;
}

}  // namespace nullflow

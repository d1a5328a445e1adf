// sculpt: presets, compile, simulate, verify, export-dot, report.
// Exit codes: 0 ok, 1 usage/io, 2 validation failure, 3 verification mismatch.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "sculpt/sculpt.hpp"

using namespace sculpt;
using nlohmann::json;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitMismatch = 3;

struct Settings {
  unsigned threads = 0;
  double fidelity_tolerance = kTolerance;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text << '\n';
}

// key = value lines, '#' comments
void load_config(const std::string& path, Settings& s) {
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto eq = line.find('=');
    auto trim = [](std::string x) {
      auto b = x.find_first_not_of(" \t\r"), e = x.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : x.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "fidelity_tolerance") s.fidelity_tolerance = std::stod(value);
    else if (key == "threads") s.threads = unsigned(std::stoul(value));
    else throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
}

unsigned resolve_threads(unsigned flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("SCULPT_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return unsigned(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

PresetKind parse_kind(const std::string& k) {
  if (k == "ghz") return PresetKind::GHZ;
  if (k == "w") return PresetKind::W;
  if (k == "type5") return PresetKind::TYPE5;
  throw CLI::ValidationError("kind", "expected ghz, w or type5");
}

json outcome_json(const HeraldOutcome& o, const Circuit& c) {
  json pattern = json::object();
  for (auto [w, n] : o.pattern) pattern[std::to_string(w.value)] = n;
  json residual = json::array();
  for (const auto& [occ, amp] : o.residual.terms()) {
    json occ_j = json::array();
    for (auto [w, n] : occ.entries()) occ_j.push_back({w.value, n});
    residual.push_back({{"occupation", occ_j}, {"amplitude", {amp.real(), amp.imag()}}});
  }
  return {{"key", o.key(c)},        {"pattern", pattern},       {"probability", o.probability},
          {"class", to_string(o.cls)}, {"correction", o.correction}, {"fidelity", o.fidelity},
          {"residual", residual}};
}

int cmd_preset(const std::string& kind, int n, const std::string& out) {
  write_out(out, serialize_graph(preset(parse_kind(kind), n)));
  return 0;
}

int cmd_compile(const std::string& graph_path, bool dual, const std::string& out) {
  SculptingBigraph g = parse_graph(read_file(graph_path));
  Circuit c;
  try {
    c = compile(g);
  } catch (const CompileError& e) {
    std::cerr << e.what() << '\n';
    return kExitInvalid;
  }
  if (dual) c = to_dual_rail(c);
  auto diags = validate(c);
  for (const auto& d : diags) std::cerr << "diagnostic: " << d << '\n';
  if (!diags.empty()) return kExitInvalid;
  write_out(out, serialize_circuit(c));
  return 0;
}

int cmd_simulate(const std::string& circuit_path, const std::string& report, const std::string& only,
                 const std::string& target, int n, const Settings& s) {
  Circuit c = parse_circuit(read_file(circuit_path));
  auto diags = validate(c);
  for (const auto& d : diags) std::cerr << "diagnostic: " << d << '\n';
  if (!diags.empty()) return kExitInvalid;
  auto outs = run_heralded(c);
  json summary = {{"outcomes", outs.size()}};
  double total = 0;
  for (const auto& o : outs) total += o.probability;
  summary["herald_probability"] = total;
  summary["herald_probability_exact"] = rationalize(total);
  if (!target.empty()) {
    classify_feedforward(outs, c, target_state(parse_kind(target), n), 0, resolve_threads(s.threads));
    double pff = success_probability(outs, FeedForward::With), pno = success_probability(outs, FeedForward::Without);
    summary["p_ff"] = pff;
    summary["p_ff_exact"] = rationalize(pff);
    summary["p_noff"] = pno;
    summary["p_noff_exact"] = rationalize(pno);
    attach_feedforward(c, outs);
  }
  json list = json::array();
  for (const auto& o : outs)
    if (only.empty() || o.key(c) == only) list.push_back(outcome_json(o, c));
  if (!only.empty() && list.empty()) {
    std::cerr << "no accepted outcome with pattern " << only << '\n';
    return kExitInvalid;
  }
  json doc = {{"summary", summary}, {"outcomes", list}};
  if (!c.feedforward_table.empty()) doc["feedforward"] = c.feedforward_table;
  write_out(report, doc.dump(2));
  std::cout << "outcomes: " << outs.size() << "  herald probability: " << rationalize(total) << '\n';
  if (summary.contains("p_ff"))
    std::cout << "P_ff = " << summary["p_ff_exact"].get<std::string>()
              << "\nP_noff = " << summary["p_noff_exact"].get<std::string>() << '\n';
  return 0;
}

int cmd_verify(const std::string& graph_path, const std::string& target, int n, const Settings& s) {
  SculptingBigraph g = parse_graph(read_file(graph_path));
  if (!is_epm(g)) {
    for (const auto& c : non_epm_circles(g)) std::cerr << "circle '" << c << "' is not EPM\n";
    return kExitInvalid;
  }
  auto r = verify_scheme(g, parse_kind(target), n, resolve_threads(s.threads));
  std::cout << report_table({r});
  std::cout << "P_ff = " << rationalize(r.p_ff) << "  (" << r.p_ff << ")\n";
  std::cout << "P_noff = " << rationalize(r.p_noff) << "  (" << r.p_noff << ")\n";
  bool ok = r.no_bunching && r.oracle_target_fidelity >= 1 - s.fidelity_tolerance &&
            r.circuit_fidelity >= 1 - s.fidelity_tolerance && r.p_ff > 0;
  if (!ok) std::cerr << "verification mismatch\n";
  return ok ? 0 : kExitMismatch;
}

int cmd_export_dot(const std::string& graph_path, const std::string& circuit_path, const std::string& out) {
  if (!graph_path.empty()) write_out(out, graph_to_dot(parse_graph(read_file(graph_path))));
  else write_out(out, circuit_to_dot(parse_circuit(read_file(circuit_path))));
  return 0;
}

int cmd_report(int max_n, const std::string& json_out, const Settings& s) {
  unsigned threads = resolve_threads(s.threads);
  std::vector<SchemeReport> rs;
  for (int n = 2; n <= max_n; ++n) rs.push_back(verify_scheme(preset(PresetKind::GHZ, n), PresetKind::GHZ, n, threads));
  for (int n = 2; n <= std::min(max_n, 4); ++n)
    rs.push_back(verify_scheme(preset(PresetKind::W, n), PresetKind::W, n, threads));
  rs.push_back(verify_scheme(preset(PresetKind::TYPE5, 3), PresetKind::TYPE5, 3, threads));
  std::cout << report_table(rs);
  if (!json_out.empty()) {
    json arr = json::array();
    for (const auto& r : rs) arr.push_back(r.to_json());
    write_out(json_out, arr.dump(2));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sculpting-bigraph to linear-optics compiler and Fock-space simulator"};
  app.require_subcommand(1);
  Settings settings;
  std::string config;
  app.add_option("--threads", settings.threads, "worker threads (default: SCULPT_THREADS or hardware)");
  app.add_option("--config", config, "key = value file (fidelity_tolerance, threads)");

  std::string kind = "ghz", out, graph, circuit, report, only, target;
  int n = 3, max_n = 5;
  bool dual = false, all = false;

  auto* p = app.add_subcommand("preset", "emit a preset graph");
  p->add_option("--kind", kind)->check(CLI::IsMember({"ghz", "w", "type5"}));
  p->add_option("--n", n)->check(CLI::Range(2, 12));
  p->add_option("--out", out);

  auto* c = app.add_subcommand("compile", "lower a graph to a circuit");
  c->add_option("--graph", graph)->required();
  c->add_flag("--dual-rail", dual);
  c->add_option("--out", out);

  auto* s = app.add_subcommand("simulate", "enumerate heralded outcomes of a circuit");
  s->add_option("--circuit", circuit)->required();
  s->add_option("--report", report);
  s->add_option("--only-pattern", only, "group counts joined by '|', e.g. 10|01");
  s->add_option("--target", target, "classify against ghz|w|type5")->check(CLI::IsMember({"ghz", "w", "type5"}));
  s->add_option("--n", n);

  auto* v = app.add_subcommand("verify", "oracle vs circuit check");
  v->add_option("--graph", graph)->required();
  v->add_option("--target", target)->required()->check(CLI::IsMember({"ghz", "w", "type5"}));
  v->add_option("--n", n);

  auto* e = app.add_subcommand("export-dot", "Graphviz export");
  auto* eg = e->add_option("--graph", graph);
  auto* ec = e->add_option("--circuit", circuit);
  eg->excludes(ec);
  e->add_option("--out", out);

  auto* r = app.add_subcommand("report", "acceptance table over the presets");
  r->add_flag("--all", all, "include every preset (default)");
  r->add_option("--max-n", max_n)->check(CLI::Range(2, 6));
  r->add_option("--json", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    if (!config.empty()) load_config(config, settings);
    if (p->parsed()) return cmd_preset(kind, n, out);
    if (c->parsed()) return cmd_compile(graph, dual, out);
    if (s->parsed()) return cmd_simulate(circuit, report, only, target, n, settings);
    if (v->parsed()) return cmd_verify(graph, target, n, settings);
    if (e->parsed()) {
      if (graph.empty() && circuit.empty()) {
        std::cerr << "export-dot: need --graph or --circuit\n";
        return kExitIo;
      }
      return cmd_export_dot(graph, circuit, out);
    }
    if (r->parsed()) return cmd_report(max_n, out, settings);
  } catch (const GraphError& err) {
    std::cerr << "invalid graph: " << err.what() << '\n';
    return kExitInvalid;
  } catch (const CircuitError& err) {
    std::cerr << "invalid circuit: " << err.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitIo;
  }
  return 0;
}

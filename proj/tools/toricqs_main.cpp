// Command-line front end for the toricqs library.
//
// Subcommands map one-to-one onto the library surface: eval (quasi-state and
// Calabi values of a Hamiltonian), mu-delta (the rescaled one-parameter
// family on a radial profile), independence (rank certificate for the
// family), displace (symmetry displaceability of points and balls), median
// (measured-tree median), decompose (flatten/cover/partition pipeline),
// selftest (the acceptance gate), and revolve (generate a measured-tree
// model of a surface of revolution).
//
// Exit codes: 0 success, 1 invalid input (bad flags, malformed JSON,
// violated preconditions), 2 internal defect (cross-checks that can only
// fail if the library itself is wrong).
//
// Output is CSV rows with 17 significant digits by default; --human switches
// to aligned tables at 6 significant digits.  For a fixed command line the
// output is byte-identical across runs.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "toricqs/basespace.hpp"
#include "toricqs/decompose.hpp"
#include "toricqs/error.hpp"
#include "toricqs/funcspace.hpp"
#include "toricqs/jsonio.hpp"
#include "toricqs/measure.hpp"
#include "toricqs/quasistate.hpp"
#include "toricqs/region.hpp"
#include "toricqs/selftest.hpp"
#include "toricqs/symmetry.hpp"

namespace {

using toricqs::validation_error;

// ---------------------------------------------------------------------------
// Output formatting

std::string fmt_value(double v, bool human) {
  char buf[48];
  std::snprintf(buf, sizeof buf, human ? "%.6g" : "%.17g", v);
  return buf;
}

// Short form for labels (delta, gamma, indices) where the value is an input
// echoed back, not a computed result.
std::string fmt_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Accumulates rows and renders them either as machine CSV or as an aligned
// human table.  Everything is buffered so --out can receive the exact bytes
// that would have gone to stdout.
class Table {
 public:
  explicit Table(bool human) : human_(human) {}

  Table& cell(std::string s) {
    current_.push_back(std::move(s));
    return *this;
  }
  // Keeps string literals away from the bool overload.
  Table& cell(const char* s) { return cell(std::string(s)); }
  Table& cell(double v) { return cell(fmt_value(v, human_)); }
  Table& label(double v) { return cell(fmt_label(v)); }
  Table& cell(int v) { return cell(std::to_string(v)); }
  Table& cell(bool v) { return cell(std::string(v ? "true" : "false")); }
  void end_row() {
    rows_.push_back(std::move(current_));
    current_.clear();
  }

  std::string render() const {
    std::ostringstream out;
    if (!human_) {
      for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i) out << ',';
          out << row[i];
        }
        out << '\n';
      }
      return out.str();
    }
    std::vector<std::size_t> width;
    for (const auto& row : rows_)
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (width.size() <= i) width.resize(i + 1, 0);
        width[i] = std::max(width[i], row[i].size());
      }
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::string padded = row[i];
        if (i + 1 < row.size()) padded.resize(width[i], ' ');
        if (i) line += "  ";
        line += padded;
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << '\n';
    }
    return out.str();
  }

 private:
  bool human_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::string> current_;
};

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw validation_error("cannot open output file: " + out_path);
  f << content;
  if (!f) throw validation_error("cannot write output file: " + out_path);
}

// ---------------------------------------------------------------------------
// Input parsing helpers

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string token = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                    : comma - pos);
    std::size_t consumed = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &consumed);
    } catch (const std::exception&) {
      throw validation_error(what + " must be a comma-separated list of numbers, got '" +
                             token + "'");
    }
    while (consumed < token.size() &&
           std::isspace(static_cast<unsigned char>(token[consumed])))
      ++consumed;
    if (consumed != token.size())
      throw validation_error(what + " must be a comma-separated list of numbers, got '" +
                             token + "'");
    values.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (values.empty())
    throw validation_error(what + " must contain at least one number");
  return values;
}

toricqs::BaseSpace load_space(const std::string& path) {
  return toricqs::parse_space(toricqs::read_file(path));
}

toricqs::SmoothFunction load_function(const std::string& path,
                                      const toricqs::BaseSpace& space) {
  return toricqs::parse_function_for_space(toricqs::read_file(path), space);
}

toricqs::Convention parse_convention(const std::string& name) {
  if (name == "derived") return toricqs::Convention::Derived;
  if (name == "printed" || name == "paper") return toricqs::Convention::Printed;
  throw validation_error("convention must be one of derived, printed, paper; got '" +
                         name + "'");
}

// ---------------------------------------------------------------------------
// Engine options shared by the integrating subcommands.

struct EngineOpts {
  std::string name = "exact";
  int order = 8;
  int subdiv = 0;
  long long samples = 1000000;
  std::uint64_t seed = 1;
};

void add_engine_opts(CLI::App* cmd, EngineOpts& o) {
  cmd->add_option("--engine", o.name, "Integration engine: exact, quad, or mc")
      ->capture_default_str();
  cmd->add_option("--order", o.order, "Quadrature order (quad engine)")
      ->capture_default_str();
  cmd->add_option("--subdiv", o.subdiv, "Subdivision levels for 2-d quadrature")
      ->capture_default_str();
  cmd->add_option("--samples", o.samples, "Sample count (mc engine)")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Random seed (mc engine)")->capture_default_str();
}

toricqs::Engine make_engine(const EngineOpts& o) {
  if (o.name == "exact") return toricqs::ExactEngine{};
  if (o.name == "quad") {
    if (o.order < 1) throw validation_error("quadrature order must be >= 1");
    if (o.subdiv < 0) throw validation_error("subdivision level must be >= 0");
    return toricqs::QuadEngine{o.order, o.subdiv};
  }
  if (o.name == "mc") {
    if (o.samples < 1) throw validation_error("sample count must be >= 1");
    return toricqs::McEngine{o.samples, o.seed};
  }
  throw validation_error("engine must be one of exact, quad, mc; got '" + o.name + "'");
}

// ---------------------------------------------------------------------------
// eval

struct EvalOpts {
  std::string space_path, function_path, sigma_path, out_path;
  int power = 1;
  EngineOpts engine;
  bool human = false;
};

void run_eval(const EvalOpts& o) {
  toricqs::BaseSpace space = load_space(o.space_path);
  toricqs::QuasiStateModel model =
      o.sigma_path.empty()
          ? toricqs::standard_model(space)
          : toricqs::custom_model(
                space, toricqs::parse_sigma(toricqs::read_file(o.sigma_path), space));
  toricqs::ToricHamiltonian h{load_function(o.function_path, space), o.power};
  toricqs::Engine engine = make_engine(o.engine);

  double zeta_v = toricqs::zeta(model, h, engine);
  double calabi_v = toricqs::calabi_value(model, h, engine);
  double sigma_term = o.power * toricqs::integrate_sigma(space, model.sigma, h.fbar);

  Table t(o.human);
  t.cell("zeta").cell(zeta_v);
  t.end_row();
  t.cell("calabi").cell(calabi_v);
  t.end_row();
  t.cell("sigma_term").cell(sigma_term);
  t.end_row();
  if (o.engine.name == "mc") {
    toricqs::McResult mc = toricqs::integrate_monte_carlo(
        model.dh, h.fbar, toricqs::McEngine{o.engine.samples, o.engine.seed});
    t.cell("standard_error").cell(std::abs(static_cast<double>(o.power)) *
                                  mc.standard_error);
    t.end_row();
  }
  write_output(t.render(), o.out_path);
}

// ---------------------------------------------------------------------------
// mu-delta

struct MuDeltaOpts {
  int n = 1;
  std::string deltas_text, profile_path, convention = "derived", out_path;
  bool human = false;
};

void run_mu_delta(const MuDeltaOpts& o) {
  std::vector<double> deltas = parse_double_list(o.deltas_text, "deltas");
  // Profiles are functions of the radial variable; parse them against a 1-d
  // reference space so shape validation applies.
  toricqs::BaseSpace ref(toricqs::make_simplex(1, 1.0));
  toricqs::SmoothFunction profile = load_function(o.profile_path, ref);
  toricqs::Convention conv = parse_convention(o.convention);

  Table t(o.human);
  for (double d : deltas) {
    double v = toricqs::mu_delta_closed_form(o.n, d, profile, conv);
    t.cell("mu").label(d).cell(v);
    t.end_row();
    if (conv == toricqs::Convention::Derived) {
      // The same value through the transported-Hamiltonian route.  The two
      // paths are independent computations; disagreement is a library defect,
      // not bad input.
      double pb = toricqs::mu_delta_via_pullback(o.n, d, profile);
      t.cell("pullback").label(d).cell(pb);
      t.end_row();
      if (std::abs(pb - v) > 1e-9)
        throw toricqs::internal_error(
            "two-path disagreement at delta=" + fmt_label(d) +
            ": closed_form=" + fmt_value(v, false) +
            " pullback=" + fmt_value(pb, false));
    }
  }
  // The conformal-prefactor conventions diverge away from delta = 1; report
  // the gap instead of silently picking one.
  for (double d : deltas) {
    if (d == 1.0) continue;
    double gap = toricqs::mu_delta_closed_form(o.n, d, profile,
                                               toricqs::Convention::Printed) -
                 toricqs::mu_delta_closed_form(o.n, d, profile,
                                               toricqs::Convention::Derived);
    t.cell("convention_gap").label(d).cell(gap);
    t.end_row();
  }
  write_output(t.render(), o.out_path);
}

// ---------------------------------------------------------------------------
// independence

struct IndependenceOpts {
  int n = 1;
  std::string deltas_text, profiles_path, convention = "derived", out_path;
  double radius = 0.0;  // 0 = pick a default matched to the dimension
  bool human = false;
};

void run_independence(const IndependenceOpts& o) {
  std::vector<double> deltas = parse_double_list(o.deltas_text, "deltas");
  std::vector<toricqs::SmoothFunction> profiles;
  if (!o.profiles_path.empty()) {
    nlohmann::json arr;
    try {
      arr = nlohmann::json::parse(toricqs::read_file(o.profiles_path));
    } catch (const nlohmann::json::exception& e) {
      throw validation_error(std::string("profiles file: ") + e.what());
    }
    if (!arr.is_array() || arr.empty())
      throw validation_error("profiles file must hold a nonempty JSON array of functions");
    for (const auto& el : arr) profiles.push_back(toricqs::parse_function(el.dump()));
  } else {
    // Default witnesses: one bump per delta, centered where that family
    // member's point evaluation sits, so the matrix is diagonally dominant.
    double radius = o.radius > 0.0 ? o.radius : (o.n == 1 ? 0.02 : 0.03);
    for (double d : deltas) {
      double center = o.n / ((o.n + 1.0) * d);
      profiles.push_back(toricqs::fn::bump({center}, radius));
    }
  }

  toricqs::IndependenceCertificate cert = toricqs::independence_certificate(
      o.n, deltas, profiles, parse_convention(o.convention));

  Table t(o.human);
  for (std::size_t i = 0; i < cert.matrix.size(); ++i)
    for (std::size_t j = 0; j < cert.matrix[i].size(); ++j) {
      t.cell("matrix").cell(static_cast<int>(i)).cell(static_cast<int>(j)).cell(
          cert.matrix[i][j]);
      t.end_row();
    }
  t.cell("rank").cell(cert.rank);
  t.end_row();
  t.cell("min_singular_value").cell(cert.min_singular_value);
  t.end_row();
  t.cell("max_singular_value").cell(cert.max_singular_value);
  t.end_row();
  t.cell("rank_tolerance").cell(cert.rank_tolerance);
  t.end_row();
  write_output(t.render(), o.out_path);
}

// ---------------------------------------------------------------------------
// displace

struct DisplaceOpts {
  std::string space_path, point_text, center_text, out_path;
  double radius = 0.0;
  bool human = false;
};

void run_displace(const DisplaceOpts& o) {
  toricqs::BaseSpace space = load_space(o.space_path);
  if (!space.is_simplex())
    throw validation_error("displace requires a simplex space");
  const toricqs::Simplex& s = space.simplex();

  if (o.point_text.empty() && o.center_text.empty())
    throw validation_error("provide either --point or --center with --radius");

  std::optional<toricqs::DisplaceabilityCertificate> cert;
  if (!o.point_text.empty()) {
    cert = toricqs::displace_point(s, parse_double_list(o.point_text, "point"));
  } else {
    if (o.radius <= 0.0) throw validation_error("ball radius must be positive");
    cert = toricqs::displace_region(
        s, toricqs::Region::ball(parse_double_list(o.center_text, "center"), o.radius));
  }

  Table t(o.human);
  t.cell("displaceable").cell(cert.has_value());
  t.end_row();
  if (cert) {
    t.cell("element").cell(toricqs::cycle_notation(cert->g));
    t.end_row();
    t.cell("separation").cell(cert->separation);
    t.end_row();
  }
  write_output(t.render(), o.out_path);
}

// ---------------------------------------------------------------------------
// median

struct MedianOpts {
  std::string tree_path, out_path;
  bool human = false;
};

void run_median(const MedianOpts& o) {
  toricqs::BaseSpace space = load_space(o.tree_path);
  if (!space.is_tree()) throw validation_error("median requires a tree space");
  const toricqs::MeasuredTree& tree = space.tree();
  toricqs::MedianResult med = toricqs::tree_median(tree);

  Table t(o.human);
  if (med.point.is_vertex()) {
    t.cell("median")
        .cell("vertex:" + tree.vertex_names[med.point.vertex])
        .cell("unique:" + std::string(med.unique ? "true" : "false"));
  } else {
    const toricqs::TreeEdge& e = tree.edges[med.point.edge];
    t.cell("median")
        .cell("edge:" + tree.vertex_names[e.u] + "-" + tree.vertex_names[e.v] + "@" +
              fmt_value(med.point.offset, o.human))
        .cell("unique:" + std::string(med.unique ? "true" : "false"));
  }
  t.end_row();
  write_output(t.render(), o.out_path);
}

// ---------------------------------------------------------------------------
// decompose

struct DecomposeOpts {
  std::string space_path, function_path, json_path, out_path;
  double gamma = 0.0;
  bool sweep = false;
  int order = 16;
  int subdiv = 0;
  bool human = false;
};

nlohmann::ordered_json report_to_json(const toricqs::DecompositionReport& rep) {
  nlohmann::ordered_json j;
  j["gamma"] = rep.gamma;
  j["epsilon_achieved"] = rep.epsilon_achieved;
  nlohmann::ordered_json pieces = nlohmann::ordered_json::array();
  for (const auto& p : rep.pieces) {
    nlohmann::ordered_json pj;
    pj["index"] = p.index;
    pj["center"] = p.ball.center;
    pj["radius"] = p.ball.radius;
    pj["kind"] = p.near_pstar ? "flat" : "certified";
    if (p.certificate) {
      pj["element"] = toricqs::cycle_notation(p.certificate->g);
      pj["separation"] = p.certificate->separation;
    } else {
      pj["element"] = nullptr;
      pj["separation"] = 0.0;
    }
    pj["value"] = p.value;
    pieces.push_back(std::move(pj));
  }
  j["pieces"] = std::move(pieces);
  j["sum_of_values"] = rep.sum_of_values;
  j["zeta_fprime"] = rep.zeta_fprime;
  j["direct_value"] = rep.direct_value;
  j["reconstruction_error"] = rep.reconstruction_error;
  return j;
}

void check_additivity(const toricqs::DecompositionReport& rep) {
  // The pieces are integrated under one shared rule, so their sum telescopes
  // to the direct value; any visible gap is a defect in the pipeline.
  double tol = 1e-9 * std::max(1.0, std::abs(rep.direct_value));
  if (std::abs(rep.sum_of_values - rep.direct_value) > tol)
    throw toricqs::internal_error(
        "piece sum disagrees with the direct value: sum=" +
        fmt_value(rep.sum_of_values, false) +
        " direct=" + fmt_value(rep.direct_value, false));
}

void emit_report_rows(Table& t, const toricqs::DecompositionReport& rep) {
  t.cell("gamma").label(rep.gamma);
  t.end_row();
  t.cell("epsilon_achieved").cell(rep.epsilon_achieved);
  t.end_row();
  t.cell("pieces").cell(static_cast<int>(rep.pieces.size()));
  t.end_row();
  for (const auto& p : rep.pieces) {
    t.cell("piece")
        .cell(p.index)
        .cell(p.value)
        .cell(p.near_pstar ? "flat" : "certified")
        .cell(p.certificate ? toricqs::cycle_notation(p.certificate->g)
                            : std::string("-"))
        .cell(p.certificate ? p.certificate->separation : 0.0);
    t.end_row();
  }
  t.cell("sum_of_values").cell(rep.sum_of_values);
  t.end_row();
  t.cell("zeta_fprime").cell(rep.zeta_fprime);
  t.end_row();
  t.cell("direct_value").cell(rep.direct_value);
  t.end_row();
  t.cell("reconstruction_error").cell(rep.reconstruction_error);
  t.end_row();
}

void run_decompose(const DecomposeOpts& o) {
  toricqs::BaseSpace space = load_space(o.space_path);
  if (!space.is_simplex())
    throw validation_error("decompose requires a simplex space");
  toricqs::QuasiStateModel model = toricqs::standard_model(space);
  toricqs::SmoothFunction f = load_function(o.function_path, space);
  if (!o.sweep && o.gamma <= 0.0)
    throw validation_error("provide either --gamma with a positive value or --gamma-sweep");
  if (o.order < 1) throw validation_error("quadrature order must be >= 1");
  if (o.subdiv < 0) throw validation_error("subdivision level must be >= 0");
  toricqs::QuadEngine quad{o.order, o.subdiv};

  Table t(o.human);
  nlohmann::ordered_json artifact;
  if (o.sweep) {
    const double gammas[] = {0.2, 0.1, 0.05, 0.025};
    nlohmann::ordered_json sweep = nlohmann::ordered_json::array();
    for (double g : gammas) {
      toricqs::DecompositionReport rep =
          toricqs::partition_and_evaluate(model, f, g, quad);
      check_additivity(rep);
      t.cell("sweep")
          .label(g)
          .cell(rep.sum_of_values)
          .cell(rep.direct_value)
          .cell(rep.epsilon_achieved)
          .cell(static_cast<int>(rep.pieces.size()));
      t.end_row();
      sweep.push_back(report_to_json(rep));
    }
    artifact["sweep"] = std::move(sweep);
  } else {
    toricqs::DecompositionReport rep =
        toricqs::partition_and_evaluate(model, f, o.gamma, quad);
    check_additivity(rep);
    emit_report_rows(t, rep);
    artifact = report_to_json(rep);
  }
  if (!o.json_path.empty()) {
    std::ofstream jf(o.json_path, std::ios::binary);
    if (!jf) throw validation_error("cannot open output file: " + o.json_path);
    jf << artifact.dump(2) << '\n';
    if (!jf) throw validation_error("cannot write output file: " + o.json_path);
  }
  write_output(t.render(), o.out_path);
}

// ---------------------------------------------------------------------------
// selftest

struct SelftestOpts {
  std::string convention = "derived", out_path;
};

int run_selftest(const SelftestOpts& o) {
  toricqs::Convention conv = parse_convention(o.convention);
  std::ostringstream buf;
  bool ok = toricqs::run_acceptance(buf, conv);
  if (conv == toricqs::Convention::Printed) {
    // Make the convention discrepancy visible, not just tolerated: the two
    // prefactor conventions disagree away from delta = 1 and the gap below
    // is the concrete number for the simplest profile.
    toricqs::SmoothFunction profile = toricqs::fn::monomial({2}, 1.0);
    double gap =
        toricqs::mu_delta_closed_form(1, 0.9, profile, toricqs::Convention::Printed) -
        toricqs::mu_delta_closed_form(1, 0.9, profile, toricqs::Convention::Derived);
    buf << "printed convention gap at delta=0.9 (n=1, profile t^2): "
        << fmt_value(gap, false) << "\n";
  }
  write_output(buf.str(), o.out_path);
  return ok ? 0 : 2;
}

// ---------------------------------------------------------------------------
// revolve

struct RevolveOpts {
  std::string profile_path, out_path;
  double length = 0.0;
  int segments = 64;
  std::string base_name = "base", apex_name = "apex";
  bool human = false;
};

void run_revolve(const RevolveOpts& o) {
  if (o.length <= 0.0) throw validation_error("length must be positive");
  if (o.segments < 1 || o.segments > 100000)
    throw validation_error("segments must be between 1 and 100000");
  toricqs::BaseSpace ref(toricqs::make_simplex(1, std::max(o.length, 1.0)));
  toricqs::SmoothFunction radius = load_function(o.profile_path, ref);

  // Density along the height axis: the lateral area rate of the surface of
  // revolution, 2*pi*r(h)*sqrt(1 + r'(h)^2), sampled at segment midpoints
  // and held constant per segment (exact for a cylinder, midpoint-accurate
  // otherwise; refine with --segments).
  const double pi = 3.14159265358979323846;
  double h = o.length * 1e-6;
  std::vector<toricqs::SmoothFunction> boxes;
  boxes.reserve(o.segments);
  for (int i = 0; i < o.segments; ++i) {
    double a = o.length * i / o.segments;
    double b = o.length * (i + 1) / o.segments;
    double mid = 0.5 * (a + b);
    double r = toricqs::eval_profile(radius, mid);
    if (!(r >= 0.0))
      throw validation_error("radius profile must be nonnegative on [0, length]; r(" +
                             fmt_label(mid) + ") = " + fmt_value(r, false));
    double rp = (toricqs::eval_profile(radius, mid + h) -
                 toricqs::eval_profile(radius, mid - h)) /
                (2.0 * h);
    boxes.push_back(toricqs::fn::box(a, b, 2.0 * pi * r * std::sqrt(1.0 + rp * rp)));
  }

  std::vector<toricqs::EdgeSpec> edges;
  edges.push_back({o.base_name, o.apex_name, o.length, toricqs::fn::sum(boxes)});
  toricqs::MeasuredTree tree = toricqs::tree_from_edges(edges);
  std::string artifact = toricqs::space_to_json(toricqs::BaseSpace(tree));

  // Round-trip the artifact through the parser before handing it out, and
  // report the total measure it carries.
  toricqs::BaseSpace reparsed = toricqs::parse_space(artifact);
  double mass = toricqs::standard_model(reparsed).dh.total_mass();

  if (o.out_path.empty()) {
    std::cout << artifact;
    if (!artifact.empty() && artifact.back() != '\n') std::cout << '\n';
  } else {
    write_output(artifact, o.out_path);
    Table t(o.human);
    t.cell("mass").cell(mass);
    t.end_row();
    t.cell("segments").cell(o.segments);
    t.end_row();
    std::cout << t.render();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-state functionals on moment polytopes and measured trees"};
  app.require_subcommand(1);

  EvalOpts eval_o;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Quasi-state, Calabi, and correction values");
  eval_cmd->add_option("--space", eval_o.space_path, "Space JSON file")->required();
  eval_cmd->add_option("--function", eval_o.function_path, "Function JSON file")
      ->required();
  eval_cmd->add_option("--sigma", eval_o.sigma_path,
                       "Correction measure JSON file (default: standard model)");
  eval_cmd->add_option("--power", eval_o.power, "Iteration count (nonzero integer)")
      ->capture_default_str();
  add_engine_opts(eval_cmd, eval_o.engine);
  eval_cmd->add_option("--out", eval_o.out_path, "Write output to a file");
  eval_cmd->add_flag("--human", eval_o.human, "Aligned table at 6 digits");

  MuDeltaOpts mu_o;
  CLI::App* mu_cmd =
      app.add_subcommand("mu-delta", "Rescaled family values on a radial profile");
  mu_cmd->add_option("--n", mu_o.n, "Simplex dimension")->required();
  mu_cmd->add_option("--deltas", mu_o.deltas_text, "Comma-separated delta list")
      ->required();
  mu_cmd->add_option("--profile,--function", mu_o.profile_path,
                     "Profile function JSON file")
      ->required();
  mu_cmd->add_option("--convention", mu_o.convention,
                     "Prefactor convention: derived, printed, or paper")
      ->capture_default_str();
  mu_cmd->add_option("--out", mu_o.out_path, "Write output to a file");
  mu_cmd->add_flag("--human", mu_o.human, "Aligned table at 6 digits");

  IndependenceOpts ind_o;
  CLI::App* ind_cmd =
      app.add_subcommand("independence", "Rank certificate for the rescaled family");
  ind_cmd->add_option("--n", ind_o.n, "Simplex dimension")->required();
  ind_cmd->add_option("--deltas", ind_o.deltas_text, "Comma-separated delta list")
      ->required();
  ind_cmd->add_option("--profiles", ind_o.profiles_path,
                      "JSON array of witness profiles (default: matched bumps)");
  ind_cmd->add_option("--radius", ind_o.radius,
                      "Bump radius for the default witnesses");
  ind_cmd->add_option("--convention", ind_o.convention,
                      "Prefactor convention: derived, printed, or paper")
      ->capture_default_str();
  ind_cmd->add_option("--out", ind_o.out_path, "Write output to a file");
  ind_cmd->add_flag("--human", ind_o.human, "Aligned table at 6 digits");

  DisplaceOpts disp_o;
  CLI::App* disp_cmd =
      app.add_subcommand("displace", "Symmetry displaceability of a point or ball");
  disp_cmd->add_option("--space", disp_o.space_path, "Simplex space JSON file")
      ->required();
  CLI::Option* point_opt =
      disp_cmd->add_option("--point", disp_o.point_text, "Comma-separated coordinates");
  CLI::Option* center_opt = disp_cmd->add_option(
      "--center", disp_o.center_text, "Ball center (comma-separated coordinates)");
  disp_cmd->add_option("--radius", disp_o.radius, "Ball radius")->needs(center_opt);
  point_opt->excludes(center_opt);
  center_opt->excludes(point_opt)->needs("--radius");
  disp_cmd->add_option("--out", disp_o.out_path, "Write output to a file");
  disp_cmd->add_flag("--human", disp_o.human, "Aligned table at 6 digits");

  MedianOpts med_o;
  CLI::App* med_cmd = app.add_subcommand("median", "Median of a measured tree");
  med_cmd->add_option("--tree", med_o.tree_path, "Tree space JSON file")->required();
  med_cmd->add_option("--out", med_o.out_path, "Write output to a file");
  med_cmd->add_flag("--human", med_o.human, "Aligned table at 6 digits");

  DecomposeOpts dec_o;
  CLI::App* dec_cmd = app.add_subcommand(
      "decompose", "Flatten, cover, and partition a Hamiltonian into certified pieces");
  dec_cmd->add_option("--space", dec_o.space_path, "Simplex space JSON file")
      ->required();
  dec_cmd->add_option("--function", dec_o.function_path, "Function JSON file")
      ->required();
  CLI::Option* gamma_opt =
      dec_cmd->add_option("--gamma", dec_o.gamma, "Cover radius parameter");
  CLI::Option* sweep_opt = dec_cmd->add_flag(
      "--gamma-sweep", dec_o.sweep, "Run the standard gamma ladder 0.2,0.1,0.05,0.025");
  gamma_opt->excludes(sweep_opt);
  sweep_opt->excludes(gamma_opt);
  dec_cmd->add_option("--order", dec_o.order, "Quadrature order")
      ->capture_default_str();
  dec_cmd->add_option("--subdiv", dec_o.subdiv, "Subdivision levels")
      ->capture_default_str();
  dec_cmd->add_option("--json", dec_o.json_path, "Write the full report as JSON");
  dec_cmd->add_option("--out", dec_o.out_path, "Write output to a file");
  dec_cmd->add_flag("--human", dec_o.human, "Aligned table at 6 digits");

  SelftestOpts st_o;
  CLI::App* st_cmd = app.add_subcommand("selftest", "Run the acceptance gate");
  st_cmd->add_option("--convention", st_o.convention,
                     "Prefactor convention: derived, printed, or paper")
      ->capture_default_str();
  st_cmd->add_option("--out", st_o.out_path, "Write output to a file");

  RevolveOpts rev_o;
  CLI::App* rev_cmd = app.add_subcommand(
      "revolve", "Generate a measured-tree model of a surface of revolution");
  rev_cmd->add_option("--profile", rev_o.profile_path,
                      "Radius profile r(h) as a function JSON file")
      ->required();
  rev_cmd->add_option("--length", rev_o.length, "Height interval length")->required();
  rev_cmd->add_option("--segments", rev_o.segments, "Density sampling segments")
      ->capture_default_str();
  rev_cmd->add_option("--base", rev_o.base_name, "Name of the base vertex")
      ->capture_default_str();
  rev_cmd->add_option("--apex", rev_o.apex_name, "Name of the apex vertex")
      ->capture_default_str();
  rev_cmd->add_option("--out", rev_o.out_path, "Write the tree JSON to a file");
  rev_cmd->add_flag("--human", rev_o.human, "Aligned table at 6 digits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (eval_cmd->parsed()) run_eval(eval_o);
    if (mu_cmd->parsed()) run_mu_delta(mu_o);
    if (ind_cmd->parsed()) run_independence(ind_o);
    if (disp_cmd->parsed()) run_displace(disp_o);
    if (med_cmd->parsed()) run_median(med_o);
    if (dec_cmd->parsed()) run_decompose(dec_o);
    if (st_cmd->parsed()) return run_selftest(st_o);
    if (rev_cmd->parsed()) run_revolve(rev_o);
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const toricqs::internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

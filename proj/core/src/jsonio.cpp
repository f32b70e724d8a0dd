#include "toricqs/jsonio.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "toricqs/error.hpp"

namespace toricqs {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("malformed JSON: ") + e.what());
  }
}

std::string require_string(const json& j, const char* field, const char* ctx) {
  if (!j.contains(field) || !j.at(field).is_string()) {
    std::ostringstream msg;
    msg << ctx << " needs a string field '" << field << "'";
    throw validation_error(msg.str());
  }
  return j.at(field).get<std::string>();
}

double require_number(const json& j, const char* field, const char* ctx) {
  if (!j.contains(field) || !j.at(field).is_number()) {
    std::ostringstream msg;
    msg << ctx << " needs a numeric field '" << field << "'";
    throw validation_error(msg.str());
  }
  return j.at(field).get<double>();
}

int require_int(const json& j, const char* field, const char* ctx) {
  if (!j.contains(field) || !j.at(field).is_number_integer()) {
    std::ostringstream msg;
    msg << ctx << " needs an integer field '" << field << "'";
    throw validation_error(msg.str());
  }
  return j.at(field).get<int>();
}

const json& require_field(const json& j, const char* field, const char* ctx) {
  if (!j.contains(field)) {
    std::ostringstream msg;
    msg << ctx << " needs a field '" << field << "'";
    throw validation_error(msg.str());
  }
  return j.at(field);
}

std::vector<double> number_array(const json& j, const char* ctx) {
  if (!j.is_array()) {
    std::ostringstream msg;
    msg << ctx << " must be an array of numbers";
    throw validation_error(msg.str());
  }
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) {
      std::ostringstream msg;
      msg << ctx << " must be an array of numbers";
      throw validation_error(msg.str());
    }
    out.push_back(v.get<double>());
  }
  return out;
}

SmoothFunction function_from_json(const json& j, const BaseSpace* space);

BaseSpace space_from_json(const json& j) {
  if (!j.is_object()) throw validation_error("space must be a JSON object");
  std::string kind = require_string(j, "kind", "space");
  if (kind == "simplex") {
    int n = require_int(j, "n", "simplex space");
    double scale = j.contains("scale") ? require_number(j, "scale", "simplex space") : 1.0;
    return BaseSpace(make_simplex(n, scale));
  }
  if (kind == "tree") {
    const json& edges = require_field(j, "edges", "tree space");
    if (!edges.is_array() || edges.empty())
      throw validation_error("tree space needs a nonempty 'edges' array");
    std::vector<EdgeSpec> specs;
    for (const auto& e : edges) {
      EdgeSpec spec;
      spec.u = require_string(e, "u", "tree edge");
      spec.v = require_string(e, "v", "tree edge");
      spec.length = require_number(e, "len", "tree edge");
      const json& density = require_field(e, "density", "tree edge");
      if (density.is_number())
        spec.density = fn::constant(density.get<double>());
      else
        spec.density = function_from_json(density, nullptr);
      specs.push_back(std::move(spec));
    }
    return BaseSpace(tree_from_edges(specs));
  }
  if (kind == "product") {
    const json& factors = require_field(j, "factors", "product space");
    if (!factors.is_array() || factors.size() < 2)
      throw validation_error("product space needs at least two factors");
    ProductSpace prod;
    for (const auto& f : factors) {
      BaseSpace sub = space_from_json(f);
      if (sub.is_simplex())
        prod.factors.push_back(sub.simplex());
      else if (sub.is_tree())
        prod.factors.push_back(sub.tree());
      else
        throw validation_error("product factors must be simplex or tree spaces");
    }
    return BaseSpace(std::move(prod));
  }
  throw validation_error("unknown space kind '" + kind + "'");
}

int resolve_edge(const json& j, const BaseSpace* space, const char* ctx) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_array() && j.size() == 2 && j[0].is_string() && j[1].is_string()) {
    if (!space || !space->is_tree())
      throw validation_error(std::string(ctx) +
                             ": edge names can only be resolved against a tree space");
    const MeasuredTree& t = space->tree();
    int u = t.vertex_index(j[0].get<std::string>());
    int v = t.vertex_index(j[1].get<std::string>());
    for (size_t ei = 0; ei < t.edges.size(); ++ei)
      if ((t.edges[ei].u == u && t.edges[ei].v == v) ||
          (t.edges[ei].u == v && t.edges[ei].v == u))
        return static_cast<int>(ei);
    throw validation_error(std::string(ctx) + ": no edge joins the named vertices");
  }
  throw validation_error(std::string(ctx) +
                         " needs an edge index or a [\"u\",\"v\"] name pair");
}

SmoothFunction function_from_json(const json& j, const BaseSpace* space) {
  if (j.is_number()) return fn::constant(j.get<double>());
  if (!j.is_object()) throw validation_error("function must be a JSON object");
  std::string kind = require_string(j, "kind", "function");
  if (kind == "const") return fn::constant(require_number(j, "value", "const function"));
  if (kind == "monomial") {
    const json& exps = require_field(j, "exps", "monomial");
    if (!exps.is_array()) throw validation_error("monomial needs an 'exps' array");
    std::vector<int> e;
    for (const auto& v : exps) {
      if (!v.is_number_integer())
        throw validation_error("monomial exponents must be integers");
      e.push_back(v.get<int>());
    }
    double coef = j.contains("coef") ? require_number(j, "coef", "monomial") : 1.0;
    return fn::monomial(std::move(e), coef);
  }
  if (kind == "radial")
    return fn::radial(function_from_json(require_field(j, "profile", "radial"), space));
  if (kind == "bump") {
    std::vector<double> center =
        number_array(require_field(j, "center", "bump"), "bump center");
    double r = require_number(j, "r", "bump");
    bool cinf = j.contains("cinf") && j.at("cinf").is_boolean() && j.at("cinf").get<bool>();
    return fn::bump(std::move(center), r, cinf);
  }
  if (kind == "plateau") {
    std::vector<double> center =
        number_array(require_field(j, "center", "plateau"), "plateau center");
    return fn::plateau(std::move(center), require_number(j, "r_in", "plateau"),
                       require_number(j, "r_out", "plateau"));
  }
  if (kind == "box")
    return fn::box(require_number(j, "a", "box"), require_number(j, "b", "box"),
                   j.contains("value") ? require_number(j, "value", "box") : 1.0);
  if (kind == "edge_profile") {
    int edge = resolve_edge(require_field(j, "edge", "edge profile"), space, "edge profile");
    return fn::edge_profile(
        edge, function_from_json(require_field(j, "profile", "edge profile"), nullptr));
  }
  if (kind == "lift") {
    int factor = require_int(j, "factor", "lift");
    const BaseSpace* sub = nullptr;
    BaseSpace owned;
    if (space && space->is_product() && factor >= 0 &&
        factor < static_cast<int>(space->product().factors.size())) {
      owned = BaseSpace(space->product().factors[factor]);
      sub = &owned;
    }
    return fn::lift(factor, function_from_json(require_field(j, "f", "lift"), sub));
  }
  if (kind == "sum" || kind == "product") {
    const json& terms = require_field(j, "terms", kind.c_str());
    if (!terms.is_array()) throw validation_error(kind + " needs a 'terms' array");
    std::vector<SmoothFunction> fs;
    for (const auto& t : terms) fs.push_back(function_from_json(t, space));
    return kind == "sum" ? fn::sum(std::move(fs)) : fn::product(std::move(fs));
  }
  if (kind == "scale")
    return fn::scale(require_number(j, "c", "scale"),
                     function_from_json(require_field(j, "f", "scale"), space));
  if (kind == "shift")
    return fn::shift(require_number(j, "c", "shift"),
                     function_from_json(require_field(j, "f", "shift"), space));
  if (kind == "affine")
    return fn::affine_arg(require_number(j, "a", "affine argument"),
                          require_number(j, "b", "affine argument"),
                          function_from_json(require_field(j, "f", "affine argument"), space));
  throw validation_error("unknown function kind '" + kind + "'");
}

FactorPoint factor_point_from_json(const json& j, const FactorSpace& factor) {
  if (std::holds_alternative<Simplex>(factor)) {
    return number_array(j, "simplex point");
  }
  const MeasuredTree& t = std::get<MeasuredTree>(factor);
  if (!j.is_object())
    throw validation_error(
        "tree point must be {\"vertex\":name} or {\"edge\":[u,v],\"offset\":t}");
  TreePoint p;
  if (j.contains("vertex")) {
    p.vertex = t.vertex_index(require_string(j, "vertex", "tree point"));
    return p;
  }
  BaseSpace tree_space{t};
  p.edge = resolve_edge(require_field(j, "edge", "tree point"), &tree_space, "tree point");
  if (p.edge < 0 || p.edge >= static_cast<int>(t.edges.size()))
    throw validation_error("tree point edge index out of range");
  p.offset = require_number(j, "offset", "tree point");
  return p;
}

BasePoint point_from_json(const json& j, const BaseSpace& space) {
  BasePoint p;
  if (space.is_simplex()) {
    p.parts.push_back(number_array(j, "simplex point"));
    return p;
  }
  if (space.is_tree()) {
    p.parts.push_back(factor_point_from_json(j, space.tree()));
    return p;
  }
  const ProductSpace& prod = space.product();
  if (!j.is_array() || j.size() != prod.factors.size())
    throw validation_error("product point must be an array with one entry per factor");
  for (size_t i = 0; i < prod.factors.size(); ++i)
    p.parts.push_back(factor_point_from_json(j[i], prod.factors[i]));
  return p;
}

json function_to_json_impl(const FuncNode& f, const BaseSpace* space);

json children_to_json(const std::vector<SmoothFunction>& cs, const BaseSpace* space) {
  json arr = json::array();
  for (const auto& c : cs) arr.push_back(function_to_json_impl(*c, space));
  return arr;
}

json function_to_json_impl(const FuncNode& f, const BaseSpace* space) {
  json j;
  switch (f.kind) {
    case FKind::Constant:
      j["kind"] = "const";
      j["value"] = f.value;
      return j;
    case FKind::Monomial:
      j["kind"] = "monomial";
      j["exps"] = f.exps;
      j["coef"] = f.coef;
      return j;
    case FKind::Radial:
      j["kind"] = "radial";
      j["profile"] = function_to_json_impl(*f.child, space);
      return j;
    case FKind::Bump:
      j["kind"] = "bump";
      j["center"] = f.center;
      j["r"] = f.r0;
      if (f.cinf) j["cinf"] = true;
      return j;
    case FKind::Plateau:
      j["kind"] = "plateau";
      j["center"] = f.center;
      j["r_in"] = f.r0;
      j["r_out"] = f.r1;
      return j;
    case FKind::Box:
      j["kind"] = "box";
      j["a"] = f.r0;
      j["b"] = f.r1;
      j["value"] = f.value;
      return j;
    case FKind::EdgeProfile:
      j["kind"] = "edge_profile";
      if (space && space->is_tree()) {
        const MeasuredTree& t = space->tree();
        const TreeEdge& e = t.edges[f.edge];
        j["edge"] = json::array({t.vertex_names[e.u], t.vertex_names[e.v]});
      } else {
        j["edge"] = f.edge;
      }
      j["profile"] = function_to_json_impl(*f.child, nullptr);
      return j;
    case FKind::Lift:
      j["kind"] = "lift";
      j["factor"] = f.factor;
      j["f"] = function_to_json_impl(*f.child, nullptr);
      return j;
    case FKind::Sum:
      j["kind"] = "sum";
      j["terms"] = children_to_json(f.children, space);
      return j;
    case FKind::Product:
      j["kind"] = "product";
      j["terms"] = children_to_json(f.children, space);
      return j;
    case FKind::Scale:
      j["kind"] = "scale";
      j["c"] = f.value;
      j["f"] = function_to_json_impl(*f.child, space);
      return j;
    case FKind::Shift:
      j["kind"] = "shift";
      j["c"] = f.value;
      j["f"] = function_to_json_impl(*f.child, space);
      return j;
    case FKind::AffineArg:
      j["kind"] = "affine";
      j["a"] = f.a;
      j["b"] = f.b;
      j["f"] = function_to_json_impl(*f.child, space);
      return j;
    case FKind::PartitionPiece:
      j["kind"] = "partition_piece";
      j["index"] = f.index;
      j["bumps"] = children_to_json(f.children, space);
      return j;
  }
  throw internal_error("unhandled function node kind");
}

json space_to_json_impl(const BaseSpace& space);

json factor_to_json(const FactorSpace& factor) {
  return space_to_json_impl(BaseSpace(factor));
}

json space_to_json_impl(const BaseSpace& space) {
  json j;
  if (space.is_simplex()) {
    j["kind"] = "simplex";
    j["n"] = space.simplex().n;
    j["scale"] = space.simplex().scale;
    return j;
  }
  if (space.is_tree()) {
    const MeasuredTree& t = space.tree();
    j["kind"] = "tree";
    json edges = json::array();
    for (const auto& e : t.edges) {
      json je;
      je["u"] = t.vertex_names[e.u];
      je["v"] = t.vertex_names[e.v];
      je["len"] = e.length;
      je["density"] = function_to_json_impl(*e.density, nullptr);
      edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    return j;
  }
  j["kind"] = "product";
  json factors = json::array();
  for (const auto& f : space.product().factors) factors.push_back(factor_to_json(f));
  j["factors"] = std::move(factors);
  return j;
}

json factor_point_to_json(const FactorPoint& p, const FactorSpace& factor) {
  if (std::holds_alternative<std::vector<double>>(p))
    return json(std::get<std::vector<double>>(p));
  const TreePoint& tp = std::get<TreePoint>(p);
  const MeasuredTree& t = std::get<MeasuredTree>(factor);
  json j;
  if (tp.is_vertex()) {
    j["vertex"] = t.vertex_names[tp.vertex];
    return j;
  }
  const TreeEdge& e = t.edges[tp.edge];
  j["edge"] = json::array({t.vertex_names[e.u], t.vertex_names[e.v]});
  j["offset"] = tp.offset;
  return j;
}

}  // namespace

BaseSpace parse_space(const std::string& json_text) {
  return space_from_json(parse_text(json_text));
}

SmoothFunction parse_function(const std::string& json_text) {
  return function_from_json(parse_text(json_text), nullptr);
}

SmoothFunction parse_function_for_space(const std::string& json_text,
                                        const BaseSpace& space) {
  return function_from_json(parse_text(json_text), &space);
}

BasePoint parse_point(const std::string& json_text, const BaseSpace& space) {
  BasePoint p = point_from_json(parse_text(json_text), space);
  if (!contains(space, p, 1e-9))
    throw validation_error("point is not in the space");
  return p;
}

QuasiStateMeasure parse_sigma(const std::string& json_text, const BaseSpace& space) {
  json j = parse_text(json_text);
  if (!j.is_object()) throw validation_error("sigma must be a JSON object");
  std::string kind = require_string(j, "kind", "sigma");
  if (kind != "dirac") throw validation_error("unknown sigma kind '" + kind + "'");
  QuasiStateMeasure sigma;
  sigma.point = point_from_json(require_field(j, "point", "sigma"), space);
  if (!contains(space, sigma.point, 1e-9))
    throw validation_error("sigma support point is not in the space");
  sigma.mass = j.contains("mass") ? require_number(j, "mass", "sigma") : 1.0;
  if (!(sigma.mass > 0.0)) throw validation_error("sigma mass must be positive");
  return sigma;
}

std::string space_to_json(const BaseSpace& space) { return space_to_json_impl(space).dump(); }

std::string function_to_json(const SmoothFunction& f, const BaseSpace* space) {
  if (!f) throw validation_error("null function");
  return function_to_json_impl(*f, space).dump();
}

std::string point_to_json(const BasePoint& p, const BaseSpace& space) {
  json j;
  if (space.is_simplex()) {
    j = factor_point_to_json(p.parts.at(0), space.simplex());
  } else if (space.is_tree()) {
    j = factor_point_to_json(p.parts.at(0), space.tree());
  } else {
    const ProductSpace& prod = space.product();
    if (p.parts.size() != prod.factors.size())
      throw validation_error("point arity does not match the product space");
    j = json::array();
    for (size_t i = 0; i < prod.factors.size(); ++i)
      j.push_back(factor_point_to_json(p.parts[i], prod.factors[i]));
  }
  return j.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace toricqs

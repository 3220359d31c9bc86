#include "sweep/scenario_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>

namespace sweep {

using nlohmann::json;

namespace {

const json& need(const json& j, const char* field, const std::string& ctx) {
  if (!j.is_object() || !j.contains(field))
    throw ValidationError("scenario field '" + ctx + "." + field +
                          "': missing");
  return j.at(field);
}

double need_num(const json& j, const char* field, const std::string& ctx) {
  const json& v = need(j, field, ctx);
  if (!v.is_number())
    throw ValidationError("scenario field '" + ctx + "." + field +
                          "': expected a number");
  return v.get<double>();
}

double get_num(const json& j, const char* field, const std::string& ctx,
               double fallback) {
  if (!j.is_object() || !j.contains(field)) return fallback;
  const json& v = j.at(field);
  if (!v.is_number())
    throw ValidationError("scenario field '" + ctx + "." + field +
                          "': expected a number");
  return v.get<double>();
}

int need_int(const json& j, const char* field, const std::string& ctx) {
  const json& v = need(j, field, ctx);
  if (!v.is_number_integer())
    throw ValidationError("scenario field '" + ctx + "." + field +
                          "': expected an integer");
  return v.get<int>();
}

std::string need_str(const json& j, const char* field, const std::string& ctx) {
  const json& v = need(j, field, ctx);
  if (!v.is_string())
    throw ValidationError("scenario field '" + ctx + "." + field +
                          "': expected a string");
  return v.get<std::string>();
}

Vec need_vec(const json& j, const char* field, const std::string& ctx) {
  const json& v = need(j, field, ctx);
  if (!v.is_array() || v.empty())
    throw ValidationError("scenario field '" + ctx + "." + field +
                          "': expected a nonempty array of numbers");
  Vec out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number())
      throw ValidationError("scenario field '" + ctx + "." + field +
                            "': expected a nonempty array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Matrix parse_matrix(const json& v, const std::string& ctx) {
  if (!v.is_array() || v.empty() || !v.front().is_array())
    throw ValidationError("scenario field '" + ctx +
                          "': expected an array of rows");
  const int rows = static_cast<int>(v.size());
  const int cols = static_cast<int>(v.front().size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = v.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ValidationError("scenario field '" + ctx + "': ragged matrix");
    for (int jcol = 0; jcol < cols; ++jcol) {
      const auto& e = row.at(static_cast<std::size_t>(jcol));
      if (!e.is_number())
        throw ValidationError("scenario field '" + ctx +
                              "': matrix entries must be numbers");
      m.at(i, jcol) = e.get<double>();
    }
  }
  return m;
}

ScalarPath parse_path(const json& j, const std::string& ctx) {
  if (j.is_number()) return ScalarPath::constant(j.get<double>());
  if (!j.is_object())
    throw ValidationError("scenario field '" + ctx +
                          "': expected a number or a path object");
  const std::string kind = need_str(j, "path", ctx);
  if (kind == "constant") return ScalarPath::constant(need_num(j, "value", ctx));
  if (kind == "linear")
    return ScalarPath::linear(get_num(j, "slope", ctx, 0.0),
                              get_num(j, "offset", ctx, 0.0));
  if (kind == "sinusoid")
    return ScalarPath::sinusoid(need_num(j, "amplitude", ctx),
                                need_num(j, "frequency", ctx),
                                get_num(j, "phase", ctx, 0.0),
                                get_num(j, "offset", ctx, 0.0));
  throw ValidationError("scenario field '" + ctx + ".path': unknown path kind '" +
                        kind + "'");
}

json path_to_json(const ScalarPath& p) {
  switch (p.kind()) {
    case ScalarPath::Kind::constant:
      return json{{"path", "constant"}, {"value", p.offset()}};
    case ScalarPath::Kind::linear:
      return json{{"path", "linear"}, {"slope", p.slope()}, {"offset", p.offset()}};
    case ScalarPath::Kind::sinusoid:
      return json{{"path", "sinusoid"},
                  {"amplitude", p.amplitude()},
                  {"frequency", p.frequency()},
                  {"phase", p.phase()},
                  {"offset", p.offset()}};
  }
  return json{{"path", "constant"}, {"value", 0.0}};
}

MotionPath parse_motion(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty())
    throw ValidationError("scenario field '" + ctx +
                          "': expected an array of coordinate paths");
  std::vector<ScalarPath> coords;
  coords.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    coords.push_back(parse_path(j.at(i), ctx + "[" + std::to_string(i) + "]"));
  return MotionPath(std::move(coords));
}

json motion_to_json(const MotionPath& m) {
  json out = json::array();
  for (const auto& c : m.coords()) out.push_back(path_to_json(c));
  return out;
}

Vec parse_bounds(const json& j, const char* field, const std::string& ctx,
                 double unbounded_sign) {
  const json& v = need(j, field, ctx);
  if (!v.is_array() || v.empty())
    throw ValidationError("scenario field '" + ctx + "." + field +
                          "': expected an array");
  Vec out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (e.is_null())
      out.push_back(unbounded_sign * std::numeric_limits<double>::infinity());
    else if (e.is_number())
      out.push_back(e.get<double>());
    else
      throw ValidationError("scenario field '" + ctx + "." + field +
                            "': entries must be numbers or null");
  }
  return out;
}

json bounds_to_json(const Vec& b) {
  json out = json::array();
  for (double v : b) {
    if (std::isinf(v))
      out.push_back(nullptr);
    else
      out.push_back(v);
  }
  return out;
}

struct SetParse {
  SetPtr set;
  json normalized;
};

SetParse parse_set(const json& j, double horizon, const std::string& ctx) {
  const std::string kind = need_str(j, "kind", ctx);
  SetOptions opts;
  opts.horizon = Interval{0.0, horizon};
  json norm;
  norm["kind"] = kind;
  if (j.contains("prox_radius")) {
    const double r = need_num(j, "prox_radius", ctx);
    opts.prox_radius = r;
    norm["prox_radius"] = r;
  }
  if (j.contains("variation_modulus")) {
    opts.variation_modulus =
        parse_path(j.at("variation_modulus"), ctx + ".variation_modulus");
    norm["variation_modulus"] = path_to_json(*opts.variation_modulus);
  }

  if (kind == "moving_half_space") {
    Vec normal = need_vec(j, "normal", ctx);
    ScalarPath offset = parse_path(need(j, "offset", ctx), ctx + ".offset");
    norm["normal"] = normal;
    norm["offset"] = path_to_json(offset);
    return {make_half_space(std::move(normal), offset, opts), norm};
  }
  if (kind == "moving_ball" || kind == "ball_complement") {
    MotionPath center = parse_motion(need(j, "center", ctx), ctx + ".center");
    const double radius = need_num(j, "radius", ctx);
    norm["center"] = motion_to_json(center);
    norm["radius"] = radius;
    if (kind == "moving_ball")
      return {make_ball(std::move(center), radius, opts), norm};
    return {make_ball_complement(std::move(center), radius, opts), norm};
  }
  if (kind == "box") {
    Vec lower = parse_bounds(j, "lower", ctx, -1.0);
    Vec upper = parse_bounds(j, "upper", ctx, +1.0);
    norm["lower"] = bounds_to_json(lower);
    norm["upper"] = bounds_to_json(upper);
    return {make_box(std::move(lower), std::move(upper), opts), norm};
  }
  if (kind == "translated_base") {
    SetParse base = parse_set(need(j, "base", ctx), horizon, ctx + ".base");
    MotionPath shift =
        parse_motion(need(j, "translation", ctx), ctx + ".translation");
    norm["base"] = base.normalized;
    norm["translation"] = motion_to_json(shift);
    return {make_translated(std::move(base.set), std::move(shift), opts), norm};
  }
  if (kind == "product") {
    SetParse block = parse_set(need(j, "block", ctx), horizon, ctx + ".block");
    const int free_dims = need_int(j, "free_dims", ctx);
    norm["block"] = block.normalized;
    norm["free_dims"] = free_dims;
    return {make_product(std::move(block.set), free_dims, opts), norm};
  }
  throw ValidationError("scenario field '" + ctx + ".kind': unknown set kind '" +
                        kind + "'");
}

struct PerturbationParse {
  Perturbation f;
  json normalized;
};

PerturbationParse parse_perturbation(const json& j, int dim,
                                     const std::string& ctx) {
  const std::string kind = need_str(j, "kind", ctx);
  std::optional<ScalarPath> growth;
  if (j.contains("growth_envelope"))
    growth = parse_path(j.at("growth_envelope"), ctx + ".growth_envelope");

  auto finish = [&](Perturbation f, json norm) -> PerturbationParse {
    norm["kind"] = kind;
    norm["growth_envelope"] = path_to_json(f.growth_envelope());
    return {std::move(f), std::move(norm)};
  };

  if (kind == "zero") return finish(Perturbation::zero(dim), json::object());
  if (kind == "affine") {
    Matrix A, B;
    Vec b;
    json norm;
    if (j.contains("A")) {
      A = parse_matrix(j.at("A"), ctx + ".A");
      norm["A"] = j.at("A");
    }
    if (j.contains("B")) {
      B = parse_matrix(j.at("B"), ctx + ".B");
      norm["B"] = j.at("B");
    }
    if (j.contains("b")) {
      b = need_vec(j, "b", ctx);
      norm["b"] = b;
    }
    ScalarPath coeff = ScalarPath::constant(1.0);
    if (j.contains("time_coefficient"))
      coeff = parse_path(j.at("time_coefficient"), ctx + ".time_coefficient");
    norm["time_coefficient"] = path_to_json(coeff);
    Perturbation f =
        Perturbation::affine(std::move(A), std::move(B), std::move(b), coeff, growth);
    if (f.dim() != dim)
      throw ValidationError("scenario field '" + ctx +
                            "': affine perturbation dimension " +
                            std::to_string(f.dim()) +
                            " does not match the state dimension " +
                            std::to_string(dim));
    return finish(std::move(f), std::move(norm));
  }
  if (kind == "trigonometric_forcing") {
    Vec w = need_vec(j, "w", ctx);
    ScalarPath signal = ScalarPath::sinusoid(
        get_num(j, "amplitude", ctx, 1.0), need_num(j, "frequency", ctx),
        get_num(j, "phase", ctx, 0.0), get_num(j, "offset", ctx, 0.0));
    json norm;
    norm["w"] = w;
    norm["amplitude"] = signal.amplitude();
    norm["frequency"] = signal.frequency();
    norm["phase"] = signal.phase();
    norm["offset"] = signal.offset();
    Perturbation f = Perturbation::trigonometric_forcing(std::move(w), signal, growth);
    if (f.dim() != dim)
      throw ValidationError("scenario field '" + ctx + ".w': dimension " +
                            std::to_string(f.dim()) +
                            " does not match the state dimension " +
                            std::to_string(dim));
    return finish(std::move(f), std::move(norm));
  }
  if (kind == "componentwise_nonlinear") {
    const std::string map = need_str(j, "map", ctx);
    const std::string arg_name =
        j.contains("argument") ? need_str(j, "argument", ctx) : "position";
    Perturbation::Argument arg;
    if (arg_name == "position")
      arg = Perturbation::Argument::position;
    else if (arg_name == "velocity")
      arg = Perturbation::Argument::velocity;
    else
      throw ValidationError("scenario field '" + ctx +
                            ".argument': expected 'position' or 'velocity'");
    const double amplitude = get_num(j, "amplitude", ctx, 1.0);
    json norm;
    norm["map"] = map;
    norm["argument"] = arg_name;
    norm["amplitude"] = amplitude;
    return finish(Perturbation::componentwise(Perturbation::map_from_name(map),
                                              arg, amplitude, dim, growth),
                  std::move(norm));
  }
  throw ValidationError("scenario field '" + ctx +
                        ".kind': unknown perturbation kind '" + kind + "'");
}

Quadrature parse_quadrature(const json& root) {
  std::string q = "left";
  if (root.contains("solver")) {
    const json& s = root.at("solver");
    if (s.contains("quadrature")) q = need_str(s, "quadrature", "solver");
  }
  if (q == "left") return Quadrature::left;
  if (q == "midpoint") return Quadrature::midpoint;
  throw ValidationError(
      "scenario field 'solver.quadrature': expected 'left' or 'midpoint'");
}

}  // namespace

ParsedScenario parse_scenario_json(const json& root) {
  if (!root.is_object())
    throw ValidationError("scenario: top level must be a JSON object");
  const int order = need_int(root, "order", "");
  if (order != 1 && order != 2)
    throw ValidationError("scenario field 'order': must be 1 or 2");
  const double horizon = need_num(root, "horizon", "");
  const int steps = need_int(root, "steps", "");
  TimeGrid grid(horizon, steps);

  const json& initial = need(root, "initial", "");
  Vec u0 = need_vec(initial, "u0", "initial");
  require_finite(u0, "scenario field 'initial.u0'");

  SetParse set = parse_set(need(root, "set", ""), horizon, "set");
  const Quadrature quadrature = parse_quadrature(root);

  json norm;
  norm["order"] = order;
  norm["horizon"] = horizon;
  norm["steps"] = steps;
  norm["set"] = set.normalized;
  norm["solver"] = json{{"quadrature",
                         quadrature == Quadrature::left ? "left" : "midpoint"}};

  const json& pert = need(root, "perturbation", "");

  if (order == 2) {
    Vec x0 = need_vec(initial, "x0", "initial");
    require_finite(x0, "scenario field 'initial.x0'");
    PerturbationParse f =
        parse_perturbation(pert, static_cast<int>(u0.size()), "perturbation");
    norm["perturbation"] = f.normalized;
    norm["initial"] = json{{"x0", x0}, {"u0", u0}};
    ParsedScenario out{
        2,
        SecondOrderScenario(set.set, std::move(f.f), std::move(x0), std::move(u0), grid),
        quadrature, std::move(norm)};
    return out;
  }

  // order 1: the state perturbation is either a plain kind or the "lifted"
  // wrapper produced by `reduce`
  StatePerturbation g = [&]() -> StatePerturbation {
    const std::string kind = need_str(pert, "kind", "perturbation");
    if (kind == "lifted") {
      if (u0.size() % 2 != 0)
        throw ValidationError(
            "scenario field 'initial.u0': lifted perturbations need an even "
            "state dimension");
      PerturbationParse src =
          parse_perturbation(need(pert, "source", "perturbation"),
                             static_cast<int>(u0.size()) / 2, "perturbation.source");
      norm["perturbation"] =
          json{{"kind", "lifted"}, {"source", src.normalized}};
      return StatePerturbation::lifted(std::move(src.f));
    }
    PerturbationParse src =
        parse_perturbation(pert, static_cast<int>(u0.size()), "perturbation");
    norm["perturbation"] = src.normalized;
    return StatePerturbation::plain(std::move(src.f));
  }();

  norm["initial"] = json{{"u0", u0}};
  ParsedScenario out{1,
                     FirstOrderScenario(set.set, std::move(g), std::move(u0), grid),
                     quadrature, std::move(norm)};
  return out;
}

ParsedScenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot open scenario file '" + path.string() + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("scenario file '" + path.string() +
                          "': JSON syntax error: " + e.what());
  }
  return parse_scenario_json(root);
}

nlohmann::json reduced_scenario_json(const ParsedScenario& parsed) {
  if (parsed.order != 2)
    throw ValidationError("reduce requires an order-2 scenario");
  const json& norm = parsed.normalized;
  const SecondOrderScenario& sc = parsed.second();

  json out;
  out["order"] = 1;
  out["horizon"] = norm.at("horizon");
  out["steps"] = norm.at("steps");
  out["set"] = json{{"kind", "product"},
                    {"block", norm.at("set")},
                    {"free_dims", static_cast<int>(sc.initial_position().size())}};
  out["perturbation"] =
      json{{"kind", "lifted"}, {"source", norm.at("perturbation")}};
  out["initial"] =
      json{{"u0", concat(sc.initial_velocity(), sc.initial_position())}};
  out["solver"] = norm.at("solver");
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(const Trajectory& traj,
                          const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw ValidationError("cannot open output file '" + path.string() + "'");

  const std::size_t d = traj.states.front().size();
  os << "t";
  if (traj.second_order())
    for (std::size_t j = 0; j < d; ++j) os << ",x_" << (j + 1);
  for (std::size_t j = 0; j < d; ++j) os << ",u_" << (j + 1);
  os << "\n";

  for (int i = 0; i <= traj.grid.steps(); ++i) {
    os << format_double(traj.grid.node(i));
    if (traj.second_order())
      for (double v : traj.positions[static_cast<std::size_t>(i)])
        os << "," << format_double(v);
    for (double v : traj.states[static_cast<std::size_t>(i)])
      os << "," << format_double(v);
    os << "\n";
  }
  if (!os) throw ValidationError("write failed for '" + path.string() + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ValidationError("cannot open CSV file '" + path.string() + "'");
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(pos));
        break;
      }
      cells.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      // non-numeric cells (the blank ratio/order slots, "exact") become NaN
      row.push_back(end == c.c_str() ? std::numeric_limits<double>::quiet_NaN()
                                     : v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_convergence_csv(const ConvergenceTable& table,
                           const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw ValidationError("cannot open output file '" + path.string() + "'");
  os << "steps,h,error,ratio,order\n";
  for (const auto& row : table.rows) {
    os << row.steps << "," << format_double(row.h) << ","
       << format_double(row.error) << ",";
    if (row.exact) {
      os << ",exact";
    } else if (row.has_order) {
      os << format_double(row.ratio) << "," << format_double(row.order);
    } else {
      os << ",";
    }
    os << "\n";
  }
  if (!os) throw ValidationError("write failed for '" + path.string() + "'");
}

}  // namespace sweep

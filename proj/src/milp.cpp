#include "batchopt/milp.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace batchopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) {
  char buffer[32];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

bool is_integral_kind(VarKind kind) { return kind != VarKind::Continuous; }

}  // namespace

int ModelIR::add_variable(std::string var_name, VarKind kind, double lb, double ub,
                          double obj_coef) {
  variables.push_back({std::move(var_name), kind, lb, ub});
  objective.push_back(obj_coef);
  return static_cast<int>(variables.size()) - 1;
}

void ModelIR::add_constraint(std::string row_name, std::vector<LinTerm> terms, Sense sense,
                             double rhs) {
  constraints.push_back({std::move(row_name), std::move(terms), sense, rhs});
}

int ModelIR::var_index(const std::string& var_name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == var_name) return static_cast<int>(i);
  }
  return -1;
}

// ---------------------------------------------------------------------------
// model builders

namespace {

// Item positions that occur in at least one order (the item set K).
std::vector<int> referenced_items(const Instance& instance) {
  std::vector<int> ks;
  for (std::size_t k = 0; k < instance.items.size(); ++k) {
    if (!instance.orders_with_item[k].empty()) ks.push_back(static_cast<int>(k));
  }
  return ks;
}

std::string var_y(const Instance& inst, int oi, int j) {
  return "y_" + std::to_string(inst.orders[static_cast<std::size_t>(oi)].id) + "_" +
         std::to_string(j + 1);
}

// Shared assignment skeleton: binary y variables plus Eqs. 2 and 3.
std::vector<std::vector<int>> add_assignment_block(ModelIR& ir, const Instance& inst,
                                                   bool symmetry_breaking) {
  const int batches = inst.num_batches();
  std::vector<std::vector<int>> y(static_cast<std::size_t>(inst.num_orders()),
                                  std::vector<int>(static_cast<std::size_t>(batches)));
  for (int oi = 0; oi < inst.num_orders(); ++oi) {
    for (int j = 0; j < batches; ++j) {
      // symmetry rows: the batch holding order position i can only be 0..i
      double ub = (symmetry_breaking && j > oi) ? 0.0 : 1.0;
      y[static_cast<std::size_t>(oi)][static_cast<std::size_t>(j)] =
          ir.add_variable(var_y(inst, oi, j), VarKind::Binary, 0.0, ub, 0.0);
    }
  }
  for (int oi = 0; oi < inst.num_orders(); ++oi) {
    std::vector<LinTerm> terms;
    for (int j = 0; j < batches; ++j) {
      terms.push_back({y[static_cast<std::size_t>(oi)][static_cast<std::size_t>(j)], 1.0});
    }
    ir.add_constraint(
        "assign_" + std::to_string(inst.orders[static_cast<std::size_t>(oi)].id),
        std::move(terms), Sense::Eq, 1.0);
  }
  for (int j = 0; j < batches; ++j) {
    std::vector<LinTerm> terms;
    for (int oi = 0; oi < inst.num_orders(); ++oi) {
      terms.push_back({y[static_cast<std::size_t>(oi)][static_cast<std::size_t>(j)], 1.0});
    }
    ir.add_constraint("cap_" + std::to_string(j + 1), std::move(terms), Sense::Eq,
                      static_cast<double>(inst.capacity));
  }
  return y;
}

// Per-batch unique-item indicators z with their big-M link (Eq. 4).
std::vector<int> add_item_block(ModelIR& ir, const Instance& inst,
                                const std::vector<std::vector<int>>& y, int j,
                                const std::vector<int>& ks, const ModelBuildConfig& config,
                                double z_obj_coef) {
  std::vector<int> z;
  z.reserve(ks.size());
  for (int k : ks) {
    const int item_id = inst.items[static_cast<std::size_t>(k)].id;
    int zv = ir.add_variable("z_" + std::to_string(j + 1) + "_" + std::to_string(item_id),
                             VarKind::Binary, 0.0, 1.0, z_obj_coef);
    z.push_back(zv);
    const auto& holders = inst.orders_with_item[static_cast<std::size_t>(k)];
    const double big_m = config.big_m_item == BigMRule::Tight
                             ? static_cast<double>(holders.size())
                             : static_cast<double>(inst.num_orders());
    std::vector<LinTerm> terms{{zv, big_m}};
    for (int oi : holders) {
      terms.push_back({y[static_cast<std::size_t>(oi)][static_cast<std::size_t>(j)], -1.0});
    }
    ir.add_constraint("item_" + std::to_string(j + 1) + "_" + std::to_string(item_id),
                      std::move(terms), Sense::Ge, 0.0);
  }
  return z;
}

double aisle_big_m(const Instance& inst, int b, const ModelBuildConfig& config) {
  if (config.big_m_aisle == BigMRule::OrderCount) return static_cast<double>(inst.num_orders());
  const auto touching = inst.orders_in_aisle[static_cast<std::size_t>(b) - 1].size();
  return static_cast<double>(std::min<std::size_t>(touching,
                                                   static_cast<std::size_t>(inst.capacity)));
}

}  // namespace

ModelIR build_exact_return(const Instance& inst, const ModelBuildConfig& config) {
  ModelIR ir;
  ir.name = inst.name.empty() ? "exact_return" : inst.name;
  ir.metadata["formulation"] = "exact_return";
  ir.metadata["big_m_item"] = config.big_m_item == BigMRule::Tight ? "item_order_count" : "order_count";
  ir.metadata["tau"] = inst.tau.text();

  const double tau = inst.tau.value();
  const int batches = inst.num_batches();
  const auto ks = referenced_items(inst);
  const auto profiles = build_profiles(inst);

  auto y = add_assignment_block(ir, inst, config.symmetry_breaking);
  for (int j = 0; j < batches; ++j) add_item_block(ir, inst, y, j, ks, config, tau);

  // d_jb >= r_ib * y_ij rows, one per order touching the aisle (Eq. 5)
  for (int j = 0; j < batches; ++j) {
    for (int b = 1; b <= inst.layout.num_aisles(); ++b) {
      int dv = ir.add_variable("d_" + std::to_string(j + 1) + "_" + std::to_string(b),
                               VarKind::Continuous, 0.0, kInf, 2.0 * (1.0 - tau));
      for (int oi : inst.orders_in_aisle[static_cast<std::size_t>(b) - 1]) {
        const int r = profiles[static_cast<std::size_t>(oi)].max_depth(b);
        ir.add_constraint("depth_" + std::to_string(j + 1) + "_" + std::to_string(b) + "_" +
                              std::to_string(inst.orders[static_cast<std::size_t>(oi)].id),
                          {{dv, 1.0},
                           {y[static_cast<std::size_t>(oi)][static_cast<std::size_t>(j)],
                            -static_cast<double>(r)}},
                          Sense::Ge, 0.0);
      }
    }
  }
  return ir;
}

ModelIR build_exact_sshape(const Instance& inst, const ModelBuildConfig& config) {
  if (!config.linearize_sshape) {
    throw std::invalid_argument(
        "the ordinal product is nonlinear as written; only the linearized build is supported");
  }
  ModelIR ir;
  ir.name = inst.name.empty() ? "exact_sshape" : inst.name;
  ir.metadata["formulation"] = "exact_sshape";
  ir.metadata["big_m_aisle"] = config.big_m_aisle == BigMRule::Tight ? "min_aisle_orders_capacity"
                                                                     : "order_count";
  ir.metadata["ordinal_encoding"] = "prefix_count_product";
  ir.metadata["tau"] = inst.tau.text();

  const double tau = inst.tau.value();
  const int batches = inst.num_batches();
  const int num_aisles = inst.layout.num_aisles();
  const double aisle_count = static_cast<double>(num_aisles);
  const auto ks = referenced_items(inst);

  auto y = add_assignment_block(ir, inst, config.symmetry_breaking);

  for (int j = 0; j < batches; ++j) {
    add_item_block(ir, inst, y, j, ks, config, tau);

    // Ordinal chain per aisle: delta flags the visit, cnt counts visits in
    // aisles 1..b, q = cnt*delta picks the ordinal of visited aisles, and
    // o extracts its parity (the objective weight).
    std::vector<int> delta(static_cast<std::size_t>(num_aisles));
    std::vector<int> cnt(static_cast<std::size_t>(num_aisles));
    std::vector<int> q(static_cast<std::size_t>(num_aisles));
    const std::string batch_tag = std::to_string(j + 1) + "_";
    for (int b = 1; b <= num_aisles; ++b) {
      const std::string tag = batch_tag + std::to_string(b);
      int dv = ir.add_variable("delta_" + tag, VarKind::Binary, 0.0, 1.0, 0.0);
      int cv = ir.add_variable("cnt_" + tag, VarKind::Integer, 0.0, aisle_count, 0.0);
      int qv = ir.add_variable("q_" + tag, VarKind::Integer, 0.0, aisle_count, 0.0);
      int uv = ir.add_variable("u_" + tag, VarKind::Integer, 0.0, aisle_count, 0.0);
      int ov = ir.add_variable("o_" + tag, VarKind::Binary, 0.0, 1.0,
                               2.0 * (1.0 - tau) * inst.layout.length(b));
      delta[static_cast<std::size_t>(b - 1)] = dv;
      cnt[static_cast<std::size_t>(b - 1)] = cv;
      q[static_cast<std::size_t>(b - 1)] = qv;

      const auto& touching = inst.orders_in_aisle[static_cast<std::size_t>(b) - 1];
      std::vector<LinTerm> visit{{dv, aisle_big_m(inst, b, config)}};
      std::vector<LinTerm> visit_ub{{dv, 1.0}};
      for (int oi : touching) {
        int yv = y[static_cast<std::size_t>(oi)][static_cast<std::size_t>(j)];
        visit.push_back({yv, -1.0});
        visit_ub.push_back({yv, -1.0});
      }
      ir.add_constraint("visit_" + tag, std::move(visit), Sense::Ge, 0.0);
      // pins delta to the exact indicator; without it the solver may
      // invent visits to shuffle parities
      ir.add_constraint("visitub_" + tag, std::move(visit_ub), Sense::Le, 0.0);

      if (b == 1) {
        ir.add_constraint("cnt_" + tag, {{cv, 1.0}, {dv, -1.0}}, Sense::Eq, 0.0);
      } else {
        ir.add_constraint("cnt_" + tag,
                          {{cv, 1.0}, {cnt[static_cast<std::size_t>(b - 2)], -1.0}, {dv, -1.0}},
                          Sense::Eq, 0.0);
      }

      // q = cnt*delta via the standard integer-times-binary expansion
      ir.add_constraint("lin1_" + tag, {{qv, 1.0}, {dv, -aisle_count}}, Sense::Le, 0.0);
      ir.add_constraint("lin2_" + tag, {{qv, 1.0}, {cv, -1.0}}, Sense::Le, 0.0);
      ir.add_constraint("lin3_" + tag, {{qv, 1.0}, {cv, -1.0}, {dv, -aisle_count}}, Sense::Ge,
                        -aisle_count);
      ir.add_constraint("ordmin_" + tag, {{qv, 1.0}, {dv, -1.0}}, Sense::Ge, 0.0);

      ir.add_constraint("parity_" + tag, {{qv, 1.0}, {uv, -2.0}, {ov, -1.0}}, Sense::Eq, 0.0);
    }

    // q_jb <= sum_b delta_jb (Eq. 11)
    for (int b = 1; b <= num_aisles; ++b) {
      std::vector<LinTerm> terms{{q[static_cast<std::size_t>(b - 1)], 1.0}};
      for (int bb = 0; bb < num_aisles; ++bb) {
        terms.push_back({delta[static_cast<std::size_t>(bb)], -1.0});
      }
      ir.add_constraint("ordmax_" + batch_tag + std::to_string(b), std::move(terms), Sense::Le,
                        0.0);
    }
  }
  return ir;
}

ModelIR build_approx(const Instance& inst, Weighting weighting, const ModelBuildConfig& config) {
  ModelIR ir;
  ir.name = inst.name.empty() ? "approx" : inst.name;
  ir.metadata["formulation"] = "approx";
  ir.metadata["weighting"] = to_string(weighting);
  ir.metadata["big_m_aisle"] = config.big_m_aisle == BigMRule::Tight ? "min_aisle_orders_capacity"
                                                                     : "order_count";

  const auto patterns = extract_patterns(inst);
  const int batches = inst.num_batches();
  const int num_aisles = inst.layout.num_aisles();

  std::vector<std::vector<int>> x(patterns.size(),
                                  std::vector<int>(static_cast<std::size_t>(batches)));
  for (std::size_t t = 0; t < patterns.size(); ++t) {
    for (int j = 0; j < batches; ++j) {
      x[t][static_cast<std::size_t>(j)] = ir.add_variable(
          "x_" + std::to_string(patterns[t].id) + "_" + std::to_string(j + 1), VarKind::Integer,
          0.0, static_cast<double>(patterns[t].member_orders.size()), 0.0);
    }
  }
  std::vector<std::vector<int>> delta(static_cast<std::size_t>(batches),
                                      std::vector<int>(static_cast<std::size_t>(num_aisles)));
  for (int j = 0; j < batches; ++j) {
    for (int b = 1; b <= num_aisles; ++b) {
      const double weight = weighting == Weighting::Ap1
                                ? 1.0
                                : static_cast<double>(inst.layout.length(b));
      delta[static_cast<std::size_t>(j)][static_cast<std::size_t>(b - 1)] =
          ir.add_variable("delta_" + std::to_string(j + 1) + "_" + std::to_string(b),
                          VarKind::Binary, 0.0, 1.0, weight);
    }
  }

  for (std::size_t t = 0; t < patterns.size(); ++t) {
    std::vector<LinTerm> terms;
    for (int j = 0; j < batches; ++j) terms.push_back({x[t][static_cast<std::size_t>(j)], 1.0});
    ir.add_constraint("quota_" + std::to_string(patterns[t].id), std::move(terms), Sense::Eq,
                      static_cast<double>(patterns[t].member_orders.size()));
  }
  for (int j = 0; j < batches; ++j) {
    std::vector<LinTerm> terms;
    for (std::size_t t = 0; t < patterns.size(); ++t) {
      terms.push_back({x[t][static_cast<std::size_t>(j)], 1.0});
    }
    ir.add_constraint("cap_" + std::to_string(j + 1), std::move(terms), Sense::Eq,
                      static_cast<double>(inst.capacity));
  }
  for (int j = 0; j < batches; ++j) {
    for (int b = 1; b <= num_aisles; ++b) {
      std::vector<LinTerm> terms{
          {delta[static_cast<std::size_t>(j)][static_cast<std::size_t>(b - 1)],
           aisle_big_m(inst, b, config)}};
      for (std::size_t t = 0; t < patterns.size(); ++t) {
        if (std::binary_search(patterns[t].aisles.begin(), patterns[t].aisles.end(), b)) {
          terms.push_back({x[t][static_cast<std::size_t>(j)], -1.0});
        }
      }
      ir.add_constraint("visit_" + std::to_string(j + 1) + "_" + std::to_string(b),
                        std::move(terms), Sense::Ge, 0.0);
    }
  }
  if (config.symmetry_breaking && !patterns.empty()) {
    for (int j = 0; j + 1 < batches; ++j) {
      ir.add_constraint("sym_" + std::to_string(j + 1),
                        {{x[0][static_cast<std::size_t>(j)], 1.0},
                         {x[0][static_cast<std::size_t>(j + 1)], -1.0}},
                        Sense::Ge, 0.0);
      ir.metadata["symmetry_breaking"] = "first_pattern_nonincreasing";
    }
  }
  return ir;
}

double beta_ratio(const ModelIR& approx, const ModelIR& exact) {
  if (exact.variables.empty()) throw std::invalid_argument("exact model has no variables");
  return static_cast<double>(approx.variables.size()) /
         static_cast<double>(exact.variables.size());
}

// ---------------------------------------------------------------------------
// MPS export / import

namespace {

char sense_char(Sense s) {
  switch (s) {
    case Sense::Le: return 'L';
    case Sense::Eq: return 'E';
    case Sense::Ge: return 'G';
  }
  return '?';
}

std::string pad(const std::string& text, std::size_t width) {
  if (text.size() >= width) return text + "  ";
  return text + std::string(width - text.size() + 2, ' ');
}

void write_mps(const ModelIR& ir, std::ostream& out) {
  for (const auto& [key, value] : ir.metadata) {
    out << "* obopp " << key << '=' << value << '\n';
  }
  std::size_t name_w = 8;
  for (const auto& v : ir.variables) name_w = std::max(name_w, v.name.size());
  std::size_t row_w = 8;
  for (const auto& c : ir.constraints) row_w = std::max(row_w, c.name.size());

  out << "NAME          " << ir.name << '\n';
  out << "ROWS\n";
  out << " N  COST\n";
  for (const auto& c : ir.constraints) {
    out << ' ' << sense_char(c.sense) << "  " << c.name << '\n';
  }

  // entries per column, in declaration order
  std::vector<std::vector<std::pair<const std::string*, double>>> column_entries(
      ir.variables.size());
  static const std::string kCostRow = "COST";
  for (std::size_t v = 0; v < ir.variables.size(); ++v) {
    if (ir.objective[v] != 0.0) column_entries[v].push_back({&kCostRow, ir.objective[v]});
  }
  for (const auto& c : ir.constraints) {
    for (const LinTerm& term : c.terms) {
      column_entries[static_cast<std::size_t>(term.var)].push_back({&c.name, term.coef});
    }
  }

  out << "COLUMNS\n";
  bool in_integer_block = false;
  int marker_count = 0;
  for (std::size_t v = 0; v < ir.variables.size(); ++v) {
    const bool integral = is_integral_kind(ir.variables[v].kind);
    if (integral != in_integer_block) {
      out << "    " << pad("MARKER" + std::to_string(marker_count++), name_w) << pad("'MARKER'", row_w)
          << (integral ? "'INTORG'" : "'INTEND'") << '\n';
      in_integer_block = integral;
    }
    if (column_entries[v].empty()) {
      // every column must appear at least once
      out << "    " << pad(ir.variables[v].name, name_w) << pad(kCostRow, row_w) << "0\n";
      continue;
    }
    for (const auto& [row, coef] : column_entries[v]) {
      out << "    " << pad(ir.variables[v].name, name_w) << pad(*row, row_w)
          << format_number(coef) << '\n';
    }
  }
  if (in_integer_block) {
    out << "    " << pad("MARKER" + std::to_string(marker_count++), name_w) << pad("'MARKER'", row_w)
        << "'INTEND'\n";
  }

  out << "RHS\n";
  for (const auto& c : ir.constraints) {
    if (c.rhs != 0.0) {
      out << "    " << pad("RHS", name_w) << pad(c.name, row_w) << format_number(c.rhs) << '\n';
    }
  }

  out << "BOUNDS\n";
  for (const auto& v : ir.variables) {
    if (v.kind == VarKind::Binary) {
      out << " BV " << pad("BND", name_w) << v.name << '\n';
      if (v.ub == 0.0) {
        out << " FX " << pad("BND", name_w) << pad(v.name, row_w) << "0\n";
      }
    } else if (v.kind == VarKind::Integer) {
      if (v.lb != 0.0) {
        out << " LI " << pad("BND", name_w) << pad(v.name, row_w) << format_number(v.lb) << '\n';
      }
      out << " UI " << pad("BND", name_w) << pad(v.name, row_w) << format_number(v.ub) << '\n';
    } else {
      if (v.lb != 0.0) {
        out << " LO " << pad("BND", name_w) << pad(v.name, row_w) << format_number(v.lb) << '\n';
      }
      if (v.ub != kInf) {
        out << " UP " << pad("BND", name_w) << pad(v.name, row_w) << format_number(v.ub) << '\n';
      }
    }
  }
  out << "ENDATA\n";
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

double parse_number(const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw ParseError("trailing characters in number: " + text);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("malformed number: " + text);
  }
}

}  // namespace

ModelIR parse_mps(std::istream& in) {
  ModelIR ir;
  std::map<std::string, int> var_of;
  std::map<std::string, int> row_of;
  std::string objective_row;
  std::string section;
  bool integer_block = false;
  std::string line;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '*') {
      auto tokens = tokenize(line.substr(1));
      if (tokens.size() >= 2 && tokens[0] == "obopp") {
        std::string kv = line.substr(line.find("obopp") + 6);
        std::size_t eq = kv.find('=');
        if (eq != std::string::npos) ir.metadata[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      continue;
    }
    if (line[0] != ' ') {
      auto tokens = tokenize(line);
      section = tokens[0];
      if (section == "NAME" && tokens.size() > 1) ir.name = tokens[1];
      if (section == "ENDATA") break;
      continue;
    }
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    if (section == "ROWS") {
      if (tokens.size() != 2) throw ParseError("malformed ROWS line: " + line);
      if (tokens[0] == "N") {
        objective_row = tokens[1];
      } else {
        Sense sense = tokens[0] == "L" ? Sense::Le : tokens[0] == "G" ? Sense::Ge : Sense::Eq;
        row_of[tokens[1]] = static_cast<int>(ir.constraints.size());
        ir.add_constraint(tokens[1], {}, sense, 0.0);
      }
    } else if (section == "COLUMNS") {
      if (tokens.size() >= 3 && tokens[1] == "'MARKER'") {
        integer_block = tokens[2] == "'INTORG'";
        continue;
      }
      if (tokens.size() < 3 || tokens.size() % 2 == 0) {
        throw ParseError("malformed COLUMNS line: " + line);
      }
      auto found = var_of.find(tokens[0]);
      int v;
      if (found == var_of.end()) {
        v = ir.add_variable(tokens[0], integer_block ? VarKind::Integer : VarKind::Continuous,
                            0.0, kInf, 0.0);
        var_of[tokens[0]] = v;
      } else {
        v = found->second;
      }
      for (std::size_t f = 1; f + 1 < tokens.size(); f += 2) {
        double coef = parse_number(tokens[f + 1]);
        if (tokens[f] == objective_row) {
          ir.objective[static_cast<std::size_t>(v)] = coef;
        } else {
          auto row = row_of.find(tokens[f]);
          if (row == row_of.end()) throw ParseError("unknown row " + tokens[f]);
          if (coef != 0.0) {
            ir.constraints[static_cast<std::size_t>(row->second)].terms.push_back({v, coef});
          }
        }
      }
    } else if (section == "RHS") {
      if (tokens.size() < 3) throw ParseError("malformed RHS line: " + line);
      for (std::size_t f = 1; f + 1 < tokens.size(); f += 2) {
        auto row = row_of.find(tokens[f]);
        if (row == row_of.end()) throw ParseError("unknown row " + tokens[f]);
        ir.constraints[static_cast<std::size_t>(row->second)].rhs = parse_number(tokens[f + 1]);
      }
    } else if (section == "BOUNDS") {
      if (tokens.size() < 3) throw ParseError("malformed BOUNDS line: " + line);
      auto var = var_of.find(tokens[2]);
      if (var == var_of.end()) throw ParseError("bound for unknown column " + tokens[2]);
      Variable& v = ir.variables[static_cast<std::size_t>(var->second)];
      const std::string& kind = tokens[0];
      if (kind == "BV") {
        v.kind = VarKind::Binary;
        v.lb = 0.0;
        v.ub = 1.0;
      } else if (kind == "FX") {
        if (tokens.size() < 4) throw ParseError("FX bound needs a value: " + line);
        v.lb = v.ub = parse_number(tokens[3]);
      } else if (kind == "UI" || kind == "UP") {
        if (tokens.size() < 4) throw ParseError("upper bound needs a value: " + line);
        v.ub = parse_number(tokens[3]);
      } else if (kind == "LI" || kind == "LO") {
        if (tokens.size() < 4) throw ParseError("lower bound needs a value: " + line);
        v.lb = parse_number(tokens[3]);
      } else {
        throw ParseError("unsupported bound type " + kind);
      }
    } else if (section == "RANGES") {
      throw ParseError("RANGES section not supported");
    }
  }
  // integer columns default to [0, +inf) unless a bound said otherwise;
  // exported models always carry explicit UI rows
  return ir;
}

// ---------------------------------------------------------------------------
// LP export / import

namespace {

void write_lp(const ModelIR& ir, std::ostream& out) {
  for (const auto& [key, value] : ir.metadata) {
    out << "\\ obopp " << key << '=' << value << '\n';
  }
  out << "Minimize\n COST:";
  int on_line = 0;
  bool first = true;
  for (std::size_t v = 0; v < ir.variables.size(); ++v) {
    if (ir.objective[v] == 0.0) continue;
    double coef = ir.objective[v];
    if (first) {
      if (coef < 0) out << " -";
      first = false;
    } else {
      out << (coef < 0 ? " -" : " +");
    }
    out << ' ' << format_number(std::abs(coef)) << ' ' << ir.variables[v].name;
    if (++on_line % 8 == 0) out << "\n  ";
  }
  if (first) out << " 0 " << ir.variables.at(0).name;
  out << '\n';

  out << "Subject To\n";
  for (const auto& c : ir.constraints) {
    out << ' ' << c.name << ':';
    on_line = 0;
    first = true;
    for (const LinTerm& term : c.terms) {
      if (first) {
        if (term.coef < 0) out << " -";
        first = false;
      } else {
        out << (term.coef < 0 ? " -" : " +");
      }
      out << ' ' << format_number(std::abs(term.coef)) << ' '
          << ir.variables[static_cast<std::size_t>(term.var)].name;
      if (++on_line % 8 == 0) out << "\n  ";
    }
    out << ' ' << (c.sense == Sense::Le ? "<=" : c.sense == Sense::Ge ? ">=" : "=") << ' '
        << format_number(c.rhs) << '\n';
  }

  std::vector<bool> referenced(ir.variables.size(), false);
  for (std::size_t v = 0; v < ir.variables.size(); ++v) {
    if (ir.objective[v] != 0.0) referenced[v] = true;
  }
  for (const auto& c : ir.constraints) {
    for (const LinTerm& term : c.terms) referenced[static_cast<std::size_t>(term.var)] = true;
  }

  out << "Bounds\n";
  for (std::size_t vi = 0; vi < ir.variables.size(); ++vi) {
    const Variable& v = ir.variables[vi];
    if (v.kind == VarKind::Binary) {
      if (v.ub == 0.0) out << ' ' << v.name << " = 0\n";
      continue;  // binaries otherwise default to [0,1]
    }
    if (v.lb == 0.0 && v.ub == kInf) {
      // unreferenced columns still need a line to exist in the file
      if (!referenced[vi]) out << ' ' << v.name << " >= 0\n";
      continue;
    }
    if (v.ub == kInf) {
      out << ' ' << v.name << " >= " << format_number(v.lb) << '\n';
    } else if (v.lb == v.ub) {
      out << ' ' << v.name << " = " << format_number(v.lb) << '\n';
    } else if (v.lb == 0.0) {
      out << ' ' << v.name << " <= " << format_number(v.ub) << '\n';
    } else {
      out << ' ' << format_number(v.lb) << " <= " << v.name << " <= " << format_number(v.ub)
          << '\n';
    }
  }

  bool any_binary = false, any_integer = false;
  for (const auto& v : ir.variables) {
    any_binary = any_binary || v.kind == VarKind::Binary;
    any_integer = any_integer || v.kind == VarKind::Integer;
  }
  if (any_binary) {
    out << "Binaries\n";
    for (const auto& v : ir.variables) {
      if (v.kind == VarKind::Binary) out << ' ' << v.name << '\n';
    }
  }
  if (any_integer) {
    out << "Generals\n";
    for (const auto& v : ir.variables) {
      if (v.kind == VarKind::Integer) out << ' ' << v.name << '\n';
    }
  }
  out << "End\n";
}

bool is_number_token(const std::string& token) {
  return !token.empty() && (std::isdigit(static_cast<unsigned char>(token[0])) ||
                            token[0] == '.' ||
                            (token.size() > 1 && (token[0] == '-' || token[0] == '+') &&
                             (std::isdigit(static_cast<unsigned char>(token[1])) ||
                              token[1] == '.')));
}

}  // namespace

ModelIR parse_lp(std::istream& in) {
  // token stream with section tracking
  enum class LpSection { None, Objective, Constraints, Bounds, Binaries, Generals, Done };
  ModelIR ir;
  std::map<std::string, int> var_of;

  auto ensure_var = [&](const std::string& name) {
    auto found = var_of.find(name);
    if (found != var_of.end()) return found->second;
    int v = ir.add_variable(name, VarKind::Continuous, 0.0, kInf, 0.0);
    var_of[name] = v;
    return v;
  };

  LpSection section = LpSection::None;
  std::vector<std::string> tokens;

  auto flush_objective = [&]() {
    double sign = 1.0;
    double pending = 1.0;
    bool has_pending = false;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const std::string& t = tokens[i];
      if (i == 0 && t.back() == ':') continue;
      if (t == "+") { sign = 1.0; continue; }
      if (t == "-") { sign = -1.0; continue; }
      if (is_number_token(t)) {
        pending = parse_number(t);
        has_pending = true;
        continue;
      }
      int v = ensure_var(t);
      ir.objective[static_cast<std::size_t>(v)] += sign * (has_pending ? pending : 1.0);
      sign = 1.0;
      pending = 1.0;
      has_pending = false;
    }
    tokens.clear();
  };

  std::string line;
  while (std::getline(in, line)) {
    std::size_t comment = line.find('\\');
    if (comment != std::string::npos) {
      std::string body = line.substr(comment + 1);
      auto words = tokenize(body);
      if (words.size() >= 2 && words[0] == "obopp") {
        std::string kv = body.substr(body.find("obopp") + 6);
        std::size_t eq = kv.find('=');
        if (eq != std::string::npos) ir.metadata[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      line = line.substr(0, comment);
    }
    std::string lower = line;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto trimmed = tokenize(lower);
    if (!trimmed.empty()) {
      std::string head = trimmed[0];
      if (head == "minimize" || head == "maximize") {
        if (head == "maximize") throw ParseError("only minimization models are supported");
        section = LpSection::Objective;
        tokens.clear();
        continue;
      }
      if (head == "subject" || head == "st" || head == "s.t.") {
        if (section == LpSection::Objective) flush_objective();
        section = LpSection::Constraints;
        continue;
      }
      bool leaving_objective = section == LpSection::Objective;
      if (head == "bounds") { if (leaving_objective) flush_objective(); section = LpSection::Bounds; continue; }
      if (head == "binaries" || head == "binary") { section = LpSection::Binaries; continue; }
      if (head == "generals" || head == "general") { section = LpSection::Generals; continue; }
      if (head == "end") { section = LpSection::Done; break; }
    }

    auto line_tokens = tokenize(line);
    if (section == LpSection::Objective || section == LpSection::Constraints) {
      tokens.insert(tokens.end(), line_tokens.begin(), line_tokens.end());
      // flush complete constraint rows on the sense token
      if (section == LpSection::Constraints) {
        auto sense_pos = std::find_if(tokens.begin(), tokens.end(), [](const std::string& t) {
          return t == "<=" || t == ">=" || t == "=";
        });
        while (sense_pos != tokens.end() && sense_pos + 1 != tokens.end()) {
          std::vector<std::string> row(tokens.begin(), sense_pos + 2);
          tokens.erase(tokens.begin(), sense_pos + 2);

          LinConstraint c;
          std::size_t i = 0;
          if (row.size() > 1 && row[0].back() == ':') {
            c.name = row[0].substr(0, row[0].size() - 1);
            i = 1;
          }
          double sign = 1.0;
          double pending = 1.0;
          bool has_pending = false;
          for (; i + 2 < row.size(); ++i) {
            const std::string& t = row[i];
            if (t == "+") { sign = 1.0; continue; }
            if (t == "-") { sign = -1.0; continue; }
            if (is_number_token(t)) {
              pending = parse_number(t);
              has_pending = true;
              continue;
            }
            c.terms.push_back({ensure_var(t), sign * (has_pending ? pending : 1.0)});
            sign = 1.0;
            pending = 1.0;
            has_pending = false;
          }
          const std::string& sense_token = row[row.size() - 2];
          c.sense = sense_token == "<=" ? Sense::Le : sense_token == ">=" ? Sense::Ge : Sense::Eq;
          c.rhs = parse_number(row.back());
          if (c.name.empty()) c.name = "r" + std::to_string(ir.constraints.size());
          ir.constraints.push_back(std::move(c));

          sense_pos = std::find_if(tokens.begin(), tokens.end(), [](const std::string& t) {
            return t == "<=" || t == ">=" || t == "=";
          });
        }
      }
    } else if (section == LpSection::Bounds) {
      if (line_tokens.empty()) continue;
      // forms: "lb <= x <= ub", "x <= ub", "x >= lb", "x = v"
      if (line_tokens.size() == 5 && line_tokens[1] == "<=" && line_tokens[3] == "<=") {
        Variable& v = ir.variables[static_cast<std::size_t>(ensure_var(line_tokens[2]))];
        v.lb = parse_number(line_tokens[0]);
        v.ub = parse_number(line_tokens[4]);
      } else if (line_tokens.size() == 3) {
        Variable& v = ir.variables[static_cast<std::size_t>(ensure_var(line_tokens[0]))];
        double value = parse_number(line_tokens[2]);
        if (line_tokens[1] == "<=") v.ub = value;
        else if (line_tokens[1] == ">=") v.lb = value;
        else if (line_tokens[1] == "=") v.lb = v.ub = value;
        else throw ParseError("malformed bound line: " + line);
      } else {
        throw ParseError("malformed bound line: " + line);
      }
    } else if (section == LpSection::Binaries) {
      for (const std::string& t : line_tokens) {
        Variable& v = ir.variables[static_cast<std::size_t>(ensure_var(t))];
        v.kind = VarKind::Binary;
        if (v.ub == kInf) v.ub = 1.0;
      }
    } else if (section == LpSection::Generals) {
      for (const std::string& t : line_tokens) {
        ir.variables[static_cast<std::size_t>(ensure_var(t))].kind = VarKind::Integer;
      }
    }
  }
  return ir;
}

void export_model(const ModelIR& ir, std::ostream& out, ModelFormat format) {
  if (format == ModelFormat::Mps) {
    write_mps(ir, out);
  } else {
    write_lp(ir, out);
  }
}

void export_model(const ModelIR& ir, const std::string& path, ModelFormat format) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write model file: " + path);
  export_model(ir, out, format);
}

ModelIR import_model(const std::string& path, ModelFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file: " + path);
  return format == ModelFormat::Mps ? parse_mps(in) : parse_lp(in);
}

bool structurally_equal(const ModelIR& a, const ModelIR& b) {
  if (a.variables.size() != b.variables.size()) return false;
  if (a.constraints.size() != b.constraints.size()) return false;
  if (a.metadata != b.metadata) return false;

  std::map<std::string, int> b_var;
  for (std::size_t v = 0; v < b.variables.size(); ++v) b_var[b.variables[v].name] = static_cast<int>(v);

  for (std::size_t v = 0; v < a.variables.size(); ++v) {
    auto found = b_var.find(a.variables[v].name);
    if (found == b_var.end()) return false;
    const Variable& av = a.variables[v];
    const Variable& bv = b.variables[static_cast<std::size_t>(found->second)];
    if (av.kind != bv.kind || av.lb != bv.lb || av.ub != bv.ub) return false;
    if (a.objective[v] != b.objective[static_cast<std::size_t>(found->second)]) return false;
  }

  std::map<std::string, const LinConstraint*> b_rows;
  for (const auto& c : b.constraints) b_rows[c.name] = &c;
  for (const auto& c : a.constraints) {
    auto found = b_rows.find(c.name);
    if (found == b_rows.end()) return false;
    const LinConstraint& d = *found->second;
    if (c.sense != d.sense || c.rhs != d.rhs) return false;
    std::map<std::string, double> c_terms, d_terms;
    for (const LinTerm& t : c.terms) c_terms[a.variables[static_cast<std::size_t>(t.var)].name] += t.coef;
    for (const LinTerm& t : d.terms) d_terms[b.variables[static_cast<std::size_t>(t.var)].name] += t.coef;
    if (c_terms != d_terms) return false;
  }
  return true;
}

}  // namespace batchopt

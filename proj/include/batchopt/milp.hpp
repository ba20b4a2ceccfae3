#ifndef BATCHOPT_MILP_HPP_
#define BATCHOPT_MILP_HPP_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "batchopt/core.hpp"
#include "batchopt/eval.hpp"

namespace batchopt {

enum class VarKind { Binary, Integer, Continuous };
enum class Sense { Le, Eq, Ge };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lb = 0.0;
  double ub = 0.0;  // +infinity for unbounded
};

struct LinTerm {
  int var = 0;
  double coef = 0.0;
};

struct LinConstraint {
  std::string name;
  std::vector<LinTerm> terms;
  Sense sense = Sense::Eq;
  double rhs = 0.0;
};

// Solver-independent minimization model. Objective is dense over the
// variable list; metadata records formulation choices for export headers.
struct ModelIR {
  std::string name = "model";
  std::vector<Variable> variables;
  std::vector<LinConstraint> constraints;
  std::vector<double> objective;
  std::map<std::string, std::string> metadata;

  int add_variable(std::string name, VarKind kind, double lb, double ub, double obj_coef);
  void add_constraint(std::string name, std::vector<LinTerm> terms, Sense sense, double rhs);
  int var_index(const std::string& name) const;  // -1 when absent
  int num_variables() const { return static_cast<int>(variables.size()); }
};

enum class BigMRule { Tight, OrderCount };

struct ModelBuildConfig {
  BigMRule big_m_item = BigMRule::Tight;    // |I_k| vs |I|
  BigMRule big_m_aisle = BigMRule::Tight;   // min(|I_b|, C) vs |I|
  bool linearize_sshape = true;
  bool symmetry_breaking = false;
};

inline ModelBuildConfig default_approx_config() {
  ModelBuildConfig config;
  config.symmetry_breaking = true;
  return config;
}

ModelIR build_exact_return(const Instance& instance, const ModelBuildConfig& config = {});
ModelIR build_exact_sshape(const Instance& instance, const ModelBuildConfig& config = {});
ModelIR build_approx(const Instance& instance, Weighting weighting,
                     const ModelBuildConfig& config = default_approx_config());

// Variable-count ratio of the two models, a proxy for the dimension
// ratio of their polytopes.
double beta_ratio(const ModelIR& approx, const ModelIR& exact);

enum class ModelFormat { Mps, Lp };

void export_model(const ModelIR& ir, std::ostream& out, ModelFormat format);
void export_model(const ModelIR& ir, const std::string& path, ModelFormat format);
ModelIR parse_mps(std::istream& in);
ModelIR parse_lp(std::istream& in);
ModelIR import_model(const std::string& path, ModelFormat format);

// Equality up to variable ordering: everything is matched by name.
bool structurally_equal(const ModelIR& a, const ModelIR& b);

}  // namespace batchopt

#endif  // BATCHOPT_MILP_HPP_

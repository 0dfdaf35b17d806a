#ifndef MAXPLUS_GRAPH_HPP
#define MAXPLUS_GRAPH_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxplus/exponent.hpp"
#include "maxplus/model.hpp"
#include "maxplus/semiring.hpp"

namespace maxplus {

class BlockStructureViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Directed graph on 0..dim-1 with an arc i->j wherever A_ij(0) can be finite.
struct IncidenceGraph {
  int dim = 0;
  std::vector<std::vector<int>> adj;
};

IncidenceGraph incidence_graph(const StructureMatrix& support);

// Components sorted by smallest node, node lists ascending.
std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adj);

bool is_strongly_connected(const StructureMatrix& support);

// Everything derivable from the support alone: components, reachability order,
// structural flags. Exponent-dependent sets live in ComponentDecomposition.
struct StructureInfo {
  int dim = 0;
  StructureMatrix support{1};
  std::vector<std::vector<int>> adj;
  std::vector<std::vector<int>> components;  // c_m, 0-based nodes
  std::vector<int> comp_of_node;
  std::vector<std::vector<int>> comp_adj;    // condensation arcs m -> l, deduplicated
  std::vector<std::vector<int>> e_sets;      // reflexive-transitive reachability, ascending
  std::vector<std::vector<int>> f_nodes;     // union of components in e_sets[m]
  std::vector<char> trivial;                 // singleton with almost-surely-bottom loop
  std::vector<char> final_comp;              // E_m = {m}
  std::vector<char> initial_comp;            // nothing else reaches it
  std::vector<int> topo_order;               // condensation order; computing it asserts acyclicity
};

StructureInfo analyze_structure(const MatrixModel& model);

struct ComponentSets {
  std::vector<int> nodes;    // c_m
  std::vector<int> e_set;    // component indices m reaches (incl. m)
  std::vector<int> f_nodes;  // nodes of those components
  std::vector<int> g_set;    // components of e_set tied for the max exponent
  std::vector<int> h_nodes;  // nodes of g_set components
  bool final_comp = false;
  bool initial_comp = false;
  bool trivial_comp = false;
  bool dominating = false;
  ExponentEstimate gamma_round;   // exponent of the component itself
  ExponentEstimate gamma_square;  // max over reachable components
  bool tie_used_se_slack = false;
};

struct ComponentDecomposition {
  StructureInfo structure;
  std::vector<ComponentSets> comps;

  int dim() const { return structure.dim; }
  int num_components() const { return static_cast<int>(comps.size()); }
  int component_of(int node) const { return structure.comp_of_node[static_cast<size_t>(node)]; }
};

// Ties between reachable exponents use exact equality when both sides are
// closed-form and max(1e-9, 3*(se_l + se_m)) when Monte Carlo error is
// involved; decisions that consumed the slack are flagged on the component.
ComponentDecomposition decompose(const MatrixModel& model,
                                 const std::vector<ExponentEstimate>& gamma_round);

enum class SubmodelKind { kRound, kSquare, kBrace };

// Restriction of the whole law to a node subset; labels compose.
MatrixModel restrict_model(const MatrixModel& model, std::span<const int> nodes);

MatrixModel extract_submodel(const MatrixModel& model, const StructureInfo& info, int m,
                             SubmodelKind kind);  // kRound / kSquare
MatrixModel extract_submodel(const MatrixModel& model, const ComponentDecomposition& decomp, int m,
                             SubmodelKind kind);

// Rectangular block of one atom, rows over I and columns over J.
struct RectBlock {
  int rows = 0;
  int cols = 0;
  std::vector<TropicalScalar> a;

  RectBlock() = default;
  RectBlock(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
  TropicalScalar& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  TropicalScalar at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
  bool all_bottom() const {
    for (TropicalScalar t : a)
      if (t.is_finite()) return false;
    return true;
  }
};

// Split of the law over I u J into upper-left B (I x I), upper-right D (I x J)
// and lower-right C (J x J); the lower-left support must be empty.
struct BlockSplit {
  MatrixModel b_model;
  std::optional<MatrixModel> c_model;
  std::vector<RectBlock> d_blocks;  // one per atom / cycle element, aligned with b_model
  std::vector<double> probs;        // atom weights (1/L each for PERIODIC)
  std::vector<int> i_nodes;
  std::vector<int> j_nodes;
};

BlockSplit block_split(const MatrixModel& model, std::span<const int> i_nodes,
                       std::span<const int> j_nodes);

}  // namespace maxplus

#endif

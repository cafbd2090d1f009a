#pragma once

#include <vector>

namespace hyperlap {

// Dinic max-flow on real capacities.
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes);

  int add_node();
  int num_nodes() const { return static_cast<int>(head_.size()); }
  // Returns an arc id usable with flow().
  int add_arc(int from, int to, double capacity);

  double max_flow(int source, int sink);
  double flow(int arc) const;
  double capacity(int arc) const { return arcs_[arc].original; }

  // Nodes reachable from the source in the residual graph (minimal source side).
  std::vector<char> min_cut_source_side(int source) const;
  // Complement of the nodes that reach the sink in the residual graph (maximal source side).
  std::vector<char> maximal_source_side(int sink) const;

  double tolerance() const { return eps_; }

 private:
  struct Arc {
    int to;
    int next;
    double residual;
    double original;
  };

  bool build_levels(int source, int sink);
  double push(int u, int sink, double limit);

  std::vector<int> head_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<int> cursor_;
  double eps_ = 0.0;
};

}  // namespace hyperlap

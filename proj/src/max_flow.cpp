#include "hyperlap/max_flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace hyperlap {

FlowNetwork::FlowNetwork(int nodes) : head_(nodes, -1) {}

int FlowNetwork::add_node() {
  head_.push_back(-1);
  return static_cast<int>(head_.size()) - 1;
}

int FlowNetwork::add_arc(int from, int to, double capacity) {
  const int id = static_cast<int>(arcs_.size());
  arcs_.push_back({to, head_[from], capacity, capacity});
  head_[from] = id;
  arcs_.push_back({from, head_[to], 0.0, 0.0});
  head_[to] = id + 1;
  return id;
}

double FlowNetwork::flow(int arc) const { return arcs_[arc].original - arcs_[arc].residual; }

bool FlowNetwork::build_levels(int source, int sink) {
  level_.assign(head_.size(), -1);
  std::queue<int> queue;
  level_[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    for (int a = head_[u]; a >= 0; a = arcs_[a].next) {
      const Arc& arc = arcs_[a];
      if (arc.residual > eps_ && level_[arc.to] < 0) {
        level_[arc.to] = level_[u] + 1;
        queue.push(arc.to);
      }
    }
  }
  return level_[sink] >= 0;
}

double FlowNetwork::push(int u, int sink, double limit) {
  if (u == sink) return limit;
  for (int& a = cursor_[u]; a >= 0; a = arcs_[a].next) {
    Arc& arc = arcs_[a];
    if (arc.residual <= eps_ || level_[arc.to] != level_[u] + 1) continue;
    const double pushed = push(arc.to, sink, std::min(limit, arc.residual));
    if (pushed > 0.0) {
      arc.residual -= pushed;
      arcs_[a ^ 1].residual += pushed;
      return pushed;
    }
  }
  return 0.0;
}

double FlowNetwork::max_flow(int source, int sink) {
  double scale = 0.0;
  for (std::size_t a = 0; a < arcs_.size(); a += 2) scale = std::max(scale, arcs_[a].original);
  eps_ = 1e-13 * std::max(1.0, scale);
  double total = 0.0;
  while (build_levels(source, sink)) {
    cursor_ = head_;
    while (true) {
      const double pushed = push(source, sink, std::numeric_limits<double>::infinity());
      if (pushed <= 0.0) break;
      total += pushed;
    }
  }
  return total;
}

std::vector<char> FlowNetwork::min_cut_source_side(int source) const {
  std::vector<char> seen(head_.size(), 0);
  std::vector<int> stack{source};
  seen[source] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int a = head_[u]; a >= 0; a = arcs_[a].next) {
      if (arcs_[a].residual > eps_ && !seen[arcs_[a].to]) {
        seen[arcs_[a].to] = 1;
        stack.push_back(arcs_[a].to);
      }
    }
  }
  return seen;
}

std::vector<char> FlowNetwork::maximal_source_side(int sink) const {
  // Walk residual arcs backwards from the sink: u reaches v iff arc u->v has residual.
  std::vector<char> reaches(head_.size(), 0);
  std::vector<int> stack{sink};
  reaches[sink] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int a = head_[v]; a >= 0; a = arcs_[a].next) {
      // a is v->u; its twin a^1 is u->v.
      const int u = arcs_[a].to;
      if (!reaches[u] && arcs_[a ^ 1].residual > eps_) {
        reaches[u] = 1;
        stack.push_back(u);
      }
    }
  }
  for (auto& r : reaches) r = !r;
  return reaches;
}

}  // namespace hyperlap

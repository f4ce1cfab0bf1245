#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "bosoul/diffusion.hpp"
#include "bosoul/localizer.hpp"

namespace bosoul {

/// Maps node labels (as written in files) to internal ids.
class LabelIndex {
 public:
  explicit LabelIndex(const std::vector<std::string>& labels) : labels_(&labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) index_.emplace(labels[i], static_cast<NodeId>(i));
  }

  std::size_t size() const noexcept { return labels_->size(); }
  const std::string& label(NodeId id) const { return (*labels_)[id]; }

  NodeId id(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw Error("unknown node label '" + label + "'");
    return it->second;
  }

 private:
  const std::vector<std::string>* labels_;
  std::unordered_map<std::string, NodeId> index_;
};

/// Reads a `node_id,state` CSV (header optional). Nodes not listed are 0.
inline Snapshot read_snapshot(std::istream& in, const LabelIndex& labels) {
  Snapshot s{Indicator(labels.size(), 0)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(line_no, "expected node_id,state");
    const std::string node = line.substr(0, comma);
    const std::string state = line.substr(comma + 1);
    if (line_no == 1 && node == "node_id") continue;
    if (state != "0" && state != "1") throw ParseError(line_no, "state must be 0 or 1");
    try {
      s.states[labels.id(node)] = state == "1";
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return s;
}

inline void write_snapshot(std::ostream& out, const Snapshot& s, const LabelIndex& labels) {
  out << "node_id,state\n";
  for (std::size_t v = 0; v < s.size(); ++v) {
    out << labels.label(static_cast<NodeId>(v)) << ',' << static_cast<int>(s.states[v]) << '\n';
  }
}

inline std::string join_labels(const NodeSet& s, const LabelIndex& labels, char sep = ' ') {
  std::string out;
  for (NodeId v : s.members()) {
    if (!out.empty()) out += sep;
    out += labels.label(v);
  }
  return out;
}

inline std::string format_real(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

/// Plain-text report: `key=value` header lines, then the evaluated pairs Φ
/// and the acquisition trace as CSV blocks.
inline void write_report(std::ostream& out, const std::string& method, const NodeSet& sources,
                         const LabelIndex& labels, const LocalizationResult* bosoul, bool with_timings) {
  out << "method=" << method << '\n';
  out << "sources=" << join_labels(sources, labels) << '\n';
  if (bosoul) {
    out << "set_id=" << bosoul->set_id << '\n';
    out << "posterior_mean=" << format_real(bosoul->posterior_mean) << '\n';
    out << "evaluations=" << bosoul->evaluations.size() << '\n';
    if (with_timings) out << "seconds=" << format_real(bosoul->seconds) << '\n';
    out << "\n[evaluations]\nset_id,members,tau,variance\n";
    for (const auto& e : bosoul->evaluations) {
      out << e.set_id << ',' << join_labels(e.set, labels) << ',' << format_real(e.tau) << ',' << format_real(e.variance) << '\n';
    }
    out << "\n[trace]\niteration,chosen_id,ei,tau\n";
    for (const auto& t : bosoul->trace) {
      out << t.iteration << ',' << t.chosen_id << ',' << format_real(t.ei) << ',' << format_real(t.tau) << '\n';
    }
  }
}

}  // namespace bosoul

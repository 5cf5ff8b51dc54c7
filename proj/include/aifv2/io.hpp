#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "aifv2/codetree.hpp"
#include "aifv2/distribution.hpp"
#include "aifv2/errors.hpp"
#include "aifv2/numeric.hpp"
#include "aifv2/optimizer.hpp"

namespace aifv2 {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Distributions: {"symbols": ["a", ...], "probs": ["1/2", "0.25", ...]}
// Probability entries may be strings (decimal, "a/b", or "a/2^k") or plain
// JSON numbers.

template <class V>
V value_from_json(const json& j) {
  if (j.is_string()) return num_traits<V>::parse(j.get<std::string>());
  if (j.is_number_integer()) return num_traits<V>::from_int(j.get<long long>());
  if (j.is_number()) {
    // Route through the shortest round-trip decimal so exact mode reads the
    // literal the file shows.
    return num_traits<V>::parse(j.dump());
  }
  throw InputError("expected a number or numeric string, got: " + j.dump());
}

template <class V>
SourceDistribution<V> dist_from_json(const json& j) {
  if (!j.is_object() || !j.contains("symbols") || !j.contains("probs"))
    throw InputError("distribution: expected {\"symbols\": [...], \"probs\": [...]}");
  if (!j["symbols"].is_array() || !j["probs"].is_array())
    throw InputError("distribution: symbols and probs must be arrays");
  std::vector<std::string> symbols;
  for (const json& s : j["symbols"]) {
    if (!s.is_string()) throw InputError("distribution: symbols must be strings");
    symbols.push_back(s.get<std::string>());
  }
  std::vector<V> probs;
  for (const json& p : j["probs"]) probs.push_back(value_from_json<V>(p));
  return SourceDistribution<V>::make(std::move(symbols), std::move(probs));
}

template <class V>
json dist_to_json(const SourceDistribution<V>& dist) {
  json j;
  j["symbols"] = dist.symbols();
  json probs = json::array();
  for (const V& p : dist.probs()) probs.push_back(num_traits<V>::to_string(p));
  j["probs"] = probs;
  return j;
}

// ---------------------------------------------------------------------------
// Trees: {"kind": "internal|master|slave|leaf", "symbol": i?, "zero": ...?,
// "one": ...?}.  Only finished trees are serialized.

inline json tree_to_json_node(const TreeNode* nd) {
  if (!nd) throw InternalError("tree_to_json: null node");
  if (nd->kind == NodeKind::frontier)
    throw InputError("tree_to_json: cannot serialize an unfinished tree");
  json j;
  j["kind"] = node_kind_name(nd->kind);
  if (nd->symbol >= 0) j["symbol"] = nd->symbol;
  if (nd->zero) j["zero"] = tree_to_json_node(nd->zero.get());
  if (nd->one) j["one"] = tree_to_json_node(nd->one.get());
  return j;
}

inline json tree_to_json(const CodeTree& tree) {
  return tree_to_json_node(tree.root());
}

inline std::unique_ptr<TreeNode> tree_from_json_node(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw InputError("tree: node must be an object with a \"kind\"");
  auto nd = std::make_unique<TreeNode>();
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "internal")
    nd->kind = NodeKind::internal;
  else if (kind == "master")
    nd->kind = NodeKind::master;
  else if (kind == "slave")
    nd->kind = NodeKind::slave;
  else if (kind == "leaf")
    nd->kind = NodeKind::leaf;
  else
    throw InputError("tree: unknown node kind '" + kind + "'");
  if (j.contains("symbol")) {
    if (!j["symbol"].is_number_integer())
      throw InputError("tree: symbol must be an integer index");
    nd->symbol = j["symbol"].get<int>();
    if (nd->symbol < 0) throw InputError("tree: negative symbol index");
  }
  if (j.contains("zero")) nd->zero = tree_from_json_node(j["zero"]);
  if (j.contains("one")) nd->one = tree_from_json_node(j["one"]);
  return nd;
}

// Loads a finished tree and checks the structural rules (canonical ordering
// is not required of externally supplied trees).
inline CodeTree tree_from_json(const json& j, Side side, int n) {
  CodeTree tree(side, n, 0, tree_from_json_node(j));
  tree.set_level(tree.depth());
  if (!tree.complete())
    throw InputError("tree: not a finished code tree for n=" + std::to_string(n));
  for (const Violation& v : validate(tree)) {
    if (v.kind == Violation::Kind::structural)
      throw InputError("tree: structural violation at '" + v.path + "': " + v.message);
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Code pairs

template <class V>
json pair_to_json(const CodePair<V>& pair, const SourceDistribution<V>& dist) {
  json j;
  j["mode"] = num_traits<V>::exact ? "exact" : "float";
  j["symbols"] = dist.symbols();
  json probs = json::array();
  for (const V& p : dist.probs()) probs.push_back(num_traits<V>::to_string(p));
  j["probs"] = probs;
  j["C"] = num_traits<V>::to_string(pair.C);
  j["l_avg"] = num_traits<V>::to_string(pair.l_avg);
  j["iterations"] = pair.iterations;
  json hist = json::array();
  for (const V& c : pair.history) hist.push_back(num_traits<V>::to_string(c));
  j["history"] = hist;
  j["status"] = pair.status == OptimizeStatus::degenerate ? "degenerate" : "converged";
  j["t0"] = tree_to_json(pair.t0);
  j["t1"] = tree_to_json(pair.t1);
  return j;
}

template <class V>
struct LoadedPair {
  SourceDistribution<V> dist;
  CodePair<V> pair;
};

// Loads and revalidates a pair file: distribution, both trees (structural
// rules), and the stored average length against a recomputation from the
// trees.
template <class V>
LoadedPair<V> pair_from_json(const json& j) {
  if (!j.is_object()) throw InputError("pair: expected a JSON object");
  for (const char* key : {"symbols", "probs", "t0", "t1", "C", "l_avg"})
    if (!j.contains(key))
      throw InputError(std::string("pair: missing field \"") + key + "\"");
  json dj;
  dj["symbols"] = j["symbols"];
  dj["probs"] = j["probs"];
  SourceDistribution<V> dist = dist_from_json<V>(dj);

  CodeTree t0 = tree_from_json(j["t0"], Side::t0, dist.n());
  CodeTree t1 = tree_from_json(j["t1"], Side::t1, dist.n());
  CodeFunctionals<V> f0 = code_functionals(t0, dist);
  CodeFunctionals<V> f1 = code_functionals(t1, dist);
  std::pair<V, V> P = stationary(f0.q1, f1.q0);
  V lavg = average_length(f0.L, f1.L, P);

  V stored_l = value_from_json<V>(j["l_avg"]);
  bool l_ok;
  if constexpr (num_traits<V>::exact) {
    l_ok = stored_l == lavg;
  } else {
    l_ok = std::abs(num_traits<V>::to_double(stored_l) -
                    num_traits<V>::to_double(lavg)) <= 1e-12;
  }
  if (!l_ok)
    throw InputError("pair: stored l_avg does not match the trees (stored " +
                     num_traits<V>::to_string(stored_l) + ", recomputed " +
                     num_traits<V>::to_string(lavg) + ")");

  V C = value_from_json<V>(j["C"]);
  CodePair<V> pair{std::move(t0), std::move(t1), std::move(f0), std::move(f1),
                   std::move(C),  std::move(lavg), std::move(P), 0,
                   {},            OptimizeStatus::converged};
  if (j.contains("iterations")) pair.iterations = j["iterations"].get<int>();
  if (j.contains("history"))
    for (const json& c : j["history"]) pair.history.push_back(value_from_json<V>(c));
  if (j.contains("status") && j["status"].get<std::string>() == "degenerate")
    pair.status = OptimizeStatus::degenerate;
  return LoadedPair<V>{std::move(dist), std::move(pair)};
}

// ---------------------------------------------------------------------------
// Optimizer report

template <class V>
json report_to_json(const CodePair<V>& pair, const SourceDistribution<V>& dist,
                    const HuffmanCode<V>& huff) {
  const double l_aifv = num_traits<V>::to_double(pair.l_avg);
  const double h = dist.entropy();
  json j;
  j["C"] = num_traits<V>::to_double(pair.C);
  j["iterations"] = pair.iterations;
  json hist = json::array();
  for (const V& c : pair.history) hist.push_back(num_traits<V>::to_double(c));
  j["history"] = hist;
  j["L_aifv"] = l_aifv;
  j["L_huffman"] = num_traits<V>::to_double(huff.cost);
  j["entropy"] = h;
  j["redundancy"] = l_aifv - h;
  return j;
}

// ---------------------------------------------------------------------------
// Graphviz export

inline std::string tree_to_dot(const CodeTree& tree,
                               const std::vector<std::string>* labels = nullptr) {
  std::string out = "digraph codetree {\n  rankdir=TB;\n  node [fontname=\"monospace\"];\n";
  auto node_id = [](const std::string& path) {
    return path.empty() ? std::string("root") : "n" + path;
  };
  tree.walk([&](const TreeNode& nd, int, const std::string& path) {
    std::string id = node_id(path);
    std::string label;
    std::string style;
    switch (nd.kind) {
      case NodeKind::leaf:
        label = labels && nd.symbol < static_cast<int>(labels->size())
                    ? (*labels)[nd.symbol]
                    : "a" + std::to_string(nd.symbol + 1);
        style = "shape=box,style=filled,fillcolor=black,fontcolor=white";
        break;
      case NodeKind::master:
        label = labels && nd.symbol < static_cast<int>(labels->size())
                    ? (*labels)[nd.symbol]
                    : "a" + std::to_string(nd.symbol + 1);
        style = "shape=box,style=filled,fillcolor=gray70";
        break;
      case NodeKind::slave:
        label = "";
        style = "shape=circle,style=filled,fillcolor=lightblue,width=0.2";
        break;
      case NodeKind::internal:
        label = "";
        style = "shape=circle,width=0.2";
        break;
      case NodeKind::frontier:
        label = "?";
        style = "shape=circle,style=dashed";
        break;
    }
    out += "  " + id + " [label=\"" + label + "\"," + style + "];\n";
    if (nd.zero)
      out += "  " + id + " -> " + node_id(path + "0") + " [label=\"0\"];\n";
    if (nd.one)
      out += "  " + id + " -> " + node_id(path + "1") + " [label=\"1\"];\n";
  });
  out += "}\n";
  return out;
}

}  // namespace aifv2

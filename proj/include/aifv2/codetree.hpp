#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "aifv2/distribution.hpp"
#include "aifv2/dp.hpp"
#include "aifv2/errors.hpp"
#include "aifv2/numeric.hpp"
#include "aifv2/signature.hpp"

namespace aifv2 {

// Node kinds of a binary code tree:
//   internal - complete, two children, no symbol
//   master   - carries a symbol, incomplete: single slave child on edge 0;
//              decoding continues to its grandchild on input "00"
//   slave    - unassigned pass-through with a single child (edge 0, except
//              the mandated slave under a side-1 root, whose child is on
//              edge 1 so that no codeword starts with "00")
//   leaf     - carries a symbol, no children
//   frontier - open slot of a partially built tree
enum class NodeKind { internal, master, slave, leaf, frontier };

inline const char* node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::internal: return "internal";
    case NodeKind::master: return "master";
    case NodeKind::slave: return "slave";
    case NodeKind::leaf: return "leaf";
    case NodeKind::frontier: return "frontier";
  }
  return "?";
}

struct TreeNode {
  NodeKind kind = NodeKind::frontier;
  int symbol = -1;  // 0-based index into the sorted alphabet, -1 if none
  std::unique_ptr<TreeNode> zero;
  std::unique_ptr<TreeNode> one;

  const TreeNode* child(int bit) const { return bit ? one.get() : zero.get(); }
};

inline std::unique_ptr<TreeNode> clone_node(const TreeNode* src) {
  if (!src) return nullptr;
  auto out = std::make_unique<TreeNode>();
  out->kind = src->kind;
  out->symbol = src->symbol;
  out->zero = clone_node(src->zero.get());
  out->one = clone_node(src->one.get());
  return out;
}

// A code tree (possibly mid-construction) for one side of an AIFV-2 pair.
// Value semantics with deep copies; all structural edits go through
// initial_tree / expand_tree / truncate.
class CodeTree {
 public:
  CodeTree(Side side, int n, int level, std::unique_ptr<TreeNode> root)
      : side_(side), n_(n), level_(level), root_(std::move(root)) {}

  CodeTree(const CodeTree& o)
      : side_(o.side_), n_(o.n_), level_(o.level_), root_(clone_node(o.root_.get())) {}
  CodeTree& operator=(const CodeTree& o) {
    if (this != &o) {
      side_ = o.side_;
      n_ = o.n_;
      level_ = o.level_;
      root_ = clone_node(o.root_.get());
    }
    return *this;
  }
  CodeTree(CodeTree&&) = default;
  CodeTree& operator=(CodeTree&&) = default;

  Side side() const { return side_; }
  int n() const { return n_; }
  // Construction level: levels <= level() are final, open slots (if any)
  // live on level()+1.
  int level() const { return level_; }
  const TreeNode* root() const { return root_.get(); }
  TreeNode* mutable_root() { return root_.get(); }
  void set_level(int l) { level_ = l; }

  int assigned_count() const {
    int m = 0;
    walk([&](const TreeNode& nd, int, const std::string&) {
      if (nd.symbol >= 0) ++m;
    });
    return m;
  }

  bool complete() const {
    bool open = false;
    walk([&](const TreeNode& nd, int, const std::string&) {
      if (nd.kind == NodeKind::frontier) open = true;
      if (nd.kind == NodeKind::slave && !nd.zero && !nd.one) open = true;
    });
    return !open && assigned_count() == n_;
  }

  int depth() const {
    int d = 0;
    walk([&](const TreeNode&, int dep, const std::string&) { d = std::max(d, dep); });
    return d;
  }

  // Depth-first visit (edge 0 before edge 1, i.e. codeword order) with
  // depth and path.
  template <class F>
  void walk(F&& f) const {
    std::string path;
    walk_rec(root_.get(), 0, path, f);
  }

 private:
  template <class F>
  static void walk_rec(const TreeNode* nd, int depth, std::string& path, F& f) {
    if (!nd) return;
    f(static_cast<const TreeNode&>(*nd), depth, static_cast<const std::string&>(path));
    path.push_back('0');
    walk_rec(nd->zero.get(), depth + 1, path, f);
    path.back() = '1';
    walk_rec(nd->one.get(), depth + 1, path, f);
    path.pop_back();
  }

  Side side_;
  int n_;
  int level_;
  std::unique_ptr<TreeNode> root_;
};

// ---------------------------------------------------------------------------
// Construction

// The handful of legal starting shapes; `sig` must be one of the side's
// initial signatures.
inline CodeTree initial_tree(Side side, const Signature& sig, int n) {
  if (!is_initial(side, sig))
    throw InputError("initial_tree: " + sig.to_string() +
                     " is not an initial signature for side " +
                     std::to_string(side_index(side)));
  auto frontier = [] {
    auto nd = std::make_unique<TreeNode>();
    nd->kind = NodeKind::frontier;
    return nd;
  };
  if (side == Side::t0) {
    auto root = std::make_unique<TreeNode>();
    if (sig == Signature{0, 2, 0}) {
      root->kind = NodeKind::internal;
      root->zero = frontier();
      root->one = frontier();
    } else {  // (1;0;1): the root itself holds symbol 1 as a master
      root->kind = NodeKind::master;
      root->symbol = 0;
      root->zero = std::make_unique<TreeNode>();
      root->zero->kind = NodeKind::slave;
    }
    return CodeTree(side, n, 0, std::move(root));
  }
  // Side 1: complete root whose 0-child is a slave passing through on edge 1,
  // so no codeword begins "00".  The 1-child carries the level-1 choice.
  auto root = std::make_unique<TreeNode>();
  root->kind = NodeKind::internal;
  root->zero = std::make_unique<TreeNode>();
  root->zero->kind = NodeKind::slave;
  root->zero->one = frontier();
  auto right = std::make_unique<TreeNode>();
  if (sig == Signature{0, 3, 0}) {
    right->kind = NodeKind::internal;
    right->zero = frontier();
    right->one = frontier();
  } else if (sig == Signature{1, 1, 0}) {
    right->kind = NodeKind::leaf;
    right->symbol = 0;
  } else {  // (1;1;1)
    right->kind = NodeKind::master;
    right->symbol = 0;
    right->zero = std::make_unique<TreeNode>();
    right->zero->kind = NodeKind::slave;
  }
  root->one = std::move(right);
  return CodeTree(side, n, 1, std::move(root));
}

// Level signature of `tree` at level i: symbols placed at depth <= i, open
// non-slave nodes at depth i+1, masters at depth i.  For a partial tree i
// must not exceed its construction level.
inline Signature signature_at(const CodeTree& tree, int i) {
  const int base = tree.side() == Side::t0 ? 0 : 1;
  if (i < base)
    throw InputError("signature_at: level below the side's starting level");
  if (!tree.complete() && i > tree.level())
    throw InputError("signature_at: level beyond the construction frontier");
  Signature s;
  tree.walk([&](const TreeNode& nd, int depth, const std::string&) {
    if (nd.symbol >= 0 && depth <= i) ++s.m;
    if (depth == i && nd.kind == NodeKind::master) ++s.z;
    if (depth == i + 1 && nd.kind != NodeKind::slave) ++s.p;
  });
  return s;
}

// Cuts `tree` back to an i-level partial tree: everything below level i+1 is
// removed, and level-(i+1) nodes are reopened - slaves stay (childless)
// slaves, every other node becomes an unassigned frontier slot.
inline CodeTree truncate(const CodeTree& tree, int i) {
  const int base = tree.side() == Side::t0 ? 0 : 1;
  if (i < base)
    throw InputError("truncate: level below the side's starting level");
  if (!tree.complete() && i > tree.level())
    throw InputError("truncate: level beyond the construction frontier");
  CodeTree out = tree;
  // Walk mutably to depth i+1.
  struct Rec {
    int cut;
    void visit(TreeNode* nd, int depth) const {
      if (!nd) return;
      if (depth == cut) {
        nd->zero.reset();
        nd->one.reset();
        if (nd->kind != NodeKind::slave) {
          nd->kind = NodeKind::frontier;
          nd->symbol = -1;
        }
        return;
      }
      visit(nd->zero.get(), depth + 1);
      visit(nd->one.get(), depth + 1);
    }
  };
  Rec{i + 1}.visit(out.mutable_root(), 0);
  out.set_level(i);
  return out;
}

// One construction step: of the open slots on level level()+1 (left to
// right), the first e0 become leaves carrying the next e0 symbols, the next
// e1 become masters carrying the following e1 symbols, and the rest become
// complete internal nodes.  Childless slaves on that level receive their
// single pass-through child.  New open slots appear on the next level.
inline CodeTree expand_tree(const CodeTree& tree, int e0, int e1) {
  if (e0 < 0 || e1 < 0) throw InputError("expand_tree: negative counts");
  CodeTree out = tree;
  std::vector<TreeNode*> slots;
  std::vector<TreeNode*> open_slaves;
  const int boundary = tree.level() + 1;
  struct Rec {
    int boundary;
    std::vector<TreeNode*>* slots;
    std::vector<TreeNode*>* open_slaves;
    void visit(TreeNode* nd, int depth) const {
      if (!nd) return;
      if (depth == boundary) {
        if (nd->kind == NodeKind::frontier) slots->push_back(nd);
        if (nd->kind == NodeKind::slave && !nd->zero && !nd->one)
          open_slaves->push_back(nd);
        return;
      }
      visit(nd->zero.get(), depth + 1);
      visit(nd->one.get(), depth + 1);
    }
  };
  Rec{boundary, &slots, &open_slaves}.visit(out.mutable_root(), 0);

  if (e0 + e1 > static_cast<int>(slots.size()))
    throw InputError("expand_tree: e0+e1 exceeds the open slots");
  int next_symbol = tree.assigned_count();
  if (next_symbol + e0 + e1 > tree.n())
    throw InputError("expand_tree: more symbols than the alphabet holds");

  auto frontier = [] {
    auto nd = std::make_unique<TreeNode>();
    nd->kind = NodeKind::frontier;
    return nd;
  };
  for (std::size_t idx = 0; idx < slots.size(); ++idx) {
    TreeNode* nd = slots[idx];
    if (static_cast<int>(idx) < e0) {
      nd->kind = NodeKind::leaf;
      nd->symbol = next_symbol++;
    } else if (static_cast<int>(idx) < e0 + e1) {
      nd->kind = NodeKind::master;
      nd->symbol = next_symbol++;
      nd->zero = std::make_unique<TreeNode>();
      nd->zero->kind = NodeKind::slave;
    } else {
      nd->kind = NodeKind::internal;
      nd->zero = frontier();
      nd->one = frontier();
    }
  }
  for (TreeNode* sl : open_slaves) sl->zero = frontier();
  out.set_level(tree.level() + 1);
  return out;
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  enum class Kind { structural, canonical };
  Kind kind;
  std::string path;  // root-to-node bit path ("" = root)
  std::string message;
};

// Checks the code-tree rules.  `structural` violations break decodability or
// the tree grammar itself; `canonical` violations only break the normalized
// ordering that optimal trees can be assumed to satisfy (symbol depths
// non-decreasing in index; on equal depth, leaf symbols before master
// symbols).  Encode/decode only needs a structurally clean pair.
inline std::vector<Violation> validate(const CodeTree& tree) {
  std::vector<Violation> out;
  auto bad = [&](Violation::Kind k, const std::string& path, std::string msg) {
    out.push_back(Violation{k, path, std::move(msg)});
  };
  using VK = Violation::Kind;
  const TreeNode* root = tree.root();
  if (!root) {
    bad(VK::structural, "", "tree has no root");
    return out;
  }

  const bool partial = !tree.complete();
  const int boundary = tree.level() + 1;

  // Per-node grammar.
  std::vector<std::pair<int, int>> symbol_depth_kind(tree.n(), {-1, 0});
  std::vector<int> symbol_count(tree.n(), 0);
  tree.walk([&](const TreeNode& nd, int depth, const std::string& path) {
    const bool has0 = nd.zero != nullptr, has1 = nd.one != nullptr;
    switch (nd.kind) {
      case NodeKind::internal:
        if (nd.symbol >= 0) bad(VK::structural, path, "internal node carries a symbol");
        if (!has0 || !has1) bad(VK::structural, path, "internal node is incomplete");
        break;
      case NodeKind::master:
        if (nd.symbol < 0) bad(VK::structural, path, "master without a symbol");
        if (has1) bad(VK::structural, path, "master has a child on edge 1");
        if (!has0 || nd.zero->kind != NodeKind::slave)
          bad(VK::structural, path, "master's child must be a slave on edge 0");
        break;
      case NodeKind::slave: {
        if (nd.symbol >= 0) bad(VK::structural, path, "slave carries a symbol");
        const bool root_slave = tree.side() == Side::t1 && path == "0";
        if (root_slave) {
          if (has0)
            bad(VK::structural, path,
                "the side-1 root slave must pass through on edge 1");
          if (!has1 && !(partial && depth == boundary))
            bad(VK::structural, path, "slave is missing its child");
        } else {
          if (has1) bad(VK::structural, path, "slave has a child on edge 1");
          if (!has0 && !(partial && depth == boundary))
            bad(VK::structural, path, "slave is missing its child");
        }
        if ((has0 || has1) && partial && depth == boundary)
          bad(VK::structural, path,
              "slave at the construction frontier must still be childless");
        break;
      }
      case NodeKind::leaf:
        if (nd.symbol < 0) bad(VK::structural, path, "leaf without a symbol");
        if (has0 || has1) bad(VK::structural, path, "leaf has children");
        break;
      case NodeKind::frontier:
        if (!partial) bad(VK::structural, path, "open slot in a finished tree");
        if (nd.symbol >= 0) bad(VK::structural, path, "open slot carries a symbol");
        if (has0 || has1) bad(VK::structural, path, "open slot has children");
        if (partial && depth != boundary)
          bad(VK::structural, path, "open slot away from the construction frontier");
        break;
    }
    if (nd.symbol >= 0) {
      if (nd.symbol >= tree.n()) {
        bad(VK::structural, path, "symbol index out of range");
      } else {
        ++symbol_count[nd.symbol];
        symbol_depth_kind[nd.symbol] = {depth, nd.kind == NodeKind::master ? 1 : 0};
      }
    }
    if (partial && depth > boundary)
      bad(VK::structural, path, "node below the construction frontier");
  });

  // Root and side rules.
  if (tree.side() == Side::t0) {
    if (root->kind != NodeKind::internal && root->kind != NodeKind::master)
      bad(VK::structural, "", "side-0 root must be internal or a master");
  } else {
    if (root->kind != NodeKind::internal)
      bad(VK::structural, "", "side-1 root must be a complete internal node");
    else if (!root->zero || root->zero->kind != NodeKind::slave)
      bad(VK::structural, "0", "side-1 root's 0-child must be a slave");
  }

  // Symbol multiplicities: a (possibly partial) tree holds exactly the
  // first m symbols, each once.
  int m = 0;
  for (int s = 0; s < tree.n(); ++s) {
    if (symbol_count[s] > 1)
      bad(VK::structural, "", "symbol " + std::to_string(s) + " appears more than once");
    if (symbol_count[s] > 0) ++m;
  }
  for (int s = 0; s < tree.n(); ++s) {
    if (symbol_count[s] == 0 && s < m)
      bad(VK::structural, "",
          "assigned symbols are not a prefix: missing index " + std::to_string(s));
  }
  if (!partial && m != tree.n())
    bad(VK::structural, "", "finished tree does not hold the whole alphabet");

  // Defensive bound on the open-slot count (reachable trees obey p <= n).
  if (partial) {
    Signature sig = signature_at(tree, tree.level());
    if (sig.p > 2 * tree.n())
      throw InternalError("validate: open slot count exceeds the defensive 2n bound");
  }

  // Canonical ordering over the assigned prefix.
  for (int s = 0; s + 1 < m; ++s) {
    if (symbol_depth_kind[s].first > symbol_depth_kind[s + 1].first)
      bad(VK::canonical, "",
          "symbol depths decrease between indices " + std::to_string(s) + " and " +
              std::to_string(s + 1));
  }
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < a; ++b) {
      // b < a: if they share a depth, a leaf at the larger index after a
      // master at the smaller one breaks the normal form.
      if (symbol_depth_kind[a].first == symbol_depth_kind[b].first &&
          symbol_depth_kind[b].second == 1 && symbol_depth_kind[a].second == 0)
        bad(VK::canonical, "",
            "leaf symbol " + std::to_string(a) + " sits after master symbol " +
                std::to_string(b) + " on the same level");
    }
  }
  return out;
}

inline bool structurally_valid(const CodeTree& tree) {
  for (const Violation& v : validate(tree))
    if (v.kind == Violation::Kind::structural) return false;
  return true;
}

inline bool fully_valid(const CodeTree& tree) { return validate(tree).empty(); }

// ---------------------------------------------------------------------------
// Costs and functionals

// Partial construction cost of an i-level tree, the quantity the dynamic
// program accumulates step by step:
//   sum_k p_k * depth(symbol k)  +  i * (weight not yet placed)
//   side 0:  + C * (weight of masters at depth <= i-1)
//   side 1:  - C * (weight of leaves at depth <= i)
template <class V>
V level_cost(const CodeTree& tree, int i, const PrefixSums<V>& W,
             const SourceDistribution<V>& dist, const CostParam<V>& C) {
  if (!tree.complete() && i != tree.level())
    throw InputError("level_cost: level must match the construction level");
  if (tree.complete() && i < tree.depth())
    throw InputError("level_cost: level below the depth of a finished tree");
  V acc = num_traits<V>::from_int(0);
  int m = 0;
  tree.walk([&](const TreeNode& nd, int depth, const std::string&) {
    if (nd.symbol < 0) return;
    ++m;
    const V& p = dist.prob(nd.symbol);
    acc = acc + p * num_traits<V>::from_int(depth);
    if (tree.side() == Side::t0 && nd.kind == NodeKind::master && depth <= i - 1)
      acc = acc + C.value() * p;
    if (tree.side() == Side::t1 && nd.kind == NodeKind::leaf)
      acc = acc - C.value() * p;
  });
  acc = acc + num_traits<V>::from_int(i) * W.Wp(m);
  return acc;
}

// Code functionals of a finished tree: codeword per symbol, average length
// L, and the probability mass sitting on leaves (q0) and on masters (q1).
template <class V>
struct CodeFunctionals {
  V L;
  V q0;
  V q1;
  std::vector<std::string> codewords;       // by sorted symbol index
  std::vector<bool> symbol_is_master;       // by sorted symbol index
};

template <class V>
CodeFunctionals<V> code_functionals(const CodeTree& tree,
                                    const SourceDistribution<V>& dist) {
  if (!tree.complete())
    throw InputError("code_functionals: tree is not finished");
  CodeFunctionals<V> f;
  const V zero = num_traits<V>::from_int(0);
  f.L = zero;
  f.q0 = zero;
  f.q1 = zero;
  f.codewords.assign(dist.n(), "");
  f.symbol_is_master.assign(dist.n(), false);
  std::vector<bool> seen(dist.n(), false);
  tree.walk([&](const TreeNode& nd, int depth, const std::string& path) {
    if (nd.symbol < 0) return;
    const V& p = dist.prob(nd.symbol);
    f.codewords[nd.symbol] = path;
    f.symbol_is_master[nd.symbol] = nd.kind == NodeKind::master;
    seen[nd.symbol] = true;
    f.L = f.L + p * num_traits<V>::from_int(depth);
    if (nd.kind == NodeKind::master)
      f.q1 = f.q1 + p;
    else
      f.q0 = f.q0 + p;
  });
  for (int s = 0; s < dist.n(); ++s)
    if (!seen[s])
      throw InputError("code_functionals: tree does not cover the alphabet");
  return f;
}

// ---------------------------------------------------------------------------
// Reconstruction from a DP expansion path

inline CodeTree tree_from_path(Side side, const std::vector<Signature>& path, int n) {
  if (path.empty()) throw InputError("tree_from_path: empty path");
  if (!is_initial(side, path.front()))
    throw InputError("tree_from_path: path does not start at an initial signature");
  if (!(path.back() == Signature{n, 0, 0}))
    throw InputError("tree_from_path: path does not end at (" + std::to_string(n) +
                     ";0;0)");
  CodeTree t = initial_tree(side, path.front(), n);
  if (!(signature_at(t, t.level()) == path.front()))
    throw InternalError("tree_from_path: initial tree signature mismatch");
  for (std::size_t k = 1; k < path.size(); ++k) {
    auto [e0, e1] = expansion_params(path[k - 1], path[k]);
    t = expand_tree(t, e0, e1);
    if (!(signature_at(t, t.level()) == path[k]))
      throw InternalError("tree_from_path: signature mismatch after step " +
                          std::to_string(k));
  }
  if (!t.complete())
    throw InternalError("tree_from_path: resulting tree is not finished");
  for (const Violation& v : validate(t))
    throw InternalError("tree_from_path: invalid result (" + v.message + ")");
  return t;
}

}  // namespace aifv2

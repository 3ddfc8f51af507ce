#include "skillforge/graph.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "skillforge/errors.hpp"

namespace skillforge {

SkillGraph SkillGraph::build(const std::vector<SkillDefinition>& defs,
                             const std::set<ItemId>& declared_primitives) {
  SkillGraph g;
  g.primitives_ = declared_primitives;
  for (const auto& d : defs) {
    validate(d);
    if (g.skills_.count(d.name))
      throw DuplicateSkill("duplicate skill " + d.name);
    g.skills_[d.name] = d;
  }

  for (const auto& [name, d] : g.skills_) {
    std::vector<DependencyEdge> edges;
    int own_yield = d.obtain.at(d.name);
    auto push = [&](const ItemCount& m, EdgeMode mode) {
      for (const auto& [parent, qty] : m) {
        if (!g.skills_.count(parent) && !g.primitives_.count(parent))
          throw UnknownItem(parent);
        edges.push_back({parent, name, qty, own_yield, mode});
      }
    };
    push(d.require, EdgeMode::Require);
    push(d.consume, EdgeMode::Consume);
    // Nearby parents go last so sites placed/found for this skill are not
    // wiped by the travel implied by planning its other parents.
    std::sort(edges.begin(), edges.end(),
              [](const DependencyEdge& a, const DependencyEdge& b) {
                auto key = [](const DependencyEdge& e) {
                  return std::make_tuple(is_nearby(e.parent),
                                         e.mode == EdgeMode::Consume, e.parent);
                };
                return key(a) < key(b);
              });
    g.in_edges_[name] = std::move(edges);
  }

  // cycle check over parent -> child reachability
  enum { White, Grey, Black };
  std::map<ItemId, int> color;
  std::vector<ItemId> stack;
  std::function<void(const ItemId&)> visit = [&](const ItemId& n) {
    color[n] = Grey;
    stack.push_back(n);
    for (const auto& e : g.parents(n)) {
      if (g.is_primitive(e.parent) && !g.has_skill(e.parent)) continue;
      int c = color.count(e.parent) ? color[e.parent] : White;
      if (c == Grey) {
        auto it = std::find(stack.begin(), stack.end(), e.parent);
        std::string cyc;
        for (; it != stack.end(); ++it) cyc += *it + " -> ";
        throw CyclicDependency("dependency cycle: " + cyc + e.parent);
      }
      if (c == White) visit(e.parent);
    }
    stack.pop_back();
    color[n] = Black;
  };
  for (const auto& [name, d] : g.skills_)
    if (!color.count(name)) visit(name);
  return g;
}

const std::vector<DependencyEdge>& SkillGraph::parents(
    const ItemId& item) const {
  auto it = in_edges_.find(item);
  if (it != in_edges_.end()) return it->second;
  if (primitives_.count(item)) return empty_;
  throw UnknownItem(item);
}

const SkillDefinition* SkillGraph::find(const ItemId& item) const {
  auto it = skills_.find(item);
  return it == skills_.end() ? nullptr : &it->second;
}

const SkillDefinition& SkillGraph::at(const ItemId& item) const {
  auto it = skills_.find(item);
  if (it == skills_.end()) throw UnknownItem(item);
  return it->second;
}

size_t SkillGraph::edge_count() const {
  size_t n = 0;
  for (const auto& [k, v] : in_edges_) n += v.size();
  return n;
}

std::string SkillGraph::to_dot() const {
  std::ostringstream os;
  os << "digraph skills {\n  rankdir=BT;\n";
  for (const auto& [name, d] : skills_)
    os << "  \"" << name << "\" [shape="
       << (d.kind == SkillKind::Crafting
               ? "box"
               : d.kind == SkillKind::Manipulation ? "ellipse" : "diamond")
       << "];\n";
  for (const auto& p : primitives_)
    if (!skills_.count(p)) os << "  \"" << p << "\" [shape=plaintext];\n";
  for (const auto& [child, edges] : in_edges_)
    for (const auto& e : edges)
      os << "  \"" << e.parent << "\" -> \"" << e.child << "\" [label=\"("
         << e.parent_qty << "," << e.child_qty << ","
         << (e.mode == EdgeMode::Consume ? "consume" : "require") << ")\""
         << (e.mode == EdgeMode::Require ? " style=dashed" : "") << "];\n";
  os << "}\n";
  return os.str();
}

}  // namespace skillforge

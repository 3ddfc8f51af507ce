#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "skillforge/skilldef.hpp"

namespace skillforge {

enum class EdgeMode { Require, Consume };

// Quantified dependency: executing the child skill once needs parent_qty of
// the parent item; the child itself yields child_qty of its own item.
struct DependencyEdge {
  ItemId parent;
  ItemId child;
  int parent_qty = 1;
  int child_qty = 1;
  EdgeMode mode = EdgeMode::Consume;

  bool operator==(const DependencyEdge&) const = default;
};

class SkillGraph {
 public:
  // Checks acyclicity and that every referenced item is either produced by
  // some skill or declared primitive. Throws CyclicDependency / UnknownItem.
  static SkillGraph build(const std::vector<SkillDefinition>& defs,
                          const std::set<ItemId>& declared_primitives = {});

  // In-edges of the item's producing skill, in the fixed planning order:
  // non-nearby parents first, require before consume within each group,
  // alphabetical within that. Empty for Finding skills and primitives.
  const std::vector<DependencyEdge>& parents(const ItemId& item) const;

  const SkillDefinition* find(const ItemId& item) const;
  const SkillDefinition& at(const ItemId& item) const;  // throws UnknownItem
  bool has_skill(const ItemId& item) const { return skills_.count(item) > 0; }
  bool is_primitive(const ItemId& item) const {
    return primitives_.count(item) > 0;
  }

  const std::map<ItemId, SkillDefinition>& skills() const { return skills_; }
  const std::set<ItemId>& primitives() const { return primitives_; }
  size_t edge_count() const;

  // Deterministic Graphviz dump for inspection.
  std::string to_dot() const;

 private:
  std::map<ItemId, SkillDefinition> skills_;
  std::map<ItemId, std::vector<DependencyEdge>> in_edges_;
  std::set<ItemId> primitives_;
  std::vector<DependencyEdge> empty_;
};

}  // namespace skillforge

#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace skillforge {

using ItemId = std::string;
// Ordered map so every iteration order in the pipeline is deterministic.
using ItemCount = std::map<ItemId, int>;

inline bool is_nearby(const ItemId& item) {
  static const std::string suffix = "_nearby";
  return item.size() > suffix.size() &&
         item.compare(item.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Strips the "_nearby" suffix; returns the item unchanged if it has none.
inline ItemId nearby_base(const ItemId& item) {
  return is_nearby(item) ? item.substr(0, item.size() - 7) : item;
}

// An agent's symbolic situation: what it carries plus what is within reach.
class Condition {
 public:
  Condition() = default;

  int count(const ItemId& item) const {
    const auto& m = is_nearby(item) ? nearby_ : inventory_;
    auto it = m.find(item);
    return it == m.end() ? 0 : it->second;
  }

  void add(const ItemId& item, int n) {
    if (n == 0) return;
    auto& m = is_nearby(item) ? nearby_ : inventory_;
    int v = m[item] + n;
    if (v < 0) throw std::invalid_argument("negative count for " + item);
    if (v == 0)
      m.erase(item);
    else
      m[item] = v;
  }

  void remove(const ItemId& item, int n) { add(item, -n); }

  void set(const ItemId& item, int n) {
    auto& m = is_nearby(item) ? nearby_ : inventory_;
    if (n < 0) throw std::invalid_argument("negative count for " + item);
    if (n == 0)
      m.erase(item);
    else
      m[item] = n;
  }

  // Dropping everything "nearby" models the agent walking away from a site.
  void clear_nearby() { nearby_.clear(); }

  const ItemCount& inventory() const { return inventory_; }
  const ItemCount& nearby() const { return nearby_; }

  bool operator==(const Condition&) const = default;

  static Condition from(const ItemCount& items) {
    Condition c;
    for (const auto& [k, v] : items) c.set(k, v);
    return c;
  }

  ItemCount all() const {
    ItemCount m = inventory_;
    m.insert(nearby_.begin(), nearby_.end());
    return m;
  }

 private:
  ItemCount inventory_;
  ItemCount nearby_;
};

}  // namespace skillforge

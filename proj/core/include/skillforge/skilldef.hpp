#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skillforge/items.hpp"

namespace skillforge {

enum class SkillKind { Finding, Manipulation, Crafting };

std::string to_string(SkillKind kind);
std::optional<SkillKind> skill_kind_from_string(std::string_view s);

struct SkillDefinition {
  ItemId name;
  SkillKind kind = SkillKind::Crafting;
  ItemCount consume;
  ItemCount require;
  std::vector<ItemId> equip;
  ItemCount obtain;

  bool operator==(const SkillDefinition&) const = default;
};

// Classification when a definition does not carry an explicit kind:
//  - `_nearby` name with nothing consumed or required        -> Finding
//  - nothing equipped, nothing nearby consumed, and only a
//    crafting_table/furnace nearby required                  -> Crafting
//  - otherwise                                               -> Manipulation
SkillKind infer_kind(const ItemId& name, const ItemCount& consume,
                     const ItemCount& require, const std::vector<ItemId>& equip);

// Structural checks; throws InvalidSkillDefinition on violation.
void validate(const SkillDefinition& def);

enum class ParseMode {
  Strict,   // reject anything off-format
  Lenient,  // tolerate quoting/spacing slop typical of generated text
};

// Parses the block-structured skill format:
//
//   stone_pickaxe:
//     consume:
//       cobblestone: 3
//       stick: 2
//     require:
//       crafting_table_nearby: 1
//     equip: []
//     obtain:
//       stone_pickaxe: 1
//
// Strict mode expects all four section keys, two/four-space indentation, and
// bare item names. Lenient mode tolerates arbitrary indentation, quoted item
// names, omitted sections, and interleaved prose (skipped) — the shape of raw
// chat-model output. An explicit "kind:" line overrides inference in either
// mode. Lines starting with '#' are comments.
std::vector<SkillDefinition> parse_skills(std::string_view text,
                                          ParseMode mode = ParseMode::Strict);
std::vector<SkillDefinition> load_skill_file(const std::string& path,
                                             ParseMode mode = ParseMode::Strict);

struct ParseFailureInfo {
  std::string skill;
  std::string reason;
  int line = 0;
};

// Block-wise lenient parse: each skill block is parsed independently so one
// garbled block does not poison the rest of a generated response.
std::pair<std::vector<SkillDefinition>, std::vector<ParseFailureInfo>>
parse_skills_collect(std::string_view text);

std::string serialize_skills(const std::vector<SkillDefinition>& defs);

// A single field-level difference between a candidate skill set and a
// reference one.
struct Discrepancy {
  enum class Where { Consume, Require, Equip, Obtain, MissingSkill, ExtraSkill };
  ItemId skill;
  Where where = Where::MissingSkill;
  ItemId item;        // offending key; empty for whole-skill diffs
  int expected = 0;   // 0 means "absent"
  int found = 0;
  std::string describe() const;

  bool operator==(const Discrepancy&) const = default;
};

// Field-by-field comparison of candidate against reference, ordered by
// (skill, section, item) so the report is stable.
std::vector<Discrepancy> validate_against_db(
    const std::vector<SkillDefinition>& candidate,
    const std::vector<SkillDefinition>& reference);

}  // namespace skillforge

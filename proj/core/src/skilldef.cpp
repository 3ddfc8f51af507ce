#include "skillforge/skilldef.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "skillforge/errors.hpp"

namespace skillforge {

std::string to_string(SkillKind kind) {
  switch (kind) {
    case SkillKind::Finding: return "Finding";
    case SkillKind::Manipulation: return "Manipulation";
    case SkillKind::Crafting: return "Crafting";
  }
  return "?";
}

std::optional<SkillKind> skill_kind_from_string(std::string_view s) {
  std::string low(s);
  for (char& c : low) c = (char)std::tolower((unsigned char)c);
  if (low == "finding") return SkillKind::Finding;
  if (low == "manipulation") return SkillKind::Manipulation;
  if (low == "crafting") return SkillKind::Crafting;
  return std::nullopt;
}

static bool valid_token(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

SkillKind infer_kind(const ItemId& name, const ItemCount& consume,
                     const ItemCount& require, const std::vector<ItemId>& equip) {
  if (is_nearby(name) && consume.empty() && require.empty())
    return SkillKind::Finding;
  bool consumes_nearby = std::any_of(consume.begin(), consume.end(),
                                     [](auto& kv) { return is_nearby(kv.first); });
  bool requires_other_nearby =
      std::any_of(require.begin(), require.end(), [](auto& kv) {
        return is_nearby(kv.first) && kv.first != "crafting_table_nearby" &&
               kv.first != "furnace_nearby";
      });
  if (equip.empty() && !consumes_nearby && !requires_other_nearby)
    return SkillKind::Crafting;
  return SkillKind::Manipulation;
}

void validate(const SkillDefinition& def) {
  auto fail = [&](const std::string& why) {
    throw InvalidSkillDefinition(def.name + ": " + why);
  };
  if (!valid_token(def.name)) fail("bad name token");
  if (def.obtain.empty() || !def.obtain.count(def.name))
    fail("obtain must include the skill's own item");
  for (const auto* m : {&def.consume, &def.require, &def.obtain})
    for (const auto& [item, n] : *m) {
      if (!valid_token(item)) fail("bad item token '" + item + "'");
      if (n < 1) fail("non-positive count for " + item);
    }
  for (const auto& e : def.equip)
    if (!valid_token(e)) fail("bad equip token '" + e + "'");
  if (def.kind == SkillKind::Finding &&
      (!def.consume.empty() || !def.require.empty() || !is_nearby(def.name)))
    fail("Finding skills have no inputs and a _nearby name");
  if (def.kind == SkillKind::Crafting) {
    if (!def.equip.empty()) fail("Crafting skills equip nothing");
    for (const auto& [item, n] : def.consume)
      if (is_nearby(item)) fail("Crafting skills cannot consume nearby items");
  }
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Line {
  int no;
  int indent;
  std::string text;  // indent stripped
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  int no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    ++no;
    std::string s(raw);
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
      s.pop_back();
    int indent = 0;
    while (indent < (int)s.size() && s[indent] == ' ') ++indent;
    std::string body = s.substr(indent);
    if (!body.empty() && body[0] != '#') out.push_back({no, indent, body});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

// Strips surrounding single/double quotes (lenient input only).
std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') &&
      s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

std::string trim(std::string s) {
  size_t a = s.find_first_not_of(" \t");
  size_t b = s.find_last_not_of(" \t");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

const std::set<std::string> kSectionKeys = {"consume", "require", "equip",
                                            "obtain", "kind"};

struct Parser {
  ParseMode mode;
  std::vector<SkillDefinition> defs;
  std::set<std::string> seen;

  SkillDefinition cur;
  bool in_skill = false;
  bool explicit_kind = false;
  std::string section;  // "", consume, require, obtain
  std::set<std::string> sections_seen;

  bool lenient() const { return mode == ParseMode::Lenient; }

  void flush() {
    if (!in_skill) return;
    if (!explicit_kind)
      cur.kind = infer_kind(cur.name, cur.consume, cur.require, cur.equip);
    if (cur.obtain.empty()) cur.obtain[cur.name] = 1;  // Finding-style blocks
    validate(cur);
    if (!seen.insert(cur.name).second)
      throw DuplicateSkill("duplicate skill " + cur.name);
    defs.push_back(std::move(cur));
    cur = {};
    in_skill = false;
    explicit_kind = false;
    section.clear();
    sections_seen.clear();
  }

  void begin_skill(const std::string& name, const Line& ln) {
    flush();
    if (!lenient() && ln.indent != 0)
      throw MalformedEntry("skill name must start at column 0", ln.no);
    if (!valid_token(name))
      throw MalformedEntry("bad skill name '" + name + "'", ln.no);
    cur = {};
    cur.name = name;
    in_skill = true;
  }

  void handle(const Line& ln) {
    const std::string& body = ln.text;
    size_t colon = body.find(':');
    if (colon == std::string::npos) {
      if (lenient()) return;  // prose between blocks
      throw MalformedEntry("expected 'key: value'", ln.no);
    }
    // strict files carry bare tokens; quotes are only stripped in lenient mode
    std::string key = trim(body.substr(0, colon));
    if (lenient()) key = unquote(key);
    std::string val = trim(body.substr(colon + 1));
    bool reserved = kSectionKeys.count(key) > 0;

    if (reserved) {
      if (!in_skill) {
        if (lenient()) return;
        throw MalformedEntry("section outside a skill block", ln.no);
      }
      if (!lenient() && ln.indent != 2)
        throw MalformedEntry("section keys must be indented two spaces", ln.no);
      if (key == "kind") {
        auto k = skill_kind_from_string(val);
        if (!k) throw MalformedEntry("unknown kind '" + val + "'", ln.no);
        cur.kind = *k;
        explicit_kind = true;
        return;
      }
      if (!sections_seen.insert(key).second)
        throw MalformedEntry("repeated section '" + key + "'", ln.no);
      if (key == "equip") {
        section.clear();
        parse_equip(val, ln);
        return;
      }
      // "require: {}" style inline empties show up in generated text
      if (!val.empty() && val != "{}") {
        if (!lenient())
          throw MalformedEntry("map sections take entries on following lines",
                               ln.no);
        add_entry(key, val, ln);
        return;
      }
      section = key;
      return;
    }

    if (val.empty()) {  // "name:" starts a new skill
      if (lenient() && !valid_token(key)) return;  // prose ending with ':'
      begin_skill(key, ln);
      return;
    }

    // item entry inside the current section
    if (!in_skill || section.empty()) {
      if (lenient()) return;
      throw MalformedEntry("entry outside a section", ln.no);
    }
    if (!lenient() && ln.indent != 4)
      throw MalformedEntry("map entries must be indented four spaces", ln.no);
    if (!lenient() && body.find('\'') != std::string::npos)
      throw MalformedEntry("quoted names are not allowed in strict files", ln.no);
    add_entry(section, body, ln);
  }

  void add_entry(const std::string& sect, const std::string& entry,
                 const Line& ln) {
    size_t colon = entry.find(':');
    std::string item = trim(entry.substr(0, colon));
    if (lenient()) item = unquote(item);
    std::string num = trim(entry.substr(colon + 1));
    if (!valid_token(item))
      throw MalformedEntry("bad item token '" + item + "'", ln.no);
    int n = 0;
    try {
      size_t used = 0;
      n = std::stoi(num, &used);
      if (used != num.size()) throw std::invalid_argument(num);
    } catch (const std::exception&) {
      throw MalformedEntry("bad count '" + num + "' for " + item, ln.no);
    }
    if (n < 1)
      throw NonPositiveCount("non-positive count for " + item + " in " +
                                 cur.name,
                             ln.no);
    ItemCount& m = sect == "consume"  ? cur.consume
                   : sect == "require" ? cur.require
                                       : cur.obtain;
    if (m.count(item))
      throw DuplicateItemInSection(
          "duplicate item " + item + " in " + sect + " of " + cur.name, ln.no);
    m[item] = n;
  }

  void parse_equip(std::string val, const Line& ln) {
    if (val.empty()) return;  // lenient "equip:" with nothing
    if (val.front() != '[' || val.back() != ']')
      throw MalformedEntry("equip expects a [list]", ln.no);
    std::string inner = trim(val.substr(1, val.size() - 2));
    if (inner.empty()) return;
    std::stringstream ss(inner);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      std::string item = unquote(trim(tok));
      if (!valid_token(item))
        throw MalformedEntry("bad equip token '" + item + "'", ln.no);
      cur.equip.push_back(item);
    }
  }

  void finish() { flush(); }
};

void check_strict_sections(const std::set<std::string>& sections_seen,
                           const std::string& name) {
  for (const char* k : {"consume", "require", "equip", "obtain"})
    if (!sections_seen.count(k))
      throw MalformedEntry(name + ": missing section '" + std::string(k) + "'");
}

}  // namespace

std::vector<SkillDefinition> parse_skills(std::string_view text,
                                          ParseMode mode) {
  Parser p{mode};
  for (const Line& ln : split_lines(text)) {
    bool was_in_skill = p.in_skill;
    std::string prev_name = p.cur.name;
    auto prev_sections = p.sections_seen;
    p.handle(ln);
    if (mode == ParseMode::Strict && was_in_skill && !prev_name.empty() &&
        p.cur.name != prev_name)
      check_strict_sections(prev_sections, prev_name);
  }
  if (mode == ParseMode::Strict && p.in_skill)
    check_strict_sections(p.sections_seen, p.cur.name);
  p.finish();
  return p.defs;
}

std::vector<SkillDefinition> load_skill_file(const std::string& path,
                                             ParseMode mode) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open skill file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_skills(ss.str(), mode);
}

std::pair<std::vector<SkillDefinition>, std::vector<ParseFailureInfo>>
parse_skills_collect(std::string_view text) {
  // Split into blocks at lines of the shape "name:" where name is not a
  // section key, then parse each block on its own.
  struct Block {
    std::string name;
    int line = 0;
    std::string text;
  };
  std::vector<Block> blocks;
  for (const Line& ln : split_lines(text)) {
    size_t colon = ln.text.find(':');
    std::string key =
        colon == std::string::npos ? "" : unquote(trim(ln.text.substr(0, colon)));
    std::string val =
        colon == std::string::npos ? "" : trim(ln.text.substr(colon + 1));
    bool header = colon != std::string::npos && val.empty() &&
                  !kSectionKeys.count(key) && valid_token(key);
    if (header) {
      blocks.push_back({key, ln.no, key + ":\n"});
    } else if (!blocks.empty()) {
      blocks.back().text += ln.text + "\n";
    }
  }
  std::vector<SkillDefinition> ok;
  std::vector<ParseFailureInfo> failed;
  for (const auto& b : blocks) {
    try {
      for (auto& d : parse_skills(b.text, ParseMode::Lenient))
        ok.push_back(std::move(d));
    } catch (const std::exception& e) {
      failed.push_back({b.name, e.what(), b.line});
    }
  }
  return {std::move(ok), std::move(failed)};
}

// ---------------------------------------------------------------------------
// serialization / diffing

std::string serialize_skills(const std::vector<SkillDefinition>& defs) {
  std::ostringstream out;
  for (const auto& d : defs) {
    validate(d);
    out << d.name << ":\n";
    if (infer_kind(d.name, d.consume, d.require, d.equip) != d.kind)
      out << "  kind: " << to_string(d.kind) << "\n";
    auto section = [&](const char* key, const ItemCount& m) {
      out << "  " << key << ":\n";
      for (const auto& [item, n] : m) out << "    " << item << ": " << n << "\n";
    };
    section("consume", d.consume);
    section("require", d.require);
    out << "  equip: [";
    for (size_t i = 0; i < d.equip.size(); ++i)
      out << (i ? ", " : "") << d.equip[i];
    out << "]\n";
    section("obtain", d.obtain);
    out << "\n";
  }
  return out.str();
}

std::string Discrepancy::describe() const {
  static const char* names[] = {"consume", "require", "equip",
                                "obtain",  "missing", "extra"};
  std::ostringstream os;
  os << skill << "." << names[(int)where];
  if (!item.empty())
    os << "[" << item << "]: expected " << expected << ", found " << found;
  return os.str();
}

std::vector<Discrepancy> validate_against_db(
    const std::vector<SkillDefinition>& candidate,
    const std::vector<SkillDefinition>& reference) {
  std::map<ItemId, const SkillDefinition*> cand, ref;
  for (const auto& d : candidate) cand[d.name] = &d;
  for (const auto& d : reference) ref[d.name] = &d;

  std::vector<Discrepancy> out;
  for (const auto& [name, r] : ref) {
    auto it = cand.find(name);
    if (it == cand.end()) {
      out.push_back({name, Discrepancy::Where::MissingSkill, "", 1, 0});
      continue;
    }
    const SkillDefinition* c = it->second;
    auto diff_map = [&](Discrepancy::Where where, const ItemCount& want,
                        const ItemCount& have) {
      std::set<ItemId> keys;
      for (auto& [k, v] : want) keys.insert(k);
      for (auto& [k, v] : have) keys.insert(k);
      for (const auto& k : keys) {
        int w = want.count(k) ? want.at(k) : 0;
        int h = have.count(k) ? have.at(k) : 0;
        if (w != h) out.push_back({name, where, k, w, h});
      }
    };
    diff_map(Discrepancy::Where::Consume, r->consume, c->consume);
    diff_map(Discrepancy::Where::Require, r->require, c->require);
    {
      std::set<ItemId> keys(r->equip.begin(), r->equip.end());
      keys.insert(c->equip.begin(), c->equip.end());
      for (const auto& k : keys) {
        int w = std::count(r->equip.begin(), r->equip.end(), k);
        int h = std::count(c->equip.begin(), c->equip.end(), k);
        if (w != h)
          out.push_back({name, Discrepancy::Where::Equip, k, w, h});
      }
    }
    diff_map(Discrepancy::Where::Obtain, r->obtain, c->obtain);
  }
  for (const auto& [name, c] : cand)
    if (!ref.count(name))
      out.push_back({name, Discrepancy::Where::ExtraSkill, "", 0, 1});
  return out;
}

}  // namespace skillforge

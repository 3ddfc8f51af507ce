#include "skillforge/llmgen.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "skillforge/errors.hpp"

// cpp-httplib is header-only; keep it out of public headers.
#define CPPHTTPLIB_OPENSSL_SUPPORT_DISABLED
#include "httplib.h"

namespace skillforge {

using json = nlohmann::json;
namespace fs = std::filesystem;

static const char kPlaceholder[] = "{skills}";

PromptTemplate PromptTemplate::make(std::string body, PromptFamily family) {
  size_t first = body.find(kPlaceholder);
  if (first == std::string::npos ||
      body.find(kPlaceholder, first + 1) != std::string::npos)
    throw ConfigError("prompt template needs exactly one {skills} placeholder");
  return {std::move(body), family};
}

PromptTemplate manipulation_prompt() {
  return PromptTemplate::make(
      "I am playing the game Minecraft. I define some basic skills, like "
      "attack something, collect something and place something nearby. I list "
      "the skills in a special format. \n"
      "As an example:\n"
      "furnace_nearby:\n"
      "  consume: \n"
      "    'furnace': 1\n"
      "  require: \n"
      "  equip: ['furnace']\n"
      "  obtain: \n"
      "    'furnace_nearby': 1\n"
      "To understand this skill line by line: the skill is to get a "
      "furnace_nearby. 'consume' means things will be consumed or killed. In "
      "this skill, furnace*1 will be consumed.  'require' means things are "
      "needed but will not be consumed. In this skill, nothing else is "
      "required. We should equip furnace to the first slot. If you do not "
      "have to equip anything, write 'equip: []'. Finally, we will obtain "
      "furnace_nearby*1. \n"
      "Another example:\n"
      "cobblestone:\n"
      "  consume: \n"
      "    'cobblestone_nearby': 1\n"
      "  require: \n"
      "    'wooden_pickaxe': 1\n"
      "  equip: ['wooden_pickaxe']\n"
      "  obtain: \n"
      "    'cobblestone': 1\n"
      "To understand: to mine a cobblestone, we will consume a nearby "
      "cobblestone. A wooden_pickaxe is required and should be equipped, but "
      "will not be consumed.\n"
      "Now you understand the rule of this format. Please help me generate "
      "the following skills:\n{skills}",
      PromptFamily::Manipulation);
}

PromptTemplate crafting_prompt() {
  return PromptTemplate::make(
      "I am playing the game Minecraft. I list all the crafting skills in "
      "this game in a special format. \n"
      "As an example:\n"
      "bed:\n"
      "  consume: \n"
      "    'planks': 3 \n"
      "    'wool': 3\n"
      "  require: \n"
      "    'crafting_table_nearby': 1\n"
      "  equip: []\n"
      "  obtain: \n"
      "    'bed': 1\n"
      "To understand this skill line by line: the skill is to craft a bed. We "
      "will consume planks*3 and wool*3. To craft bed, a "
      "crafting_table_nearby is necessary and must be in the 'require:' "
      "line.\n"
      "For crafting skills the equipment is always []. Finally, we will "
      "obtain bed*1. \n"
      "Another example:\n"
      "cooked_beef:\n"
      "  consume:\n"
      "    'planks': 1\n"
      "    'beef': 1\n"
      "  require:\n"
      "    'furnace_nearby': 1\n"
      "  equip: []\n"
      "  obtain:\n"
      "    'cooked_beef': 1\n"
      "Because we require a furnace_nearby. The fuel, which is always "
      "'planks'*1, should be added to the 'consume' items.\n"
      "For the 'require:' line, you should know whether the skill needs "
      "crafting_table_nearby,  furnace_nearby, or nothing. If require "
      "nothing, just don't write anything in this line.\n"
      "Now you understand the rule of this format. Please help me generate "
      "the following skills:\n{skills}",
      PromptFamily::Crafting);
}

std::string build_prompt(const PromptTemplate& tmpl,
                         const std::vector<ItemId>& skills) {
  if (skills.empty()) throw ConfigError("no skills to query");
  std::string joined;
  for (size_t i = 0; i < skills.size(); ++i)
    joined += (i ? ", " : "") + skills[i];
  std::string out = tmpl.body;
  size_t at = out.find(kPlaceholder);
  out.replace(at, sizeof(kPlaceholder) - 1, joined);
  return out;
}

ChatEndpointConfig ChatEndpointConfig::from_env() {
  ChatEndpointConfig cfg;
  if (const char* url = std::getenv("SKILLFORGE_LLM_URL")) cfg.base_url = url;
  if (const char* model = std::getenv("SKILLFORGE_LLM_MODEL")) cfg.model = model;
  return cfg;
}

// ---------------------------------------------------------------------------
// clients

FixtureChatClient::FixtureChatClient(std::vector<std::string> responses)
    : responses_(std::move(responses)) {}

FixtureChatClient::FixtureChatClient(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LlmError("cannot open fixture: " + path);
  std::string line, block;
  bool split = false;
  std::vector<std::string> blocks;
  while (std::getline(in, line)) {
    if (line == "---") {
      split = true;
      blocks.push_back(block);
      block.clear();
    } else {
      block += line + "\n";
    }
  }
  blocks.push_back(block);
  responses_ = split ? blocks : std::vector<std::string>{block};
}

std::string FixtureChatClient::complete(const std::string&) {
  if (next_ >= responses_.size())
    throw LlmError("fixture exhausted after " + std::to_string(next_) +
                   " responses");
  return responses_[next_++];
}

namespace {

class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(ChatEndpointConfig cfg) : cfg_(std::move(cfg)) {}

  std::string complete(const std::string& prompt) override {
    if (auto cached = read_cache(prompt)) return *cached;
    if (cfg_.base_url.empty())
      throw LlmError("no endpoint configured (set SKILLFORGE_LLM_URL)");
    json req = {{"model", cfg_.model},
                {"messages", {{{"role", "user"}, {"content", prompt}}}}};
    httplib::Client http(cfg_.base_url);
    http.set_read_timeout(cfg_.timeout_seconds, 0);
    if (const char* tok = std::getenv(cfg_.token_env.c_str()))
      http.set_bearer_token_auth(tok);

    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      auto res = http.Post("/v1/chat/completions", req.dump(),
                           "application/json");
      if (!res) {
        last_error = "transport error";
        continue;
      }
      if (res->status != 200) {
        last_error = "status " + std::to_string(res->status);
        continue;
      }
      try {
        json body = json::parse(res->body);
        std::string text =
            body.at("choices").at(0).at("message").at("content");
        write_cache(prompt, text);
        return text;
      } catch (const std::exception& e) {
        last_error = std::string("bad response body: ") + e.what();
      }
    }
    throw LlmError("chat endpoint failed: " + last_error);
  }

 private:
  std::string cache_path(const std::string& prompt) const {
    size_t h = std::hash<std::string>{}(prompt);
    std::ostringstream name;
    name << std::hex << h << ".txt";
    return (fs::path(*cfg_.cache_dir) / name.str()).string();
  }

  std::optional<std::string> read_cache(const std::string& prompt) const {
    if (!cfg_.cache_dir) return std::nullopt;
    std::ifstream in(cache_path(prompt));
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write_cache(const std::string& prompt, const std::string& text) const {
    if (!cfg_.cache_dir) return;
    fs::create_directories(*cfg_.cache_dir);
    std::string path = cache_path(prompt);
    std::string tmp = path + ".tmp";
    {
      std::ofstream out(tmp);
      out << text;
    }
    fs::rename(tmp, path);  // atomic on POSIX
  }

  ChatEndpointConfig cfg_;
};

}  // namespace

std::unique_ptr<ChatClient> make_chat_client(const ChatEndpointConfig& cfg) {
  if (cfg.offline_fixture)
    return std::make_unique<FixtureChatClient>(*cfg.offline_fixture);
  return std::make_unique<HttpChatClient>(cfg);
}

GenerationResult generate_skills(const ChatEndpointConfig& endpoint,
                                 const PromptTemplate& tmpl,
                                 const std::vector<ItemId>& skills) {
  auto client = make_chat_client(endpoint);
  std::string response = client->complete(build_prompt(tmpl, skills));
  GenerationResult result;
  auto [parsed, failures] = parse_skills_collect(response);
  result.skills = std::move(parsed);
  result.failures = std::move(failures);
  for (const ItemId& want : skills) {
    bool found = false;
    for (const auto& d : result.skills)
      if (d.name == want) found = true;
    for (const auto& f : result.failures)
      if (f.skill == want) found = true;
    if (!found) result.missing.push_back(want);
  }
  return result;
}

// ---------------------------------------------------------------------------
// interactive planning

static const char* feedback_text(PlanFeedback f) {
  switch (f) {
    case PlanFeedback::InvalidName:
      return "That is not a valid skill name; pick one from the list.";
    case PlanFeedback::AlreadyDone:
      return "That skill's item is already satisfied; pick something else.";
    case PlanFeedback::Success:
      return "The last skill succeeded.";
    case PlanFeedback::Failure:
      return "The last skill failed; its prerequisites may be missing.";
    case PlanFeedback::None:
      return "";
  }
  return "";
}

ItemId llm_plan_step(ChatClient& client, const SkillGraph& graph,
                     const Task& task, const Condition& condition,
                     LlmPlanState& state) {
  std::ostringstream prompt;
  prompt << "You are choosing the next basic skill for a Minecraft-like "
            "crafting game.\nGoal item: "
         << task.goal << "\nInventory and nearby items:";
  bool any = false;
  for (const auto& [k, v] : condition.all()) {
    prompt << " " << k << "*" << v;
    any = true;
  }
  if (!any) prompt << " (nothing)";
  prompt << "\nAvailable skills:";
  for (const auto& [name, d] : graph.skills()) prompt << " " << name;
  prompt << "\n";
  if (state.pending != PlanFeedback::None)
    prompt << "Feedback on your last proposal '" << state.last_proposal
           << "': " << feedback_text(state.pending) << "\n";
  prompt << "Reply with exactly one skill name.\n";

  std::string reply = client.complete(prompt.str());
  std::istringstream rs(reply);
  std::string name;
  rs >> name;

  PlanFeedback resolved = state.pending;
  state.history.push_back({state.last_proposal, resolved});
  state.last_proposal = name;
  if (!graph.has_skill(name)) {
    state.pending = PlanFeedback::InvalidName;
  } else if (condition.count(name) >= 1) {
    state.pending = PlanFeedback::AlreadyDone;
  } else {
    state.pending = PlanFeedback::None;  // caller reports success/failure
  }
  return name;
}

}  // namespace skillforge

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skillforge/planner.hpp"
#include "skillforge/skilldef.hpp"

namespace skillforge {

enum class PromptFamily { Manipulation, Crafting };

// Few-shot template whose single "{skills}" placeholder receives the queried
// names.
struct PromptTemplate {
  std::string body;
  PromptFamily family = PromptFamily::Crafting;

  static PromptTemplate make(std::string body, PromptFamily family);
};

// The two bundled request templates.
PromptTemplate manipulation_prompt();
PromptTemplate crafting_prompt();

std::string build_prompt(const PromptTemplate& tmpl,
                         const std::vector<ItemId>& skills);

struct ChatEndpointConfig {
  std::string base_url;                       // e.g. https://host[:port]
  std::string model;                          // model identifier
  std::string token_env = "SKILLFORGE_LLM_TOKEN";
  int timeout_seconds = 60;
  int max_retries = 2;
  std::optional<std::string> offline_fixture;  // set => never touches network
  std::optional<std::string> cache_dir;        // response cache location

  // Fills url/model/token-env from SKILLFORGE_LLM_URL / _MODEL / _TOKEN.
  static ChatEndpointConfig from_env();
};

// Minimal chat interface so tests can script responses.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

// Sequential canned responses (file blocks separated by a line of "---"), or
// the whole file as one response when no separator is present.
class FixtureChatClient : public ChatClient {
 public:
  explicit FixtureChatClient(const std::string& path);
  explicit FixtureChatClient(std::vector<std::string> responses);
  std::string complete(const std::string& prompt) override;

 private:
  std::vector<std::string> responses_;
  size_t next_ = 0;
};

std::unique_ptr<ChatClient> make_chat_client(const ChatEndpointConfig& cfg);

struct GenerationResult {
  std::vector<SkillDefinition> skills;
  std::vector<ParseFailureInfo> failures;
  std::vector<ItemId> missing;  // asked for but absent from the response
};

GenerationResult generate_skills(const ChatEndpointConfig& endpoint,
                                 const PromptTemplate& tmpl,
                                 const std::vector<ItemId>& skills);

// --- interactive planning baseline ------------------------------------------

enum class PlanFeedback { None, InvalidName, AlreadyDone, Success, Failure };

struct LlmPlanState {
  std::vector<std::pair<ItemId, PlanFeedback>> history;
  PlanFeedback pending = PlanFeedback::None;
  ItemId last_proposal;
};

// Asks the model for the next skill given the task, current condition and the
// feedback from the previous attempt. Unknown names are surfaced back as
// invalid_name feedback on the following call.
ItemId llm_plan_step(ChatClient& client, const SkillGraph& graph,
                     const Task& task, const Condition& condition,
                     LlmPlanState& state);

}  // namespace skillforge

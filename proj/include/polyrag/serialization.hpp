#pragma once

#include <json.hpp>

#include "polyrag/conversation.hpp"
#include "polyrag/language.hpp"
#include "polyrag/webhook.hpp"

namespace polyrag {

using ordered_json = nlohmann::ordered_json;

ordered_json lang_to_json(const LangTag& lang);
LangTag lang_from_json(const nlohmann::json& j);

ordered_json turn_to_json(const ChatTurn& turn);
ChatTurn turn_from_json(const nlohmann::json& j);

ordered_json outbound_to_json(const OutboundMessage& message);
OutboundMessage outbound_from_json(const nlohmann::json& j);

ordered_json session_to_json(const Session& session);

} // namespace polyrag

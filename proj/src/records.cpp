#include "avtrack/records.hpp"

namespace avtrack {

std::string_view to_string(ReceiverKind k) { return k == ReceiverKind::GSN ? "GSN" : "SN"; }

std::optional<ReceiverKind> parse_receiver_kind(std::string_view s) {
  if (s == "GSN") return ReceiverKind::GSN;
  if (s == "SN") return ReceiverKind::SN;
  return std::nullopt;
}

}  // namespace avtrack

#include "foreach_crdt/envelope.hpp"

#include <sstream>

namespace foreach_crdt {

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::kInsert:
      return "insert";
    case MessageKind::kDelete:
      return "delete";
    case MessageKind::kApply:
      return "apply";
    case MessageKind::kForEach:
      return "foreach";
  }
  return "insert";
}

bool deliverable(const Envelope& e, const VectorClock& local) { return deliverable(e.dot, e.vc, local); }

VectorClock record_delivery(const Envelope& e, VectorClock local) { return record_delivery(e.dot, std::move(local)); }

std::string describe_causal_gap(const Envelope& e, const VectorClock& local) {
  std::ostringstream os;
  const auto have = local.get(e.dot.sender);
  if (e.vc.get(e.dot.sender) != e.dot.clock) {
    os << "envelope " << e.dot << " carries inconsistent clock " << e.vc;
    return os.str();
  }
  if (e.dot.clock <= have) {
    os << "envelope " << e.dot << " already delivered";
    return os.str();
  }
  if (e.dot.clock != have + 1) {
    os << "envelope " << e.dot << " is missing (" << e.dot.sender << ',' << have + 1 << ')';
    return os.str();
  }
  for (const auto& [id, n] : e.vc.entries()) {
    if (id != e.dot.sender && n > local.get(id)) {
      os << "envelope " << e.dot << " depends on (" << id << ',' << n << ") but only (" << id << ','
         << local.get(id) << ") delivered";
      return os.str();
    }
  }
  return {};
}

}  // namespace foreach_crdt

#include "sqhi/types.hpp"

namespace sqhi {

char mark_char(Mark m) {
  switch (m) {
    case Mark::kStable: return 'S';
    case Mark::kInserting: return 'I';
    case Mark::kDeleting: return 'D';
  }
  return '?';
}

std::string key_string(Key k) { return k == kEmpty ? std::string("_") : std::to_string(k); }

std::string to_string(const Cell& c) {
  return "<" + key_string(c.val) + "," + key_string(c.next) + "," + mark_char(c.mark) + ">";
}

const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::kInsert: return "insert";
    case OpKind::kDelete: return "delete";
    case OpKind::kLookup: return "lookup";
  }
  return "?";
}

}  // namespace sqhi

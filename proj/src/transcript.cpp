#include "qelect/transcript.hpp"

#include <stdexcept>

namespace qelect {

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string digest_hex(std::string_view payload) {
  const std::uint64_t h = fnv1a64(payload.data(), payload.size());
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 0; i < 16; ++i) {
    out[15 - i] = digits[(h >> (4 * i)) & 0xf];
  }
  return out;
}

void Transcript::emit(std::string phase, std::string actor, std::string event,
                      std::string_view payload) {
  events_.push_back(TranscriptEvent{run_id_, std::move(phase),
                                    std::move(actor), std::move(event),
                                    digest_hex(payload)});
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const auto& e : events_) {
    out += "{\"run\":" + std::to_string(e.run_id) + ",\"phase\":\"" + e.phase +
           "\",\"actor\":\"" + e.actor + "\",\"event\":\"" + e.event +
           "\",\"digest\":\"" + e.digest + "\"}\n";
  }
  return out;
}

}  // namespace qelect

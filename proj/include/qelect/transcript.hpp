#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qelect {

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::string digest_hex(std::string_view payload);

struct TranscriptEvent {
  std::uint64_t run_id = 0;
  std::string phase;
  std::string actor;
  std::string event;
  std::string digest;
};

/// Ordered protocol log. Messages are recorded as (phase, actor, event,
/// payload digest); payload contents never enter the transcript, only their
/// digest, so the log can be published without leaking key material.
class Transcript {
 public:
  explicit Transcript(std::uint64_t run_id = 0) : run_id_(run_id) {}

  void emit(std::string phase, std::string actor, std::string event,
            std::string_view payload);

  const std::vector<TranscriptEvent>& events() const { return events_; }
  std::uint64_t run_id() const { return run_id_; }

  /// One JSON object per line, insertion order, byte-deterministic.
  std::string to_jsonl() const;

 private:
  std::uint64_t run_id_;
  std::vector<TranscriptEvent> events_;
};

/// Protocol phases only move forward.
template <typename Phase>
void advance_phase(Phase& current, Phase next) {
  if (static_cast<int>(next) <= static_cast<int>(current)) {
    throw std::logic_error("phase transition must move forward");
  }
  current = next;
}

}  // namespace qelect

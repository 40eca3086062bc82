#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <stdexcept>

namespace mgres {

/// One of the three feeder phases.
enum class Phase : std::uint8_t { A = 0, B = 1, C = 2 };

constexpr std::array<Phase, 3> kAllPhases{Phase::A, Phase::B, Phase::C};

inline char phase_char(Phase p) { return p == Phase::A ? 'a' : (p == Phase::B ? 'b' : 'c'); }

/// Subset of {a,b,c} stored as a 3-bit mask.
class PhaseSet {
 public:
  PhaseSet() = default;
  explicit PhaseSet(std::uint8_t mask) : mask_(mask & 0x7u) {}

  static PhaseSet abc() { return PhaseSet{0x7u}; }

  /// Parses strings like "a", "bc", "abc". Throws on anything else.
  static PhaseSet parse(const std::string& s) {
    PhaseSet out;
    for (char c : s) {
      switch (c) {
        case 'a': out.mask_ |= 1u << 0; break;
        case 'b': out.mask_ |= 1u << 1; break;
        case 'c': out.mask_ |= 1u << 2; break;
        default: throw std::invalid_argument("invalid phase letter '" + std::string(1, c) + "'");
      }
    }
    return out;
  }

  bool has(Phase p) const { return (mask_ >> static_cast<int>(p)) & 1u; }
  bool empty() const { return mask_ == 0; }
  int count() const { return ((mask_ >> 0) & 1) + ((mask_ >> 1) & 1) + ((mask_ >> 2) & 1); }
  bool subset_of(PhaseSet other) const { return (mask_ & ~other.mask_) == 0; }
  std::uint8_t mask() const { return mask_; }

  std::string to_string() const {
    std::string s;
    for (Phase p : kAllPhases)
      if (has(p)) s.push_back(phase_char(p));
    return s;
  }

  bool operator==(const PhaseSet&) const = default;

 private:
  std::uint8_t mask_ = 0;
};

}  // namespace mgres

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace spt {

// Domain error with a stable machine-readable code. CLI maps these to
// exit code 1 and a single-line JSON object on stderr.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message, std::string context = {})
      : std::runtime_error(message), code_(std::move(code)), context_(std::move(context)) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& context() const noexcept { return context_; }

private:
  std::string code_;
  std::string context_;
};

namespace errc {
inline constexpr const char* invalid_group = "invalid_group";
inline constexpr const char* invalid_cocycle = "invalid_cocycle";
inline constexpr const char* mode_mismatch = "mode_mismatch";
inline constexpr const char* group_mismatch = "group_mismatch";
inline constexpr const char* not_projective_rep = "not_projective_rep";
inline constexpr const char* unnormalized_cocycle = "unnormalized_cocycle";
inline constexpr const char* cap_exceeded = "cap_exceeded";
inline constexpr const char* snap_failed = "snap_failed";
inline constexpr const char* not_invariant = "not_invariant";
inline constexpr const char* degenerate_transfer = "degenerate_transfer";
inline constexpr const char* extraction_inconsistent = "extraction_inconsistent";
inline constexpr const char* window_too_small = "window_too_small";
inline constexpr const char* arc_separation = "arc_separation";
inline constexpr const char* dimension_mismatch = "dimension_mismatch";
inline constexpr const char* non_unitary = "non_unitary";
inline constexpr const char* not_character_vector = "not_character_vector";
inline constexpr const char* bound_exceeded = "bound_exceeded";
inline constexpr const char* regions_overlap = "regions_overlap";
inline constexpr const char* not_density_matrix = "not_density_matrix";
inline constexpr const char* io_error = "io_error";
inline constexpr const char* integer_overflow = "integer_overflow";
inline constexpr const char* equivariance_violated = "equivariance_violated";
}  // namespace errc

}  // namespace spt

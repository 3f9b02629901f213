#pragma once

namespace ionstark {

// Bump together; release_date is part of the report provenance block and must
// stay fixed within a version so reports are byte-stable.
inline constexpr const char* version = "1.0.0";
inline constexpr const char* release_date = "2026-08-14";

}  // namespace ionstark
